#pragma once

// Dense linear algebra over the prime field F_p.
//
// Residues are stored canonically in [0, p). Matrices are row-major and
// value-typed; every operation below is a pure function of its arguments.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "pdescent/errors.hpp"

namespace pdescent {

using Residue = std::uint32_t;
using FpVector = std::vector<Residue>;
using Rational = boost::rational<std::int64_t>;

/// base^exp, or nullopt on overflow past `limit`.
inline std::optional<std::uint64_t> checked_pow(std::uint64_t base, std::size_t exp,
                                                std::uint64_t limit = std::numeric_limits<std::uint64_t>::max()) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && out > limit / base) return std::nullopt;
    out *= base;
  }
  return out;
}

/// A prime p with 2 <= p <= 2^16, checked by trial division.
class PrimeModulus {
 public:
  static constexpr std::uint32_t kMax = 1u << 16;

  explicit PrimeModulus(std::uint32_t p) : p_(p) {
    if (!is_prime(p)) throw InvalidModulusError(std::to_string(p) + " is not a prime in [2, 65536]");
  }

  static bool is_prime(std::uint32_t p) {
    if (p < 2 || p > kMax) return false;
    for (std::uint32_t d = 2; d * d <= p; ++d)
      if (p % d == 0) return false;
    return true;
  }

  std::uint32_t value() const noexcept { return p_; }

  Residue reduce(std::int64_t x) const noexcept {
    const std::int64_t m = static_cast<std::int64_t>(p_);
    std::int64_t r = x % m;
    return static_cast<Residue>(r < 0 ? r + m : r);
  }
  Residue add(Residue a, Residue b) const noexcept {
    Residue s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Residue sub(Residue a, Residue b) const noexcept { return a >= b ? a - b : a + p_ - b; }
  Residue neg(Residue a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Residue mul(Residue a, Residue b) const noexcept {
    return static_cast<Residue>((static_cast<std::uint64_t>(a) * b) % p_);
  }
  Residue pow(Residue a, std::uint64_t e) const noexcept {
    Residue r = 1 % p_;
    while (e) {
      if (e & 1u) r = mul(r, a);
      a = mul(a, a);
      e >>= 1u;
    }
    return r;
  }
  /// Multiplicative inverse of a nonzero residue.
  Residue inv(Residue a) const noexcept { return pow(a, p_ - 2); }

  friend bool operator==(const PrimeModulus&, const PrimeModulus&) = default;

 private:
  std::uint32_t p_;
};

class FpMatrix {
 public:
  FpMatrix() = default;
  FpMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static FpMatrix from_rows(const std::vector<FpVector>& rows, std::size_t cols) {
    FpMatrix m(0, cols);
    for (const auto& r : rows) m.append_row(r);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Residue& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Residue operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Residue> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Residue> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  FpVector row_vector(std::size_t r) const { return {row(r).begin(), row(r).end()}; }
  FpVector column_vector(std::size_t c) const {
    FpVector out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  void append_row(std::span<const Residue> values) {
    if (values.size() != cols_) throw DimensionError("row length does not match column count");
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    std::swap_ranges(row(a).begin(), row(a).end(), row(b).begin());
  }

  FpMatrix transposed() const {
    FpMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  friend bool operator==(const FpMatrix&, const FpMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Residue> data_;
};

struct RrefResult {
  FpMatrix echelon;  // same shape as the input; zero rows at the bottom
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

namespace detail {

// row[k] -= factor * src[k]
inline void axpy_sub(std::span<Residue> row, std::span<const Residue> src, Residue factor, const PrimeModulus& p) {
  if (factor == 0) return;
  const std::uint64_t q = p.value();
  const std::uint64_t f = q - factor;
  for (std::size_t k = 0; k < row.size(); ++k)
    if (src[k]) row[k] = static_cast<Residue>((row[k] + f * src[k]) % q);
}

}  // namespace detail

/// Reduced row-echelon form. Pivots are taken column by column, choosing the
/// first row (top-down) with a nonzero entry.
inline RrefResult rref_rank(FpMatrix m, const PrimeModulus& p) {
  RrefResult out;
  std::size_t lead = 0;
  for (std::size_t c = 0; c < m.cols() && lead < m.rows(); ++c) {
    std::size_t r = lead;
    while (r < m.rows() && m(r, c) == 0) ++r;
    if (r == m.rows()) continue;
    m.swap_rows(lead, r);
    auto pivot_row = m.row(lead);
    const Residue scale = p.inv(pivot_row[c]);
    for (auto& x : pivot_row) x = p.mul(x, scale);
    for (std::size_t other = 0; other < m.rows(); ++other)
      if (other != lead) detail::axpy_sub(m.row(other), m.row(lead), m(other, c), p);
    out.pivots.push_back(c);
    ++lead;
  }
  out.rank = lead;
  out.echelon = std::move(m);
  return out;
}

inline std::size_t rank_of(const FpMatrix& m, const PrimeModulus& p) { return rref_rank(m, p).rank; }

/// m * x
inline FpVector apply(const FpMatrix& m, std::span<const Residue> x, const PrimeModulus& p) {
  if (x.size() != m.cols()) throw DimensionError("vector length does not match column count");
  FpVector out(m.rows(), 0);
  const std::uint64_t q = p.value();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::uint64_t acc = 0;
    auto row = m.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) acc = (acc + static_cast<std::uint64_t>(row[c]) * x[c]) % q;
    out[r] = static_cast<Residue>(acc);
  }
  return out;
}

/// Some x with m * x = b, if one exists.
inline std::optional<FpVector> solve(const FpMatrix& m, std::span<const Residue> b, const PrimeModulus& p) {
  if (b.size() != m.rows()) throw DimensionError("right-hand side length does not match row count");
  FpMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::copy(m.row(r).begin(), m.row(r).end(), aug.row(r).begin());
    aug(r, m.cols()) = b[r];
  }
  auto red = rref_rank(std::move(aug), p);
  FpVector x(m.cols(), 0);
  for (std::size_t i = 0; i < red.rank; ++i) {
    if (red.pivots[i] == m.cols()) return std::nullopt;
    x[red.pivots[i]] = red.echelon(i, m.cols());
  }
  return x;
}

/// A subspace of F_p^E held by its reduced row-echelon basis.
class FpSubspace {
 public:
  FpSubspace(PrimeModulus p, std::size_t ambient_dim) : p_(p), ambient_(ambient_dim), basis_(0, ambient_dim) {}

  static FpSubspace span(const FpMatrix& generators, const PrimeModulus& p) {
    FpSubspace s(p, generators.cols());
    auto red = rref_rank(generators, p);
    for (std::size_t r = 0; r < red.rank; ++r) s.basis_.append_row(red.echelon.row(r));
    s.pivots_ = std::move(red.pivots);
    return s;
  }

  static FpSubspace span(const std::vector<FpVector>& generators, std::size_t ambient_dim, const PrimeModulus& p) {
    return span(FpMatrix::from_rows(generators, ambient_dim), p);
  }

  const PrimeModulus& modulus() const noexcept { return p_; }
  std::size_t ambient_dim() const noexcept { return ambient_; }
  std::size_t dim() const noexcept { return basis_.rows(); }
  const FpMatrix& basis() const noexcept { return basis_; }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

  /// Coordinates of v in the echelon basis, or nullopt when v is not in the span.
  std::optional<FpVector> coordinates(std::span<const Residue> v) const {
    if (v.size() != ambient_) throw DimensionError("vector is not in the ambient space");
    FpVector coeff(dim());
    FpVector rest(v.begin(), v.end());
    for (std::size_t r = 0; r < dim(); ++r) {
      coeff[r] = rest[pivots_[r]];
      detail::axpy_sub(rest, basis_.row(r), coeff[r], p_);
    }
    if (std::any_of(rest.begin(), rest.end(), [](Residue x) { return x != 0; })) return std::nullopt;
    return coeff;
  }

  bool contains(std::span<const Residue> v) const { return coordinates(v).has_value(); }

  bool contains(const FpSubspace& other) const {
    for (std::size_t r = 0; r < other.dim(); ++r)
      if (!contains(other.basis().row(r))) return false;
    return true;
  }

  /// Linear combination of basis rows.
  FpVector combine(std::span<const Residue> coeff) const {
    FpVector out(ambient_, 0);
    for (std::size_t r = 0; r < dim(); ++r) {
      if (coeff[r] == 0) continue;
      detail::axpy_sub(out, basis_.row(r), p_.neg(coeff[r]), p_);
    }
    return out;
  }

  /// Calls fn on every element, in base-p counting order of the coordinates.
  /// Refuses when p^dim exceeds `cap`.
  void for_each_element(const std::function<void(const FpVector&)>& fn, std::uint64_t cap = 1u << 20) const {
    auto count = checked_pow(p_.value(), dim(), cap);
    if (!count) throw EnumerationRefused("subspace has more than " + std::to_string(cap) + " elements");
    FpVector coeff(dim(), 0);
    FpVector v(ambient_, 0);
    for (std::uint64_t i = 0; i < *count; ++i) {
      fn(v);
      // increment coeff as a base-p counter and update v incrementally
      for (std::size_t k = 0; k < dim(); ++k) {
        detail::axpy_sub(v, basis_.row(k), p_.neg(1), p_);
        if (++coeff[k] < p_.value()) break;
        coeff[k] = 0;  // wrapped: p additions of row k returned it to zero contribution
      }
    }
  }

  friend bool operator==(const FpSubspace& a, const FpSubspace& b) {
    return a.p_ == b.p_ && a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }

 private:
  PrimeModulus p_;
  std::size_t ambient_;
  FpMatrix basis_;
  std::vector<std::size_t> pivots_;
};

/// Null space {x : m x = 0}.
inline FpSubspace kernel_basis(const FpMatrix& m, const PrimeModulus& p) {
  auto red = rref_rank(m, p);
  std::vector<char> is_pivot(m.cols(), 0);
  for (auto c : red.pivots) is_pivot[c] = 1;
  FpMatrix gens(0, m.cols());
  FpVector x(m.cols());
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::fill(x.begin(), x.end(), 0);
    x[f] = 1;
    for (std::size_t r = 0; r < red.rank; ++r) x[red.pivots[r]] = p.neg(red.echelon(r, f));
    gens.append_row(x);
  }
  return FpSubspace::span(gens, p);
}

inline std::size_t support_size(std::span<const Residue> v) {
  return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](Residue x) { return x != 0; }));
}

/// supp(W): the union of supports of all elements. Read off the basis rows.
inline std::vector<std::size_t> subspace_support(const FpSubspace& w) {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < w.ambient_dim(); ++c) {
    for (std::size_t r = 0; r < w.dim(); ++r) {
      if (w.basis()(r, c) != 0) {
        out.push_back(c);
        break;
      }
    }
  }
  return out;
}

/// (sum over all elements of |supp|) / ((p-1) p^(dim-1)), by full enumeration.
/// Equals |supp(W)| for every nonzero W; used as an independent check.
inline Rational support_sum_oracle(const FpSubspace& w, std::uint64_t cap = 1u << 20) {
  if (w.dim() == 0) return Rational(0);
  std::int64_t total = 0;
  w.for_each_element([&](const FpVector& v) { total += static_cast<std::int64_t>(support_size(v)); }, cap);
  const auto q = static_cast<std::int64_t>(w.modulus().value());
  const auto denom = (q - 1) * static_cast<std::int64_t>(*checked_pow(q, w.dim() - 1));
  return Rational(total, denom);
}

}  // namespace pdescent
