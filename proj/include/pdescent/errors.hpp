#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdescent {

/// Base of every error raised by the library. All of them signal a violated
/// precondition of the requested operation.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidModulusError : public Error {
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DimensionError : public Error {
  using Error::Error;
};

class EnumerationRefused : public Error {
  using Error::Error;
};

class InvalidPathError : public Error {
  using Error::Error;
};

class CocycleConditionError : public Error {
 public:
  CocycleConditionError(const std::string& what, std::size_t face)
      : Error(what), face_(face) {}
  std::size_t face() const noexcept { return face_; }

 private:
  std::size_t face_;
};

/// The requested cover would be disconnected. `certificate` holds the
/// coefficients of a vanishing combination of the input classes (or, for
/// cyclic covers, the common divisor in position 0).
class DisconnectedCoverError : public Error {
 public:
  DisconnectedCoverError(const std::string& what, std::vector<std::uint32_t> certificate)
      : Error(what), certificate_(std::move(certificate)) {}
  const std::vector<std::uint32_t>& certificate() const noexcept { return certificate_; }

 private:
  std::vector<std::uint32_t> certificate_;
};

/// A c-value table is ill-defined; `witness_edge` closes a loop of the total
/// complex on which the cocycle evaluates non-trivially.
class NotConstantOnFiberError : public Error {
 public:
  NotConstantOnFiberError(const std::string& what, std::size_t witness_edge)
      : Error(what), witness_edge_(witness_edge) {}
  std::size_t witness_edge() const noexcept { return witness_edge_; }

 private:
  std::size_t witness_edge_;
};

class UnsupportedCoverError : public Error {
  using Error::Error;
};

class TrivialClassError : public Error {
  using Error::Error;
};

class ModeError : public Error {
  using Error::Error;
};

class GraphError : public Error {
  using Error::Error;
};

class NotRapidlyDescendingError : public Error {
  using Error::Error;
};

class MalformedTowerError : public Error {
  using Error::Error;
};

class NotQuasiAdditiveError : public Error {
 public:
  NotQuasiAdditiveError(const std::string& what, long i, long j)
      : Error(what), i_(i), j_(j) {}
  long i() const noexcept { return i_; }
  long j() const noexcept { return j_; }

 private:
  long i_;
  long j_;
};

}  // namespace pdescent
