#pragma once

#include "pdescent/errors.hpp"
#include "pdescent/fp_linalg.hpp"
#include "pdescent/complex.hpp"
#include "pdescent/covers.hpp"
#include "pdescent/wedge.hpp"
#include "pdescent/reduce.hpp"
#include "pdescent/tau.hpp"
#include "pdescent/tower.hpp"
#include "pdescent/io.hpp"
