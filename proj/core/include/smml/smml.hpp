#pragma once

#include "smml/codebook.hpp"
#include "smml/errors.hpp"
#include "smml/family.hpp"
#include "smml/quadrature.hpp"
#include "smml/solver.hpp"
#include "smml/tridiagonal.hpp"
