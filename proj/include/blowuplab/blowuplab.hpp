#pragma once

#include "blowuplab/common.hpp"
#include "blowuplab/config.hpp"
#include "blowuplab/csv.hpp"
#include "blowuplab/exponents.hpp"
#include "blowuplab/functionals.hpp"
#include "blowuplab/harness.hpp"
#include "blowuplab/iteration.hpp"
#include "blowuplab/multiplier.hpp"
#include "blowuplab/problem.hpp"
#include "blowuplab/quadrature.hpp"
#include "blowuplab/solver.hpp"
