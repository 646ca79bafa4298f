#pragma once

#include "csv.hpp"
#include "energy.hpp"
#include "gaussian.hpp"
#include "grid.hpp"
#include "kernel.hpp"
#include "mc.hpp"
#include "pde.hpp"
#include "quadrature.hpp"
#include "smoother.hpp"
#include "step_function.hpp"
#include "verify.hpp"
