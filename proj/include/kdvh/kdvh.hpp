#pragma once

#include "coeffs.hpp"
#include "diffpoly.hpp"
#include "errors.hpp"
#include "experiments.hpp"
#include "hierarchy.hpp"
#include "io.hpp"
#include "multipliers.hpp"
#include "opalg.hpp"
#include "pde.hpp"
#include "random.hpp"
#include "rational.hpp"
#include "spectral.hpp"
#include "weights.hpp"
