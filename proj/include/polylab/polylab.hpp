#pragma once

#include "polylab/bigint.hpp"
#include "polylab/constants.hpp"
#include "polylab/geometry.hpp"
#include "polylab/pathcount.hpp"
#include "polylab/prf.hpp"
#include "polylab/quadrature.hpp"
#include "polylab/simulator.hpp"
#include "polylab/stochastics.hpp"
