// wyskew.hpp
// Umbrella header.

#pragma once

#include "wyskew/error.hpp"
#include "wyskew/quadrature.hpp"
#include "wyskew/linalg.hpp"
#include "wyskew/states.hpp"
#include "wyskew/coherence.hpp"
#include "wyskew/geometry.hpp"
#include "wyskew/dynamics.hpp"
#include "wyskew/qubit_analytic.hpp"
