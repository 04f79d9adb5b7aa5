#pragma once

// Construction and numerical verification of higher-order integrals of
// motion for classical superintegrable systems built from one-dimensional
// ladder operators, with trajectory integration and closure testing.

#include "superint/algebra.hpp"
#include "superint/config.hpp"
#include "superint/dual.hpp"
#include "superint/dynamics.hpp"
#include "superint/integrals.hpp"
#include "superint/io.hpp"
#include "superint/ladders.hpp"
#include "superint/leastsq.hpp"
#include "superint/observable.hpp"
#include "superint/ode.hpp"
#include "superint/phase_point.hpp"
#include "superint/report.hpp"
#include "superint/systems.hpp"
