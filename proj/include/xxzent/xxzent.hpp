#pragma once

// Umbrella header.

#include "analysis.hpp"
#include "brute_force.hpp"
#include "cmfa.hpp"
#include "common.hpp"
#include "cspa.hpp"
#include "derivatives.hpp"
#include "exact.hpp"
#include "figures.hpp"
#include "io.hpp"
#include "model.hpp"
#include "numerics.hpp"
#include "quadrature.hpp"
#include "rpa.hpp"
#include "rpa_xxz.hpp"
