#pragma once

#include "mboltz/error.hpp"
#include "mboltz/vec3.hpp"
#include "mboltz/kinematics.hpp"
#include "mboltz/kernel.hpp"
#include "mboltz/cosmology.hpp"
#include "mboltz/quadrature.hpp"
#include "mboltz/numeric.hpp"
#include "mboltz/state.hpp"
#include "mboltz/collision.hpp"
#include "mboltz/solver.hpp"
#include "mboltz/config.hpp"
#include "mboltz/run.hpp"
#include "mboltz/diagnostics.hpp"
