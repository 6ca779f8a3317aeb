#pragma once

// Umbrella header.

#include "sltc/block_vector.hpp"
#include "sltc/errors.hpp"
#include "sltc/fd_operator.hpp"
#include "sltc/greens.hpp"
#include "sltc/grid.hpp"
#include "sltc/ode.hpp"
#include "sltc/potential.hpp"
#include "sltc/problem.hpp"
#include "sltc/problem_io.hpp"
#include "sltc/rational_coupling.hpp"
#include "sltc/resolvent.hpp"
#include "sltc/roots.hpp"
#include "sltc/shooting.hpp"
#include "sltc/spectrum.hpp"
#include "sltc/transmission.hpp"
