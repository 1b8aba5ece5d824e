#pragma once

#include "wip/config.hpp"
#include "wip/connection.hpp"
#include "wip/csv.hpp"
#include "wip/dynamics_full.hpp"
#include "wip/dynamics_reduced.hpp"
#include "wip/integrator.hpp"
#include "wip/lagrangian.hpp"
#include "wip/oracle.hpp"
#include "wip/params.hpp"
#include "wip/sim.hpp"
#include "wip/state.hpp"
#include "wip/validation.hpp"
