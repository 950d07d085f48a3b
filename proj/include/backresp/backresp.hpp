#pragma once

#include "backresp/coalition.hpp"
#include "backresp/coop_game.hpp"
#include "backresp/error.hpp"
#include "backresp/model_zoo.hpp"
#include "backresp/power_index.hpp"
#include "backresp/rational.hpp"
#include "backresp/report.hpp"
#include "backresp/responsibility.hpp"
#include "backresp/safety_game.hpp"
#include "backresp/transition_system.hpp"
#include "backresp/tsr.hpp"
