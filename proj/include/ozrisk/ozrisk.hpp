#pragma once

#include "ozrisk/chart.hpp"
#include "ozrisk/config.hpp"
#include "ozrisk/engine.hpp"
#include "ozrisk/er_model.hpp"
#include "ozrisk/oracle.hpp"
#include "ozrisk/population.hpp"
#include "ozrisk/random.hpp"
#include "ozrisk/season.hpp"
#include "ozrisk/sweep.hpp"
#include "ozrisk/variability.hpp"
