#pragma once

#include "ncfair/bounds.hpp"
#include "ncfair/config.hpp"
#include "ncfair/csv.hpp"
#include "ncfair/dataset.hpp"
#include "ncfair/error.hpp"
#include "ncfair/group_metrics.hpp"
#include "ncfair/rational.hpp"
#include "ncfair/recipes.hpp"
#include "ncfair/report.hpp"
#include "ncfair/rules.hpp"
#include "ncfair/similarity.hpp"
#include "ncfair/synth.hpp"
