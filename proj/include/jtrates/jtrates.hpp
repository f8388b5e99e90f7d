#pragma once

#include "jtrates/analytic.hpp"
#include "jtrates/config.hpp"
#include "jtrates/mc.hpp"
#include "jtrates/measure.hpp"
#include "jtrates/model.hpp"
#include "jtrates/pde.hpp"
#include "jtrates/rng.hpp"
#include "jtrates/stats.hpp"
#include "jtrates/tables.hpp"
#include "jtrates/telegraph.hpp"
