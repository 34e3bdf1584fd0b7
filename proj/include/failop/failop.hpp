#pragma once

// Deployment synthesis and degradation analysis for fail-operational
// software platforms: model types, constraint catalog, exact solver,
// SMT-LIB export, availability graph and reports.

#include "failop/config.hpp"
#include "failop/constraints.hpp"
#include "failop/json_io.hpp"
#include "failop/model.hpp"
#include "failop/pag.hpp"
#include "failop/report.hpp"
#include "failop/smtlib.hpp"
#include "failop/solver.hpp"
#include "failop/violation.hpp"
