#pragma once

#include "causalkit/adjustment.hpp"
#include "causalkit/bootstrap.hpp"
#include "causalkit/dag.hpp"
#include "causalkit/dag_io.hpp"
#include "causalkit/dataset.hpp"
#include "causalkit/error.hpp"
#include "causalkit/g_formula.hpp"
#include "causalkit/iptw.hpp"
#include "causalkit/noise.hpp"
#include "causalkit/quasi.hpp"
#include "causalkit/regression.hpp"
#include "causalkit/report_io.hpp"
#include "causalkit/saturated.hpp"
#include "causalkit/scenarios.hpp"
#include "causalkit/scm.hpp"
#include "causalkit/scm_io.hpp"
