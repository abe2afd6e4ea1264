#pragma once

// Umbrella header: estimators of the Fisher information number, second-order
// variance approximations for comparing them, sufficient-condition checks and
// the Monte Carlo validation protocol.

#include "fincmp/conditions.hpp"
#include "fincmp/estimators.hpp"
#include "fincmp/model.hpp"
#include "fincmp/moments.hpp"
#include "fincmp/montecarlo.hpp"
#include "fincmp/report.hpp"
#include "fincmp/student_t.hpp"
#include "fincmp/taylor.hpp"
