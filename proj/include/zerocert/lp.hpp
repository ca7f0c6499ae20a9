#pragma once

#include <stdexcept>
#include <vector>

#include "zerocert/linalg.hpp"

namespace zerocert {

enum class LpStatus { optimal, infeasible, unbounded };

struct VarBound {
    double lo = -kInf;
    double hi = kInf;
};

/// Dense LP: minimize objective . x subject to eq_rows x = eq_rhs,
/// le_rows x <= le_rhs, and optional per-variable bounds (default free).
struct LinearProgram {
    int num_vars = 0;
    Vec objective;
    std::vector<Vec> eq_rows;
    Vec eq_rhs;
    std::vector<Vec> le_rows;
    Vec le_rhs;
    std::vector<VarBound> bounds;  // empty means all variables free
};

struct LpSolution {
    LpStatus status = LpStatus::optimal;
    Vec x;
    double objective = 0.0;
    int iterations = 0;
    double feasibility_residual = 0.0;
    double comp_slackness_residual = 0.0;
};

struct LpNumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Primal simplex on the bounded standard form. Dantzig pricing with
/// lowest-index tie-breaking; Bland's rule engaged after a stall threshold so
/// termination is guaranteed. Deterministic across runs.
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace zerocert
