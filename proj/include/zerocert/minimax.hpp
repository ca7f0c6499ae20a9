#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zerocert/delta.hpp"
#include "zerocert/geometry.hpp"
#include "zerocert/operators.hpp"
#include "zerocert/optim.hpp"

namespace zerocert {

/// Decision record for 0 against the hull of sampled images.
///   Membership: convex weights with |sum l_i Phi(x_i)| <= tol; certifies
///     0 in the closed hull of Phi(X) up to tol, since samples lie in Phi(X).
///   SampleSeparation: unit direction y with <Phi(x_i), y> >= margin for all
///     samples. This separates the SAMPLE hull only and is never presented
///     as a statement about the full image hull.
struct HullCertificate {
    enum class Kind { membership, sample_separation } kind = Kind::membership;
    std::vector<Vec> sample_points;  // grid points x_i
    std::vector<Vec> images;         // Phi(x_i)
    Vec weights;                     // membership: convex weights
    double residual = 0.0;           // membership: |sum l_i Phi(x_i)|
    Vec direction;                   // separation: unit y
    double margin = 0.0;             // separation: gamma > 0
    double tol = 0.0;
    std::string scope = "sample hull only";
};

struct MinimaxReport {
    double inf_sup = 0.0;              // min over grid of |Phi(x_i)|
    double sup_inf = 0.0;              // dist(0, conv of sampled images)
    double gap = 0.0;                  // inf_sup - sup_inf
    double rhs_bound = 0.0;            // (L/2) osc_grid(|x|^2 + psi), when applicable
    double discretization_slack = 0.0; // M * covering radius
    double covering_radius = 0.0;
    bool slack_certified = false;      // false when M is heuristic (no known L)
};

struct GapCheckResult {
    bool holds = false;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    MinimaxReport report;
};

struct ConvexityCheckResult {
    int violations = 0;
    double worst = 0.0;  // most negative residual observed
    int trials = 0;
};

HullCertificate hull_certificate(const OperatorHandle& op, const SampleGrid& grid, double tol);

MinimaxReport minimax_values(const OperatorHandle& op, const SampleGrid& grid);

/// Numerical check of the duality-gap inequality
///   inf_X sup_Y f - sup_Y inf_X f <= sup_X phi - inf_X phi,
/// phi = (L/2)(|x|^2 + psi), on the sampled grid, with a discretization
/// allowance M * covering_radius.
GapCheckResult gap_inequality_check(const OperatorHandle& op, const ConvexBody& body,
                                    const PsiData& psi, const SampleGrid& grid, double L);

/// Monotonicity of x -> L x + J(x)^T y and midpoint convexity of
/// x -> (L/2)|x|^2 + <Phi(x), y> on seeded random pairs and triples.
ConvexityCheckResult convexity_mechanism_check(const OperatorHandle& op, const ConvexBody& body,
                                               double L, int n_trials, std::uint64_t seed);

}  // namespace zerocert
