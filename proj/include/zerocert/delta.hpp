#pragma once

#include <vector>

#include "zerocert/geometry.hpp"
#include "zerocert/linalg.hpp"
#include "zerocert/optim.hpp"

namespace zerocert {

/// Finite convex-interpolable data: values and subgradients of a convex
/// function at sample points. The defining inequalities are
/// psi_j >= psi_i + <g_i, x_j - x_i> for all i, j.
struct PsiData {
    std::vector<Vec> points;
    std::vector<double> values;
    std::vector<Vec> subgradients;

    /// Worst violation of the interpolability inequalities (0 if none).
    double interpolability_violation() const;
    bool interpolable(double tol = 1e-8) const { return interpolability_violation() <= tol; }
};

struct DeltaLowerResult {
    double value = 0.0;
    PsiData witness;
    bool g_box_active = false;  // subgradient box bound touched at the optimum
    int lp_iterations = 0;
    int cutting_rounds = 0;
};

enum class UpperWitnessKind { recenter, extension, exact_segment, trivial };

struct SlackAccount {
    double lp_lower = 0.0;
    double analytic_floor = 0.0;
    double recenter_upper = kInf;
    double extension_upper = kInf;
    double extension_slack = 0.0;
    bool g_box_active = false;
};

/// Certified bracket for the oscillation defect
///   delta_X = inf over convex psi of osc_X(|x|^2 + psi).
struct DeltaBounds {
    double lower = 0.0;
    double upper = 0.0;
    PsiData lower_witness;
    UpperWitnessKind upper_kind = UpperWitnessKind::trivial;
    Vec recenter_center;
    PsiData extension_witness;
    int resolution = 0;
    SlackAccount slack;
};

/// Closed form delta = |b-a|^2 / 4 for a segment. Restricting to the chord
/// leaves osc(c t^2 + convex), midpoint convexity forces osc >= c/4, and
/// psi linear in t with slope -c attains it. See docs/derivations.md.
double delta_segment_exact(const Segment& seg);

/// Grid relaxation: the LP over interpolable data minimizing the sandwich
/// width t with c <= |x_i|^2 + psi_i <= c + t and psi_0 = 0. Any convex psi
/// restricts to a feasible point, so the optimum is a lower bound on
/// delta_X. Interpolability rows are generated lazily until none are
/// violated, which yields the full pairwise optimum.
DeltaLowerResult delta_lower_lp(const ConvexBody& body, const SampleGrid& grid);

/// Grid used for the lower-bound LP at the given resolution. Point count is
/// capped (~100) by stepping the lattice resolution down, which keeps the
/// sandwich LP well inside the dense-simplex comfort zone; any sub-grid
/// still yields a certified lower bound.
SampleGrid delta_lp_grid(const ConvexBody& body, int resolution);

struct DeltaLowerOnGrid {
    SampleGrid grid;
    DeltaLowerResult result;
};

/// delta_lower_lp on the capped grid, halving the resolution on numerical
/// breakdown so the witness always matches the returned grid.
DeltaLowerOnGrid delta_lower_auto(const ConvexBody& body, int resolution);

/// Upper bound from the recentering function psi(x) = -2<c,x> + |c|^2 with
/// c the enclosing-ball center of the extreme points: osc = max |x-c|^2,
/// exact on vertices.
std::pair<double, Vec> delta_upper_recenter(const ConvexBody& body);

/// Upper bound from the max-affine convex extension of an interpolable
/// witness. Returns {upper, slack}; upper = sup - (inf - slack) is valid
/// regardless of how tight the inner minimization got.
std::pair<double, double> delta_upper_extension(const ConvexBody& body, const PsiData& witness,
                                                double tol);

/// Orchestrated bracket: lower = max(LP, diam^2/4); upper = min(recenter,
/// extension). Segments short-circuit to the closed form on both sides.
DeltaBounds delta_bounds(const ConvexBody& body, int resolution);

}  // namespace zerocert
