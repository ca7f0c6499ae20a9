#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zerocert/delta.hpp"
#include "zerocert/geometry.hpp"
#include "zerocert/minimax.hpp"
#include "zerocert/operators.hpp"

namespace zerocert {

/// Certified lower bound on inf over the body of |Phi|:
/// value = max(0, grid_min - modulus * covering_radius).
struct EtaBound {
    double value = 0.0;
    double grid_min = 0.0;
    double modulus = 0.0;  // map-Lipschitz bound M
    double covering_radius = 0.0;
    bool certified = false;  // false when M is heuristic (no known L)
};

/// Machine-checkable record asserting inf_X |Phi| <= L * delta_upper / 2,
/// built from a hull membership certificate for 0 among the sampled images.
struct NearZeroCertificate {
    ConvexBody body;
    double delta_upper = 0.0;
    UpperWitnessKind delta_upper_kind = UpperWitnessKind::trivial;
    double lipschitz = 0.0;
    LProvenance l_provenance = LProvenance::known;
    HullCertificate membership;
    double claimed_bound = 0.0;
    double validation_grid_min = 0.0;
    bool sharpness_anomaly = false;
    int resolution = 0;
};

enum class CertifyStatus { certificate, no_certificate };

struct CertifyResult {
    CertifyStatus status = CertifyStatus::no_certificate;
    std::optional<NearZeroCertificate> certificate;
    std::optional<HullCertificate> separation;  // present when no certificate
};

enum class ExclusionVerdict { premise_holds_conclusion_verified, premise_fails_no_claim, violation };

struct ExclusionCheckReport {
    ExclusionVerdict verdict = ExclusionVerdict::premise_fails_no_claim;
    double eta = 0.0;
    double delta_upper = 0.0;
    double threshold = 0.0;  // 2 eta / L, +inf when L = 0 and eta > 0
    double sup_inf = 0.0;    // distance of 0 to the sampled image hull of X
    bool premise = false;
};

struct SearchCandidate {
    ConvexBody body;
    double delta_upper = 0.0;
    double residual = 0.0;
};

struct SearchResult {
    bool found = false;
    ConvexBody best_body;
    double delta_upper = 0.0;
    double membership_residual = 0.0;
    std::vector<SearchCandidate> trace;
    std::string assumption = "interpretation assumes the image of the region is closed; not verified";
};

struct Example11Row {
    int n = 0;
    double alpha = 0.0;
    double beta = 0.0;
    Vec phi_alpha;
    Vec phi_beta;
    double norm_osc_bound = 0.0;  // beta^2 - alpha^2, algebraically 3/4 for every n
    double delta_exact = 0.0;  // (beta - alpha)^2 / 4
    double membership_residual = 0.0;
};

struct Example11Table {
    std::vector<Example11Row> rows;
    double min_image_norm = 0.0;  // min of |Phi| over all sampled points
    bool zero_in_image = false;
};

EtaBound eta_lower_bound(const OperatorHandle& op, const ConvexBody& body, int resolution);

/// Consistency harness: when delta_upper(X) < 2 eta(V) / L the sampled image
/// hull of X must exclude 0. Requires X inside V and an operator with L.
ExclusionCheckReport check_exclusion_threshold(const OperatorHandle& op, const ConvexBody& X, const ConvexBody& V,
                                int resolution, double tol);

/// Near-zero certificate: requires hull membership over X; emits
/// claimed_bound = L * delta_upper / 2 and cross-checks the grid minimum of
/// |Phi| against it. A SampleSeparation outcome is a sound "no certificate".
CertifyResult certify_near_zero(const OperatorHandle& op, const ConvexBody& X, int resolution,
                                double tol);

/// Heuristic search for hull-containing bodies with small delta: grid
/// singleton scan with Newton polishing, then grid-pair segments ranked by
/// length with bisection shrinking while membership persists.
SearchResult search_small_delta(const OperatorHandle& op, const ConvexBody& V, int budget,
                                double tol);

Example11Table example11_table(int n_max);

}  // namespace zerocert
