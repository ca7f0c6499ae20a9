#include "zerocert/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace zerocert {

HullCertificate hull_certificate(const OperatorHandle& op, const SampleGrid& grid, double tol) {
    if (grid.points.empty()) throw std::invalid_argument("hull_certificate: empty grid");
    if (!(tol > 0.0)) throw std::invalid_argument("hull_certificate: tol must be positive");
    HullCertificate cert;
    cert.tol = tol;
    cert.sample_points = grid.points;
    for (const Vec& x : grid.points) cert.images.push_back(op_eval(op, x));

    const MinNormResult mn = min_norm_point(cert.images, tol);
    if (mn.norm <= tol) {
        cert.kind = HullCertificate::Kind::membership;
        cert.weights = mn.weights;
        cert.residual = mn.norm;
        return cert;
    }
    cert.kind = HullCertificate::Kind::sample_separation;
    cert.direction = scaled(mn.point, 1.0 / mn.norm);
    cert.margin = mn.norm - tol;
    for (const Vec& s : cert.images)
        if (dot(s, cert.direction) < cert.margin - 1e-12)
            throw std::runtime_error(
                "hull_certificate: separation direction failed validation against a sample");
    return cert;
}

MinimaxReport minimax_values(const OperatorHandle& op, const SampleGrid& grid) {
    if (grid.points.empty()) throw std::invalid_argument("minimax_values: empty grid");
    MinimaxReport rep;
    std::vector<Vec> images;
    rep.inf_sup = kInf;
    for (const Vec& x : grid.points) {
        images.push_back(op_eval(op, x));
        rep.inf_sup = std::min(rep.inf_sup, norm(images.back()));
    }
    rep.sup_inf = min_norm_point(images).norm;
    rep.gap = rep.inf_sup - rep.sup_inf;
    rep.covering_radius = grid.covering_radius;
    return rep;
}

GapCheckResult gap_inequality_check(const OperatorHandle& op, const ConvexBody& body,
                                    const PsiData& psi, const SampleGrid& grid, double L) {
    if (psi.points.size() != grid.points.size())
        throw std::invalid_argument("gap_inequality_check: psi data must live on the grid points");
    if (!psi.interpolable(1e-6))
        throw std::invalid_argument("gap_inequality_check: psi not interpolable");
    if (!(L >= 0.0)) throw std::invalid_argument("gap_inequality_check: L must be nonnegative");

    GapCheckResult out;
    out.report = minimax_values(op, grid);
    out.lhs = out.report.gap;

    double fmin = kInf, fmax = -kInf;
    for (size_t i = 0; i < grid.points.size(); ++i) {
        const double v = dot(grid.points[i], grid.points[i]) + psi.values[i];
        fmin = std::min(fmin, v);
        fmax = std::max(fmax, v);
    }
    out.rhs = 0.5 * L * (fmax - fmin);
    out.report.rhs_bound = out.rhs;

    const MapLipschitzBound m = estimate_map_lipschitz(op, body, grid);
    out.slack = m.value * grid.covering_radius;
    out.report.discretization_slack = out.slack;
    out.report.slack_certified = m.certified;
    out.holds = out.lhs <= out.rhs + out.slack + 1e-9;
    return out;
}

ConvexityCheckResult convexity_mechanism_check(const OperatorHandle& op, const ConvexBody& body,
                                               double L, int n_trials, std::uint64_t seed) {
    if (n_trials < 1) throw std::invalid_argument("convexity_mechanism_check: n_trials must be >= 1");
    if (!(L >= 0.0)) throw std::invalid_argument("convexity_mechanism_check: L must be nonnegative");
    Rng rng(seed);
    ConvexityCheckResult out;
    out.trials = n_trials;
    const int d = body_dim(body);
    for (int t = 0; t < n_trials; ++t) {
        const Vec v = sample_point_in_body(body, rng);
        const Vec w = sample_point_in_body(body, rng);
        const Vec y = rng.unit_vector(d);

        // monotonicity: L|v-w|^2 + <(J(v)-J(w))^T y, v-w> >= 0
        const Vec diff = sub(v, w);
        const Matrix jd = mat_sub(op_jacobian(op, v), op_jacobian(op, w));
        const double mono = L * dot(diff, diff) + dot(mat_transpose_vec(jd, y), diff);
        if (mono < -1e-9) ++out.violations;
        out.worst = std::min(out.worst, mono);

        // midpoint convexity of G(x) = (L/2)|x|^2 + <Phi(x), y>
        auto G = [&](const Vec& x) { return 0.5 * L * dot(x, x) + dot(op_eval(op, x), y); };
        Vec mid(d);
        for (int i = 0; i < d; ++i) mid[i] = 0.5 * (v[i] + w[i]);
        const double conv_res = 0.5 * (G(v) + G(w)) - G(mid);
        if (conv_res < -1e-9) ++out.violations;
        out.worst = std::min(out.worst, conv_res);
    }
    return out;
}

}  // namespace zerocert
