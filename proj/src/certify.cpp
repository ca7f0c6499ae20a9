#include "zerocert/certify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace zerocert {

namespace {

bool body_inside(const ConvexBody& inner, const ConvexBody& outer, double tol) {
    if (const auto* b = std::get_if<BallBody>(&inner)) {
        if (const auto* ob = std::get_if<BallBody>(&outer))
            return dist(b->center, ob->center) + b->radius <= ob->radius + tol;
        throw std::invalid_argument("check_exclusion_threshold: ball X inside a non-ball V is unsupported");
    }
    for (const Vec& v : extreme_points(inner))
        if (!contains(outer, v, tol)) return false;
    return true;
}

double grid_min_norm(const OperatorHandle& op, const SampleGrid& grid) {
    double mn = kInf;
    for (const Vec& x : grid.points) mn = std::min(mn, norm(op_eval(op, x)));
    return mn;
}

// Newton iterations on Phi from a starting point; returns the polished point
// when |Phi| drops below target, otherwise nullopt.
std::optional<Vec> newton_polish(const OperatorHandle& op, Vec x, double target) {
    for (int it = 0; it < 50; ++it) {
        const Vec fx = op_eval(op, x);
        if (norm(fx) <= target) return x;
        Vec step;
        if (!solve_linear(op_jacobian(op, x), scaled(fx, -1.0), step)) return std::nullopt;
        if (!all_finite(step) || norm(step) > 1e6) return std::nullopt;
        axpy(1.0, step, x);
    }
    if (norm(op_eval(op, x)) <= target) return x;
    return std::nullopt;
}

// membership residual of 0 against the sampled images of a segment
double segment_membership_residual(const OperatorHandle& op, const Vec& p, const Vec& q, double tol) {
    const int sub_res = 32;
    std::vector<Vec> images;
    for (int i = 0; i <= sub_res; ++i) {
        const double t = static_cast<double>(i) / sub_res;
        Vec x(p.size());
        for (size_t k = 0; k < p.size(); ++k) x[k] = (1.0 - t) * p[k] + t * q[k];
        images.push_back(op_eval(op, x));
    }
    return min_norm_point(images, tol).norm;
}

}  // namespace

EtaBound eta_lower_bound(const OperatorHandle& op, const ConvexBody& body, int resolution) {
    const SampleGrid grid = sample(body, resolution);
    EtaBound out;
    out.grid_min = grid_min_norm(op, grid);
    const MapLipschitzBound m = estimate_map_lipschitz(op, body, grid);
    out.modulus = m.value;
    out.certified = m.certified;
    out.covering_radius = grid.covering_radius;
    out.value = std::max(0.0, out.grid_min - out.modulus * out.covering_radius);
    return out;
}

ExclusionCheckReport check_exclusion_threshold(const OperatorHandle& op, const ConvexBody& X, const ConvexBody& V,
                                int resolution, double tol) {
    if (!op.known_grad_lipschitz)
        throw std::invalid_argument("check_exclusion_threshold: operator has no Lipschitz constant");
    if (!body_inside(X, V, 1e-9)) throw std::invalid_argument("check_exclusion_threshold: X is not inside V");
    const double L = *op.known_grad_lipschitz;

    ExclusionCheckReport rep;
    const EtaBound eta = eta_lower_bound(op, V, resolution);
    rep.eta = eta.value;
    rep.delta_upper = delta_bounds(X, resolution).upper;
    rep.threshold = L == 0.0 ? (eta.value > 0.0 ? kInf : 0.0) : 2.0 * eta.value / L;
    rep.premise = rep.delta_upper < rep.threshold;

    const HullCertificate hull = hull_certificate(op, sample(X, resolution), tol);
    rep.sup_inf = hull.kind == HullCertificate::Kind::membership ? hull.residual
                                                                 : hull.margin + hull.tol;
    if (!rep.premise) {
        rep.verdict = ExclusionVerdict::premise_fails_no_claim;
        return rep;
    }
    const bool conclusion =
        hull.kind == HullCertificate::Kind::sample_separation && rep.sup_inf > 0.0;
    rep.verdict = conclusion ? ExclusionVerdict::premise_holds_conclusion_verified
                             : ExclusionVerdict::violation;
    return rep;
}

CertifyResult certify_near_zero(const OperatorHandle& op, const ConvexBody& X, int resolution,
                                double tol) {
    if (!op.known_grad_lipschitz)
        throw std::invalid_argument(
            "certify_near_zero: operator carries no Lipschitz constant (known or asserted)");
    const double L = *op.known_grad_lipschitz;
    const SampleGrid grid = sample(X, resolution);
    const HullCertificate hull = hull_certificate(op, grid, tol);

    CertifyResult out;
    if (hull.kind == HullCertificate::Kind::sample_separation) {
        out.status = CertifyStatus::no_certificate;
        out.separation = hull;
        return out;
    }

    const DeltaBounds db = delta_bounds(X, resolution);
    NearZeroCertificate cert;
    cert.body = X;
    cert.delta_upper = db.upper;
    cert.delta_upper_kind = db.upper_kind;
    cert.lipschitz = L;
    cert.l_provenance = op.l_provenance;
    cert.membership = hull;
    cert.claimed_bound = 0.5 * L * db.upper;
    cert.resolution = resolution;
    double vmin = kInf;
    for (const Vec& img : hull.images) vmin = std::min(vmin, norm(img));
    cert.validation_grid_min = vmin;
    const MapLipschitzBound m = estimate_map_lipschitz(op, X, grid);
    cert.sharpness_anomaly = vmin > cert.claimed_bound + m.value * grid.covering_radius + 1e-9;
    out.status = CertifyStatus::certificate;
    out.certificate = cert;
    return out;
}

SearchResult search_small_delta(const OperatorHandle& op, const ConvexBody& V, int budget,
                                double tol) {
    if (budget < 1) throw std::invalid_argument("search_small_delta: budget must be >= 1");
    SearchResult out;
    const int res = std::max(4, std::min(24, static_cast<int>(std::sqrt(budget))));
    const SampleGrid grid = sample(V, res);
    int spent = 0;

    auto consider = [&](const ConvexBody& candidate, double delta_up, double residual) {
        out.trace.push_back({candidate, delta_up, residual});
        if (!out.found || delta_up < out.delta_upper ||
            (delta_up == out.delta_upper && residual < out.membership_residual)) {
            out.found = true;
            out.best_body = candidate;
            out.delta_upper = delta_up;
            out.membership_residual = residual;
        }
    };

    // singleton candidates: grid points where |Phi| is already small, Newton
    // polished to a near-exact zero
    const double zero_target = std::min(tol, 1e-9);
    for (const Vec& x : grid.points) {
        if (spent >= budget) break;
        ++spent;
        if (norm(op_eval(op, x)) > 0.5) continue;
        const auto z = newton_polish(op, x, 1e-13);
        if (!z || !contains(V, *z, 1e-9)) continue;
        const double r = norm(op_eval(op, *z));
        if (r <= zero_target) consider(Segment{*z, *z}, 0.0, r);
    }
    if (out.found && out.membership_residual <= zero_target) return out;

    // segment candidates: grid-point pairs probed in a seeded shuffled order
    // (pure shortest-first starves on anisotropic regions); members are then
    // ranked by length through the running best
    const int m = static_cast<int>(grid.points.size());
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<size_t>(m) * (m - 1) / 2);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
    Rng shuffle_rng(0x5ea4c4ULL);
    for (size_t i = pairs.size(); i > 1; --i)
        std::swap(pairs[i - 1], pairs[shuffle_rng.next_u64() % i]);

    std::vector<std::pair<Vec, Vec>> members;
    for (const auto& [i, j] : pairs) {
        if (spent >= budget || static_cast<int>(members.size()) >= 8) break;
        const double len = dist(grid.points[i], grid.points[j]);
        if (len < 1e-12) continue;
        ++spent;
        const double r = segment_membership_residual(op, grid.points[i], grid.points[j], tol);
        if (r <= tol) {
            members.emplace_back(grid.points[i], grid.points[j]);
            consider(Segment{grid.points[i], grid.points[j]}, 0.25 * len * len, r);
        }
    }
    std::sort(members.begin(), members.end(), [](const auto& a, const auto& b) {
        return dist(a.first, a.second) < dist(b.first, b.second);
    });

    // bisection shrink while membership persists
    for (auto& [p0, q0] : members) {
        Vec p = p0, q = q0;
        while (spent < budget && dist(p, q) > 1e-7) {
            Vec mid(p.size());
            for (size_t k = 0; k < p.size(); ++k) mid[k] = 0.5 * (p[k] + q[k]);
            const double r1 = segment_membership_residual(op, p, mid, tol);
            ++spent;
            if (r1 <= tol) {
                q = mid;
                const double len = dist(p, q);
                consider(Segment{p, q}, 0.25 * len * len, r1);
                continue;
            }
            const double r2 = segment_membership_residual(op, mid, q, tol);
            ++spent;
            if (r2 <= tol) {
                p = mid;
                const double len = dist(p, q);
                consider(Segment{p, q}, 0.25 * len * len, r2);
                continue;
            }
            break;
        }
    }
    return out;
}

Example11Table example11_table(int n_max) {
    if (n_max < 1) throw std::invalid_argument("example11_table: n_max must be >= 1");
    const OperatorHandle op = make_catalog_operator("example11", {});
    Example11Table table;
    table.min_image_norm = kInf;
    for (int n = 1; n <= n_max; ++n) {
        Example11Row row;
        row.n = n;
        row.alpha = std::sqrt(static_cast<double>(n));
        row.beta = std::sqrt(n + 0.75);
        row.phi_alpha = op_eval(op, {row.alpha, 0.0});
        row.phi_beta = op_eval(op, {row.beta, 0.0});
        row.norm_osc_bound = 0.75;  // (n + 3/4) - n, exact by construction
        const double half_gap = 0.5 * (row.beta - row.alpha);
        row.delta_exact = half_gap * half_gap;
        row.membership_residual = min_norm_point({row.phi_alpha, row.phi_beta}).norm;
        table.min_image_norm = std::min(table.min_image_norm, norm(row.phi_alpha));
        table.min_image_norm = std::min(table.min_image_norm, norm(row.phi_beta));
        // interior samples of the segment feed the |Phi| = 1 record
        for (int t = 1; t < 8; ++t) {
            const double x = row.alpha + (row.beta - row.alpha) * t / 8.0;
            table.min_image_norm = std::min(table.min_image_norm, norm(op_eval(op, {x, 0.0})));
        }
        table.rows.push_back(std::move(row));
    }
    table.zero_in_image = table.min_image_norm <= 1e-9;
    return table;
}

}  // namespace zerocert
