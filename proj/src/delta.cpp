#include "zerocert/delta.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <tuple>

#include "zerocert/lp.hpp"

namespace zerocert {

double PsiData::interpolability_violation() const {
    const size_t m = points.size();
    double worst = 0.0;
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) {
            if (i == j) continue;
            const double lhs = values[i] + dot(subgradients[i], sub(points[j], points[i]));
            worst = std::max(worst, lhs - values[j]);
        }
    return worst;
}

double delta_segment_exact(const Segment& seg) {
    const double len = dist(seg.a, seg.b);
    return 0.25 * len * len;
}

namespace {

PsiData trivial_witness(const Vec& point) {
    PsiData w;
    w.points = {point};
    w.values = {0.0};
    w.subgradients = {Vec(point.size(), 0.0)};
    return w;
}

// Assemble and solve the sandwich LP restricted to the given interpolability
// pairs. Variable order: psi_1..psi_{m-1} (psi_0 pinned to 0), g flattened
// row-major, c, t.
struct DeltaLp {
    const std::vector<Vec>& pts;
    int m, d;
    double gbox;
    std::vector<double> q;  // |x_i|^2

    DeltaLp(const std::vector<Vec>& points, double diam) : pts(points) {
        m = static_cast<int>(pts.size());
        d = static_cast<int>(pts[0].size());
        double maxn = 0.0;
        for (const Vec& p : pts) maxn = std::max(maxn, norm(p));
        gbox = 2.0 * maxn + 10.0 * diam;
        for (const Vec& p : pts) q.push_back(dot(p, p));
    }

    int idx_psi(int i) const { return i - 1; }  // i >= 1
    int idx_g(int i, int k) const { return (m - 1) + i * d + k; }
    int idx_c() const { return (m - 1) + m * d; }
    int idx_t() const { return idx_c() + 1; }
    int num_vars() const { return idx_t() + 1; }

    LpSolution solve(const std::vector<std::pair<int, int>>& pairs) const {
        LinearProgram lp;
        lp.num_vars = num_vars();
        lp.objective.assign(lp.num_vars, 0.0);
        lp.objective[idx_t()] = 1.0;
        lp.bounds.assign(lp.num_vars, VarBound{-kInf, kInf});
        for (int i = 0; i < m; ++i)
            for (int k = 0; k < d; ++k) lp.bounds[idx_g(i, k)] = VarBound{-gbox, gbox};
        lp.bounds[idx_t()] = VarBound{0.0, kInf};

        // psi_i + <g_i, x_j - x_i> - psi_j <= 0
        for (const auto& [i, j] : pairs) {
            Vec row(lp.num_vars, 0.0);
            if (i >= 1) row[idx_psi(i)] += 1.0;
            if (j >= 1) row[idx_psi(j)] -= 1.0;
            for (int k = 0; k < d; ++k) row[idx_g(i, k)] = pts[j][k] - pts[i][k];
            lp.le_rows.push_back(std::move(row));
            lp.le_rhs.push_back(0.0);
        }
        // c - psi_i <= q_i   and   psi_i - c - t <= -q_i
        for (int i = 0; i < m; ++i) {
            Vec lo_row(lp.num_vars, 0.0), hi_row(lp.num_vars, 0.0);
            lo_row[idx_c()] = 1.0;
            hi_row[idx_c()] = -1.0;
            hi_row[idx_t()] = -1.0;
            if (i >= 1) {
                lo_row[idx_psi(i)] = -1.0;
                hi_row[idx_psi(i)] = 1.0;
            }
            lp.le_rows.push_back(std::move(lo_row));
            lp.le_rhs.push_back(q[i]);
            lp.le_rows.push_back(std::move(hi_row));
            lp.le_rhs.push_back(-q[i]);
        }
        return solve_lp(lp);
    }

    PsiData witness_from(const LpSolution& sol) const {
        PsiData w;
        w.points = pts;
        w.values.assign(m, 0.0);
        for (int i = 1; i < m; ++i) w.values[i] = sol.x[idx_psi(i)];
        for (int i = 0; i < m; ++i) {
            Vec g(d);
            for (int k = 0; k < d; ++k) g[k] = sol.x[idx_g(i, k)];
            w.subgradients.push_back(std::move(g));
        }
        return w;
    }
};

}  // namespace

SampleGrid delta_lp_grid(const ConvexBody& body, int resolution) {
    const size_t cap = 100;
    SampleGrid grid = sample(body, resolution);
    int r = resolution;
    while (grid.points.size() > cap && r > 1) {
        --r;
        grid = sample(body, r);
    }
    return grid;
}

namespace {

DeltaLowerResult delta_lower_lp_on(const ConvexBody& body, const std::vector<Vec>& pts) {
    DeltaLowerResult out;
    const int m = static_cast<int>(pts.size());
    DeltaLp builder(pts, diameter(body));

    // initial working set. Collinear grids only ever need the consecutive
    // pairs (adjacent slope constraints imply all pairs for convex data on a
    // line); everything else starts from nearest neighbours both ways.
    std::set<std::pair<int, int>> working;
    const int d = static_cast<int>(pts[0].size());
    if (affine_rank(pts) <= 1) {
        Vec dir(pts[0].size(), 0.0);
        for (int i = 1; i < m; ++i) {
            dir = sub(pts[i], pts[0]);
            if (norm(dir) > 0.0) break;
        }
        const double nn = norm(dir);
        if (nn > 0.0) dir = scaled(dir, 1.0 / nn);
        std::vector<std::pair<double, int>> order;
        for (int i = 0; i < m; ++i) order.emplace_back(dot(sub(pts[i], pts[0]), dir), i);
        std::sort(order.begin(), order.end());
        for (int t = 0; t + 1 < m; ++t) {
            working.insert({order[t].second, order[t + 1].second});
            working.insert({order[t + 1].second, order[t].second});
        }
    } else {
        const int k_init = std::min(m - 1, std::max(4, 2 * d + 2));
        for (int i = 0; i < m; ++i) {
            std::vector<std::pair<double, int>> by_dist;
            for (int j = 0; j < m; ++j)
                if (j != i) by_dist.emplace_back(dist(pts[i], pts[j]), j);
            std::sort(by_dist.begin(), by_dist.end());
            for (int t = 0; t < k_init; ++t) {
                working.insert({i, by_dist[t].second});
                working.insert({by_dist[t].second, i});
            }
        }
    }

    const int max_rounds = 60;
    LpSolution sol;
    PsiData witness;
    for (int round = 0; round < max_rounds; ++round) {
        ++out.cutting_rounds;
        std::vector<std::pair<int, int>> pairs(working.begin(), working.end());
        sol = builder.solve(pairs);
        if (sol.status != LpStatus::optimal)
            throw LpNumericalError("delta_lower_lp: sandwich LP not optimal");
        out.lp_iterations += sol.iterations;
        witness = builder.witness_from(sol);

        // scan all ordered pairs for violated interpolability rows
        std::vector<std::tuple<double, int, int>> viol;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                if (i == j || working.count({i, j})) continue;
                const double v = witness.values[i] +
                                 dot(witness.subgradients[i], sub(pts[j], pts[i])) -
                                 witness.values[j];
                if (v > 1e-9) viol.emplace_back(v, i, j);
            }
        if (viol.empty()) break;
        std::sort(viol.rbegin(), viol.rend());
        for (const auto& [v, i, j] : viol) working.insert({i, j});
        if (round == max_rounds - 1)
            throw LpNumericalError("delta_lower_lp: cutting-plane loop did not settle");
    }

    // A vertex solution parks loosely constrained subgradient components at
    // the box (orthogonal directions, one-sided endpoint slopes). Recenter
    // each component inside its feasible interval, preferring zero; the
    // interp rows are the only place g appears, so the value is untouched
    // and the box flag afterwards reflects genuinely forced components.
    const int d_ = static_cast<int>(pts[0].size());
    for (int i = 0; i < m; ++i) {
        for (int k = 0; k < d_; ++k) {
            double lb = -kInf, ub = kInf;
            for (int j = 0; j < m; ++j) {
                if (j == i) continue;
                const Vec diff = sub(pts[j], pts[i]);
                double rest = witness.values[i] - witness.values[j];
                for (int l = 0; l < d_; ++l)
                    if (l != k) rest += witness.subgradients[i][l] * diff[l];
                // need g_ik * diff_k <= -rest
                if (diff[k] > 1e-14) {
                    ub = std::min(ub, -rest / diff[k]);
                } else if (diff[k] < -1e-14) {
                    lb = std::max(lb, -rest / diff[k]);
                }
            }
            if (lb > ub) continue;  // numerically inverted, keep the LP value
            double& g = witness.subgradients[i][k];
            g = std::clamp(0.0, lb, ub);
        }
    }

    out.value = std::max(0.0, sol.objective);
    out.witness = witness;
    for (const Vec& g : witness.subgradients)
        for (double v : g)
            if (std::abs(v) >= builder.gbox - 1e-6) out.g_box_active = true;
    return out;
}

}  // namespace

DeltaLowerResult delta_lower_lp(const ConvexBody& body, const SampleGrid& grid) {
    const std::vector<Vec>& pts = grid.points;
    if (pts.empty()) throw std::invalid_argument("delta_lower_lp: empty grid");
    if (pts.size() == 1) {
        DeltaLowerResult out;
        out.value = 0.0;
        out.witness = trivial_witness(pts[0]);
        return out;
    }
    return delta_lower_lp_on(body, pts);
}

DeltaLowerOnGrid delta_lower_auto(const ConvexBody& body, int resolution) {
    int r = resolution;
    for (;;) {
        DeltaLowerOnGrid out;
        out.grid = delta_lp_grid(body, r);
        try {
            out.result = delta_lower_lp(body, out.grid);
            return out;
        } catch (const LpNumericalError&) {
            if (r <= 2) throw;
            r /= 2;
        }
    }
}

std::pair<double, Vec> delta_upper_recenter(const ConvexBody& body) {
    validate_body(body);
    if (const auto* b = std::get_if<BallBody>(&body)) return {b->radius * b->radius, b->center};
    const std::vector<Vec> ext = extreme_points(body);
    const EnclosingBall meb = min_enclosing_ball(ext);
    double worst = 0.0;
    for (const Vec& v : ext) worst = std::max(worst, dot(sub(v, meb.center), sub(v, meb.center)));
    return {worst, meb.center};
}

namespace {

double max_affine_eval(const PsiData& w, const Vec& x) {
    double best = -kInf;
    for (size_t i = 0; i < w.points.size(); ++i)
        best = std::max(best, w.values[i] + dot(w.subgradients[i], sub(x, w.points[i])));
    return best;
}

Vec extension_subgrad(const PsiData& w, const Vec& x) {
    double best = -kInf;
    size_t arg = 0;
    for (size_t i = 0; i < w.points.size(); ++i) {
        const double v = w.values[i] + dot(w.subgradients[i], sub(x, w.points[i]));
        if (v > best) {
            best = v;
            arg = i;
        }
    }
    Vec g = scaled(x, 2.0);
    axpy(1.0, w.subgradients[arg], g);
    return g;
}

// exact minimum of |x|^2 + max-affine over a segment: piecewise quadratic
double extension_min_on_segment(const Segment& seg, const PsiData& w) {
    const Vec delta = sub(seg.b, seg.a);
    const double c2 = dot(delta, delta);
    auto F = [&](double t) {
        Vec x = seg.a;
        axpy(t, delta, x);
        return dot(x, x) + max_affine_eval(w, x);
    };
    if (c2 == 0.0) return F(0.0);
    // each affine piece i restricted to the chord: slope and intercept in t
    const size_t n = w.points.size();
    std::vector<double> slope(n), icept(n);
    const double base_lin = 2.0 * dot(seg.a, delta);
    for (size_t i = 0; i < n; ++i) {
        slope[i] = dot(w.subgradients[i], delta);
        icept[i] = w.values[i] + dot(w.subgradients[i], sub(seg.a, w.points[i]));
    }
    std::vector<double> cands = {0.0, 1.0};
    for (size_t i = 0; i < n; ++i) {
        // stationary point of c2 t^2 + (base_lin + slope_i) t + const
        const double t = -(base_lin + slope[i]) / (2.0 * c2);
        if (t > 0.0 && t < 1.0) cands.push_back(t);
        for (size_t j = i + 1; j < n; ++j) {
            const double dg = slope[i] - slope[j];
            if (std::abs(dg) < 1e-300) continue;
            const double tt = (icept[j] - icept[i]) / dg;
            if (tt > 0.0 && tt < 1.0) cands.push_back(tt);
        }
    }
    double best = kInf;
    for (double t : cands) best = std::min(best, F(t));
    return best;
}

}  // namespace

std::pair<double, double> delta_upper_extension(const ConvexBody& body, const PsiData& witness,
                                                double tol) {
    validate_body(body);
    if (std::holds_alternative<BallBody>(body))
        throw std::invalid_argument("delta_upper_extension: body must be Segment or Polytope");
    if (witness.points.empty() || !witness.interpolable(1e-6))
        throw std::invalid_argument("delta_upper_extension: witness not interpolable");
    if (is_singleton(body)) return {0.0, 0.0};

    const std::vector<Vec> ext = extreme_points(body);
    double sup = -kInf;
    for (const Vec& v : ext) sup = std::max(sup, dot(v, v) + max_affine_eval(witness, v));

    if (const auto* s = std::get_if<Segment>(&body)) {
        const double inf_exact = extension_min_on_segment(*s, witness);
        return {sup - inf_exact, 0.0};
    }
    ConvexObjective f;
    f.value = [&witness](const Vec& x) { return dot(x, x) + max_affine_eval(witness, x); };
    f.subgrad = [&witness](const Vec& x) { return extension_subgrad(witness, x); };
    const ConvexMinResult mn = minimize_convex(f, body, tol);
    return {sup - (mn.value - mn.slack), mn.slack};
}

DeltaBounds delta_bounds(const ConvexBody& body, int resolution) {
    validate_body(body);
    if (resolution < 1) throw std::invalid_argument("delta_bounds: resolution must be >= 1");
    DeltaBounds out;
    out.resolution = resolution;

    if (is_singleton(body)) {
        const Vec p = std::holds_alternative<Segment>(body)  ? std::get<Segment>(body).a
                      : std::holds_alternative<BallBody>(body) ? std::get<BallBody>(body).center
                                                               : std::get<Polytope>(body).vertices[0];
        out.lower_witness = trivial_witness(p);
        out.upper_kind = UpperWitnessKind::trivial;
        out.recenter_center = p;
        return out;
    }

    if (const auto* s = std::get_if<Segment>(&body)) {
        const double exact = delta_segment_exact(*s);
        out.lower = out.upper = exact;
        out.upper_kind = UpperWitnessKind::exact_segment;
        out.recenter_center = scaled(add(s->a, s->b), 0.5);
        // optimal witness: psi affine along the chord, |x|^2 + psi = c(t^2-t)+K
        const int res_e = resolution + (resolution % 2);
        const SampleGrid grid = sample(body, res_e);
        const Vec delta = sub(s->b, s->a);
        const double c = dot(delta, delta);
        const double mu = -(c + 2.0 * dot(s->a, delta)) / c;
        PsiData w;
        w.points = grid.points;
        for (const Vec& x : grid.points) {
            w.values.push_back(mu * dot(delta, sub(x, s->a)));
            w.subgradients.push_back(scaled(delta, mu));
        }
        out.lower_witness = w;
        out.slack.analytic_floor = exact;
        out.slack.recenter_upper = exact;
        return out;
    }

    const double floor = 0.25 * diameter(body) * diameter(body);
    out.slack.analytic_floor = floor;

    if (const auto* b = std::get_if<BallBody>(&body)) {
        // inscribed polygon for the LP; the analytic floor already pinches
        // the bracket at r^2 so a coarse polygon suffices
        (void)b;
        const SampleGrid ring = [&] {
            SampleGrid g;
            g.body = body;
            const int n = 16;
            g.covering_radius = 0.0;
            if (body_dim(body) == 2) {
                for (int t = 0; t < n; ++t) {
                    const double ang = 6.283185307179586 * t / n;
                    g.points.push_back({b->center[0] + b->radius * std::cos(ang),
                                        b->center[1] + b->radius * std::sin(ang)});
                }
                g.points.push_back(b->center);
            } else {
                const SampleGrid full = sample(body, 4);
                g = full;
            }
            return g;
        }();
        const DeltaLowerResult lo = delta_lower_lp(body, ring);
        out.slack.lp_lower = lo.value;
        out.slack.g_box_active = lo.g_box_active;
        out.lower_witness = lo.witness;
        out.lower = std::max(lo.value, floor);
        const auto [rec, center] = delta_upper_recenter(body);
        out.slack.recenter_upper = rec;
        out.upper = rec;
        out.upper_kind = UpperWitnessKind::recenter;
        out.recenter_center = center;
        return out;
    }

    const DeltaLowerResult lo = delta_lower_auto(body, resolution).result;
    out.slack.lp_lower = lo.value;
    out.slack.g_box_active = lo.g_box_active;
    out.lower_witness = lo.witness;
    out.lower = std::max(lo.value, floor);

    const auto [rec, center] = delta_upper_recenter(body);
    out.slack.recenter_upper = rec;
    double ext_up = kInf, ext_slack = 0.0;
    try {
        std::tie(ext_up, ext_slack) = delta_upper_extension(body, lo.witness, 1e-7);
    } catch (const LpNumericalError&) {
        // the recenter bound alone stays valid when the inner model LP breaks
    }
    out.slack.extension_upper = ext_up;
    out.slack.extension_slack = ext_slack;
    if (ext_up < rec) {
        out.upper = ext_up;
        out.upper_kind = UpperWitnessKind::extension;
        out.extension_witness = lo.witness;
        out.recenter_center = center;
    } else {
        out.upper = rec;
        out.upper_kind = UpperWitnessKind::recenter;
        out.recenter_center = center;
    }
    return out;
}

}  // namespace zerocert
