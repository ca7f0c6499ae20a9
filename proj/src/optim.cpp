#include "zerocert/optim.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace zerocert {

void Tolerances::set(const std::string& name, double value) {
    if (!(value > 0.0)) throw std::invalid_argument("tolerance '" + name + "' must be positive");
    if (name == "lp_feasibility")
        lp_feasibility = value;
    else if (name == "fw_gap")
        fw_gap = value;
    else if (name == "convexmin_slack")
        convexmin_slack = value;
    else if (name == "membership")
        membership = value;
    else if (name == "contains")
        contains = value;
    else if (name == "fd_step")
        fd_step = value;
    else if (name == "interpolability")
        interpolability = value;
    else
        throw std::invalid_argument("unknown tolerance '" + name + "'");
}

double Tolerances::get(const std::string& name) const {
    if (name == "lp_feasibility") return lp_feasibility;
    if (name == "fw_gap") return fw_gap;
    if (name == "convexmin_slack") return convexmin_slack;
    if (name == "membership") return membership;
    if (name == "contains") return contains;
    if (name == "fd_step") return fd_step;
    if (name == "interpolability") return interpolability;
    throw std::invalid_argument("unknown tolerance '" + name + "'");
}

MinNormResult min_norm_point(const std::vector<Vec>& points, double tol) {
    if (points.empty()) throw std::invalid_argument("min_norm_point: empty point list");
    if (!(tol > 0.0)) throw std::invalid_argument("min_norm_point: tol must be positive");
    const int m = static_cast<int>(points.size());
    const size_t d = points[0].size();
    for (const Vec& p : points)
        if (p.size() != d) throw std::invalid_argument("min_norm_point: dimension mismatch");

    MinNormResult out;
    out.weights.assign(m, 0.0);
    out.weights[0] = 1.0;
    if (m == 1) {
        out.point = points[0];
        out.norm = norm(points[0]);
        out.dual_gap = 0.0;
        return out;
    }

    Vec& lambda = out.weights;
    auto combine = [&](Vec& p) {
        p.assign(d, 0.0);
        for (int i = 0; i < m; ++i)
            if (lambda[i] != 0.0) axpy(lambda[i], points[i], p);
    };
    Vec p;
    combine(p);
    const double gap_target = tol * tol;
    const int cap = 200000;
    int it = 0;
    for (; it < cap; ++it) {
        const double pp = dot(p, p);
        int i_fw = 0, i_aw = -1;
        double ip_min = kInf, ip_max = -kInf;
        for (int i = 0; i < m; ++i) {
            const double ip = dot(p, points[i]);
            if (ip < ip_min) {
                ip_min = ip;
                i_fw = i;
            }
            if (lambda[i] > 0.0 && ip > ip_max) {
                ip_max = ip;
                i_aw = i;
            }
        }
        const double gap_fw = 2.0 * (pp - ip_min);
        if (gap_fw <= gap_target) break;
        const double gap_aw = i_aw >= 0 ? 2.0 * (ip_max - pp) : 0.0;

        if (gap_fw >= gap_aw) {
            const Vec dvec = sub(points[i_fw], p);
            const double dd = dot(dvec, dvec);
            if (dd <= 0.0) break;
            const double gamma = std::clamp((pp - ip_min) / dd, 0.0, 1.0);
            for (int i = 0; i < m; ++i) lambda[i] *= (1.0 - gamma);
            lambda[i_fw] += gamma;
        } else {
            const Vec dvec = sub(p, points[i_aw]);
            const double dd = dot(dvec, dvec);
            if (dd <= 0.0) break;
            const double gamma_max = lambda[i_aw] >= 1.0 ? kInf : lambda[i_aw] / (1.0 - lambda[i_aw]);
            const double gamma = std::clamp((ip_max - pp) / dd, 0.0, gamma_max);
            // p <- (1+gamma) p - gamma s_aw
            for (int i = 0; i < m; ++i) lambda[i] *= (1.0 + gamma);
            lambda[i_aw] = std::max(0.0, lambda[i_aw] - gamma);
        }
        // renormalize to the simplex
        double s = 0.0;
        for (int i = 0; i < m; ++i) {
            if (lambda[i] < 0.0) lambda[i] = 0.0;
            s += lambda[i];
        }
        for (int i = 0; i < m; ++i) lambda[i] /= s;
        combine(p);
    }
    combine(p);
    out.point = p;
    out.norm = norm(p);
    {
        double ip_min = kInf;
        for (int i = 0; i < m; ++i) ip_min = std::min(ip_min, dot(p, points[i]));
        out.dual_gap = std::max(0.0, 2.0 * (dot(p, p) - ip_min));
    }
    return out;
}

namespace {

// circumsphere of an affinely independent support set (<= d+1 points)
EnclosingBall ball_from_support(const std::vector<Vec>& support) {
    EnclosingBall b;
    if (support.empty()) {
        b.radius = -1.0;  // empty ball contains nothing
        return b;
    }
    const int k = static_cast<int>(support.size()) - 1;
    if (k == 0) {
        b.center = support[0];
        b.radius = 0.0;
        return b;
    }
    // center = p0 + sum alpha_i q_i,  q_i = p_i - p0, from the Gram system
    // 2 <q_j, sum alpha_i q_i> = |q_j|^2
    std::vector<Vec> q;
    for (int i = 1; i <= k; ++i) q.push_back(sub(support[i], support[0]));
    std::vector<std::vector<double>> a(k, std::vector<double>(k + 1, 0.0));
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) a[i][j] = 2.0 * dot(q[i], q[j]);
        a[i][k] = dot(q[i], q[i]);
    }
    // gaussian elimination with partial pivoting
    for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int r = col + 1; r < k; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-14) {
            b.radius = -1.0;  // degenerate support
            return b;
        }
        std::swap(a[col], a[piv]);
        for (int r = 0; r < k; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (int c = col; c <= k; ++c) a[r][c] -= f * a[col][c];
        }
    }
    b.center = support[0];
    for (int i = 0; i < k; ++i) axpy(a[i][k] / a[i][i], q[i], b.center);
    b.radius = 0.0;
    for (const Vec& p : support) b.radius = std::max(b.radius, dist(b.center, p));
    return b;
}

EnclosingBall welzl(std::vector<Vec>& pts, size_t n, std::vector<Vec>& support, size_t max_support) {
    if (n == 0 || support.size() == max_support) return ball_from_support(support);
    EnclosingBall b = welzl(pts, n - 1, support, max_support);
    const Vec& p = pts[n - 1];
    if (b.radius >= 0.0 && dist(p, b.center) <= b.radius * (1.0 + 1e-12) + 1e-14) return b;
    support.push_back(p);
    EnclosingBall nb = welzl(pts, n - 1, support, max_support);
    support.pop_back();
    if (nb.radius < 0.0) return b;  // degenerate fallback keeps the previous ball
    // move-to-front
    for (size_t i = n - 1; i > 0; --i) std::swap(pts[i], pts[i - 1]);
    return nb;
}

}  // namespace

EnclosingBall min_enclosing_ball(const std::vector<Vec>& points) {
    if (points.empty()) throw std::invalid_argument("min_enclosing_ball: empty point list");
    const size_t d = points[0].size();
    std::vector<Vec> pts = points;
    // deterministic shuffle for the expected-linear behaviour
    Rng rng(0xba115eedULL);
    for (size_t i = pts.size(); i > 1; --i) std::swap(pts[i - 1], pts[rng.next_u64() % i]);
    std::vector<Vec> support;
    EnclosingBall b = welzl(pts, pts.size(), support, d + 1);
    // validate and, if roundoff left a point outside, inflate minimally
    double worst = b.radius;
    for (const Vec& p : points) worst = std::max(worst, dist(p, b.center));
    b.radius = worst;
    return b;
}

namespace {

// exact minimum of max_i (f_i + g_i (t - t_i)) over [0, 1]
double max_affine_min_1d(const std::vector<double>& ts, const std::vector<double>& fs,
                         const std::vector<double>& gs) {
    const size_t n = ts.size();
    std::vector<double> cands = {0.0, 1.0};
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            const double dg = gs[i] - gs[j];
            if (std::abs(dg) < 1e-300) continue;
            const double bi = fs[i] - gs[i] * ts[i];
            const double bj = fs[j] - gs[j] * ts[j];
            const double t = (bj - bi) / dg;
            if (t > 0.0 && t < 1.0) cands.push_back(t);
        }
    double best = kInf;
    for (double t : cands) {
        double v = -kInf;
        for (size_t i = 0; i < n; ++i) v = std::max(v, fs[i] + gs[i] * (t - ts[i]));
        best = std::min(best, v);
    }
    return best;
}

ConvexMinResult minimize_on_segment(const ConvexObjective& f, const Segment& seg, double tol) {
    const Vec delta = sub(seg.b, seg.a);
    auto at = [&](double t) {
        Vec x = seg.a;
        axpy(t, delta, x);
        return x;
    };
    std::vector<double> ts, fs, gs;
    auto probe = [&](double t) {
        const Vec x = at(t);
        const double v = f.value(x);
        ts.push_back(t);
        fs.push_back(v);
        gs.push_back(dot(f.subgrad(x), delta));
        return v;
    };

    ConvexMinResult out;
    if (norm(delta) == 0.0) {
        out.argmin = seg.a;
        out.value = f.value(seg.a);
        out.slack = 0.0;
        return out;
    }

    const double phi = 0.6180339887498949;
    double lo = 0.0, hi = 1.0;
    double t1 = hi - phi * (hi - lo), t2 = lo + phi * (hi - lo);
    double f1 = probe(t1), f2 = probe(t2);
    probe(0.0);
    probe(1.0);
    int it = 0;
    while (hi - lo > 1e-13 && it < 200) {
        if (f1 <= f2) {
            hi = t2;
            t2 = t1;
            f2 = f1;
            t1 = hi - phi * (hi - lo);
            f1 = probe(t1);
        } else {
            lo = t1;
            t1 = t2;
            f1 = f2;
            t2 = lo + phi * (hi - lo);
            f2 = probe(t2);
        }
        ++it;
    }
    size_t best = 0;
    for (size_t i = 1; i < ts.size(); ++i)
        if (fs[i] < fs[best]) best = i;
    out.argmin = at(ts[best]);
    out.value = fs[best];
    out.iterations = it;
    const double lower = max_affine_min_1d(ts, fs, gs);
    out.slack = std::max(0.0, out.value - lower);
    (void)tol;
    return out;
}

ConvexMinResult minimize_on_polytope(const ConvexObjective& f, const std::vector<Vec>& verts,
                                     double tol) {
    const int k = static_cast<int>(verts.size());
    const int d = static_cast<int>(verts[0].size());
    // Kelley cutting planes; model minimized over conv(verts) by LP
    std::vector<Vec> cut_points;
    std::vector<double> cut_values;
    std::vector<Vec> cut_grads;

    Vec x(d, 0.0);
    for (const Vec& v : verts) axpy(1.0 / k, v, x);

    ConvexMinResult out;
    out.value = kInf;
    double model_min = -kInf;
    const int cap = 120;
    int it = 0;
    for (; it < cap; ++it) {
        const double fx = f.value(x);
        if (fx < out.value) {
            out.value = fx;
            out.argmin = x;
        }
        cut_points.push_back(x);
        cut_values.push_back(fx);
        cut_grads.push_back(f.subgrad(x));
        if (out.value - model_min <= tol && it > 0) break;

        LinearProgram lp;
        lp.num_vars = k + 1;  // mu, z
        lp.objective.assign(k + 1, 0.0);
        lp.objective[k] = 1.0;
        lp.bounds.assign(k + 1, VarBound{0.0, kInf});
        lp.bounds[k] = VarBound{-kInf, kInf};
        Vec sum_row(k + 1, 1.0);
        sum_row[k] = 0.0;
        lp.eq_rows.push_back(sum_row);
        lp.eq_rhs.push_back(1.0);
        for (size_t c = 0; c < cut_points.size(); ++c) {
            // f_c + <g_c, V mu - x_c> <= z
            Vec row(k + 1, 0.0);
            for (int j = 0; j < k; ++j) row[j] = dot(cut_grads[c], verts[j]);
            row[k] = -1.0;
            lp.le_rows.push_back(row);
            lp.le_rhs.push_back(dot(cut_grads[c], cut_points[c]) - cut_values[c]);
        }
        const LpSolution sol = solve_lp(lp);
        if (sol.status != LpStatus::optimal)
            throw LpNumericalError("minimize_convex: model LP failed");
        model_min = sol.objective;
        Vec xn(d, 0.0);
        for (int j = 0; j < k; ++j)
            if (sol.x[j] != 0.0) axpy(sol.x[j], verts[j], xn);
        x = xn;
    }
    out.iterations = it;
    out.slack = std::max(0.0, out.value - model_min);
    return out;
}

ConvexMinResult minimize_on_ball(const ConvexObjective& f, const BallBody& ball, double tol) {
    Vec x = ball.center;
    ConvexMinResult out;
    out.value = f.value(x);
    out.argmin = x;
    double best_gap = kInf;
    const int cap = 2000;
    int it = 0;
    for (; it < cap; ++it) {
        const Vec g = f.subgrad(x);
        const double gn = norm(g);
        // linear-minimization gap over the ball certifies the slack
        const double gap = dot(g, sub(x, ball.center)) + ball.radius * gn;
        if (f.value(x) <= out.value) {
            out.value = f.value(x);
            out.argmin = x;
            best_gap = std::min(best_gap, gap);
        }
        if (gap <= tol) {
            best_gap = gap;
            break;
        }
        if (gn == 0.0) {
            best_gap = 0.0;
            break;
        }
        const double step = ball.radius / (gn * std::sqrt(static_cast<double>(it + 1)));
        Vec xn = x;
        axpy(-step, g, xn);
        const double r = dist(xn, ball.center);
        if (r > ball.radius) {
            Vec dir = sub(xn, ball.center);
            xn = ball.center;
            axpy(ball.radius / r, dir, xn);
        }
        x = xn;
    }
    out.iterations = it;
    out.slack = std::max(0.0, std::min(best_gap, kInf));
    return out;
}

}  // namespace

ConvexMinResult minimize_convex(const ConvexObjective& f, const ConvexBody& body, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("minimize_convex: tol must be positive");
    validate_body(body);
    if (const auto* s = std::get_if<Segment>(&body)) return minimize_on_segment(f, *s, tol);
    if (const auto* p = std::get_if<Polytope>(&body)) {
        const std::vector<Vec> ext = extreme_points(body);
        if (ext.size() == 1) {
            ConvexMinResult out;
            out.argmin = ext[0];
            out.value = f.value(ext[0]);
            return out;
        }
        (void)p;
        return minimize_on_polytope(f, ext, tol);
    }
    return minimize_on_ball(f, std::get<BallBody>(body), tol);
}

}  // namespace zerocert
