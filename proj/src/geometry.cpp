#include "zerocert/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "zerocert/lp.hpp"

namespace zerocert {

namespace {

const Vec& first_point(const ConvexBody& body) {
    if (const auto* s = std::get_if<Segment>(&body)) return s->a;
    if (const auto* p = std::get_if<Polytope>(&body)) {
        if (p->vertices.empty()) throw std::invalid_argument("polytope: empty vertex list");
        return p->vertices.front();
    }
    return std::get<BallBody>(body).center;
}

std::vector<Vec> dedupe_points(const std::vector<Vec>& pts, double tol) {
    std::vector<Vec> out;
    for (const Vec& p : pts) {
        bool seen = false;
        for (const Vec& q : out)
            if (dist(p, q) <= tol) {
                seen = true;
                break;
            }
        if (!seen) out.push_back(p);
    }
    return out;
}

double scale_of(const std::vector<Vec>& pts) {
    double s = 1.0;
    for (const Vec& p : pts)
        for (double v : p) s = std::max(s, std::abs(v));
    return s;
}

// Smallest distance-to-hull value: min over convex weights of the l-inf
// residual of sum(lambda_j v_j) = p.
double polytope_linf_residual(const std::vector<Vec>& verts, const Vec& p) {
    const int k = static_cast<int>(verts.size());
    const int d = static_cast<int>(p.size());
    LinearProgram lp;
    lp.num_vars = k + 1;  // lambda, z
    lp.objective.assign(k + 1, 0.0);
    lp.objective[k] = 1.0;
    lp.bounds.assign(k + 1, VarBound{0.0, kInf});
    Vec sum_row(k + 1, 1.0);
    sum_row[k] = 0.0;
    lp.eq_rows.push_back(sum_row);
    lp.eq_rhs.push_back(1.0);
    for (int i = 0; i < d; ++i) {
        Vec row_pos(k + 1, 0.0), row_neg(k + 1, 0.0);
        for (int j = 0; j < k; ++j) {
            row_pos[j] = verts[j][i];
            row_neg[j] = -verts[j][i];
        }
        row_pos[k] = -1.0;
        row_neg[k] = -1.0;
        lp.le_rows.push_back(row_pos);
        lp.le_rhs.push_back(p[i]);
        lp.le_rows.push_back(row_neg);
        lp.le_rhs.push_back(-p[i]);
    }
    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::optimal)
        throw std::runtime_error("polytope membership LP did not solve");
    return sol.objective;
}

double point_segment_distance(const Vec& p, const Vec& a, const Vec& b) {
    const Vec d = sub(b, a);
    const double dd = dot(d, d);
    double t = 0.0;
    if (dd > 0.0) t = std::clamp(dot(sub(p, a), d) / dd, 0.0, 1.0);
    Vec q = a;
    axpy(t, d, q);
    return dist(p, q);
}

Vec combo3(const Vec& a, const Vec& b, const Vec& c, double wa, double wb, double wc) {
    const size_t d = a.size();
    Vec out(d);
    for (size_t i = 0; i < d; ++i) out[i] = wa * a[i] + wb * b[i] + wc * c[i] + 0.0;
    return out;
}

void append_unique(std::vector<Vec>& pts, Vec p) {
    for (double& v : p) v += 0.0;  // normalize -0
    for (const Vec& q : pts)
        if (q == p) return;
    pts.push_back(std::move(p));
}

// Orthonormal basis of span(pts - pts[0]) via modified Gram-Schmidt.
std::vector<Vec> span_basis(const std::vector<Vec>& pts, double tol) {
    std::vector<Vec> basis;
    if (pts.empty()) return basis;
    const double s = scale_of(pts);
    for (size_t i = 1; i < pts.size(); ++i) {
        Vec w = sub(pts[i], pts[0]);
        for (const Vec& b : basis) axpy(-dot(w, b), b, w);
        const double n = norm(w);
        if (n > tol * s) basis.push_back(scaled(w, 1.0 / n));
    }
    return basis;
}

double tri_circumradius(const Vec& a, const Vec& b, const Vec& c) {
    const double la = dist(b, c), lb = dist(a, c), lc = dist(a, b);
    const double s = 0.5 * (la + lb + lc);
    const double area2 = std::max(0.0, s * (s - la) * (s - lb) * (s - lc));
    const double area = std::sqrt(area2);
    if (area <= 1e-14 * s * s) return -1.0;  // degenerate, caller skips
    return la * lb * lc / (4.0 * area);
}

SampleGrid sample_segment_points(const ConvexBody& body, const Vec& a, const Vec& b, int resolution) {
    SampleGrid grid;
    grid.body = body;
    const double len = dist(a, b);
    if (len == 0.0) {
        grid.points.push_back(a);
        grid.covering_radius = 0.0;
        return grid;
    }
    for (int i = 0; i <= resolution; ++i) {
        const double t = static_cast<double>(i) / resolution;
        Vec p(a.size());
        for (size_t k = 0; k < a.size(); ++k) p[k] = (1.0 - t) * a[k] + t * b[k];
        grid.points.push_back(std::move(p));
    }
    grid.covering_radius = len / (2.0 * resolution);
    return grid;
}

SampleGrid sample_polytope(const ConvexBody& body, const Polytope& poly, int resolution) {
    SampleGrid grid;
    grid.body = body;
    const std::vector<Vec> verts = dedupe_points(poly.vertices, 1e-12 * scale_of(poly.vertices));
    if (verts.size() == 1) {
        grid.points.push_back(verts[0]);
        grid.covering_radius = 0.0;
        return grid;
    }
    const std::vector<Vec> basis = span_basis(verts, 1e-12);
    const int rank = static_cast<int>(basis.size());

    if (rank == 1) {
        // collinear vertex list: sample the extreme segment
        double tmin = 0.0, tmax = 0.0;
        size_t imin = 0, imax = 0;
        for (size_t i = 0; i < verts.size(); ++i) {
            const double t = dot(sub(verts[i], verts[0]), basis[0]);
            if (t < tmin) {
                tmin = t;
                imin = i;
            }
            if (t > tmax) {
                tmax = t;
                imax = i;
            }
        }
        return sample_segment_points(body, verts[imin], verts[imax], resolution);
    }

    if (rank == 2) {
        // fan triangulation of the extreme points in boundary order
        std::vector<Vec> ext = extreme_points(Polytope{verts});
        Vec centroid(ext[0].size(), 0.0);
        for (const Vec& v : ext) axpy(1.0 / ext.size(), v, centroid);
        std::vector<std::pair<double, size_t>> order;
        for (size_t i = 0; i < ext.size(); ++i) {
            const Vec w = sub(ext[i], centroid);
            order.emplace_back(std::atan2(dot(w, basis[1]), dot(w, basis[0])), i);
        }
        std::sort(order.begin(), order.end());
        std::vector<Vec> ring;
        for (auto& [ang, idx] : order) ring.push_back(ext[idx]);

        double worst_circum = 0.0;
        for (size_t i = 1; i + 1 < ring.size(); ++i) {
            const double rc = tri_circumradius(ring[0], ring[i], ring[i + 1]);
            if (rc < 0.0) continue;  // zero-area simplex, skipped
            worst_circum = std::max(worst_circum, rc);
            for (int p = 0; p <= resolution; ++p)
                for (int q = 0; p + q <= resolution; ++q) {
                    const int r = resolution - p - q;
                    append_unique(grid.points,
                                  combo3(ring[0], ring[i], ring[i + 1],
                                         static_cast<double>(p) / resolution,
                                         static_cast<double>(q) / resolution,
                                         static_cast<double>(r) / resolution));
                }
        }
        grid.covering_radius = worst_circum / resolution;
        return grid;
    }

    // general rank: composition lattice over all unique vertices
    const int k = static_cast<int>(verts.size());
    int res_eff = resolution;
    auto lattice_count = [&](int r) {
        double c = 1.0;
        for (int i = 1; i < k; ++i) c *= static_cast<double>(r + i) / i;
        return c;
    };
    while (res_eff > 1 && lattice_count(res_eff) > 60000.0) --res_eff;

    Vec centroid(verts[0].size(), 0.0);
    for (const Vec& v : verts) axpy(1.0 / k, v, centroid);
    double sum_dist = 0.0;
    for (const Vec& v : verts) sum_dist += dist(v, centroid);

    std::vector<int> comp(k, 0);
    comp[0] = res_eff;
    for (;;) {
        Vec p(verts[0].size(), 0.0);
        for (int j = 0; j < k; ++j)
            if (comp[j] > 0) axpy(static_cast<double>(comp[j]) / res_eff, verts[j], p);
        append_unique(grid.points, std::move(p));
        // next composition of res_eff into k parts
        int i = k - 2;
        while (i >= 0 && comp[i] == 0) --i;
        if (i < 0) break;
        --comp[i];
        int tail = comp[k - 1] + 1;
        comp[k - 1] = 0;
        comp[i + 1] = tail;
        if (i + 1 == k - 1) comp[k - 1] = tail;
    }
    grid.covering_radius = sum_dist / res_eff;
    return grid;
}

SampleGrid sample_ball(const ConvexBody& body, const BallBody& ball, int resolution) {
    SampleGrid grid;
    grid.body = body;
    const int d = static_cast<int>(ball.center.size());
    if (ball.radius == 0.0) {
        grid.points.push_back(ball.center);
        grid.covering_radius = 0.0;
        return grid;
    }
    if (d == 2) {
        const double h = ball.radius / resolution;
        grid.points.push_back(ball.center);
        for (int j = 1; j <= resolution; ++j) {
            const double rho = ball.radius * (static_cast<double>(j) / resolution);
            const int nj = static_cast<int>(std::ceil(6.283185307179586 * j));
            for (int t = 0; t < nj; ++t) {
                const double ang = 6.283185307179586 * t / nj;
                grid.points.push_back(
                    {ball.center[0] + rho * std::cos(ang), ball.center[1] + rho * std::sin(ang)});
            }
        }
        grid.covering_radius = h * std::sqrt(0.625);
        return grid;
    }
    // d >= 3: cube lattice clipped to the ball plus radial projections of the
    // just-outside layer
    int res_eff = resolution;
    while (res_eff > 1 && std::pow(res_eff + 1.0, d) > 1e5) --res_eff;
    const double g = 2.0 * ball.radius / res_eff;
    const int half = (res_eff + 1) / 2;
    const double shell = g * std::sqrt(static_cast<double>(d));
    std::vector<int> z(d, -half);
    for (;;) {
        Vec p = ball.center;
        for (int i = 0; i < d; ++i) p[i] += g * z[i];
        const double r = dist(p, ball.center);
        if (r <= ball.radius) {
            grid.points.push_back(p);
        } else if (r <= ball.radius + shell) {
            Vec q = ball.center;
            axpy(ball.radius / r, sub(p, ball.center), q);
            grid.points.push_back(q);
        }
        int i = 0;
        while (i < d && z[i] == half) z[i++] = -half;
        if (i == d) break;
        ++z[i];
    }
    grid.covering_radius = shell;
    return grid;
}

}  // namespace

int body_dim(const ConvexBody& body) { return static_cast<int>(first_point(body).size()); }

void validate_body(const ConvexBody& body) {
    const int d = body_dim(body);
    if (d < 2) throw std::invalid_argument("body: dimension must be >= 2");
    auto check = [&](const Vec& v) {
        if (static_cast<int>(v.size()) != d) throw std::invalid_argument("body: dimension mismatch");
        if (!all_finite(v)) throw std::invalid_argument("body: non-finite coordinate");
    };
    if (const auto* s = std::get_if<Segment>(&body)) {
        check(s->a);
        check(s->b);
    } else if (const auto* p = std::get_if<Polytope>(&body)) {
        if (p->vertices.empty()) throw std::invalid_argument("polytope: empty vertex list");
        for (const Vec& v : p->vertices) check(v);
    } else {
        const auto& b = std::get<BallBody>(body);
        check(b.center);
        if (!(b.radius >= 0.0) || !std::isfinite(b.radius))
            throw std::invalid_argument("ball: radius must be a nonnegative real");
    }
}

bool is_singleton(const ConvexBody& body) {
    if (const auto* s = std::get_if<Segment>(&body)) return s->a == s->b;
    if (const auto* p = std::get_if<Polytope>(&body))
        return dedupe_points(p->vertices, 1e-12 * scale_of(p->vertices)).size() == 1;
    return std::get<BallBody>(body).radius == 0.0;
}

double diameter(const ConvexBody& body) {
    validate_body(body);
    if (const auto* s = std::get_if<Segment>(&body)) return dist(s->a, s->b);
    if (const auto* p = std::get_if<Polytope>(&body)) {
        double best = 0.0;
        for (size_t i = 0; i < p->vertices.size(); ++i)
            for (size_t j = i + 1; j < p->vertices.size(); ++j)
                best = std::max(best, dist(p->vertices[i], p->vertices[j]));
        return best;
    }
    return 2.0 * std::get<BallBody>(body).radius;
}

SampleGrid sample(const ConvexBody& body, int resolution) {
    validate_body(body);
    if (resolution < 1) throw std::invalid_argument("sample: resolution must be >= 1");
    if (const auto* s = std::get_if<Segment>(&body)) return sample_segment_points(body, s->a, s->b, resolution);
    if (const auto* p = std::get_if<Polytope>(&body)) return sample_polytope(body, *p, resolution);
    return sample_ball(body, std::get<BallBody>(body), resolution);
}

std::vector<Vec> extreme_points(const ConvexBody& body) {
    validate_body(body);
    if (std::holds_alternative<BallBody>(body))
        throw std::invalid_argument("extreme_points: unsupported variant Ball (infinitely many)");
    if (const auto* s = std::get_if<Segment>(&body)) {
        if (s->a == s->b) return {s->a};
        return {s->a, s->b};
    }
    const auto& poly = std::get<Polytope>(body);
    const double s = scale_of(poly.vertices);
    const std::vector<Vec> verts = dedupe_points(poly.vertices, 1e-12 * s);
    if (verts.size() == 1) return verts;
    std::vector<Vec> out;
    for (size_t i = 0; i < verts.size(); ++i) {
        std::vector<Vec> others;
        for (size_t j = 0; j < verts.size(); ++j)
            if (j != i) others.push_back(verts[j]);
        if (polytope_linf_residual(others, verts[i]) > 1e-9 * s) out.push_back(verts[i]);
    }
    return out;
}

bool contains(const ConvexBody& body, const Vec& p, double tol) {
    validate_body(body);
    if (static_cast<int>(p.size()) != body_dim(body))
        throw std::invalid_argument("contains: dimension mismatch");
    if (const auto* s = std::get_if<Segment>(&body)) return point_segment_distance(p, s->a, s->b) <= tol;
    if (const auto* b = std::get_if<BallBody>(&body)) return dist(p, b->center) <= b->radius + tol;
    return polytope_linf_residual(std::get<Polytope>(body).vertices, p) <= tol;
}

int affine_rank(const std::vector<Vec>& pts, double tol) {
    return static_cast<int>(span_basis(pts, tol).size());
}

}  // namespace zerocert
