#include "zerocert/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace zerocert {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

double get_double(const ParamMap& p, const std::string& key) {
    auto it = p.find(key);
    if (it == p.end()) throw std::invalid_argument("operator params: missing '" + key + "'");
    if (const double* v = std::get_if<double>(&it->second)) return *v;
    throw std::invalid_argument("operator params: '" + key + "' must be a scalar");
}

Vec get_vec(const ParamMap& p, const std::string& key) {
    auto it = p.find(key);
    if (it == p.end()) throw std::invalid_argument("operator params: missing '" + key + "'");
    if (const Vec* v = std::get_if<Vec>(&it->second)) return *v;
    throw std::invalid_argument("operator params: '" + key + "' must be a vector");
}

Matrix get_mat(const ParamMap& p, const std::string& key) {
    auto it = p.find(key);
    if (it == p.end()) throw std::invalid_argument("operator params: missing '" + key + "'");
    if (const Matrix* v = std::get_if<Matrix>(&it->second)) return *v;
    throw std::invalid_argument("operator params: '" + key + "' must be a matrix");
}

double h_example11(double x) { return kPi * std::sin(kTwoPi * x * x); }
double h_example11_deriv(double x) { return 4.0 * kPi * kPi * x * std::cos(kTwoPi * x * x); }

OperatorHandle make_affine(const Matrix& a, const Vec& b, const std::string& name, ParamMap params) {
    OperatorHandle op;
    op.name = name;
    op.params = std::move(params);
    op.dim = a.rows;
    op.known_grad_lipschitz = 0.0;
    op.eval_fn = [a, b](const Vec& x) { return add(mat_vec(a, x), b); };
    op.jac_fn = [a](const Vec&) { return a; };
    return op;
}

}  // namespace

OperatorHandle make_catalog_operator(const std::string& name, const ParamMap& params) {
    if (name == "example11") {
        OperatorHandle op;
        op.name = name;
        op.dim = 2;
        op.known_grad_lipschitz = std::nullopt;  // derivative is not Lipschitz on R^2
        op.derivative_lipschitz = false;
        op.eval_fn = [](const Vec& x) {
            const double h = h_example11(x[0]);
            return Vec{std::sin(h), std::cos(h)};
        };
        op.jac_fn = [](const Vec& x) {
            const double h = h_example11(x[0]);
            const double hp = h_example11_deriv(x[0]);
            Matrix j(2, 2);
            j(0, 0) = std::cos(h) * hp;
            j(1, 0) = -std::sin(h) * hp;
            return j;
        };
        return op;
    }
    if (name == "prop11_circle") {
        const Vec x1 = get_vec(params, "x1");
        const Vec x2 = get_vec(params, "x2");
        const Vec w = get_vec(params, "w");
        const Vec u = get_vec(params, "u");
        const Vec v = get_vec(params, "v");
        const int d = static_cast<int>(x1.size());
        if (std::abs(dot(u, v)) > 1e-12 || std::abs(norm(u) - 1.0) > 1e-12 ||
            std::abs(norm(v) - 1.0) > 1e-12)
            throw std::invalid_argument("prop11_circle: u, v must be orthonormal");
        const double denom = dot(w, sub(x2, x1));
        if (denom == 0.0) throw std::invalid_argument("prop11_circle: <w, x2-x1> must be nonzero");
        OperatorHandle op;
        op.name = name;
        op.params = params;
        op.dim = d;
        // L derived from the closed-form second derivative of
        // (sin theta, cos theta) along w; see docs/derivations.md.
        op.known_grad_lipschitz = kPi * kPi * dot(w, w) / (denom * denom);
        const Vec grad_theta = scaled(w, kPi / denom);
        op.eval_fn = [x1, w, denom, u, v](const Vec& x) {
            const double theta = kPi * dot(w, sub(x, x1)) / denom;
            Vec out = scaled(u, std::sin(theta));
            axpy(std::cos(theta), v, out);
            return out;
        };
        op.jac_fn = [x1, w, denom, u, v, grad_theta, d](const Vec& x) {
            const double theta = kPi * dot(w, sub(x, x1)) / denom;
            Vec dir = scaled(u, std::cos(theta));
            axpy(-std::sin(theta), v, dir);
            Matrix j(d, d);
            for (int i = 0; i < d; ++i)
                for (int k = 0; k < d; ++k) j(i, k) = dir[i] * grad_theta[k];
            return j;
        };
        return op;
    }
    if (name == "affine") {
        const Matrix a = get_mat(params, "A");
        const Vec b = get_vec(params, "b");
        if (a.rows != a.cols || a.rows != static_cast<int>(b.size()))
            throw std::invalid_argument("affine: A must be square and match b");
        return make_affine(a, b, name, params);
    }
    if (name == "square_map") {
        OperatorHandle op;
        op.name = name;
        op.dim = 2;
        op.known_grad_lipschitz = 2.0;  // J(v)-J(w) = diag(2 dx, 2 dy)
        op.eval_fn = [](const Vec& x) { return Vec{x[0] * x[0] - x[1], x[1] * x[1] - x[0]}; };
        op.jac_fn = [](const Vec& x) {
            Matrix j(2, 2);
            j(0, 0) = 2.0 * x[0];
            j(0, 1) = -1.0;
            j(1, 0) = -1.0;
            j(1, 1) = 2.0 * x[1];
            return j;
        };
        return op;
    }
    if (name == "identity") {
        const int d = static_cast<int>(get_double(params, "dim"));
        if (d < 2) throw std::invalid_argument("identity: dim must be >= 2");
        return make_affine(Matrix::identity(d), Vec(d, 0.0), name, params);
    }
    if (name == "translation") {
        const Vec c = get_vec(params, "c");
        return make_affine(Matrix::identity(static_cast<int>(c.size())), c, name, params);
    }
    throw std::invalid_argument("unknown catalog operator '" + name + "'");
}

Vec op_eval(const OperatorHandle& op, const Vec& x) {
    if (static_cast<int>(x.size()) != op.dim) throw std::invalid_argument("op_eval: dimension mismatch");
    if (op.domain && !contains(*op.domain, x, 1e-9))
        throw std::invalid_argument("op_eval: point outside operator domain");
    return op.eval_fn(x);
}

Matrix op_jacobian(const OperatorHandle& op, const Vec& x) {
    if (static_cast<int>(x.size()) != op.dim)
        throw std::invalid_argument("op_jacobian: dimension mismatch");
    if (op.domain && !contains(*op.domain, x, 1e-9))
        throw std::invalid_argument("op_jacobian: point outside operator domain");
    if (op.jacobian_mode == JacobianMode::analytic) return op.jac_fn(x);
    // central differences
    const int d = op.dim;
    Matrix j(d, d);
    Vec xp = x, xm = x;
    for (int k = 0; k < d; ++k) {
        xp[k] = x[k] + op.fd_step;
        xm[k] = x[k] - op.fd_step;
        const Vec fp = op.eval_fn(xp);
        const Vec fm = op.eval_fn(xm);
        for (int i = 0; i < d; ++i) j(i, k) = (fp[i] - fm[i]) / (2.0 * op.fd_step);
        xp[k] = x[k];
        xm[k] = x[k];
    }
    return j;
}

Vec sample_point_in_body(const ConvexBody& body, Rng& rng) {
    if (const auto* s = std::get_if<Segment>(&body)) {
        const double t = rng.uniform();
        Vec p(s->a.size());
        for (size_t i = 0; i < p.size(); ++i) p[i] = (1.0 - t) * s->a[i] + t * s->b[i];
        return p;
    }
    if (const auto* b = std::get_if<BallBody>(&body)) {
        const int d = static_cast<int>(b->center.size());
        if (d <= 3) {
            // rejection from the bounding box
            for (;;) {
                Vec p = b->center;
                for (int i = 0; i < d; ++i) p[i] += b->radius * rng.uniform(-1.0, 1.0);
                if (dist(p, b->center) <= b->radius) return p;
            }
        }
        // polar sampling; exact uniform, avoids vanishing acceptance rates
        Vec dir = rng.unit_vector(d);
        const double r = b->radius * std::pow(rng.uniform(), 1.0 / d);
        Vec p = b->center;
        axpy(r, dir, p);
        return p;
    }
    const auto& poly = std::get<Polytope>(body);
    const int d = static_cast<int>(poly.vertices[0].size());
    const int rank = affine_rank(poly.vertices);
    if (rank >= d) {
        Vec lo = poly.vertices[0], hi = poly.vertices[0];
        for (const Vec& v : poly.vertices)
            for (int i = 0; i < d; ++i) {
                lo[i] = std::min(lo[i], v[i]);
                hi[i] = std::max(hi[i], v[i]);
            }
        for (int attempt = 0; attempt < 100000; ++attempt) {
            Vec p(d);
            for (int i = 0; i < d; ++i) p[i] = rng.uniform(lo[i], hi[i]);
            if (contains(body, p, 1e-10)) return p;
        }
        throw std::runtime_error("sample_point_in_body: rejection failed (thin polytope?)");
    }
    // degenerate polytope: random convex combination (not uniform; documented)
    const int k = static_cast<int>(poly.vertices.size());
    Vec w(k);
    double sum = 0.0;
    for (int i = 0; i < k; ++i) {
        w[i] = -std::log(std::max(rng.uniform(), 1e-300));
        sum += w[i];
    }
    Vec p(d, 0.0);
    for (int i = 0; i < k; ++i) axpy(w[i] / sum, poly.vertices[i], p);
    return p;
}

LipschitzEstimate estimate_grad_lipschitz(const OperatorHandle& op, const ConvexBody& region,
                                          int n_pairs, std::uint64_t seed) {
    if (n_pairs < 1) throw std::invalid_argument("estimate_grad_lipschitz: n_pairs must be >= 1");
    if (is_singleton(region))
        throw std::invalid_argument("estimate_grad_lipschitz: undefined quotient on a singleton region");
    Rng rng(seed);
    LipschitzEstimate est;
    est.n_pairs = n_pairs;
    for (int i = 0; i < n_pairs; ++i) {
        const Vec x = sample_point_in_body(region, rng);
        const Vec y = sample_point_in_body(region, rng);
        const double den = dist(x, y);
        if (den < 1e-12) continue;
        const double q = operator_norm(mat_sub(op_jacobian(op, x), op_jacobian(op, y))) / den;
        if (q > est.value) {
            est.value = q;
            est.argmax_pair = {x, y};
        }
    }
    return est;
}

MapLipschitzBound estimate_map_lipschitz(const OperatorHandle& op, const ConvexBody& region,
                                         const SampleGrid& grid) {
    (void)region;
    MapLipschitzBound out;
    double max_jac = 0.0;
    for (const Vec& p : grid.points) max_jac = std::max(max_jac, operator_norm(op_jacobian(op, p)));
    if (op.known_grad_lipschitz) {
        out.value = max_jac + *op.known_grad_lipschitz * grid.covering_radius;
        out.certified = true;
    } else {
        out.value = max_jac;
        out.certified = false;
    }
    return out;
}

}  // namespace zerocert
