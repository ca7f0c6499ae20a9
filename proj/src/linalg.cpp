#include "zerocert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>

namespace zerocert {

double dot(const Vec& x, const Vec& y) {
    if (x.size() != y.size()) throw std::invalid_argument("dot: size mismatch");
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double norm(const Vec& x) { return std::sqrt(dot(x, x)); }

double dist(const Vec& x, const Vec& y) {
    if (x.size() != y.size()) throw std::invalid_argument("dist: size mismatch");
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return std::sqrt(s);
}

Vec add(const Vec& x, const Vec& y) {
    Vec r(x);
    for (size_t i = 0; i < r.size(); ++i) r[i] += y[i];
    return r;
}

Vec sub(const Vec& x, const Vec& y) {
    Vec r(x);
    for (size_t i = 0; i < r.size(); ++i) r[i] -= y[i];
    return r;
}

Vec scaled(const Vec& x, double s) {
    Vec r(x);
    for (double& v : r) v *= s;
    return r;
}

void axpy(double s, const Vec& x, Vec& y) {
    for (size_t i = 0; i < y.size(); ++i) y[i] += s * x[i];
}

bool all_finite(const Vec& x) {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix mat_sub(const Matrix& x, const Matrix& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("mat_sub: shape mismatch");
    Matrix r(x.rows, x.cols);
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.a[i] - y.a[i];
    return r;
}

Vec mat_vec(const Matrix& m, const Vec& v) {
    if (static_cast<int>(v.size()) != m.cols) throw std::invalid_argument("mat_vec: size mismatch");
    Vec r(m.rows, 0.0);
    for (int i = 0; i < m.rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < m.cols; ++j) s += m(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

Vec mat_transpose_vec(const Matrix& m, const Vec& v) {
    if (static_cast<int>(v.size()) != m.rows) throw std::invalid_argument("mat_transpose_vec: size mismatch");
    Vec r(m.cols, 0.0);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r[j] += m(i, j) * v[i];
    return r;
}

bool mat_all_finite(const Matrix& m) {
    for (double v : m.a)
        if (!std::isfinite(v)) return false;
    return true;
}

bool solve_linear(const Matrix& m, const Vec& rhs, Vec& x) {
    if (m.rows != m.cols || static_cast<int>(rhs.size()) != m.rows) return false;
    const int n = m.rows;
    Matrix a = m;
    Vec b = rhs;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (std::abs(a(piv, col)) < 1e-14) return false;
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(a(col, c), a(piv, c));
            std::swap(b[col], b[piv]);
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a(r, col) / a(col, col);
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) a(r, c) -= f * a(col, c);
            b[r] -= f * b[col];
        }
    }
    x.assign(n, 0.0);
    for (int i = 0; i < n; ++i) x[i] = b[i] / a(i, i);
    return true;
}

double operator_norm(const Matrix& m) {
    if (!mat_all_finite(m)) throw std::invalid_argument("operator_norm: non-finite entries");
    const int n = m.cols;
    if (n == 0 || m.rows == 0) return 0.0;

    // Block power iteration (block 2) on m^T m. A single vector stalls when
    // the top two eigenvalues nearly tie, which happens routinely for
    // jacobian differences of the catalog maps; the two-dimensional Ritz
    // projection separates such pairs in one step.
    auto apply_mtm = [&](const Vec& v) { return mat_transpose_vec(m, mat_vec(m, v)); };
    double scale = 0.0;
    for (double v : m.a) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return 0.0;

    Rng rng(0x5eedu);
    Vec v1 = rng.unit_vector(n);
    Vec v2;
    if (n >= 2) {
        // orthonormal mate for the two-dimensional Ritz space
        for (;;) {
            v2 = rng.unit_vector(n);
            axpy(-dot(v2, v1), v1, v2);
            const double nn = norm(v2);
            if (nn > 1e-6) {
                v2 = scaled(v2, 1.0 / nn);
                break;
            }
        }
    }
    const int cap = 20000;
    for (int it = 0; it < cap; ++it) {
        Vec w1 = apply_mtm(v1);
        // Ritz problem in span{v1, v2}
        double theta = dot(v1, w1);
        Vec u = v1;
        if (n >= 2) {
            Vec w2 = apply_mtm(v2);
            const double a = dot(v1, w1), b = dot(v1, w2), c = dot(v2, w2);
            const double disc = std::sqrt(std::max(0.0, 0.25 * (a - c) * (a - c) + b * b));
            theta = 0.5 * (a + c) + disc;
            // top Ritz vector: take the better-conditioned nullspace candidate
            // of P - theta I, falling back to v1 on an exact tie
            const Vec cand1 = {b, theta - a};
            const Vec cand2 = {theta - c, b};
            const Vec& co = norm(cand1) >= norm(cand2) ? cand1 : cand2;
            const double pscale = std::max({std::abs(a), std::abs(b), std::abs(c)});
            if (norm(co) > 1e-14 * pscale) {
                Vec rv = scaled(v1, co[0]);
                axpy(co[1], v2, rv);
                u = scaled(rv, 1.0 / norm(rv));
            }
        }
        if (theta <= 0.0) return 0.0;
        const Vec mu = apply_mtm(u);
        double res = 0.0;
        for (int i = 0; i < n; ++i) {
            const double e = mu[i] - theta * u[i];
            res += e * e;
        }
        res = std::sqrt(res);
        if (res <= 1e-10 * theta) return std::sqrt(theta);

        // next block: power step + orthonormalization
        const double w1n = norm(w1);
        if (w1n == 0.0) return 0.0;
        Vec n1 = scaled(w1, 1.0 / w1n);
        if (n >= 2) {
            Vec w2 = apply_mtm(v2);
            axpy(-dot(w2, n1), n1, w2);
            const double w2n = norm(w2);
            v2 = w2n > 1e-300 * scale ? scaled(w2, 1.0 / w2n) : rng.unit_vector(n);
        }
        v1 = n1;
    }
    throw PowerIterationError("operator_norm: no convergence after " + std::to_string(cap) +
                              " block iterations on a " + std::to_string(m.rows) + "x" +
                              std::to_string(m.cols) + " matrix");
}

std::uint64_t Rng::splitmix() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t Rng::next_u64() { return splitmix(); }

double Rng::uniform() { return static_cast<double>(splitmix() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

Vec Rng::gaussian_vec(int d) {
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = gaussian();
    return v;
}

Vec Rng::unit_vector(int d) {
    for (;;) {
        Vec v = gaussian_vec(d);
        const double n = norm(v);
        if (n > 1e-12) {
            for (double& x : v) x /= n;
            return v;
        }
    }
}

}  // namespace zerocert
