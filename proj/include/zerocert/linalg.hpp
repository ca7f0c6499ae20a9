#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace zerocert {

using Vec = std::vector<double>;

constexpr double kInf = std::numeric_limits<double>::infinity();

double dot(const Vec& x, const Vec& y);
double norm(const Vec& x);
double dist(const Vec& x, const Vec& y);
Vec add(const Vec& x, const Vec& y);
Vec sub(const Vec& x, const Vec& y);
Vec scaled(const Vec& x, double s);
// y += s * x
void axpy(double s, const Vec& x, Vec& y);
bool all_finite(const Vec& x);

/// Dense row-major matrix; small (d <= 16 in this library).
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static Matrix identity(int n);
};

Matrix mat_sub(const Matrix& x, const Matrix& y);
Vec mat_vec(const Matrix& m, const Vec& v);
Vec mat_transpose_vec(const Matrix& m, const Vec& v);
bool mat_all_finite(const Matrix& m);

struct PowerIterationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Solve m x = rhs by Gaussian elimination with partial pivoting.
/// Returns false (and leaves x untouched) when the matrix is singular.
bool solve_linear(const Matrix& m, const Vec& rhs, Vec& x);

/// Spectral norm (largest singular value) by power iteration on m^T m.
/// Relative tolerance 1e-10; throws PowerIterationError with iterate
/// diagnostics if the cap is reached.
double operator_norm(const Matrix& m);

/// Deterministic random source (splitmix64 core). No std distributions are
/// used, so sequences are identical across platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    double uniform();                    // [0, 1)
    double uniform(double lo, double hi);
    double gaussian();                   // standard normal, Box-Muller
    Vec gaussian_vec(int d);
    Vec unit_vector(int d);
    std::uint64_t next_u64();

private:
    std::uint64_t splitmix();
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace zerocert
