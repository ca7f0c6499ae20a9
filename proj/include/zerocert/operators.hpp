#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "zerocert/geometry.hpp"
#include "zerocert/linalg.hpp"

namespace zerocert {

enum class JacobianMode { analytic, finite_difference };
enum class LProvenance { known, user_asserted };

/// Parameter record of a catalog entry; doubles, vectors and matrices keyed
/// by name so configs can round-trip operators exactly.
using ParamValue = std::variant<double, Vec, Matrix>;
using ParamMap = std::map<std::string, ParamValue>;

struct OperatorHandle {
    std::string name;
    ParamMap params;
    int dim = 0;
    std::optional<ConvexBody> domain;  // nullopt: all of R^d
    std::optional<double> known_grad_lipschitz;
    LProvenance l_provenance = LProvenance::known;
    JacobianMode jacobian_mode = JacobianMode::analytic;
    double fd_step = 1e-5;
    bool derivative_lipschitz = true;  // example11 is the non-Lipschitz entry

    std::function<Vec(const Vec&)> eval_fn;
    std::function<Matrix(const Vec&)> jac_fn;
};

struct LipschitzEstimate {
    double value = 0.0;
    int n_pairs = 0;
    std::pair<Vec, Vec> argmax_pair;
    bool is_lower_estimate = true;
};

struct MapLipschitzBound {
    double value = 0.0;
    bool certified = false;  // true only when the handle carries a known L
};

/// Catalog entries:
///   example11                    Phi(x,y) = (sin h(x), cos h(x)), h = pi sin(2 pi x^2)
///   prop11_circle                Phi(x) = sin(theta) u + cos(theta) v,
///                                theta = pi <w, x-x1> / <w, x2-x1>
///   affine                       Phi(x) = A x + b
///   square_map                   Phi(x,y) = (x^2 - y, y^2 - x)
///   identity, translation        affine special cases
OperatorHandle make_catalog_operator(const std::string& name, const ParamMap& params);

Vec op_eval(const OperatorHandle& op, const Vec& x);
Matrix op_jacobian(const OperatorHandle& op, const Vec& x);

/// Max sampled quotient |J(x)-J(y)| / |x-y| over seeded uniform pairs in the
/// region; a lower estimate of the true Lipschitz constant of the derivative.
LipschitzEstimate estimate_grad_lipschitz(const OperatorHandle& op, const ConvexBody& region,
                                          int n_pairs, std::uint64_t seed);

/// Upper bound on the Lipschitz constant of Phi itself over the region:
/// max over the grid of |J| plus known L times the covering radius. Without
/// a known L the value is the raw grid maximum, flagged uncertified.
MapLipschitzBound estimate_map_lipschitz(const OperatorHandle& op, const ConvexBody& region,
                                         const SampleGrid& grid);

/// Sample a point uniformly in the body (seeded, deterministic).
Vec sample_point_in_body(const ConvexBody& body, Rng& rng);

}  // namespace zerocert
