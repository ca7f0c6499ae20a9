#pragma once

#include <functional>
#include <vector>

#include "zerocert/geometry.hpp"
#include "zerocert/linalg.hpp"
#include "zerocert/lp.hpp"

namespace zerocert {

/// Library-wide tolerance defaults, overridable per CLI run.
struct Tolerances {
    double lp_feasibility = 1e-8;
    double fw_gap = 1e-10;          // Wolfe dual gap at min_norm_point termination
    double convexmin_slack = 1e-6;  // target certified slack in minimize_convex
    double membership = 1e-6;       // hull certificate residual threshold
    double contains = 1e-9;
    double fd_step = 1e-5;
    double interpolability = 1e-8;

    void set(const std::string& name, double value);
    double get(const std::string& name) const;
};

struct MinNormResult {
    Vec point;    // nearest point of conv(S) to the origin
    Vec weights;  // convex combination over the input points
    double norm = 0.0;
    double dual_gap = 0.0;
};

/// Frank-Wolfe / Gilbert iteration with away steps on min |sum l_i s_i|^2
/// over the simplex; terminates when the Wolfe dual gap is <= tol^2.
MinNormResult min_norm_point(const std::vector<Vec>& points, double tol = 1e-5);

struct EnclosingBall {
    Vec center;
    double radius = 0.0;
};

/// Smallest enclosing ball, Welzl-style recursion with move-to-front.
EnclosingBall min_enclosing_ball(const std::vector<Vec>& points);

struct ConvexObjective {
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> subgrad;
};

struct ConvexMinResult {
    Vec argmin;
    double value = 0.0;
    double slack = 0.0;  // certified: value - slack <= true infimum
    int iterations = 0;
};

/// Convex minimization over a body with a certified slack.
///   Segment: golden-section on the 1-D restriction plus a cutting-plane
///            lower bound from the collected subgradients.
///   Polytope: Kelley cutting planes with the LP model over conv(vertices).
///   Ball: projected subgradient, slack from the ball linear-minimization gap.
ConvexMinResult minimize_convex(const ConvexObjective& f, const ConvexBody& body, double tol);

}  // namespace zerocert
