#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "test_helpers.hpp"
#include "zerocert/optim.hpp"

using namespace zerocert;

TEST_CASE("min_norm_point: symmetric pair straddling the origin") {
    const MinNormResult r = min_norm_point({{0, 1}, {0, -1}});
    CHECK(r.norm <= 1e-12);
    CHECK(r.weights[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(r.weights[1] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("min_norm_point: two-point segment away from the origin") {
    // brute force over the segment parameter pins sqrt(2)/2
    const std::vector<Vec> pts = {{1, 0}, {0, 1}};
    const double oracle = zctest::min_norm_brute_force(pts, 2000);
    const MinNormResult r = min_norm_point(pts);
    CHECK(oracle == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
    CHECK(r.norm == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
    CHECK(r.point[0] == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(r.point[1] == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("min_norm_point: singleton") {
    const MinNormResult r = min_norm_point({{2, 0}});
    CHECK(r.norm == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(r.point == Vec{2, 0});
    CHECK(r.weights == Vec{1.0});
}

TEST_CASE("min_norm_point: weights stay on the simplex and rebuild the point") {
    Rng rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        const int d = 2 + static_cast<int>(rng.next_u64() % 2);
        const int k = 2 + static_cast<int>(rng.next_u64() % 5);
        std::vector<Vec> pts;
        for (int i = 0; i < k; ++i) {
            Vec p(d);
            for (double& v : p) v = rng.uniform(-2.0, 2.0);
            pts.push_back(p);
        }
        const MinNormResult r = min_norm_point(pts);
        double sum = 0.0;
        Vec rebuilt(d, 0.0);
        for (int i = 0; i < k; ++i) {
            CHECK(r.weights[i] >= 0.0);
            sum += r.weights[i];
            axpy(r.weights[i], pts[i], rebuilt);
        }
        CHECK(std::abs(sum - 1.0) <= 1e-10);
        CHECK(dist(rebuilt, r.point) <= 1e-9);
        CHECK(r.norm == doctest::Approx(norm(r.point)).epsilon(1e-12));
    }
}

TEST_CASE("min_norm_point: matches the simplex-grid brute force") {
    Rng rng(23);
    for (int trial = 0; trial < 8; ++trial) {
        const int d = 2 + static_cast<int>(rng.next_u64() % 2);
        const int k = 3 + static_cast<int>(rng.next_u64() % 2);
        std::vector<Vec> pts;
        for (int i = 0; i < k; ++i) {
            Vec p(d);
            for (double& v : p) v = rng.uniform(-1.5, 2.5);
            pts.push_back(p);
        }
        const double oracle = zctest::min_norm_brute_force(pts, 200);
        const MinNormResult r = min_norm_point(pts);
        CHECK(r.norm <= oracle + 1e-9);  // the grid can only overshoot
        // near the constrained optimum the grid error is second order in the
        // step; the bound degrades to first order only when the hull grazes 0
        if (r.norm > 0.2) CHECK(oracle <= r.norm + 1e-4);
    }
}

TEST_CASE("min_norm_point: separation direction is valid when the norm is positive") {
    Rng rng(29);
    for (int trial = 0; trial < 40; ++trial) {
        const int d = 2 + static_cast<int>(rng.next_u64() % 2);
        const int k = 2 + static_cast<int>(rng.next_u64() % 5);
        std::vector<Vec> pts;
        for (int i = 0; i < k; ++i) {
            Vec p(d);
            for (double& v : p) v = rng.uniform(0.5, 3.0);  // positive orthant: 0 outside
            pts.push_back(p);
        }
        const double tol = 1e-5;
        const MinNormResult r = min_norm_point(pts, tol);
        REQUIRE(r.norm > tol);
        const Vec y = scaled(r.point, 1.0 / r.norm);
        for (const Vec& s : pts) CHECK(dot(s, y) >= r.norm - tol);
    }
}

TEST_CASE("min_enclosing_ball: pinned cases") {
    const EnclosingBall two = min_enclosing_ball({{0, 0}, {1, 0}});
    CHECK(two.center[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(two.radius == doctest::Approx(0.5).epsilon(1e-12));

    const EnclosingBall square = min_enclosing_ball({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    CHECK(square.center[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(square.center[1] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(square.radius == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));

    // unit equilateral triangle: circumradius 1/sqrt(3)
    const EnclosingBall tri =
        min_enclosing_ball({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2.0}});
    CHECK(tri.radius == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-9));
}

TEST_CASE("min_enclosing_ball: radius vs max pairwise distance") {
    Rng rng(61);
    for (int trial = 0; trial < 30; ++trial) {
        const int d = 2 + static_cast<int>(rng.next_u64() % 3);
        const int k = 2 + static_cast<int>(rng.next_u64() % 6);
        std::vector<Vec> pts;
        for (int i = 0; i < k; ++i) {
            Vec p(d);
            for (double& v : p) v = rng.uniform(-3.0, 3.0);
            pts.push_back(p);
        }
        double diam = 0.0;
        for (size_t i = 0; i < pts.size(); ++i)
            for (size_t j = i + 1; j < pts.size(); ++j) diam = std::max(diam, dist(pts[i], pts[j]));
        const EnclosingBall b = min_enclosing_ball(pts);
        CHECK(b.radius >= 0.5 * diam - 1e-9);
        for (const Vec& p : pts) CHECK(dist(p, b.center) <= b.radius + 1e-9);
        if (k == 2) CHECK(b.radius == doctest::Approx(0.5 * diam).epsilon(1e-9));
    }
}

TEST_CASE("minimize_convex on pinned cases") {
    ConvexObjective norm2;
    norm2.value = [](const Vec& x) { return dot(x, x); };
    norm2.subgrad = [](const Vec& x) { return scaled(x, 2.0); };

    const ConvexMinResult a = minimize_convex(norm2, Segment{{1, 0}, {2, 0}}, 1e-9);
    CHECK(a.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(a.argmin[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(a.value - a.slack <= 1.0 + 1e-9);

    ConvexObjective shifted;
    shifted.value = [](const Vec& x) { return (x[0] - 5) * (x[0] - 5) + (x[1] - 5) * (x[1] - 5); };
    shifted.subgrad = [](const Vec& x) { return Vec{2 * (x[0] - 5), 2 * (x[1] - 5)}; };
    const ConvexMinResult b =
        minimize_convex(shifted, Polytope{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}, 1e-7);
    CHECK(b.value == doctest::Approx(32.0).epsilon(1e-6));
    CHECK(b.argmin[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(b.argmin[1] == doctest::Approx(1.0).epsilon(1e-4));

    ConvexObjective tilted;
    tilted.value = [](const Vec& x) { return dot(x, x) - x[0]; };
    tilted.subgrad = [](const Vec& x) { return Vec{2 * x[0] - 1, 2 * x[1]}; };
    const ConvexMinResult c = minimize_convex(tilted, Segment{{0, 0}, {1, 0}}, 1e-9);
    CHECK(c.value == doctest::Approx(-0.25).epsilon(1e-9));
    CHECK(c.argmin[0] == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("minimize_convex slack is a certified lower-bound gap") {
    Rng rng(71);
    for (int trial = 0; trial < 20; ++trial) {
        Vec target(2);
        for (double& v : target) v = rng.uniform(-2.0, 2.0);
        ConvexObjective f;
        f.value = [target](const Vec& x) { return dot(sub(x, target), sub(x, target)); };
        f.subgrad = [target](const Vec& x) { return scaled(sub(x, target), 2.0); };
        const Polytope body = zctest::random_polytope(2, 5, rng);
        const ConvexMinResult r = minimize_convex(f, body, 1e-8);
        // dense check: no grid point of the body goes below value - slack
        const SampleGrid g = sample(body, 24);
        for (const Vec& p : g.points) CHECK(f.value(p) >= r.value - r.slack - 1e-7);
    }
}

TEST_CASE("tolerances record round-trips by name") {
    Tolerances t;
    t.set("fw_gap", 1e-12);
    CHECK(t.get("fw_gap") == 1e-12);
    CHECK(t.get("lp_feasibility") == 1e-8);
    CHECK_THROWS_AS(t.set("nope", 1.0), std::invalid_argument);
    CHECK_THROWS_AS(t.set("fw_gap", -1.0), std::invalid_argument);
}
