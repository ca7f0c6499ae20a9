// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Each criterion pins its tolerances in code; oracles are independent of the
// implementation paths they check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "test_helpers.hpp"
#include "zerocert/certificate_io.hpp"
#include "zerocert/certify.hpp"
#include "zerocert/config.hpp"
#include "zerocert/delta.hpp"
#include "zerocert/minimax.hpp"

using namespace zerocert;
using clock_type = std::chrono::steady_clock;

namespace {

const double kPi = 3.14159265358979323846264338327950288;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

OperatorHandle standard_prop11() {
    ParamMap p;
    p["x1"] = Vec{0, 0};
    p["x2"] = Vec{1, 0};
    p["w"] = Vec{1, 0};
    p["u"] = Vec{1, 0};
    p["v"] = Vec{0, 1};
    return make_catalog_operator("prop11_circle", p);
}

OperatorHandle random_prop11(Rng& rng, Vec& x1_out, Vec& x2_out) {
    const Vec x1 = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    Vec delta = rng.unit_vector(2);
    delta = scaled(delta, rng.uniform(0.5, 2.0));
    const Vec x2 = add(x1, delta);
    const Vec u = rng.unit_vector(2);
    const Vec v = {-u[1], u[0]};
    ParamMap p;
    p["x1"] = x1;
    p["x2"] = x2;
    p["w"] = delta;
    p["u"] = u;
    p["v"] = v;
    x1_out = x1;
    x2_out = x2;
    return make_catalog_operator("prop11_circle", p);
}

OperatorHandle random_affine_with_zero(Rng& rng, Vec& zero_out) {
    Matrix a(2, 2);
    for (double& v : a.a) v = rng.uniform(-1.0, 1.0);
    a(0, 0) += 2.0;
    a(1, 1) += 2.0;  // keep it well conditioned
    const Vec zero = {rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
    const Vec b = scaled(mat_vec(a, zero), -1.0);
    ParamMap p;
    p["A"] = a;
    p["b"] = b;
    zero_out = zero;
    return make_catalog_operator("affine", p);
}

// ---- criteria ----

Check criterion1() {
    Check c;
    const auto t0 = clock_type::now();
    const ConvexBody seg = Segment{{0, 0}, {1, 0}};
    const DeltaBounds db = delta_bounds(seg, 32);
    c.require(std::abs(db.lower - 0.25) <= 1e-12 && std::abs(db.upper - 0.25) <= 1e-12,
              "segment bracket is not [0.25, 0.25]");
    const DeltaLowerResult lp = delta_lower_lp(seg, sample(seg, 64));
    c.require(lp.value >= 0.24 - 1e-9 && lp.value <= 0.25 + 1e-9,
              "lp lower at resolution 64 outside [0.24, 0.25]: " + fmt_double(lp.value));
    const double elapsed = seconds_since(t0);
    c.require(elapsed < 2.0, "runtime " + fmt_double(elapsed) + " s exceeds 2 s");
    return c;
}

Check criterion2() {
    Check c;
    Rng rng(20260801);
    for (int i = 0; i < 50; ++i) {
        const bool use_segment = i % 2 == 0;
        const int d = (i % 4 < 2) ? 2 : 3;
        ConvexBody body;
        int res;
        if (use_segment) {
            Vec a(d), b(d);
            for (double& v : a) v = rng.uniform(-2.0, 2.0);
            for (double& v : b) v = rng.uniform(-2.0, 2.0);
            body = Segment{a, b};
            res = 8;
        } else {
            body = zctest::random_polytope(d, d == 2 ? 4 : 4, rng);
            res = d == 2 ? 4 : 2;
        }
        const DeltaBounds base = delta_bounds(body, res);

        Vec t(d);
        for (double& v : t) v = rng.uniform(-3.0, 3.0);
        const DeltaBounds moved = delta_bounds(zctest::translated(body, t), res);
        c.require(std::abs(moved.lower - base.lower) <= 1e-6 &&
                      std::abs(moved.upper - base.upper) <= 1e-6,
                  "translation invariance failed at instance " + std::to_string(i));

        const Matrix q = zctest::random_rotation(d, rng);
        const DeltaBounds rot = delta_bounds(zctest::rotated(body, q), res);
        c.require(std::abs(rot.lower - base.lower) <= 1e-6 &&
                      std::abs(rot.upper - base.upper) <= 1e-6,
                  "rotation invariance failed at instance " + std::to_string(i));

        const double lam = rng.uniform(0.5, 1.5);
        const DeltaBounds sc = delta_bounds(zctest::scaled_body(body, lam), res);
        c.require(std::abs(sc.lower - lam * lam * base.lower) <= 1e-6 &&
                      std::abs(sc.upper - lam * lam * base.upper) <= 1e-6,
                  "scaling law failed at instance " + std::to_string(i));
        if (!c.ok) break;
    }
    return c;
}

Check criterion3() {
    Check c;
    Rng rng(30303);
    int tested = 0;
    while (tested < 50) {
        ConvexBody body;
        if (tested % 2 == 0) {
            Vec a = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
            Vec b = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
            if (dist(a, b) < 1e-6) continue;
            body = Segment{a, b};
        } else {
            const Polytope p = zctest::random_polytope(2, 5, rng);
            if (extreme_points(p).size() < 2) continue;
            body = p;
        }
        ++tested;
        const double floor = 0.25 * diameter(body) * diameter(body);
        const DeltaBounds db = delta_bounds(body, 3);
        c.require(db.lower >= floor - 1e-9, "lower bound under the diameter floor");
        c.require(db.lower > 0.0, "lower bound not strictly positive");
        if (!c.ok) break;
    }
    return c;
}

Check criterion4() {
    Check c;
    const DeltaBounds sq = delta_bounds(Polytope{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}, 12);
    c.require(std::abs(sq.lower - 0.5) <= 1e-6 && std::abs(sq.upper - 0.5) <= 1e-6,
              "unit square bracket is not [0.5, 0.5]");
    for (double r : {1.0, 2.0}) {
        const DeltaBounds ball = delta_bounds(BallBody{{0.25, -0.5}, r}, 8);
        c.require(std::abs(ball.lower - r * r) <= 1e-9 && std::abs(ball.upper - r * r) <= 1e-9,
                  "ball bracket is not [r^2, r^2]");
    }
    const DeltaBounds tri =
        delta_bounds(Polytope{{{0, 0}, {1, 0}, {0.5, 0.8660254037844386}}}, 16);
    c.require(tri.lower >= 0.25 - 1e-9, "triangle lower under 0.25");
    c.require(tri.upper <= 1.0 / 3.0 + 1e-9, "triangle upper above 1/3");
    c.require(tri.slack.lp_lower >= 0.24, "triangle lp lower under 0.24");
    return c;
}

Check criterion5() {
    Check c;
    const Example11Table t = example11_table(100);
    c.require(t.rows.size() == 100, "table size");
    for (const Example11Row& r : t.rows) {
        c.require(std::abs(r.phi_alpha[0]) <= 1e-12 && std::abs(r.phi_alpha[1] - 1.0) <= 1e-12,
                  "phi(alpha_n) differs from (0, 1) at n = " + std::to_string(r.n));
        c.require(std::abs(r.phi_beta[0]) <= 1e-12 && std::abs(r.phi_beta[1] + 1.0) <= 1e-12,
                  "phi(beta_n) differs from (0, -1) at n = " + std::to_string(r.n));
        c.require(r.norm_osc_bound == 0.75, "norm oscillation bound column differs from 0.75");
        c.require(r.membership_residual <= 1e-12, "membership residual nonzero");
        if (!c.ok) return c;
    }
    for (size_t i = 1; i < t.rows.size(); ++i)
        c.require(t.rows[i].delta_exact < t.rows[i - 1].delta_exact,
                  "delta_exact not strictly decreasing");
    c.require(t.rows[99].delta_exact < 4e-4, "delta_exact(100) not below 4e-4");
    c.require(t.min_image_norm > 0.5, "image norms should stay near 1 (0 not in the image)");
    c.require(!t.zero_in_image, "zero_in_image should be false");
    return c;
}

Check criterion6() {
    Check c;
    const auto t0 = clock_type::now();
    Rng rng(60606);
    const OperatorHandle sq = make_catalog_operator("square_map", {});
    int violations = 0, premises = 0;
    for (int i = 0; i < 200; ++i) {
        ExclusionCheckReport rep;
        if (i % 3 == 0) {
            // affine with a known zero, body kept away from it
            Vec zero;
            const OperatorHandle aff = random_affine_with_zero(rng, zero);
            const Vec dir = rng.unit_vector(2);
            const Vec center = add(zero, scaled(dir, rng.uniform(0.8, 2.0)));
            const Vec e = {rng.uniform(0.05, 0.2), rng.uniform(0.05, 0.2)};
            const ConvexBody X = Segment{sub(center, e), add(center, e)};
            rep = check_exclusion_threshold(aff, X, X, 10, 1e-6);
        } else if (i % 3 == 1) {
            // square map away from both zeros
            const double cx = rng.uniform(-2.0, -0.7);
            const double cy = rng.uniform(0.7, 2.0);
            ConvexBody X;
            if (i % 6 == 1) {
                const Vec e = {rng.uniform(0.05, 0.2), rng.uniform(0.05, 0.2)};
                X = Segment{{cx - e[0], cy - e[1]}, {cx + e[0], cy + e[1]}};
            } else {
                const double s = rng.uniform(0.08, 0.25);
                X = Polytope{{{cx, cy}, {cx + s, cy}, {cx, cy + s}}};
            }
            rep = check_exclusion_threshold(sq, X, X, 8, 1e-6);
        } else {
            // circle operator sub-segments inside the full segment
            Vec x1, x2;
            const OperatorHandle circ = random_prop11(rng, x1, x2);
            const double s = rng.uniform(0.15, 1.0);
            Vec xe = x1;
            axpy(s, sub(x2, x1), xe);
            rep = check_exclusion_threshold(circ, Segment{x1, xe}, Segment{x1, x2}, 16, 1e-6);
        }
        if (rep.verdict == ExclusionVerdict::violation) ++violations;
        if (rep.premise) ++premises;
    }
    c.require(violations == 0, std::to_string(violations) + " violation verdicts");
    c.require(premises > 50, "harness too weak: only " + std::to_string(premises) +
                                 " premise-holds instances");
    const double elapsed = seconds_since(t0);
    c.require(elapsed < 60.0, "runtime " + fmt_double(elapsed) + " s exceeds 60 s");
    return c;
}

Check criterion7() {
    Check c;
    const CertifyResult pinned = certify_near_zero(standard_prop11(), Segment{{0, 0}, {1, 0}}, 32, 1e-6);
    c.require(pinned.status == CertifyStatus::certificate, "circle certificate missing");
    if (!c.ok) return c;
    c.require(std::abs(pinned.certificate->claimed_bound - kPi * kPi / 8.0) <= 1e-8,
              "claimed bound differs from pi^2/8");
    c.require(std::abs(pinned.certificate->claimed_bound - 1.23370055) <= 1e-6,
              "claimed bound differs from 1.23370055");
    c.require(pinned.certificate->validation_grid_min <= pinned.certificate->claimed_bound,
              "grid min above the claimed bound");

    Rng rng(70707);
    const OperatorHandle sq = make_catalog_operator("square_map", {});
    for (int i = 0; i < 100; ++i) {
        OperatorHandle op;
        ConvexBody X;
        if (i % 3 == 0) {
            op = sq;
            const Vec dir = rng.unit_vector(2);
            const double s = rng.uniform(0.02, 0.2);
            const Vec zero = (i % 6 == 0) ? Vec{1, 1} : Vec{0, 0};
            X = Segment{sub(zero, scaled(dir, s)), add(zero, scaled(dir, s))};
        } else if (i % 3 == 1) {
            Vec zero;
            op = random_affine_with_zero(rng, zero);
            const Vec dir = rng.unit_vector(2);
            const double s = rng.uniform(0.05, 0.4);
            X = Segment{sub(zero, scaled(dir, s)), add(zero, scaled(dir, s))};
        } else {
            Vec x1, x2;
            op = random_prop11(rng, x1, x2);
            X = Segment{x1, x2};
        }
        const CertifyResult r = certify_near_zero(op, X, 8, 1e-6);
        c.require(r.status == CertifyStatus::certificate,
                  "expected certificate at instance " + std::to_string(i));
        if (!c.ok) return c;
        const SampleGrid fine = sample(X, 64);
        double vmin = kInf;
        for (const Vec& x : fine.points) vmin = std::min(vmin, norm(op_eval(op, x)));
        c.require(vmin <= r.certificate->claimed_bound + 1e-6,
                  "fine-grid min above claimed bound at instance " + std::to_string(i));
        if (!c.ok) return c;
    }
    return c;
}

Check criterion8() {
    Check c;
    Rng rng(80808);
    const OperatorHandle sq = make_catalog_operator("square_map", {});
    const OperatorHandle id = make_catalog_operator("identity", {{"dim", 2.0}});
    for (int i = 0; i < 100; ++i) {
        OperatorHandle op;
        ConvexBody body;
        if (i % 4 == 0) {
            Vec zero;
            op = random_affine_with_zero(rng, zero);
        } else if (i % 4 == 1) {
            op = id;
        } else if (i % 4 == 2) {
            op = sq;
        } else {
            Vec x1, x2;
            op = random_prop11(rng, x1, x2);
            body = Segment{x1, x2};
        }
        if (i % 4 != 3) {
            const Vec cpt = {rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
            if (i % 8 < 4) {
                const Vec e = {rng.uniform(0.1, 0.6), rng.uniform(-0.4, 0.4)};
                body = Segment{sub(cpt, e), add(cpt, e)};
            } else {
                const double s = rng.uniform(0.2, 0.6);
                body = Polytope{{cpt, {cpt[0] + s, cpt[1]}, {cpt[0], cpt[1] + s}}};
            }
        }
        const DeltaLowerOnGrid lo = delta_lower_auto(body, 10);
        const GapCheckResult r = gap_inequality_check(op, body, lo.result.witness, lo.grid,
                                                      *op.known_grad_lipschitz);
        c.require(r.holds, "gap inequality failed at instance " + std::to_string(i) +
                               " (lhs " + fmt_double(r.lhs) + ", rhs " + fmt_double(r.rhs) +
                               ", slack " + fmt_double(r.slack) + ")");
        if (!c.ok) return c;
    }
    // negative control: a falsified Lipschitz constant must be caught
    const ConvexBody box = Polytope{{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}};
    const ConvexityCheckResult bad = convexity_mechanism_check(sq, box, 0.1, 1000, 1);
    c.require(bad.violations > 0, "falsified L = 0.1 not detected");
    return c;
}

Check criterion9() {
    Check c;
    Rng rng(90909);
    for (int i = 0; i < 30; ++i) {
        const int d = 2 + static_cast<int>(rng.next_u64() % 2);
        const int k = i < 20 ? 3 : (i < 27 ? 4 : 5);
        std::vector<Vec> pts;
        for (int j = 0; j < k; ++j) {
            Vec p(d);
            for (double& v : p) v = rng.uniform(0.2, 1.8);  // keeps 0 outside the hull
            pts.push_back(p);
        }
        const double tol = 1e-5;
        const MinNormResult mn = min_norm_point(pts, tol);
        const double oracle = zctest::min_norm_brute_force(pts, 200);
        c.require(std::abs(oracle - mn.norm) <= 1e-4,
                  "brute-force mismatch " + fmt_double(std::abs(oracle - mn.norm)) +
                      " at instance " + std::to_string(i));
        if (mn.norm > tol) {
            const Vec y = scaled(mn.point, 1.0 / mn.norm);
            for (const Vec& s : pts)
                c.require(dot(s, y) >= mn.norm - tol - 1e-10,
                          "separation direction failed validation");
        }
        if (!c.ok) return c;
    }
    return c;
}

Check criterion10() {
    Check c;
    const OperatorHandle id = make_catalog_operator("identity", {{"dim", 2.0}});
    const SearchResult rid = search_small_delta(id, BallBody{{0, 0}, 1.0}, 500, 1e-6);
    c.require(rid.found && rid.delta_upper <= 1e-4 && rid.membership_residual <= 1e-9,
              "identity search failed");

    const OperatorHandle sq = make_catalog_operator("square_map", {});
    const ConvexBody box = Polytope{{{0.5, 0.5}, {1.5, 0.5}, {1.5, 1.5}, {0.5, 1.5}}};
    const SearchResult rsq = search_small_delta(sq, box, 500, 1e-6);
    c.require(rsq.found && rsq.delta_upper <= 1e-4 && rsq.membership_residual <= 1e-9,
              "square map search failed");

    const OperatorHandle tr = make_catalog_operator("translation", {{"c", Vec{0, 2}}});
    const SearchResult rtr = search_small_delta(tr, BallBody{{0, 0}, 1.0}, 2000, 1e-6);
    c.require(!rtr.found, "translation search should be empty");

    // exit code 2 through the CLI
    const std::string cfg = "/tmp/zerocert_acc_trans.cfg";
    std::ofstream f(cfg, std::ios::trunc);
    f << "operator {\n  name translation\n  param c vec 0 2\n}\nregion {\n  kind ball\n"
         "  center 0 0\n  radius 1\n}\nresolution 10\nbudget 400\nseed 1\n";
    f.close();
    const int rc = std::system(
        (std::string(ZEROCERT_CLI_PATH) + " search --config " + cfg + " --quiet > /dev/null 2>&1")
            .c_str());
    c.require(WEXITSTATUS(rc) == 2, "translation search exit code is not 2");
    return c;
}

Check criterion11() {
    Check c;
    const std::string circle_cfg = "/tmp/zerocert_acc_circle.cfg";
    {
        std::ofstream f(circle_cfg, std::ios::trunc);
        f << "operator {\n  name prop11_circle\n  param x1 vec 0 0\n  param x2 vec 1 0\n"
             "  param w vec 1 0\n  param u vec 1 0\n  param v vec 0 1\n}\nbody {\n"
             "  kind segment\n  a 0 0\n  b 1 0\n}\nregion {\n  kind segment\n  a 0 0\n  b 1 0\n}\n"
             "resolution 24\nbudget 300\nn_max 8\nseed 5\n";
    }
    auto strip_ts = [](const std::string& path) {
        std::ifstream f(path);
        std::string out, line;
        while (std::getline(f, line))
            if (line.find("timestamp") == std::string::npos) out += line + "\n";
        return out;
    };
    for (const char* cmd : {"delta", "certify", "search", "example11", "gap"}) {
        const std::string o1 = std::string("/tmp/zerocert_acc_") + cmd + "_1.txt";
        const std::string o2 = std::string("/tmp/zerocert_acc_") + cmd + "_2.txt";
        const std::string base = std::string(ZEROCERT_CLI_PATH) + " " + cmd + " --config " +
                                 circle_cfg + " --seed 17 --quiet --out ";
        const int r1 = std::system((base + o1 + " > /dev/null 2>&1").c_str());
        const int r2 = std::system((base + o2 + " > /dev/null 2>&1").c_str());
        c.require(WEXITSTATUS(r1) == WEXITSTATUS(r2), std::string(cmd) + ": exit codes differ");
        c.require(strip_ts(o1) == strip_ts(o2),
                  std::string(cmd) + ": payloads differ between runs");
        if (!c.ok) return c;
    }
    return c;
}

}  // namespace

int main() {
    const struct {
        int id;
        const char* name;
        std::function<Check()> run;
    } criteria[] = {
        {1, "segment delta closed form and lp bracket under 2 s", criterion1},
        {2, "delta invariance under translation, rotation, scaling", criterion2},
        {3, "strict positivity via the diameter floor", criterion3},
        {4, "pinched brackets: square, balls, equilateral triangle", criterion4},
        {5, "oscillating-operator table reproduction", criterion5},
        {6, "exclusion-threshold harness: 200 seeded instances, no violations", criterion6},
        {7, "near-zero certificate soundness", criterion7},
        {8, "duality-gap inequality with negative control", criterion8},
        {9, "min-norm point against the simplex-grid oracle", criterion9},
        {10, "search realizes zeros and sound empty results", criterion10},
        {11, "cli determinism: byte-identical payloads", criterion11},
    };

    int failures = 0;
    for (const auto& cr : criteria) {
        const auto t0 = clock_type::now();
        Check c;
        try {
            c = cr.run();
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail = std::string("exception: ") + e.what();
        }
        const double dt = seconds_since(t0);
        if (c.ok) {
            std::printf("PASS  %2d  %s  (%.2f s)\n", cr.id, cr.name, dt);
        } else {
            std::printf("FAIL  %2d  %s  (%.2f s)  -- %s\n", cr.id, cr.name, dt, c.detail.c_str());
            ++failures;
        }
        std::fflush(stdout);
    }
    if (failures) std::printf("%d of 11 criteria FAILED\n", failures);
    else std::printf("all 11 criteria passed\n");
    return failures == 0 ? 0 : 1;
}
