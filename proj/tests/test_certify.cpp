#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "test_helpers.hpp"
#include "zerocert/certify.hpp"

using namespace zerocert;

namespace {

const double kPi = 3.14159265358979323846264338327950288;

OperatorHandle standard_prop11() {
    ParamMap p;
    p["x1"] = Vec{0, 0};
    p["x2"] = Vec{1, 0};
    p["w"] = Vec{1, 0};
    p["u"] = Vec{1, 0};
    p["v"] = Vec{0, 1};
    return make_catalog_operator("prop11_circle", p);
}

}  // namespace

TEST_CASE("eta_lower_bound: circle operator on the unit segment") {
    const OperatorHandle op = standard_prop11();
    const ConvexBody seg = Segment{{0, 0}, {1, 0}};
    const EtaBound eta = eta_lower_bound(op, seg, 64);
    CHECK(eta.grid_min == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eta.covering_radius == doctest::Approx(1.0 / 128.0).epsilon(1e-12));
    CHECK(eta.modulus == doctest::Approx(kPi + kPi * kPi / 128.0).epsilon(1e-9));
    CHECK(eta.value ==
          doctest::Approx(eta.grid_min - eta.modulus * eta.covering_radius).epsilon(1e-12));
    CHECK(eta.value > 0.970);
    CHECK(eta.value < 0.976);
    CHECK(eta.certified);
}

TEST_CASE("eta_lower_bound without a known L is flagged heuristic") {
    const OperatorHandle e11 = make_catalog_operator("example11", {});
    const EtaBound eta = eta_lower_bound(e11, Segment{{1, 0}, {1.2, 0}}, 16);
    CHECK_FALSE(eta.certified);
    CHECK(eta.grid_min == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("eta_lower_bound: translation on the unit ball and a zero inside") {
    const OperatorHandle tr = make_catalog_operator("translation", {{"c", Vec{0, 2}}});
    const EtaBound eta = eta_lower_bound(tr, BallBody{{0, 0}, 1.0}, 32);
    CHECK(eta.value >= 0.95);
    CHECK(eta.value <= 1.0 + 1e-9);

    const OperatorHandle id = make_catalog_operator("identity", {{"dim", 2.0}});
    const EtaBound zero = eta_lower_bound(id, Segment{{-1, 0}, {1, 0}}, 8);
    CHECK(zero.value == 0.0);
    CHECK(zero.grid_min <= 1e-12);
}

TEST_CASE("check_exclusion_threshold: translation premise holds, conclusion verified") {
    const OperatorHandle tr = make_catalog_operator("translation", {{"c", Vec{0, 2}}});
    const ExclusionCheckReport rep = check_exclusion_threshold(tr, Segment{{-0.1, 0}, {0.1, 0}},
                                                BallBody{{0, 0}, 1.0}, 16, 1e-6);
    CHECK(rep.premise);
    CHECK(rep.verdict == ExclusionVerdict::premise_holds_conclusion_verified);
    CHECK(rep.sup_inf > 1.9);
    CHECK(rep.threshold == kInf);
}

TEST_CASE("check_exclusion_threshold: circle operator premise fails at full scale") {
    const OperatorHandle op = standard_prop11();
    const ConvexBody seg = Segment{{0, 0}, {1, 0}};
    const ExclusionCheckReport rep = check_exclusion_threshold(op, seg, seg, 32, 1e-6);
    CHECK_FALSE(rep.premise);
    CHECK(rep.verdict == ExclusionVerdict::premise_fails_no_claim);
    CHECK(rep.delta_upper == doctest::Approx(0.25).epsilon(1e-9));
    // threshold 2 eta / L with eta slightly below 1
    CHECK(rep.threshold < 2.0 / (kPi * kPi) + 1e-6);
    CHECK(rep.threshold > 0.18);
    // membership really does hold here, so the failed premise is essential
    CHECK(rep.sup_inf <= 1e-6);
}

TEST_CASE("check_exclusion_threshold: circle sub-segments below the threshold separate") {
    const OperatorHandle op = standard_prop11();
    const ConvexBody seg = Segment{{0, 0}, {1, 0}};
    for (double s : {0.3, 0.5, 0.8}) {
        const ExclusionCheckReport rep =
            check_exclusion_threshold(op, Segment{{0, 0}, {s, 0}}, seg, 32, 1e-6);
        CHECK(rep.premise);
        CHECK(rep.verdict == ExclusionVerdict::premise_holds_conclusion_verified);
    }
}

TEST_CASE("check_exclusion_threshold: no violations across seeded random instances") {
    Rng rng(424242);
    const OperatorHandle sq = make_catalog_operator("square_map", {});
    int checked = 0;
    for (int trial = 0; trial < 20; ++trial) {
        // bodies kept away from both zeros (0,0) and (1,1)
        const double cx = rng.uniform(-2.0, -0.7);
        const double cy = rng.uniform(0.7, 2.0);
        const Vec e = {rng.uniform(0.05, 0.2), rng.uniform(0.05, 0.2)};
        const ConvexBody X = Segment{{cx - e[0], cy - e[1]}, {cx + e[0], cy + e[1]}};
        const ExclusionCheckReport rep = check_exclusion_threshold(sq, X, X, 12, 1e-6);
        CHECK(rep.verdict != ExclusionVerdict::violation);
        if (rep.premise) ++checked;
    }
    CHECK(checked > 0);
}

TEST_CASE("check_exclusion_threshold preconditions") {
    const OperatorHandle op = make_catalog_operator("example11", {});
    const ConvexBody seg = Segment{{0, 0}, {1, 0}};
    CHECK_THROWS_AS((void)check_exclusion_threshold(op, seg, seg, 8, 1e-6), std::invalid_argument);
    const OperatorHandle id = make_catalog_operator("identity", {{"dim", 2.0}});
    CHECK_THROWS_AS(
        (void)check_exclusion_threshold(id, Segment{{5, 5}, {6, 6}}, BallBody{{0, 0}, 1.0}, 8, 1e-6),
        std::invalid_argument);
}

TEST_CASE("certify_near_zero: circle operator emits the pi^2/8 bound") {
    const OperatorHandle op = standard_prop11();
    const CertifyResult r = certify_near_zero(op, Segment{{0, 0}, {1, 0}}, 32, 1e-6);
    REQUIRE(r.status == CertifyStatus::certificate);
    const NearZeroCertificate& c = *r.certificate;
    CHECK(c.claimed_bound == doctest::Approx(kPi * kPi / 8.0).epsilon(1e-9));
    CHECK(c.validation_grid_min == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.validation_grid_min <= c.claimed_bound + 1e-9);
    CHECK_FALSE(c.sharpness_anomaly);
    CHECK(c.l_provenance == LProvenance::known);
    CHECK(c.membership.residual <= 1e-6);
}

TEST_CASE("certify_near_zero: exact zero cases give bound zero") {
    const OperatorHandle id = make_catalog_operator("identity", {{"dim", 2.0}});
    const CertifyResult r = certify_near_zero(id, Segment{{-1, 0}, {1, 0}}, 8, 1e-6);
    REQUIRE(r.status == CertifyStatus::certificate);
    CHECK(r.certificate->claimed_bound == 0.0);
    CHECK(r.certificate->validation_grid_min <= 1e-12);
    CHECK_FALSE(r.certificate->sharpness_anomaly);

    const OperatorHandle sq = make_catalog_operator("square_map", {});
    const CertifyResult rs = certify_near_zero(sq, Segment{{0.9, 0.9}, {1.1, 1.1}}, 8, 1e-6);
    REQUIRE(rs.status == CertifyStatus::certificate);
    CHECK(rs.certificate->claimed_bound == doctest::Approx(0.02).epsilon(1e-9));
    CHECK(rs.certificate->validation_grid_min <= rs.certificate->claimed_bound + 1e-9);
}

TEST_CASE("certify_near_zero: separation yields a sound no-certificate") {
    const OperatorHandle tr = make_catalog_operator("translation", {{"c", Vec{0, 2}}});
    const CertifyResult r = certify_near_zero(tr, BallBody{{0, 0}, 1.0}, 12, 1e-6);
    CHECK(r.status == CertifyStatus::no_certificate);
    REQUIRE(r.separation.has_value());
    CHECK(r.separation->kind == HullCertificate::Kind::sample_separation);
    CHECK_FALSE(r.certificate.has_value());
}

TEST_CASE("singletons at exact zeros certify with delta zero") {
    struct Case {
        OperatorHandle op;
        Vec zero;
    };
    ParamMap ap;
    Matrix a(2, 2);
    a(0, 0) = 2.0;
    a(0, 1) = 1.0;
    a(1, 1) = 1.5;
    ap["A"] = a;
    ap["b"] = Vec{-2.0, -1.5};  // zero: 2x + y = 2, 1.5 y = 1.5
    std::vector<Case> cases = {
        {make_catalog_operator("identity", {{"dim", 2.0}}), {0, 0}},
        {make_catalog_operator("square_map", {}), {1, 1}},
        {make_catalog_operator("square_map", {}), {0, 0}},
        {make_catalog_operator("translation", {{"c", Vec{-1, 2}}}), {1, -2}},
        {make_catalog_operator("affine", ap), {0.5, 1.0}},
    };
    for (const Case& c : cases) {
        REQUIRE(norm(op_eval(c.op, c.zero)) <= 1e-9);
        const CertifyResult r =
            certify_near_zero(c.op, Segment{c.zero, c.zero}, 4, 1e-6);
        REQUIRE(r.status == CertifyStatus::certificate);
        CHECK(r.certificate->delta_upper == 0.0);
        CHECK(r.certificate->membership.residual <= 1e-9);
    }
}

TEST_CASE("search_small_delta: identity finds the origin") {
    const OperatorHandle id = make_catalog_operator("identity", {{"dim", 2.0}});
    const SearchResult r = search_small_delta(id, BallBody{{0, 0}, 1.0}, 500, 1e-6);
    REQUIRE(r.found);
    CHECK(r.delta_upper <= 1e-4);
    CHECK(r.membership_residual <= 1e-9);
}

TEST_CASE("search_small_delta: square map zero inside a box region") {
    const OperatorHandle sq = make_catalog_operator("square_map", {});
    const ConvexBody box = Polytope{{{0.5, 0.5}, {1.5, 0.5}, {1.5, 1.5}, {0.5, 1.5}}};
    const SearchResult r = search_small_delta(sq, box, 500, 1e-6);
    REQUIRE(r.found);
    CHECK(r.delta_upper <= 1e-4);
    CHECK(r.membership_residual <= 1e-9);
}

TEST_CASE("search_small_delta: oscillating operator reaches small delta") {
    const OperatorHandle op = make_catalog_operator("example11", {});
    const ConvexBody box = Polytope{{{0, -1}, {12, -1}, {12, 1}, {0, 1}}};
    const SearchResult r = search_small_delta(op, box, 2000, 1e-6);
    REQUIRE(r.found);
    CHECK(r.delta_upper < 0.01);
    CHECK(r.membership_residual <= 1e-6);
    CHECK_FALSE(r.trace.empty());
}

TEST_CASE("search_small_delta: translation has no candidates") {
    const OperatorHandle tr = make_catalog_operator("translation", {{"c", Vec{0, 2}}});
    const SearchResult r = search_small_delta(tr, BallBody{{0, 0}, 1.0}, 2000, 1e-6);
    CHECK_FALSE(r.found);
    CHECK(r.trace.empty());
}

TEST_CASE("search results re-validate") {
    const OperatorHandle sq = make_catalog_operator("square_map", {});
    const ConvexBody box = Polytope{{{0.5, 0.5}, {1.5, 0.5}, {1.5, 1.5}, {0.5, 1.5}}};
    const SearchResult r = search_small_delta(sq, box, 500, 1e-6);
    REQUIRE(r.found);
    const HullCertificate cert = hull_certificate(sq, sample(r.best_body, 8), 1e-6);
    CHECK(cert.kind == HullCertificate::Kind::membership);
}

TEST_CASE("example11_table: pinned first row and monotone decay") {
    const Example11Table t = example11_table(100);
    REQUIRE(t.rows.size() == 100);
    const Example11Row& r1 = t.rows[0];
    CHECK(r1.alpha == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r1.beta == doctest::Approx(std::sqrt(1.75)).epsilon(1e-15));
    CHECK(std::abs(r1.phi_alpha[0]) <= 1e-12);
    CHECK(std::abs(r1.phi_alpha[1] - 1.0) <= 1e-12);
    CHECK(std::abs(r1.phi_beta[0]) <= 1e-12);
    CHECK(std::abs(r1.phi_beta[1] + 1.0) <= 1e-12);
    CHECK(r1.norm_osc_bound == 0.75);
    CHECK(r1.delta_exact == doctest::Approx(0.026060).epsilon(1e-4));

    for (size_t i = 0; i < t.rows.size(); ++i) {
        const Example11Row& r = t.rows[i];
        CHECK(r.norm_osc_bound == 0.75);
        CHECK(std::abs(r.phi_alpha[0]) <= 1e-12);
        CHECK(std::abs(r.phi_alpha[1] - 1.0) <= 1e-12);
        CHECK(std::abs(r.phi_beta[0]) <= 1e-12);
        CHECK(std::abs(r.phi_beta[1] + 1.0) <= 1e-12);
        CHECK(r.membership_residual <= 1e-12);
        if (i > 0) CHECK(r.delta_exact < t.rows[i - 1].delta_exact);
    }
    CHECK(t.rows[99].delta_exact < 4e-4);
    for (int n = 57; n <= 100; ++n) CHECK(t.rows[n - 1].delta_exact < 1e-3);

    CHECK(t.min_image_norm == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_FALSE(t.zero_in_image);
}

TEST_CASE("near-zero certificates are sound on seeded instances") {
    Rng rng(777);
    const OperatorHandle sq = make_catalog_operator("square_map", {});
    for (int trial = 0; trial < 15; ++trial) {
        // segments through the zero at (1,1)
        const Vec dir = rng.unit_vector(2);
        const double s = rng.uniform(0.02, 0.2);
        const Vec a = {1.0 - s * dir[0], 1.0 - s * dir[1]};
        const Vec b = {1.0 + s * dir[0], 1.0 + s * dir[1]};
        const CertifyResult r = certify_near_zero(sq, Segment{a, b}, 8, 1e-6);
        REQUIRE(r.status == CertifyStatus::certificate);
        // independent finer grid stays below the claimed bound
        const SampleGrid fine = sample(Segment{a, b}, 64);
        double vmin = kInf;
        for (const Vec& x : fine.points) vmin = std::min(vmin, norm(op_eval(sq, x)));
        CHECK(vmin <= r.certificate->claimed_bound + 1e-6);
    }
}
