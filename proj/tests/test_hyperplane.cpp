#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dioph/hyperplane.hpp"
#include "dioph/rng.hpp"

#include <cmath>

using namespace dioph;

TEST_CASE("prediction formulas") {
    // n=2, a=(0, prescribed tau=3)
    auto num = build_prescribed(3.0, 8);
    auto spec = make_hyperplane({PointCoord::of_rational(mpq_class(0)), PointCoord::of_prescribed(num)});
    CHECK(spec.n == 2);
    CHECK(spec.s == 1);
    CHECK(spec.sigma == doctest::Approx(3.0));
    CHECK(spec.sigma_known);
    auto pred = predict(spec);
    CHECK(pred.omega_times == doctest::Approx(6.0));
    CHECK(pred.omega == doctest::Approx(3.0));

    // rational coefficients: exact relations, infinite exponents
    auto flat = make_hyperplane({PointCoord::of_rational(mpq_class(1)), PointCoord::of_rational(mpq_class(0))});
    auto pflat = predict(flat);
    CHECK(std::isinf(pflat.omega_times));
    CHECK(std::isinf(pflat.omega));

    // s counts the nonzero entries before the last coordinate
    auto four = make_hyperplane({PointCoord::of_rational(mpq_class(1)), PointCoord::of_rational(mpq_class(0)),
                                 PointCoord::of_rational(mpq_class(2)), PointCoord::of_rational(mpq_class(5))});
    CHECK(four.n == 4);
    CHECK(four.s == 3);
}

TEST_CASE("order between the two exponents") {
    Rng rng(61);
    for (int trial = 0; trial < 30; ++trial) {
        Rng r = rng.fork(trial);
        std::vector<PointCoord> a;
        int n = 2 + static_cast<int>(r.below(3));
        for (int i = 0; i < n; ++i) {
            if (r.below(3) == 0) a.push_back(PointCoord::of_rational(mpq_class(0)));
            else a.push_back(PointCoord::of_rational(mpq_class(r.range(-9, 9), r.range(1, 7))));
        }
        auto spec = make_hyperplane(std::move(a));
        auto pred = predict(spec);
        if (std::isinf(pred.omega)) {
            CHECK(std::isinf(pred.omega_times));
            continue;
        }
        CHECK(pred.omega_times >= pred.omega);
        CHECK(pred.omega >= spec.n);
    }
}

TEST_CASE("s ignores the last coefficient") {
    auto num = build_prescribed(2.0, 6);
    for (const mpq_class& last : {mpq_class(0), mpq_class(7), mpq_class(-3, 2)}) {
        auto spec = make_hyperplane({PointCoord::of_rational(mpq_class(1)),
                                     PointCoord::of_rational(mpq_class(0)),
                                     PointCoord::of_rational(last)});
        CHECK(spec.s == 2);
    }
}

TEST_CASE("full-rank coefficients collapse the two formulas") {
    // s = n: max(n, (n/n) sigma) = max(n, sigma), literally
    auto spec = make_hyperplane({PointCoord::of_rational(mpq_class(1)), PointCoord::of_phi()});
    CHECK(spec.s == 2);
    auto pred = predict(spec);
    CHECK(pred.omega_times == pred.omega);
    CHECK(!pred.degenerate_equality); // s == n here

    // the flagged case: s < n yet both formulas agree (sigma <= s side)
    auto deg = make_hyperplane({PointCoord::of_rational(mpq_class(0)), PointCoord::of_phi()});
    CHECK(deg.s == 1);
    auto pdeg = predict(deg);
    CHECK(pdeg.omega_times == 2.0);
    CHECK(pdeg.omega == 2.0);
    CHECK(pdeg.degenerate_equality);
}

TEST_CASE("special-case prediction") {
    CHECK(special_case_predict(2, PointCoord::of_phi()) == doctest::Approx(2.0));
    auto num = build_prescribed(3.0, 8);
    CHECK(special_case_predict(3, PointCoord::of_prescribed(num)) == doctest::Approx(9.0));
    CHECK(std::isinf(special_case_predict(2, PointCoord::of_rational(mpq_class(3, 7)))));
}

TEST_CASE("embedding the parameter space") {
    auto num = build_prescribed(2.0, 6);
    auto spec = make_hyperplane({PointCoord::of_rational(mpq_class(0)), PointCoord::of_prescribed(num)});
    Point y = embed_point(spec, {Real::of(0.7)});
    CHECK(y.size() == 2);
    CHECK(y[0].value == num.value);        // copied, provenance intact
    CHECK(!y[0].seeds.empty());
    CHECK(y[1].value == Real::of(0.7));
    CHECK(y[1].seeds.empty());

    auto mixed = make_hyperplane({PointCoord::of_rational(mpq_class(1)), PointCoord::of_rational(mpq_class(0))});
    Point y2 = embed_point(mixed, {Real::of(0.3)});
    CHECK(y2[0].value == Real::of(0.3)); // x + 0
    CHECK(y2[0].seeds.empty());          // mixed coordinate loses provenance
    CHECK(y2[1].value == Real::of(0.3));

    Point y3 = embed_point(mixed, {Real::of(0)});
    CHECK(y3[0].value.is_zero()); // a_n at the origin

    CHECK_THROWS(embed_point(spec, RealVec{}));
}

TEST_CASE("structured candidates approximate all coefficients at once") {
    auto num = build_prescribed(3.0, 8);
    auto spec = make_hyperplane({PointCoord::of_rational(mpq_class(0)), PointCoord::of_prescribed(num)});
    auto cands = structured_candidates(spec, 100000);
    REQUIRE(!cands.empty());
    bool has731 = false;
    for (const auto& w : cands) {
        CHECK(w.size() == 2);
        if (w[0] == 731) {
            has731 = true;
            CHECK(w[1] == 0); // a_1 = 0 rounds to nothing
        }
    }
    CHECK(has731);
}

TEST_CASE("sampling verification on the constructed hyperplane") {
    auto num = build_prescribed(3.0, 8);
    auto spec = make_hyperplane({PointCoord::of_rational(mpq_class(0)), PointCoord::of_prescribed(num)});
    auto rep = verify_by_sampling(spec, 4, 10000, 99, 5.5, 6.5);
    CHECK(rep.prediction == doctest::Approx(6.0));
    CHECK(rep.rows.size() == 4);
    for (const auto& r : rep.rows) {
        CHECK(r.within);
        CHECK(r.estimate >= 5.5);
        CHECK(r.estimate <= 6.5);
    }
    CHECK(rep.all_within);
}

TEST_CASE("exact relations confirm through exact hits") {
    auto spec = make_hyperplane({PointCoord::of_rational(mpq_class(1)), PointCoord::of_rational(mpq_class(0))});
    auto rep = verify_by_sampling(spec, 3, 256, 7, 0, 0);
    for (const auto& r : rep.rows) {
        CHECK(r.exact_hit);
        CHECK(r.within);
    }
}

TEST_CASE("submanifold samples inherit the exponent") {
    // surface {(x1, x2, a)} probed along the curve x -> (x, x^2)
    auto num = build_prescribed(2.0, 8);
    auto spec = make_hyperplane({PointCoord::of_rational(mpq_class(0)), PointCoord::of_rational(mpq_class(0)),
                                 PointCoord::of_prescribed(num)});
    CHECK(spec.s == 1);
    auto pred = predict(spec);
    CHECK(pred.omega_times == doctest::Approx(6.0));
    CHECK(special_case_predict(3, spec.a[2]) == doctest::Approx(6.0));
    std::vector<Poly> curve{Poly::parse("x"), Poly::parse("x^2")};
    auto rep = verify_by_sampling(spec, 3, 1000, 5, 5.3, 6.7, curve);
    for (const auto& r : rep.rows) CHECK(r.within);
}
