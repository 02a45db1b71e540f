#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dioph/contfrac.hpp"
#include "dioph/rng.hpp"

#include <cmath>

using namespace dioph;

namespace {

// independent Euclidean quotient oracle
std::vector<mpz_class> euclid_quotients(mpq_class x) {
    std::vector<mpz_class> out;
    mpz_class num = x.get_num(), den = x.get_den();
    while (den != 0) {
        mpz_class a, r;
        mpz_fdiv_qr(a.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        out.push_back(a);
        num = den;
        den = r;
    }
    return out;
}

} // namespace

TEST_CASE("expansion matches the Euclidean oracle") {
    auto cf = ContinuedFraction::expand(mpq_class(415, 93));
    std::vector<mpz_class> want{4, 2, 6, 7};
    CHECK(cf.quotients == want);
    CHECK(cf.quotients == euclid_quotients(mpq_class(415, 93)));

    auto half = ContinuedFraction::expand(mpq_class(1, 2));
    CHECK(half.quotients == std::vector<mpz_class>{0, 2});

    auto five = ContinuedFraction::expand(mpq_class(5));
    CHECK(five.quotients == std::vector<mpz_class>{5});
}

TEST_CASE("terminating expansions end with a quotient of at least two") {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        Rng r = rng.fork(trial);
        mpq_class x(r.range(0, 400), r.range(1, 97));
        x.canonicalize();
        auto cf = ContinuedFraction::expand(x);
        if (cf.quotients.size() > 1) CHECK(cf.quotients.back() >= 2);
        // final convergent reproduces the input exactly
        CHECK(mpq_class(cf.convergents.back().p, cf.convergents.back().q) == x);
    }
}

TEST_CASE("convergent recurrence holds exactly") {
    auto num = build_prescribed(2.0, 8);
    const auto& cf = num.cf;
    for (size_t k = 2; k < cf.convergents.size(); ++k) {
        CHECK(cf.convergents[k].p ==
              cf.quotients[k] * cf.convergents[k - 1].p + cf.convergents[k - 2].p);
        CHECK(cf.convergents[k].q ==
              cf.quotients[k] * cf.convergents[k - 1].q + cf.convergents[k - 2].q);
        CHECK(cf.convergents[k].q > cf.convergents[k - 1].q);
    }
}

TEST_CASE("convergent errors below the next denominator") {
    for (double tau : {1.0, 2.0, 3.0}) {
        auto num = build_prescribed(tau, 8);
        for (int k = 0; k < num.depth; ++k) {
            mpq_class err = num.convergent_error(k);
            mpq_class bound(1, num.cf.convergents[static_cast<size_t>(k) + 1].q);
            CHECK(err < bound);
        }
    }
}

TEST_CASE("golden-ratio pattern at tau = 1") {
    auto num = build_prescribed(1.0, 8);
    for (const auto& a : num.cf.quotients) CHECK(a == 1);
    // convergents 1, 2, 3/2, 5/3, 8/5, ...
    CHECK(num.cf.convergents[1].p == 2);
    CHECK(num.cf.convergents[2].p == 3);
    CHECK(num.cf.convergents[2].q == 2);
    CHECK(num.cf.convergents[4].p == 8);
    CHECK(num.cf.convergents[4].q == 5);
}

TEST_CASE("tau = 2 errors track the square of the denominator") {
    auto num = build_prescribed(2.0, 10);
    for (int k = 4; k <= num.depth; ++k) {
        double e = Real::of(num.convergent_error(k)).log().to_double();
        double q = Real::of(num.cf.convergents[static_cast<size_t>(k)].q).log().to_double();
        double ratio = std::exp(e + 2.0 * q); // err / q^-2
        CHECK(ratio < 10.0);
        CHECK(ratio > 0.1);
    }
}

TEST_CASE("measured exponent approaches the target") {
    CHECK(build_prescribed(1.0, 12).measured_sigma() == doctest::Approx(1.0).epsilon(0.11));
    for (double tau : {1.0, 2.0}) {
        for (int depth : {8, 10}) {
            double m = build_prescribed(tau, depth).measured_sigma();
            CHECK(std::fabs(m - tau) < 0.4);
        }
    }
    CHECK(std::fabs(build_prescribed(3.0, 8).measured_sigma() - 3.0) < 0.4);
    // cross-target bands
    CHECK(build_prescribed(3.0, 8).measured_sigma() > 2.6);
    CHECK(build_prescribed(3.0, 8).measured_sigma() < 3.4);
}

TEST_CASE("rational input terminates with an exact final convergent") {
    // a prescribed number is realized as its depth+1 convergent, so its own
    // final stored convergent has error zero one step past depth; the
    // terminating analogue:
    auto cf = ContinuedFraction::expand(mpq_class(415, 93));
    PrescribedNumber fake;
    fake.target_tau = 0;
    fake.depth = static_cast<int>(cf.depth()) - 1;
    fake.cf = cf;
    fake.exact = mpq_class(415, 93);
    fake.value = Real::of(fake.exact);
    int last = static_cast<int>(cf.depth()) - 1;
    CHECK(fake.convergent_error(last) == 0);
    CHECK(std::isinf(fake.convergent_quality(last)));
}

TEST_CASE("input validation") {
    CHECK_THROWS(build_prescribed(0.5, 8));
    CHECK_THROWS(build_prescribed(2.0, 3));
    CHECK_THROWS(ContinuedFraction::expand(mpq_class(-1, 2)));
    // denominator cap: very aggressive exponents overflow the guard
    CHECK_THROWS(build_prescribed(9.0, 40));
}
