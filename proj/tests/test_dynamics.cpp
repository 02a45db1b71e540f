#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dioph/contfrac.hpp"
#include "dioph/dynamics.hpp"
#include "dioph/rng.hpp"

#include <cmath>

using namespace dioph;

TEST_CASE("contraction rate forward and back") {
    auto r = rate_from_v(2, 1, mpq_class(4));
    CHECK(r.c == mpq_class(1, 3));
    CHECK(v_from_rate(2, 1, mpq_class(1, 3)) == 4);
    CHECK(rate_from_v(3, 2, mpq_class(3)).c == 0);
    CHECK_THROWS(rate_from_v(2, 1, mpq_class(1)));
    CHECK_THROWS(v_from_rate(2, 1, mpq_class(1)));
    CHECK_THROWS(v_from_rate(2, 2, mpq_class(1, 2)));
}

TEST_CASE("rate inversion exact on random rationals") {
    Rng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        Rng r = rng.fork(trial);
        int n = 1 + static_cast<int>(r.below(4));
        int k = 1 + static_cast<int>(r.below(static_cast<uint64_t>(n)));
        mpq_class v(r.range(1, 4000), r.range(1, 50));
        v.canonicalize();
        v += n; // ensure v >= n
        mpq_class c = rate_from_v(n, k, v).c;
        CHECK(v_from_rate(n, k, c) == v);
        CHECK(c >= 0);
        CHECK(mpq_class(k) * c < 1);
    }
}

TEST_CASE("forward construction on the worked example") {
    // n=2, k=1, v=4 (c=1/3), z=(5,0), x=1/25
    LogVal x = LogVal::from_real(Real::of(mpq_class(1, 25)));
    auto fw = forward_witness(x, IntVec{5, 0}, 2, mpq_class(4));
    CHECK(fw.c == mpq_class(1, 3));
    double t = fw.flow.total.to_double();
    CHECK(t == doctest::Approx(1.5 * std::log(5.0)).epsilon(1e-12));
    CHECK(fw.flow.t[0].to_double() == doctest::Approx(t).epsilon(1e-12));
    CHECK(fw.flow.t[1].to_double() == 0.0);
    // e^t |x| = 5^{-1/2} = e^{-t/3} exactly
    double lhs = t + std::log(1.0 / 25.0);
    CHECK(lhs == doctest::Approx(-t / 3.0).epsilon(1e-12));
    CHECK(fw.slack < 1e-9);

    // feeding the flow back certifies the original quality exactly
    auto cert = backward_witness(fw.flow, x, IntVec{5, 0}, 2, 1, mpq_class(1, 3));
    CHECK(cert.v == 4);
    CHECK(cert.slack < 1e-9);
}

TEST_CASE("forward construction multiplicative support") {
    // n=2, k=2, v=4 (c=1/5), z=(3,4), x=12^{-2}
    LogVal x = LogVal::from_real(Real::of(mpq_class(1, 144)));
    auto fw = forward_witness(x, IntVec{3, 4}, 2, mpq_class(4));
    CHECK(fw.c == mpq_class(1, 5));
    double t = fw.flow.total.to_double();
    // e^{(1-2/5) t} = 12
    CHECK(std::exp(0.6 * t) == doctest::Approx(12.0).epsilon(1e-10));
    CHECK(fw.flow.t[0].to_double() + fw.flow.t[1].to_double() == doctest::Approx(t).epsilon(1e-12));
    CHECK(fw.slack < 1e-9);
}

TEST_CASE("unit height forces the zero flow") {
    LogVal x = LogVal::from_real(Real::of(mpq_class(1, 2)));
    auto fw = forward_witness(x, IntVec{1, 0, 0}, 3, mpq_class(100));
    CHECK(fw.flow.total.is_zero());
}

TEST_CASE("forward rejects oversized x") {
    LogVal x = LogVal::from_real(Real::of(mpq_class(1, 2)));
    CHECK_THROWS(forward_witness(x, IntVec{5, 0}, 2, mpq_class(4)));
}

TEST_CASE("round trip certifies the original quality") {
    Rng rng(42);
    for (int trial = 0; trial < 150; ++trial) {
        Rng r = rng.fork(trial);
        int n = 1 + static_cast<int>(r.below(4));
        int k = 1 + static_cast<int>(r.below(static_cast<uint64_t>(n)));
        IntVec z(static_cast<size_t>(n), 0);
        // exactly k nonzero entries
        std::vector<int> idx;
        for (int i = 0; i < n; ++i) idx.push_back(i);
        for (int i = 0; i < k; ++i) {
            int pick = i + static_cast<int>(r.below(static_cast<uint64_t>(n - i)));
            std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(pick)]);
            long v = r.range(1, 999);
            z[static_cast<size_t>(idx[static_cast<size_t>(i)])] = r.below(2) ? v : -v;
        }
        mpq_class v(r.range(1, 300), r.range(1, 17));
        v.canonicalize();
        v += n + mpq_class(1, 7); // strictly above n
        mpq_class c = rate_from_v(n, k, v).c;

        // |x| = u * H^{-v/n}
        Real H = Real::of(mult_height(z));
        Real bound = -(H.log() * Real::of(v) / Real::of(n));
        Real lnx = bound + Real::of(std::log(r.uniform() * 0.999 + 1e-6));
        LogVal x(1, lnx);

        auto fw = forward_witness(x, z, n, v);
        CHECK(fw.slack < 1e-9);

        auto cert = backward_witness(fw.flow, x, z, n, k, c);
        CHECK(cert.slack < 1e-9);
        CHECK(cert.v >= v - mpq_class(1, 1000000));
        CHECK(!cert.degenerate_norm_bounded);
    }
}

TEST_CASE("zero flow certifies only the floor") {
    // t = 0, (x, z) = (0.5, (1, 0)): contraction only at rate 0, v = n
    FlowVec t = make_flow_doubles({0.0, 0.0});
    LogVal x = LogVal::from_real(Real::of(0.5));
    auto cert = backward_witness(t, x, IntVec{1, 0}, 2, 1, mpq_class(0));
    CHECK(cert.v == 2);
    CHECK(cert.slack < 1e-9);
}

TEST_CASE("restriction violation is reported") {
    // contraction holds but only one index reaches the rate; k = 2 fails
    FlowVec t = make_flow_doubles({6.0, 0.0});
    LogVal x = LogVal::from_real(Real::of(1e-9));
    CHECK_THROWS_WITH_AS(backward_witness(t, x, IntVec{2, 0}, 2, 2, mpq_class(1, 3)),
                         doctest::Contains("restriction violated"), std::domain_error);
}

TEST_CASE("support smaller than the restriction count still certifies") {
    // z = (q, 0) with k = 2: both indices reach the rate, the height bound
    // closes through them even though only one coordinate is active
    auto num = build_prescribed(2.0, 8);
    const auto& conv = num.cf.convergents[5];
    mpq_class err = num.convergent_error(5);
    LogVal x = LogVal::from_real(Real::of(err));
    IntVec z{conv.q, 0};
    double lq = Real::of(conv.q).log().to_double();
    FlowVec t = make_flow_doubles({1.2 * lq, 0.75 * lq});
    mpq_class c(1, 100);
    auto cert = backward_witness(t, x, z, 2, 2, c);
    CHECK(cert.v == v_from_rate(2, 2, c));
    CHECK(cert.slack < 1e-9);
}

TEST_CASE("degenerate exact relation is flagged") {
    FlowVec t = make_flow_doubles({2.0, 0.0});
    LogVal zero = LogVal::zero();
    auto cert = backward_witness(t, zero, IntVec{3, 0}, 2, 1, mpq_class(1, 10));
    CHECK(cert.degenerate_norm_bounded);
}

TEST_CASE("assembly formula") {
    GammaTable g;
    g.n = 2;
    g.entries.resize(2);
    g.entries[0].k = 1;
    g.entries[1].k = 2;

    g.entries[0].gamma = 0.0;
    g.entries[1].gamma = 0.0;
    CHECK(omega_times_from_gamma(g) == 2.0);

    g.entries[0].gamma = 1.0 / 3.0;
    CHECK(omega_times_from_gamma(g) == doctest::Approx(4.0).epsilon(1e-12));

    g.entries[0].boundary = true;
    CHECK(std::isinf(omega_times_from_gamma(g)));
}

TEST_CASE("grid estimate flags exact relations at the boundary") {
    // a vanishing coordinate gives a zero-residual vector whose norm
    // contracts at the full flow rate, past the top of the rate grid
    RealVec y{Real::of(0), Real::of(mpq_class(1, 3))};
    auto g = estimate_gamma(y, 10);
    CHECK(g.entries[0].boundary);
    CHECK(std::isinf(omega_times_from_gamma(g)));
}

TEST_CASE("generic points show no decay") {
    Rng rng(43);
    Rng r = rng.fork(3);
    RealVec y{Real::of(r.uniform()), Real::of(r.uniform())};
    auto g = estimate_gamma(y, 24);
    for (const auto& e : g.entries) {
        CHECK(e.gamma <= 0.15);
        CHECK(!e.boundary);
    }
    double v = omega_times_from_gamma(g);
    CHECK(v >= 2.0);
    CHECK(v <= 3.2);
}
