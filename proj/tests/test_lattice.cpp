#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dioph/lattice.hpp"
#include "dioph/rng.hpp"

#include <cmath>

using namespace dioph;

namespace {

mpq_class rand_q(Rng& r, long num_range, long den_range) {
    mpq_class q(r.range(-num_range, num_range), r.range(1, den_range));
    q.canonicalize();
    return q;
}

// unimodular-by-construction rational basis: integer shears times a
// det-1 triangular rational block
QBasis random_unimodular(Rng& r, int dim) {
    QBasis b;
    b.cols.assign(dim, std::vector<mpq_class>(dim, 0));
    std::vector<mpq_class> diag(dim, 1);
    mpq_class prod = 1;
    for (int i = 0; i + 1 < dim; ++i) {
        diag[static_cast<size_t>(i)] = mpq_class(r.range(1, 2), r.range(1, 2));
        diag[static_cast<size_t>(i)].canonicalize();
        prod *= diag[static_cast<size_t>(i)];
    }
    diag[static_cast<size_t>(dim - 1)] = 1 / prod;
    for (int j = 0; j < dim; ++j) {
        b.cols[j][j] = diag[static_cast<size_t>(j)];
        for (int i = j + 1; i < dim; ++i) b.cols[j][i] = rand_q(r, 1, 2);
    }
    // gentle shears keep the true minimizer inside the reference box
    for (int shear = 0; shear < 2; ++shear) {
        int from = static_cast<int>(r.below(dim));
        int to = static_cast<int>(r.below(dim));
        if (from == to) continue;
        long c = r.range(-1, 1);
        for (int i = 0; i < dim; ++i)
            b.cols[to][i] += mpq_class(c) * b.cols[from][i];
    }
    return b;
}

} // namespace

TEST_CASE("unipotent embedding") {
    QBasis id = u_of_y({mpq_class(0), mpq_class(0)});
    CHECK(det_exact(id) == 1);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(id.cols[j][i] == (i == j ? 1 : 0));

    QBasis b = u_of_y({mpq_class(1, 2), mpq_class(1, 3)});
    CHECK(b.cols[0][2] == mpq_class(1, 2));
    CHECK(b.cols[1][2] == mpq_class(1, 3));
    CHECK(b.cols[2][2] == 1);
    CHECK(det_exact(b) == 1);

    Rng rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        Rng r = rng.fork(trial);
        std::vector<mpq_class> y{rand_q(r, 20, 9), rand_q(r, 20, 9)};
        CHECK(det_exact(u_of_y(y)) == 1);
    }
}

TEST_CASE("flow examples") {
    QBasis z3 = u_of_y({mpq_class(0), mpq_class(0)});
    FlowVec f = make_flow_doubles({std::log(2.0), std::log(3.0)});
    RBasis fb = apply_flow(z3, f);
    Shortest s = shortest_vector(fb);
    CHECK(std::fabs(std::exp(s.length.ln_double()) - 1.0 / 3.0) < 1e-12);

    FlowVec zero = make_flow_doubles({0.0, 0.0});
    RBasis same = apply_flow(z3, zero);
    Shortest s0 = shortest_vector(same);
    CHECK(std::fabs(std::exp(s0.length.ln_double()) - 1.0) < 1e-12);

    // image of (2, 3, -2) under the (ln4, ln4) flow over y = (1/2, 1/3)
    QBasis uy = u_of_y({mpq_class(1, 2), mpq_class(1, 3)});
    FlowVec f4 = make_flow_doubles({std::log(4.0), std::log(4.0)});
    RBasis fb4 = apply_flow(uy, f4);
    RealVec img(3, Real::of(0));
    std::vector<long> coef{2, 3, -2};
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i)
            img[static_cast<size_t>(i)] += fb4.cols[static_cast<size_t>(j)][static_cast<size_t>(i)] * Real::of(coef[static_cast<size_t>(j)]);
    CHECK(std::fabs(img[0].to_double() - 0.5) < 1e-12);
    CHECK(std::fabs(img[1].to_double() - 0.75) < 1e-12);
    CHECK(std::fabs(img[2].to_double()) < 1e-12);
    double norm = std::sqrt((img[0] * img[0] + img[1] * img[1] + img[2] * img[2]).to_double());
    CHECK(norm == doctest::Approx(0.9014).epsilon(1e-3));

    CHECK_THROWS(make_flow_doubles({-0.5, 1.0}));
}

TEST_CASE("volume preserved through the flow") {
    Rng rng(22);
    for (int trial = 0; trial < 20; ++trial) {
        Rng r = rng.fork(trial);
        std::vector<mpq_class> y{rand_q(r, 9, 7), rand_q(r, 9, 7)};
        QBasis b = u_of_y(y);
        FlowVec f = make_flow_doubles({r.uniform() * 20, r.uniform() * 20});
        RBasis fb = apply_flow(b, f);
        CHECK(std::fabs(log_abs_det(fb).to_double()) < 1e-12);
    }
}

TEST_CASE("shortest vector examples") {
    QBasis z3 = u_of_y({mpq_class(0), mpq_class(0)});
    Shortest s = shortest_vector(z3);
    CHECK(s.norm2_exact == 1);

    QBasis uy = u_of_y({mpq_class(1, 2), mpq_class(1, 3)});
    Shortest s2 = shortest_vector(uy);
    CHECK(s2.norm2_exact == 1);
    CHECK(s2.coeffs == IntVec{0, 0, 1});

    QBasis big;
    big.cols.assign(9, std::vector<mpq_class>(9, 0));
    CHECK_THROWS(shortest_vector(big));
}

TEST_CASE("reduction certificate: same lattice, unit determinant") {
    Rng rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        Rng r = rng.fork(trial);
        QBasis b = random_unimodular(r, 3);
        mpq_class d0 = det_exact(b);
        QBasis reduced = b;
        Reduction red = lll_reduce(reduced);
        CHECK((red.transform_det == 1 || red.transform_det == -1));
        CHECK(det_exact(reduced) == d0 * red.transform_det);
        // reduced = b * transform, entry for entry
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 3; ++i) {
                mpq_class acc = 0;
                for (int l = 0; l < 3; ++l)
                    acc += b.cols[l][i] * mpq_class(red.transform[l][j]);
                CHECK(acc == reduced.cols[j][i]);
            }
    }
}

TEST_CASE("enumeration agrees with the exhaustive box") {
    Rng rng(24);
    for (int trial = 0; trial < 60; ++trial) {
        Rng r = rng.fork(trial);
        QBasis b = random_unimodular(r, 3);
        Shortest fast = shortest_vector(b);
        Shortest ref = brute_force_shortest(b, 6);
        CHECK(fast.norm2_exact == ref.norm2_exact);
        CHECK((det_exact(b) == 1 || det_exact(b) == -1));
    }
}

TEST_CASE("compactness membership") {
    QBasis z3 = u_of_y({mpq_class(0), mpq_class(0)});
    CHECK(in_K_eps(z3, Real::of(1)));
    CHECK(!in_K_eps(z3, Real::of(1.01)));
    CHECK_THROWS(in_K_eps(z3, Real::of(0)));

    // membership at the exact shortest length is tautological
    Rng rng(25);
    for (int trial = 0; trial < 10; ++trial) {
        Rng r = rng.fork(trial);
        QBasis b = random_unimodular(r, 3);
        Shortest s = shortest_vector(b);
        Real len = Real::of(s.norm2_exact).sqrt();
        CHECK(in_K_eps(b, len));
    }

    // flowed case from the earlier example: length ~ 0.901 < 0.95
    QBasis uy = u_of_y({mpq_class(1, 2), mpq_class(1, 3)});
    RBasis fb = apply_flow(uy, make_flow_doubles({std::log(4.0), std::log(4.0)}));
    CHECK(!in_K_eps(fb, Real::of(0.95)));
}

TEST_CASE("stratum-restricted shortest vector") {
    // z-axis flow: the smallest single-support vector follows the
    // contracted coordinate
    RealVec y{Real::of(0.31830988618), Real::of(0.71828182845)};
    FlowVec f = make_flow_doubles({3.0, 0.0});
    auto sv1 = stratum_shortest(y, f, 1, Real::of(1));
    REQUIRE(sv1.has_value());
    int nz = 0;
    for (const auto& q : sv1->q)
        if (q != 0) ++nz;
    CHECK(nz == 1);

    auto sv2 = stratum_shortest(y, f, 2, Real::of(1));
    if (sv2) {
        int nz2 = 0;
        for (const auto& q : sv2->q)
            if (q != 0) ++nz2;
        CHECK(nz2 == 2);
        CHECK(cmp_mag(sv1->norm, sv2->norm) <= 0);
    }
    CHECK_THROWS(stratum_shortest(y, f, 3, Real::of(1)));
}
