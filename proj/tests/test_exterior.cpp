#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dioph/contfrac.hpp"
#include "dioph/exterior.hpp"
#include "dioph/rng.hpp"

#include <bit>
#include <cmath>

using namespace dioph;

namespace {

MultiVector wedge_vectors(const std::vector<IntVec>& vs, int ambient) {
    MultiVector w = MultiVector::from_vector(vs[0]);
    for (size_t i = 1; i < vs.size(); ++i) w = wedge(w, MultiVector::from_vector(vs[i]), ambient);
    return w;
}

// independent oracle: the coefficient of e_I in v_1 ^ ... ^ v_j is the
// determinant of the rows I of the column matrix (v_1 ... v_j)
mpz_class minor_det(const std::vector<IntVec>& vs, uint32_t mask, int ambient) {
    std::vector<int> rows;
    for (int i = 0; i < ambient; ++i)
        if (mask & (1u << i)) rows.push_back(i);
    int j = static_cast<int>(rows.size());
    std::vector<std::vector<mpq_class>> m(j, std::vector<mpq_class>(j));
    for (int r = 0; r < j; ++r)
        for (int c = 0; c < j; ++c) m[r][c] = vs[static_cast<size_t>(c)][static_cast<size_t>(rows[static_cast<size_t>(r)])];
    // fraction-style elimination
    mpq_class det = 1;
    for (int c = 0; c < j; ++c) {
        int piv = -1;
        for (int r = c; r < j; ++r)
            if (m[r][c] != 0) { piv = r; break; }
        if (piv < 0) return 0;
        if (piv != c) { std::swap(m[piv], m[c]); det = -det; }
        det *= m[c][c];
        for (int r = c + 1; r < j; ++r) {
            if (m[r][c] == 0) continue;
            mpq_class f = m[r][c] / m[c][c];
            for (int k = c; k < j; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return det.get_num(); // integer input, integer determinant
}

} // namespace

TEST_CASE("wedge basics") {
    int ambient = 4;
    MultiVector e1 = MultiVector::axis(0), e2 = MultiVector::axis(1);
    MultiVector w = wedge(e1, e2, ambient);
    CHECK(w.coeff(0b11) == 1);
    MultiVector wr = wedge(e2, e1, ambient);
    CHECK(wr.coeff(0b11) == -1);

    MultiVector sum = MultiVector::from_vector(IntVec{1, 1, 0, 0});
    MultiVector cancel = wedge(sum, e2, ambient);
    CHECK(cancel.coeff(0b11) == 1);
    CHECK(cancel.terms.size() == 1);

    MultiVector big = wedge(w, wedge(MultiVector::axis(2), MultiVector::axis(3), ambient), ambient);
    CHECK(big.coeff(0b1111) == 1);
    CHECK_THROWS(wedge(big, e1, ambient));
}

TEST_CASE("wedge coefficients equal row minors") {
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        Rng r = rng.fork(trial);
        int ambient = 3 + static_cast<int>(r.below(2)); // 3 or 4
        int j = 2 + static_cast<int>(r.below(static_cast<uint64_t>(ambient - 1)));
        std::vector<IntVec> vs;
        for (int c = 0; c < j; ++c) {
            IntVec v;
            for (int i = 0; i < ambient; ++i) v.push_back(r.range(-4, 4));
            vs.push_back(v);
        }
        MultiVector w = wedge_vectors(vs, ambient);
        for (uint32_t mask = 0; mask < (1u << ambient); ++mask) {
            if (std::popcount(mask) != j) continue;
            CHECK(w.coeff(mask) == minor_det(vs, mask, ambient));
        }
    }
}

TEST_CASE("contraction components") {
    // ambient 4 (n = 3): w = e1 ^ e2
    int ambient = 4;
    MultiVector w = wedge(MultiVector::axis(0), MultiVector::axis(1), ambient);
    auto c = contract_components(w, ambient);
    CHECK(c[0].coeff(0b0010) == 1);  // +e2
    CHECK(c[1].coeff(0b0001) == -1); // -e1
    CHECK(c[2].is_zero());
    CHECK(c[3].is_zero());

    // degree 1: components are the coefficients themselves
    MultiVector v = MultiVector::from_vector(IntVec{7, -3, 2, 5});
    auto cv = contract_components(v, ambient);
    CHECK(cv[0].coeff(0) == 7);
    CHECK(cv[1].coeff(0) == -3);
    CHECK(cv[3].coeff(0) == 5);

    auto cz = contract_components(MultiVector::zero(1), ambient);
    for (const auto& comp : cz) CHECK(comp.is_zero());
}

TEST_CASE("stacked norm for degree one") {
    // n = 2, w = (p1, p2, p0): rows a1 p1 + p2, a2 p1 + p0
    std::vector<mpq_class> a{mpq_class(1, 3), mpq_class(2, 5)};
    MultiVector w = MultiVector::from_vector(IntVec{3, -1, 4});
    mpq_class n2 = r0c_norm2_exact(a, w);
    mpq_class row1 = a[0] * 3 - 1, row2 = a[1] * 3 + 4;
    CHECK(n2 == row1 * row1 + row2 * row2);
}

TEST_CASE("convergent makes the degree-one norm tiny, degree two stays above one") {
    auto num = build_prescribed(3.0, 8);
    std::vector<mpq_class> a{mpq_class(0), num.exact};
    const auto& conv = num.cf.convergents[4]; // q = 731
    MultiVector w = MultiVector::from_vector(IntVec{conv.q, 0, -conv.p});
    Real norm = r0c_norm(a, w);
    CHECK(norm.to_double() < 1e-8);
    CHECK(norm.to_double() > 0);

    // the floor holds for every degree >= 2 multivector, exhaustively
    auto v2 = rank_bound_violations(2, 2, 3, a);
    CHECK(v2.empty());
}

TEST_CASE("rank bound exhaustion on random rational coefficients") {
    Rng rng(32);
    for (int trial = 0; trial < 10; ++trial) {
        Rng r = rng.fork(trial);
        std::vector<mpq_class> a;
        for (int i = 0; i < 3; ++i) {
            a.emplace_back(r.range(-50, 50), r.range(1, 12));
            a.back().canonicalize();
        }
        CHECK(rank_bound_violations(3, 2, 2, a).empty());
        CHECK(rank_bound_violations(3, 3, 2, a).empty());
    }
    std::vector<mpq_class> fixed{mpq_class(1), mpq_class(0), mpq_class(5)};
    CHECK(rank_bound_violations(3, 2, 2, fixed).empty());
    CHECK(rank_bound_violations(3, 3, 2, fixed).empty());
    CHECK_THROWS(rank_bound_violations(3, 1, 2, fixed));
    CHECK_THROWS((void)rank_bound_violations(4, 2, 40, fixed, 1000));
}

TEST_CASE("flow expansion: identity action") {
    int n = 3;
    Rng rng(33);
    Rng r = rng.fork(1);
    std::vector<IntVec> vs;
    for (int c = 0; c < 2; ++c) {
        IntVec v;
        for (int i = 0; i <= n; ++i) v.push_back(r.range(-3, 3));
        vs.push_back(v);
    }
    MultiVector w = wedge_vectors(vs, n + 1);
    RealVec y(static_cast<size_t>(n), Real::of(0));
    FlowVec f = make_flow_doubles(std::vector<double>(static_cast<size_t>(n), 0.0));
    auto fx = flow_expansion(w, y, f);
    uint32_t last = 1u << n;
    for (const auto& [mask, coeff] : w.terms) {
        if (mask & last) {
            auto it = fx.expanding.find(mask ^ last);
            REQUIRE(it != fx.expanding.end());
            CHECK(std::fabs(it->second.to_real().to_double() - coeff.get_d()) < 1e-12);
        } else {
            auto it = fx.contracting.find(mask);
            REQUIRE(it != fx.contracting.end());
            CHECK(std::fabs(it->second.to_real().to_double() - coeff.get_d()) < 1e-12);
        }
    }
}

TEST_CASE("flow expansion: degree-one shear coefficient") {
    // n = 2, w = (q1, q2, p): the expanding coefficient at J = {} is
    // (q.y + p) e^t
    RealVec y{Real::of(0.3), Real::of(0.55)};
    FlowVec f = make_flow_doubles({0.9, 0.4});
    MultiVector w = MultiVector::from_vector(IntVec{2, -5, 3});
    auto fx = flow_expansion(w, y, f);
    double expect = (2 * 0.3 - 5 * 0.55 + 3) * std::exp(1.3);
    auto it = fx.expanding.find(0u);
    REQUIRE(it != fx.expanding.end());
    CHECK(it->second.to_real().to_double() == doctest::Approx(expect).epsilon(1e-12));
    // contracting parts: q_i e^{-t_i}
    CHECK(fx.contracting.at(0b01).to_real().to_double() ==
          doctest::Approx(2 * std::exp(-0.9)).epsilon(1e-12));
    CHECK(fx.contracting.at(0b10).to_real().to_double() ==
          doctest::Approx(-5 * std::exp(-0.4)).epsilon(1e-12));
}

namespace {

// lifted-matrix oracle: apply g_t u_y to each wedge factor and rewedge
MultiVector matrix_lift_oracle(const std::vector<IntVec>& vs, const RealVec& y, const FlowVec& f,
                               std::map<uint32_t, Real>& out) {
    int n = static_cast<int>(y.size());
    int ambient = n + 1;
    // columns of g_t u_y
    std::vector<RealVec> mat(static_cast<size_t>(ambient),
                             RealVec(static_cast<size_t>(ambient), Real::of(0)));
    Real et = f.total.exp();
    for (int i = 0; i < n; ++i) {
        mat[static_cast<size_t>(i)][static_cast<size_t>(i)] = (-f.t[static_cast<size_t>(i)]).exp();
        mat[static_cast<size_t>(i)][static_cast<size_t>(n)] = et * y[static_cast<size_t>(i)];
    }
    mat[static_cast<size_t>(n)][static_cast<size_t>(n)] = et;
    // images of the factors
    std::vector<RealVec> img;
    for (const auto& v : vs) {
        RealVec w(static_cast<size_t>(ambient), Real::of(0));
        for (int c = 0; c < ambient; ++c)
            for (int i = 0; i < ambient; ++i)
                w[static_cast<size_t>(i)] += mat[static_cast<size_t>(c)][static_cast<size_t>(i)] * Real::of(v[static_cast<size_t>(c)]);
        img.push_back(w);
    }
    // wedge of real vectors: minors
    int j = static_cast<int>(vs.size());
    for (uint32_t mask = 0; mask < (1u << ambient); ++mask) {
        if (std::popcount(mask) != j) continue;
        std::vector<int> rows;
        for (int i = 0; i < ambient; ++i)
            if (mask & (1u << i)) rows.push_back(i);
        // j x j real determinant by expansion (j <= 3 here)
        Real det = Real::of(0);
        std::vector<int> perm(static_cast<size_t>(j));
        for (int i = 0; i < j; ++i) perm[static_cast<size_t>(i)] = i;
        // Leibniz over permutations
        do {
            int sign = 1;
            for (int x = 0; x < j; ++x)
                for (int z = x + 1; z < j; ++z)
                    if (perm[static_cast<size_t>(x)] > perm[static_cast<size_t>(z)]) sign = -sign;
            Real term = Real::of(sign);
            for (int x = 0; x < j; ++x)
                term *= img[static_cast<size_t>(perm[static_cast<size_t>(x)])][static_cast<size_t>(rows[static_cast<size_t>(x)])];
            det += term;
        } while (std::next_permutation(perm.begin(), perm.end()));
        out[mask] = det;
    }
    return wedge_vectors(vs, ambient);
}

} // namespace

TEST_CASE("flow expansion equals the lifted matrix action") {
    Rng rng(34);
    double worst = 0;
    for (int trial = 0; trial < 60; ++trial) {
        Rng r = rng.fork(trial);
        int n = 2 + static_cast<int>(r.below(3)); // 2..4
        int j = 1 + static_cast<int>(r.below(static_cast<uint64_t>(n)));
        std::vector<IntVec> vs;
        for (int c = 0; c < j; ++c) {
            IntVec v;
            for (int i = 0; i <= n; ++i) v.push_back(r.range(-4, 4));
            vs.push_back(v);
        }
        RealVec y;
        for (int i = 0; i < n; ++i) y.push_back(Real::of(r.uniform() * 2 - 1));
        std::vector<double> td;
        for (int i = 0; i < n; ++i) td.push_back(r.uniform() * 3);
        FlowVec f = make_flow_doubles(td);

        std::map<uint32_t, Real> oracle;
        MultiVector w = matrix_lift_oracle(vs, y, f, oracle);
        if (w.is_zero()) continue;
        auto fx = flow_expansion(w, y, f);
        uint32_t last = 1u << n;
        for (const auto& [mask, val] : oracle) {
            double got;
            if (mask & last) {
                auto it = fx.expanding.find(mask ^ last);
                got = it == fx.expanding.end() ? 0.0 : it->second.to_real().to_double();
            } else {
                auto it = fx.contracting.find(mask);
                got = it == fx.contracting.end() ? 0.0 : it->second.to_real().to_double();
            }
            double want = val.to_double();
            double scale = std::max(1.0, std::fabs(want));
            worst = std::max(worst, std::fabs(got - want) / scale);
        }
        // squared-norm identity across the orthogonal splitting
        Real n2 = Real::of(0);
        for (const auto& [mask, val] : oracle) n2 += val * val;
        if (!fx.norm.is_zero())
            CHECK(std::fabs(std::exp(2 * fx.norm.ln_double()) - n2.to_double()) /
                      std::max(1.0, n2.to_double()) <
                  1e-10);
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("violation search") {
    // structured candidate beats the box at a flow the box cannot reach
    auto num = build_prescribed(3.0, 8);
    std::vector<mpq_class> a{mpq_class(0), num.exact};
    FlowVec f = make_flow_doubles({13.0, 0.0});
    const auto& conv = num.cf.convergents[4];
    std::vector<IntVec> cands{IntVec{conv.q, 0, -conv.p}};
    auto hit = condition_violation_search(a, 0.49, f, 1u << 21, cands);
    REQUIRE(hit.has_value());
    CHECK(hit->w[0] == conv.q);
    CHECK(hit->r0c_log < hit->bound_log);

    // control coefficients: no violation at a modest flow
    std::vector<mpq_class> ctrl{mpq_class(1), mpq_class(161803398875, 100000000000)};
    FlowVec f2 = make_flow_doubles({8.0, 8.0});
    auto none = condition_violation_search(ctrl, 0.1211, f2);
    CHECK(!none.has_value());

    // zero flow: the box is tiny and nothing beats the unit bound
    FlowVec f0 = make_flow_doubles({0.0, 0.0});
    auto none0 = condition_violation_search(ctrl, 0.3, f0);
    CHECK(!none0.has_value());
}
