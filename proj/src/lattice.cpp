#include "dioph/lattice.hpp"
#include "dioph/rat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dioph {

namespace {

template <class S>
struct Ops;

template <>
struct Ops<mpq_class> {
    static mpq_class zero() { return mpq_class(0); }
    static mpq_class of_double(double d) { return mpq_class(d); }
    static double dbl(const mpq_class& x) { return x.get_d(); }
    static mpz_class round(const mpq_class& x) { return nearest_int(x); }
    static mpq_class from_z(const mpz_class& z) { return mpq_class(z); }
    static bool is_zero(const mpq_class& x) { return x == 0; }
};

template <>
struct Ops<Real> {
    static Real zero() { return Real::of(0L); }
    static Real of_double(double d) { return Real::of(d); }
    static double dbl(const Real& x) { return x.to_double(); }
    static mpz_class round(const Real& x) { return x.round_even(); }
    static Real from_z(const mpz_class& z) { return Real::of(z); }
    static bool is_zero(const Real& x) { return x.is_zero(); }
};

template <class S>
S dot_cols(const std::vector<S>& a, const std::vector<S>& b) {
    S s = Ops<S>::zero();
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

template <class S>
struct GSData {
    std::vector<std::vector<S>> mu; // mu[i][j], j < i
    std::vector<S> Bst;             // squared norms of the orthogonalized vectors
};

template <class S>
GSData<S> gram_schmidt(const Basis<S>& b) {
    int m = b.dim();
    GSData<S> g;
    g.mu.assign(m, std::vector<S>(m, Ops<S>::zero()));
    g.Bst.assign(m, Ops<S>::zero());
    std::vector<std::vector<S>> bs = b.cols;
    for (int i = 0; i < m; ++i) {
        bs[i] = b.cols[i];
        for (int j = 0; j < i; ++j) {
            if (Ops<S>::is_zero(g.Bst[j]))
                throw std::domain_error("degenerate basis in orthogonalization");
            S mu = dot_cols(b.cols[i], bs[j]) / g.Bst[j];
            g.mu[i][j] = mu;
            for (size_t r = 0; r < bs[i].size(); ++r) bs[i][r] -= mu * bs[j][r];
        }
        g.Bst[i] = dot_cols(bs[i], bs[i]);
    }
    return g;
}

template <class S>
void col_axpy(std::vector<S>& x, const std::vector<S>& y, const mpz_class& r) {
    S rs = Ops<S>::from_z(r);
    for (size_t i = 0; i < x.size(); ++i) x[i] -= rs * y[i];
}

template <class S>
Reduction lll_impl(Basis<S>& b, double delta_d) {
    int m = b.dim();
    Reduction red;
    red.transform.assign(m, std::vector<mpz_class>(m, 0));
    for (int i = 0; i < m; ++i) red.transform[i][i] = 1;

    S delta = Ops<S>::of_double(delta_d);
    GSData<S> g = gram_schmidt(b);
    int k = 1;
    long guard = 0;
    while (k < m) {
        if (++guard > 200000) throw std::runtime_error("reduction failed to settle");
        for (int j = k - 1; j >= 0; --j) {
            mpz_class r = Ops<S>::round(g.mu[k][j]);
            if (r != 0) {
                col_axpy(b.cols[k], b.cols[j], r);
                for (int row = 0; row < m; ++row)
                    red.transform[row][k] -= r * red.transform[row][j];
                g = gram_schmidt(b);
            }
        }
        S lhs = g.Bst[k];
        S rhs = (delta - g.mu[k][k - 1] * g.mu[k][k - 1]) * g.Bst[k - 1];
        if (!(lhs < rhs)) {
            ++k;
        } else {
            std::swap(b.cols[k], b.cols[k - 1]);
            for (int row = 0; row < m; ++row)
                std::swap(red.transform[row][k], red.transform[row][k - 1]);
            g = gram_schmidt(b);
            k = k > 1 ? k - 1 : 1;
        }
    }
    // transform determinant: expand exactly (m <= 8)
    std::vector<std::vector<mpq_class>> tq(m, std::vector<mpq_class>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) tq[i][j] = red.transform[i][j];
    QBasis qb;
    qb.cols = tq;
    mpq_class d = det_exact(qb);
    red.transform_det = d.get_num(); // denominator is 1 for integer entries
    return red;
}

struct EnumBudget : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Depth-first enumeration of nonzero lattice vectors with squared norm
// within a shrinkable bound, over the reduced basis, one representative
// per +- pair (topmost nonzero coefficient positive). Levels are walked
// center-first, and whenever sink(x, norm2) returns true the bound
// contracts to norm2, so searches for a minimum touch few nodes.
template <class S, class Sink>
void enumerate_ball(const Basis<S>& b, const GSData<S>& g, S bound2, Sink&& sink,
                    long node_budget = 2000000) {
    int m = b.dim();
    std::vector<mpz_class> x(m, 0);
    std::vector<S> partial(m + 1, Ops<S>::zero()); // partial[i]: contribution of levels >= i
    long nodes = 0;

    auto rec = [&](auto&& self, int level, bool top_positive_only) -> void {
        S c = Ops<S>::zero();
        for (int j = level + 1; j < m; ++j) c -= g.mu[j][level] * Ops<S>::from_z(x[j]);
        if (bound2 < partial[level + 1]) return;
        double cd = Ops<S>::dbl(c);
        long v0 = static_cast<long>(std::llround(cd));
        if (top_positive_only && v0 < 0) v0 = 0;

        auto visit = [&](long v) -> bool { // false: this direction is exhausted
            if (top_positive_only && v < 0) return false;
            if (++nodes > node_budget) throw EnumBudget("lattice enumeration budget exceeded");
            S dv = Ops<S>::from_z(mpz_class(v)) - c;
            S term = g.Bst[level] * dv * dv;
            S tot = partial[level + 1] + term;
            if (bound2 < tot) return false;
            x[level] = v;
            partial[level] = tot;
            if (level == 0) {
                bool all_zero = true;
                for (int j = 0; j < m; ++j)
                    if (x[j] != 0) all_zero = false;
                if (!all_zero && sink(x, partial[0])) bound2 = partial[0];
            } else {
                self(self, level - 1, top_positive_only && v == 0);
            }
            return true;
        };

        // zig-zag outward from the (clamped) center; a direction stops
        // once its quadratic term outruns the remaining budget
        bool up = true, down = true;
        visit(v0);
        for (long j = 1; up || down; ++j) {
            if (up && !visit(v0 + j)) up = false;
            if (down && !visit(v0 - j)) down = false;
        }
        x[level] = 0;
    };
    rec(rec, m - 1, true);
}

template <class S>
Shortest shortest_impl(const Basis<S>& input) {
    int m = input.dim();
    if (m < 1 || m > 8) throw std::invalid_argument("shortest vector supported for dimension 1..8");
    Basis<S> b = input;
    Reduction red = lll_impl(b, 0.99);
    GSData<S> g = gram_schmidt(b);

    // initial radius: the smallest reduced column, padded a hair so the
    // column itself survives the round-off of the orthogonalized route
    S best2 = dot_cols(b.cols[0], b.cols[0]);
    for (int j = 1; j < m; ++j) {
        S n2 = dot_cols(b.cols[j], b.cols[j]);
        if (n2 < best2) best2 = n2;
    }
    best2 = best2 * Ops<S>::of_double(1.0 + 1e-9);

    auto to_original = [&](const std::vector<mpz_class>& x) {
        std::vector<mpz_class> o(static_cast<size_t>(m), 0);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                o[static_cast<size_t>(i)] += red.transform[i][j] * x[static_cast<size_t>(j)];
        for (auto& v : o) { // canonical sign: leading nonzero positive
            if (v != 0) {
                if (v < 0)
                    for (auto& u : o) u = -u;
                break;
            }
        }
        return o;
    };

    std::vector<mpz_class> best_orig;
    S bestn2 = best2;
    bool have = false;
    enumerate_ball(b, g, best2, [&](const std::vector<mpz_class>& x, const S& n2) {
        if (!have || n2 < bestn2) {
            bestn2 = n2;
            best_orig = to_original(x);
            have = true;
        } else if (!(bestn2 < n2)) { // tie on length: lexicographic coefficients win
            std::vector<mpz_class> cand = to_original(x);
            if (cand < best_orig) best_orig = std::move(cand);
        }
        return true; // keep the bound at the best norm seen
    });
    if (!have) throw std::runtime_error("no lattice vector found within reduction radius");

    Shortest out;
    out.coeffs = best_orig;
    if constexpr (std::is_same_v<S, mpq_class>) {
        out.norm2_exact = bestn2;
        out.length = LogVal(1, Real::of(bestn2).log() / 2L);
    } else {
        Real n2 = bestn2;
        out.length = LogVal(1, n2.log() / 2L);
    }
    return out;
}

} // namespace

mpq_class det_exact(const QBasis& b) {
    int m = b.dim();
    std::vector<std::vector<mpq_class>> a(m, std::vector<mpq_class>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) a[i][j] = b.cols[j][i];
    mpq_class det = 1;
    for (int c = 0; c < m; ++c) {
        int piv = -1;
        for (int r = c; r < m; ++r)
            if (a[r][c] != 0) { piv = r; break; }
        if (piv < 0) return 0;
        if (piv != c) { std::swap(a[piv], a[c]); det = -det; }
        det *= a[c][c];
        for (int r = c + 1; r < m; ++r) {
            if (a[r][c] == 0) continue;
            mpq_class f = a[r][c] / a[c][c];
            for (int k = c; k < m; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return det;
}

QBasis u_of_y(const std::vector<mpq_class>& y) {
    int n = static_cast<int>(y.size());
    QBasis b;
    b.cols.assign(n + 1, std::vector<mpq_class>(n + 1, 0));
    for (int j = 0; j < n; ++j) {
        b.cols[j][j] = 1;
        b.cols[j][n] = y[static_cast<size_t>(j)];
    }
    b.cols[n][n] = 1;
    return b;
}

RBasis u_of_y_real(const RealVec& y) {
    int n = static_cast<int>(y.size());
    RBasis b;
    b.cols.assign(n + 1, std::vector<Real>(n + 1, Real::of(0L)));
    for (int j = 0; j < n; ++j) {
        b.cols[j][static_cast<size_t>(j)] = Real::of(1L);
        b.cols[j][static_cast<size_t>(n)] = y[static_cast<size_t>(j)];
    }
    b.cols[n][static_cast<size_t>(n)] = Real::of(1L);
    return b;
}

FlowVec make_flow(RealVec t) {
    FlowVec f;
    Real total = Real::of(0L);
    for (const auto& ti : t) {
        if (ti.sgn() < 0) throw std::invalid_argument("flow components must be nonnegative");
        total += ti;
    }
    f.t = std::move(t);
    f.total = total;
    return f;
}

FlowVec make_flow_doubles(const std::vector<double>& t) {
    RealVec rt;
    for (double v : t) rt.push_back(Real::of(v));
    return make_flow(std::move(rt));
}

namespace {

long flow_bits(const FlowVec& f, long base_bits) {
    double tt = f.total.to_double();
    long range = static_cast<long>(4.0 * tt / std::log(2.0)) + 64;
    long bits = std::max<long>(256, base_bits) + range;
    return bits;
}

template <class SIn>
RBasis apply_flow_impl(const Basis<SIn>& b, const FlowVec& f) {
    int m = b.dim();
    int n = m - 1;
    if (static_cast<int>(f.t.size()) != n)
        throw std::invalid_argument("flow dimension must be basis dimension minus one");
    long base_bits = 64;
    if constexpr (std::is_same_v<SIn, Real>) {
        for (const auto& col : b.cols)
            for (const auto& v : col) base_bits = std::max(base_bits, v.bits());
    }
    long bits = flow_bits(f, base_bits);
    RealVec scale;
    for (int i = 0; i < n; ++i) scale.push_back((-f.t[static_cast<size_t>(i)].at(bits)).exp());
    scale.push_back(f.total.at(bits).exp());

    RBasis out;
    out.cols.assign(m, std::vector<Real>(m, Real(bits)));
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
            Real e(bits);
            if constexpr (std::is_same_v<SIn, mpq_class>)
                e = Real::of(b.cols[j][i], bits);
            else
                e = b.cols[j][i].at(bits);
            out.cols[j][i] = e * scale[static_cast<size_t>(i)];
        }
    return out;
}

} // namespace

RBasis apply_flow(const QBasis& b, const FlowVec& f) { return apply_flow_impl(b, f); }
RBasis apply_flow(const RBasis& b, const FlowVec& f) { return apply_flow_impl(b, f); }

Real log_abs_det(const RBasis& b) {
    int m = b.dim();
    std::vector<std::vector<Real>> a(m, std::vector<Real>(m));
    long bits = 256;
    for (const auto& col : b.cols)
        for (const auto& v : col) bits = std::max(bits, v.bits());
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) a[i][j] = b.cols[j][i];
    Real logdet = Real::of(0L, bits);
    for (int c = 0; c < m; ++c) {
        int piv = -1;
        Real bestmag = Real::of(0L, bits);
        for (int r = c; r < m; ++r) {
            Real mag = a[r][c].abs();
            if (piv < 0 || mag > bestmag) { piv = r; bestmag = mag; }
        }
        if (bestmag.is_zero()) throw std::domain_error("singular basis");
        std::swap(a[piv], a[c]);
        logdet += a[c][c].abs().log();
        for (int r = c + 1; r < m; ++r) {
            if (a[r][c].is_zero()) continue;
            Real f = a[r][c] / a[c][c];
            for (int k = c; k < m; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return logdet;
}

Reduction lll_reduce(QBasis& b, double delta) { return lll_impl(b, delta); }
Reduction lll_reduce(RBasis& b, double delta) { return lll_impl(b, delta); }

Shortest shortest_vector(const QBasis& b) { return shortest_impl(b); }
Shortest shortest_vector(const RBasis& b) { return shortest_impl(b); }

Shortest brute_force_shortest(const QBasis& b, long box) {
    int m = b.dim();
    std::vector<mpz_class> x(m, 0), best;
    mpq_class bestn2;
    bool have = false;
    std::vector<long> idx(m, -box);
    for (;;) {
        bool all_zero = true;
        for (long v : idx)
            if (v != 0) all_zero = false;
        if (!all_zero) {
            // norm^2 of sum idx_j col_j
            std::vector<mpq_class> vec(m, 0);
            for (int j = 0; j < m; ++j)
                if (idx[j] != 0)
                    for (int i = 0; i < m; ++i) vec[i] += mpq_class(idx[j]) * b.cols[j][i];
            mpq_class n2 = 0;
            for (int i = 0; i < m; ++i) n2 += vec[i] * vec[i];
            std::vector<mpz_class> cand(m);
            for (int j = 0; j < m; ++j) cand[j] = idx[j];
            for (auto& v : cand) {
                if (v != 0) {
                    if (v < 0)
                        for (auto& u : cand) u = -u;
                    break;
                }
            }
            if (!have || n2 < bestn2 || (n2 == bestn2 && cand < best)) {
                have = true;
                bestn2 = n2;
                best = cand;
            }
        }
        int k = m - 1;
        while (k >= 0 && idx[k] == box) idx[k--] = -box;
        if (k < 0) break;
        ++idx[k];
    }
    Shortest out;
    out.coeffs = best;
    out.norm2_exact = bestn2;
    out.length = LogVal(1, Real::of(bestn2).log() / 2L);
    return out;
}

namespace {

// mpfr values are dyadic rationals; recover one exactly
mpq_class real_to_exact(const Real& x) {
    if (x.is_zero()) return mpq_class(0);
    mpz_class m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x.raw());
    mpq_class q(m);
    if (e >= 0) {
        mpz_class two = 1;
        mpz_mul_2exp(two.get_mpz_t(), two.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
        q *= two;
    } else {
        mpz_class two = 1;
        mpz_mul_2exp(two.get_mpz_t(), two.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
        q /= two;
    }
    q.canonicalize();
    return q;
}

} // namespace

bool in_K_eps(const QBasis& b, const Real& eps) {
    if (eps.sgn() <= 0) throw std::invalid_argument("epsilon must be positive");
    Shortest s = shortest_vector(b);
    // exact squared-length comparison; the threshold was itself produced
    // by a rounded square root, so the boundary carries a 2^-128 slack
    mpq_class e2 = real_to_exact(eps);
    e2 = e2 * e2;
    mpz_class scale = 1;
    mpz_mul_2exp(scale.get_mpz_t(), scale.get_mpz_t(), 128);
    mpq_class slack = e2 * mpq_class(mpz_class(scale - 1), scale);
    return s.norm2_exact >= slack;
}

bool in_K_eps(const RBasis& b, const Real& eps) {
    if (eps.sgn() <= 0) throw std::invalid_argument("epsilon must be positive");
    Shortest s = shortest_vector(b);
    Real diff = s.length.lnmag - eps.log();
    return diff.to_double() >= -1e-25;
}

std::optional<StratumVec> stratum_shortest(const RealVec& y, const FlowVec& f, int k,
                                           const Real& norm_cap) {
    int n = static_cast<int>(y.size());
    if (k < 1 || k > n) throw std::invalid_argument("stratum index must be in 1..n");
    long base_bits = 64;
    for (const auto& v : y) base_bits = std::max(base_bits, v.bits());
    long bits = flow_bits(f, base_bits);
    Real et = f.total.at(bits).exp();
    RealVec contr, yb;
    for (int i = 0; i < n; ++i) contr.push_back((-f.t[static_cast<size_t>(i)].at(bits)).exp());
    for (int i = 0; i < n; ++i) yb.push_back(y[static_cast<size_t>(i)].at(bits));

    std::vector<int> support(static_cast<size_t>(k));
    std::optional<StratumVec> best;
    Real cap2 = norm_cap * norm_cap;

    auto try_support = [&](const std::vector<int>& sup) {
        // a full-support vector has |coord_i| >= e^{-t_i} on the support,
        // so the support is dead once that alone reaches the cap
        Real floor2 = Real::of(0L, bits);
        for (int i = 0; i < k; ++i) {
            const Real& c = contr[static_cast<size_t>(sup[static_cast<size_t>(i)])];
            floor2 += c * c;
        }
        if (!(floor2 < norm_cap.at(bits) * norm_cap.at(bits))) return;

        // (k+1)-dim flowed basis on rows sup + last
        RBasis b;
        int m = k + 1;
        b.cols.assign(m, std::vector<Real>(m, Real(bits)));
        for (int j = 0; j < k; ++j) {
            for (int i = 0; i < k; ++i) b.cols[j][i] = Real::of(0L, bits);
            b.cols[j][static_cast<size_t>(j)] = contr[static_cast<size_t>(sup[static_cast<size_t>(j)])];
            b.cols[j][static_cast<size_t>(k)] = et * yb[static_cast<size_t>(sup[static_cast<size_t>(j)])];
        }
        for (int i = 0; i < k; ++i) b.cols[k][static_cast<size_t>(i)] = Real::of(0L, bits);
        b.cols[k][static_cast<size_t>(k)] = et;

        Basis<Real> red = b;
        Reduction tr = lll_impl(red, 0.99);
        GSData<Real> g = gram_schmidt(red);
        try {
            enumerate_ball(red, g, cap2, [&](const std::vector<mpz_class>& x, const Real& n2) {
                // map to original coefficients (q on support, then p)
                std::vector<mpz_class> orig(static_cast<size_t>(m), 0);
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j)
                        orig[static_cast<size_t>(i)] += tr.transform[i][j] * x[static_cast<size_t>(j)];
                for (int i = 0; i < k; ++i)
                    if (orig[static_cast<size_t>(i)] == 0) return false; // support must be full
                LogVal nrm(1, n2.log() / 2L);
                if (best && cmp_mag(nrm, best->norm) >= 0) return true;
                StratumVec sv;
                sv.q.assign(static_cast<size_t>(n), 0);
                for (int i = 0; i < k; ++i)
                    sv.q[static_cast<size_t>(sup[static_cast<size_t>(i)])] = orig[static_cast<size_t>(i)];
                sv.p = orig[static_cast<size_t>(k)];
                sv.norm = nrm;
                best = sv;
                return true;
            }, 50000);
        } catch (const EnumBudget&) {
            // budget hit: keep the best qualifying vector found so far
        }
    };

    // iterate all k-subsets of {0..n-1}
    for (int i = 0; i < k; ++i) support[static_cast<size_t>(i)] = i;
    for (;;) {
        try_support(support);
        int i = k - 1;
        while (i >= 0 && support[static_cast<size_t>(i)] == n - k + i) --i;
        if (i < 0) break;
        ++support[static_cast<size_t>(i)];
        for (int j = i + 1; j < k; ++j) support[static_cast<size_t>(j)] = support[static_cast<size_t>(j - 1)] + 1;
    }
    return best;
}

} // namespace dioph
