#include "dioph/exterior.hpp"
#include "dioph/rat.hpp"
#include "dioph/witness.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace dioph {

MultiVector MultiVector::axis(int i) {
    MultiVector m;
    m.degree = 1;
    m.terms[1u << i] = 1;
    return m;
}

MultiVector MultiVector::from_vector(const IntVec& v) {
    MultiVector m;
    m.degree = 1;
    for (size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) m.terms[1u << i] = v[i];
    return m;
}

void MultiVector::add_term(uint32_t mask, const mpz_class& coeff) {
    if (coeff == 0) return;
    if (static_cast<int>(std::popcount(mask)) != degree)
        throw std::invalid_argument("term order does not match multivector degree");
    auto it = terms.find(mask);
    if (it == terms.end()) {
        terms.emplace(mask, coeff);
    } else {
        it->second += coeff;
        if (it->second == 0) terms.erase(it);
    }
}

mpz_class MultiVector::coeff(uint32_t mask) const {
    auto it = terms.find(mask);
    return it == terms.end() ? mpz_class(0) : it->second;
}

mpq_class MultiVector::norm2() const {
    mpz_class s = 0;
    for (const auto& [m, c] : terms) s += c * c;
    return mpq_class(s);
}

namespace {

// parity of interleavings when concatenating two disjoint increasing sets
int merge_sign(uint32_t a, uint32_t b) {
    int sign = 1;
    while (b) {
        uint32_t low = b & (~b + 1u);
        uint32_t above = a & ~(low - 1u) & ~low;
        if (std::popcount(above) & 1) sign = -sign;
        b ^= low;
    }
    return sign;
}

} // namespace

MultiVector wedge(const MultiVector& a, const MultiVector& b, int ambient) {
    if (a.degree + b.degree > ambient)
        throw std::invalid_argument("wedge degree exceeds ambient dimension");
    MultiVector out;
    out.degree = a.degree + b.degree;
    for (const auto& [ma, ca] : a.terms)
        for (const auto& [mb, cb] : b.terms) {
            if (ma & mb) continue;
            int s = merge_sign(ma, mb);
            out.add_term(ma | mb, s > 0 ? mpz_class(ca * cb) : mpz_class(-ca * cb));
        }
    return out;
}

std::vector<MultiVector> contract_components(const MultiVector& w, int ambient) {
    if (w.degree < 1 || w.degree > ambient)
        throw std::invalid_argument("contraction needs degree in 1..ambient");
    uint32_t inner = (1u << (ambient - 1)) - 1u; // axes other than the last
    std::vector<MultiVector> out(static_cast<size_t>(ambient), MultiVector::zero(w.degree - 1));
    for (const auto& [mask, c] : w.terms) {
        for (int i = 0; i < ambient; ++i) {
            uint32_t bit = 1u << i;
            if (!(mask & bit)) continue;
            uint32_t rest = mask ^ bit;
            if (rest & ~inner) continue; // J must avoid the last axis
            int below = std::popcount(mask & (bit - 1u));
            mpz_class signed_c = (below & 1) ? mpz_class(-c) : c;
            out[static_cast<size_t>(i)].add_term(rest, signed_c);
        }
    }
    return out;
}

mpq_class r0c_norm2_exact(const std::vector<mpq_class>& a, const MultiVector& w) {
    int n = static_cast<int>(a.size());
    int ambient = n + 1;
    auto c = contract_components(w, ambient);
    mpq_class total = 0;
    for (int r = 0; r < n; ++r) {
        // row r: a_r * c_1 + c_{r+1}
        std::map<uint32_t, mpq_class> acc;
        for (const auto& [m, coeff] : c[0].terms) acc[m] += a[static_cast<size_t>(r)] * mpq_class(coeff);
        for (const auto& [m, coeff] : c[static_cast<size_t>(r + 1)].terms) acc[m] += mpq_class(coeff);
        for (const auto& [m, v] : acc) total += v * v;
    }
    return total;
}

Real r0c_norm(const std::vector<mpq_class>& a, const MultiVector& w) {
    return Real::of(r0c_norm2_exact(a, w)).sqrt();
}

FlowExpansion flow_expansion(const MultiVector& w, const RealVec& y, const FlowVec& f) {
    int n = static_cast<int>(y.size());
    if (w.degree < 1 || w.degree > n)
        throw std::invalid_argument("flow expansion defined for degree 1..n");
    long bits = 256;
    for (const auto& v : y) bits = std::max(bits, v.bits());
    double tt = f.total.to_double();
    bits += static_cast<long>(4.0 * tt / std::log(2.0)) + 64;

    uint32_t last = 1u << n;

    FlowExpansion fx;
    // contracting family: plain sets inside the first n axes
    for (const auto& [mask, c] : w.terms) {
        if (mask & last) continue;
        Real scale = Real::of(0L, bits);
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) scale -= f.t[static_cast<size_t>(i)].at(bits);
        LogVal v = LogVal::from_real(Real::of(c, bits));
        if (!v.is_zero()) fx.contracting[mask] = LogVal(v.sign, v.lnmag + scale);
    }
    // expanding family: J ∪ {last}; shear mixes in the plain sets
    std::map<uint32_t, Real> shear; // J -> real coefficient before scaling
    for (const auto& [mask, c] : w.terms) {
        if (mask & last) {
            uint32_t J = mask ^ last;
            auto [it, fresh] = shear.try_emplace(J, Real::of(0L, bits));
            it->second += Real::of(c, bits);
        } else {
            for (int i = 0; i < n; ++i) {
                uint32_t bit = 1u << i;
                if (!(mask & bit)) continue;
                uint32_t J = mask ^ bit;
                int above = std::popcount(mask & ~(bit | (bit - 1u)));
                Real term = Real::of(c, bits) * y[static_cast<size_t>(i)].at(bits);
                if (above & 1) term = -term;
                auto [it, fresh] = shear.try_emplace(J, Real::of(0L, bits));
                it->second += term;
            }
        }
    }
    for (const auto& [J, val] : shear) {
        if (val.is_zero()) continue;
        Real scale = f.total.at(bits);
        for (int i = 0; i < n; ++i)
            if (J & (1u << i)) scale -= f.t[static_cast<size_t>(i)].at(bits);
        LogVal v = LogVal::from_real(val);
        fx.expanding[J] = LogVal(v.sign, v.lnmag + scale);
    }

    // squared norm across the orthogonal splitting, accumulated in the
    // exponent-safe domain
    Real acc = Real::of(0L, bits);
    bool any = false;
    for (const auto& [m, v] : fx.contracting) {
        Real mag = (v.lnmag * 2L).exp();
        acc += mag;
        any = true;
    }
    for (const auto& [m, v] : fx.expanding) {
        Real mag = (v.lnmag * 2L).exp();
        acc += mag;
        any = true;
    }
    fx.norm = any ? LogVal(1, acc.log() / 2L) : LogVal::zero();
    return fx;
}

std::vector<MultiVector> rank_bound_violations(int n, int j, long bound,
                                               const std::vector<mpq_class>& a,
                                               uint64_t budget) {
    if (j < 2) throw std::invalid_argument("rank bound concerns degree >= 2");
    if (static_cast<int>(a.size()) != n) throw std::invalid_argument("coefficient count must be n");
    int ambient = n + 1;
    // index sets of order j
    std::vector<uint32_t> masks;
    for (uint32_t m = 0; m < (1u << ambient); ++m)
        if (std::popcount(m) == j) masks.push_back(m);
    size_t nm = masks.size();
    double combos = std::pow(2.0 * static_cast<double>(bound) + 1.0, static_cast<double>(nm));
    if (combos > static_cast<double>(budget))
        throw BudgetError("exhaustive multivector budget exceeded");

    // fast path: integer arithmetic over the common denominator of a
    mpz_class den = 1;
    for (const auto& ar : a) den = den * ar.get_den() / gcd(den, mpz_class(ar.get_den()));
    bool fits = mpz_fits_slong_p(den.get_mpz_t());
    std::vector<long> num(a.size());
    long den_l = fits ? mpz_get_si(den.get_mpz_t()) : 0;
    if (fits) {
        for (size_t r = 0; r < a.size(); ++r) {
            mpq_class scaled = a[r] * den;
            scaled.canonicalize();
            if (!mpz_fits_slong_p(scaled.get_num().get_mpz_t()) ||
                std::llabs(mpz_get_si(scaled.get_num().get_mpz_t())) > (1L << 20))
                fits = false;
            else
                num[r] = mpz_get_si(scaled.get_num().get_mpz_t());
        }
    }
    if (fits && (den_l > (1L << 20))) fits = false;

    // precompute, per degree-(j-1) set J, the positions of terms
    std::vector<uint32_t> jmasks;
    for (uint32_t m = 0; m < (1u << ambient); ++m)
        if (std::popcount(m) == j - 1) jmasks.push_back(m);

    std::vector<MultiVector> violations;
    std::vector<long> coeff(nm, -bound);
    for (;;) {
        bool nonzero = false;
        for (long c : coeff)
            if (c != 0) nonzero = true;
        if (nonzero) {
            MultiVector w;
            w.degree = j;
            for (size_t t = 0; t < nm; ++t)
                if (coeff[t] != 0) w.terms[masks[t]] = coeff[t];
            bool violated;
            if (fits) {
                // ||den * R0 c(w)||^2 < den^2 ?
                auto c = contract_components(w, ambient);
                long long lim = static_cast<long long>(den_l) * den_l;
                long long total = 0;
                bool big = false;
                for (int r = 0; r < n && !big; ++r) {
                    for (uint32_t J : jmasks) {
                        if (J & (1u << n)) continue;
                        long c1 = c[0].terms.count(J) ? mpz_get_si(c[0].terms[J].get_mpz_t()) : 0;
                        long cr = c[static_cast<size_t>(r + 1)].terms.count(J)
                                      ? mpz_get_si(c[static_cast<size_t>(r + 1)].terms[J].get_mpz_t())
                                      : 0;
                        long long v = static_cast<long long>(num[static_cast<size_t>(r)]) * c1 +
                                      static_cast<long long>(den_l) * cr;
                        total += v * v;
                        if (total >= lim) { big = true; break; }
                    }
                }
                violated = !big && total < lim;
            } else {
                violated = r0c_norm2_exact(a, w) < 1;
            }
            if (violated) violations.push_back(std::move(w));
        }
        size_t k = nm;
        while (k > 0 && coeff[k - 1] == bound) coeff[--k] = -bound;
        if (k == 0) break;
        ++coeff[k - 1];
    }
    return violations;
}

std::optional<ConditionViolation> condition_violation_search(
    const std::vector<mpq_class>& a, double d_rate, const FlowVec& f, uint64_t box_budget,
    const std::vector<IntVec>& candidates) {
    int n = static_cast<int>(a.size());
    double total = f.total.to_double();
    double bound_log = -d_rate * total;

    RealVec ar;
    for (const auto& v : a) ar.push_back(Real::of(v));

    auto assess = [&](const IntVec& w) -> std::optional<ConditionViolation> {
        // w = (w_1..w_n, w_0)
        double box_log = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            if (w[static_cast<size_t>(i)] == 0) continue;
            double lw = Real::of(mpz_class(abs(w[static_cast<size_t>(i)]))).log().to_double();
            box_log = std::max(box_log, lw - f.t[static_cast<size_t>(i)].to_double());
        }
        MultiVector mv;
        mv.degree = 1;
        for (int i = 0; i <= n; ++i)
            if (w[static_cast<size_t>(i)] != 0) mv.terms[1u << i] = w[static_cast<size_t>(i)];
        if (mv.is_zero()) return std::nullopt;
        mpq_class n2 = r0c_norm2_exact(a, mv);
        double r0c_log = n2 == 0 ? -std::numeric_limits<double>::infinity()
                                 : Real::of(n2).log().to_double() / 2.0 + total;
        double lhs = std::max(box_log, r0c_log);
        if (lhs < bound_log - 1e-12) return ConditionViolation{w, box_log, r0c_log, bound_log};
        return std::nullopt;
    };

    // structured candidates first: genuine violations live on good
    // rational approximations that a feasible box cannot reach
    for (const auto& cand : candidates) {
        if (static_cast<int>(cand.size()) != n + 1) continue;
        if (auto v = assess(cand)) return v;
    }

    // box enumeration: |w_i| <= e^{t_i + bound_log}
    std::vector<long> lim(static_cast<size_t>(n), 0);
    double volume = 1;
    for (int i = 0; i < n; ++i) {
        double l = std::exp(f.t[static_cast<size_t>(i)].to_double() + bound_log);
        lim[static_cast<size_t>(i)] = static_cast<long>(std::floor(l + 1e-12));
        volume *= 2.0 * static_cast<double>(lim[static_cast<size_t>(i)]) + 1.0;
    }
    if (volume > static_cast<double>(box_budget))
        throw BudgetError("violation-search box exceeds budget");

    IntVec w(static_cast<size_t>(n + 1), mpz_class(0));
    std::vector<long> idx(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = -lim[static_cast<size_t>(i)];
    for (;;) {
        bool nonzero = false;
        for (long v : idx)
            if (v != 0) nonzero = true;
        if (nonzero) {
            for (int i = 0; i < n; ++i) w[static_cast<size_t>(i)] = idx[static_cast<size_t>(i)];
            // w_0 minimizing the last stacked row |a_n w_1 + w_0|
            mpq_class last_row = a[static_cast<size_t>(n - 1)] * mpq_class(w[0]);
            w[static_cast<size_t>(n)] = -nearest_int(last_row);
            if (auto v = assess(w)) return v;
        }
        int k = n - 1;
        while (k >= 0 && idx[static_cast<size_t>(k)] == lim[static_cast<size_t>(k)]) {
            idx[static_cast<size_t>(k)] = -lim[static_cast<size_t>(k)];
            --k;
        }
        if (k < 0) break;
        ++idx[static_cast<size_t>(k)];
    }
    return std::nullopt;
}

} // namespace dioph
