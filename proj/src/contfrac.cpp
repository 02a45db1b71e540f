#include "dioph/contfrac.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dioph {

void ContinuedFraction::push(const mpz_class& a) {
    if (!quotients.empty() && a < 1)
        throw std::invalid_argument("continued-fraction quotient must be >= 1");
    // seed values p_{-1} = 1, q_{-1} = 0, p_{-2} = 0, q_{-2} = 1
    size_t k = convergents.size();
    mpz_class pm1 = k >= 1 ? convergents[k - 1].p : mpz_class(1);
    mpz_class qm1 = k >= 1 ? convergents[k - 1].q : mpz_class(0);
    mpz_class pm2 = k >= 2 ? convergents[k - 2].p : (k == 1 ? mpz_class(1) : mpz_class(0));
    mpz_class qm2 = k >= 2 ? convergents[k - 2].q : (k == 1 ? mpz_class(0) : mpz_class(1));
    convergents.push_back({a * pm1 + pm2, a * qm1 + qm2});
    quotients.push_back(a);
}

ContinuedFraction ContinuedFraction::expand(const mpq_class& x) {
    if (x < 0) throw std::invalid_argument("continued-fraction expansion expects x >= 0");
    ContinuedFraction cf;
    mpz_class num = x.get_num(), den = x.get_den();
    while (den != 0) {
        mpz_class a, r;
        mpz_fdiv_qr(a.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        cf.push(a);
        num = den;
        den = r;
    }
    // canonical form: last quotient >= 2 for multi-term expansions
    if (cf.quotients.size() > 1 && cf.quotients.back() == 1) {
        cf.quotients.pop_back();
        cf.convergents.pop_back();
        mpz_class last = cf.quotients.back() + 1;
        cf.quotients.pop_back();
        cf.convergents.pop_back();
        cf.push(last);
    }
    return cf;
}

mpq_class PrescribedNumber::convergent_error(int k) const {
    const auto& c = cf.convergents.at(static_cast<size_t>(k));
    mpq_class e = mpq_class(c.q) * exact - mpq_class(c.p);
    if (e < 0) e = -e;
    return e;
}

double PrescribedNumber::convergent_quality(int k) const {
    mpq_class e = convergent_error(k);
    const mpz_class& q = cf.convergents.at(static_cast<size_t>(k)).q;
    if (e == 0) return std::numeric_limits<double>::infinity();
    if (q <= 1) return 0.0;
    // logs of big rationals via mpfr
    Real le = Real::of(e).log();
    Real lq = Real::of(q).log();
    return -(le / lq).to_double();
}

double PrescribedNumber::measured_sigma() const {
    int lo = depth - 2;
    if (lo < 3) lo = 3;
    if (lo > depth) lo = depth;
    double best = 0.0;
    for (int k = lo; k <= depth; ++k) {
        double v = convergent_quality(k);
        if (v > best) best = v;
    }
    return best;
}

namespace {

// ceil(q^(tau-1)), exact for integral tau, mpfr with generous guard bits
// otherwise. The quotient rule only needs a deterministic value close to
// q^(tau-1).
mpz_class quotient_rule(const mpz_class& q, double tau) {
    double frac = tau - std::floor(tau);
    if (frac == 0.0) {
        unsigned long e = static_cast<unsigned long>(tau) - 1;
        if (e == 0) return 1;
        mpz_class r;
        mpz_pow_ui(r.get_mpz_t(), q.get_mpz_t(), e);
        return r;
    }
    long qbits = static_cast<long>(mpz_sizeinbase(q.get_mpz_t(), 2));
    long prec = static_cast<long>((tau - 1.0) * static_cast<double>(qbits)) + 128;
    Real base = Real::of(q, prec);
    Real p = base.log() * Real::of(tau - 1.0, prec);
    mpz_class r = p.exp().ceil_z();
    return r < 1 ? mpz_class(1) : r;
}

} // namespace

PrescribedNumber build_prescribed(double tau, int depth, long max_bits) {
    if (tau < 1.0) throw std::invalid_argument("prescribed exponent needs tau >= 1");
    if (depth < 5) throw std::invalid_argument("prescribed construction needs depth >= 5");

    PrescribedNumber out;
    out.target_tau = tau;
    out.depth = depth;

    ContinuedFraction& cf = out.cf;
    cf.push(1); // a0 = 1: value lands in [1, 2)
    for (int k = 1; k <= depth + 1; ++k) {
        const mpz_class& qprev = cf.convergents.back().q;
        if (mpz_sizeinbase(qprev.get_mpz_t(), 2) > 4096)
            throw std::domain_error("prescribed construction: denominator past 2^4096, reduce depth");
        mpz_class a = quotient_rule(qprev, tau);
        if (a < 1) a = 1;
        cf.push(a);
    }

    const Convergent& last = cf.convergents.back();
    out.exact = mpq_class(last.p, last.q);
    out.exact.canonicalize();

    long need = static_cast<long>(mpz_sizeinbase(last.q.get_mpz_t(), 2)) * 2 + 64;
    if (need < Real::default_bits()) need = Real::default_bits();
    if (need > max_bits)
        throw std::domain_error("prescribed construction needs a wider mantissa than configured maximum");
    out.value = Real::of(out.exact, need);
    return out;
}

} // namespace dioph
