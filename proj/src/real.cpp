#include "dioph/real.hpp"

#include <atomic>
#include <cstdio>
#include <vector>

namespace dioph {

namespace {
std::atomic<long> g_default_bits{256};
}

long Real::default_bits() { return g_default_bits.load(std::memory_order_relaxed); }

void Real::set_default_bits(long bits) {
    if (bits < kMinBits) throw std::invalid_argument("mantissa bits must be >= 64");
    g_default_bits.store(bits, std::memory_order_relaxed);
}

Real Real::of(double x, long bits) {
    Real r(bits ? bits : default_bits());
    mpfr_set_d(r.v_, x, MPFR_RNDN);
    return r;
}

Real Real::of(long x, long bits) {
    Real r(bits ? bits : default_bits());
    mpfr_set_si(r.v_, x, MPFR_RNDN);
    return r;
}

Real Real::of(const mpz_class& z, long bits) {
    long need = bits ? bits : default_bits();
    long zb = static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2)) + 8;
    Real r(need > zb ? need : zb);
    mpfr_set_z(r.v_, z.get_mpz_t(), MPFR_RNDN);
    return r;
}

Real Real::of(const mpq_class& q, long bits) {
    Real r(bits ? bits : default_bits());
    mpfr_set_q(r.v_, q.get_mpq_t(), MPFR_RNDN);
    return r;
}

Real Real::parse(const std::string& s, long bits) {
    if (s.find('/') != std::string::npos) {
        mpq_class q(s);
        q.canonicalize();
        return of(q, bits);
    }
    Real r(bits ? bits : default_bits());
    if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
        throw std::invalid_argument("unparseable real literal: " + s);
    return r;
}

Real Real::pi(long bits) {
    Real r(bits ? bits : default_bits());
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
}

Real Real::sqrt_of(unsigned long k, long bits) {
    Real r(bits ? bits : default_bits());
    mpfr_sqrt_ui(r.v_, k, MPFR_RNDN);
    return r;
}

Real Real::golden_ratio(long bits) {
    long b = bits ? bits : default_bits();
    Real r = sqrt_of(5, b);
    mpfr_add_ui(r.v_, r.v_, 1, MPFR_RNDN);
    mpfr_div_ui(r.v_, r.v_, 2, MPFR_RNDN);
    return r;
}

std::string Real::str(int digits) const {
    if (is_nan()) return "nan";
    if (is_zero()) return "0";
    char fmt[32];
    std::snprintf(fmt, sizeof fmt, "%%.%dRe", digits);
    std::vector<char> buf(static_cast<size_t>(digits) + 64);
    mpfr_snprintf(buf.data(), buf.size(), fmt, v_);
    return std::string(buf.data());
}

mpz_class Real::round_even() const {
    Real t(bits());
    mpfr_rint(t.v_, v_, MPFR_RNDN); // ties to even
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), t.v_, MPFR_RNDN);
    return z;
}

mpz_class Real::floor_z() const {
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDD);
    return z;
}

mpz_class Real::ceil_z() const {
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDU);
    return z;
}

std::pair<double, double> Real::split2() const {
    double hi = mpfr_get_d(v_, MPFR_RNDN);
    Real rem(bits());
    mpfr_sub_d(rem.v_, v_, hi, MPFR_RNDN);
    double lo = mpfr_get_d(rem.v_, MPFR_RNDN);
    return {hi, lo};
}

} // namespace dioph
