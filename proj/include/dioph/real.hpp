#pragma once

#include <mpfr.h>
#include <gmpxx.h>
#include <string>
#include <stdexcept>
#include <utility>

namespace dioph {

/**
 * Real: a floating value with an explicit mantissa width.
 *
 * Every value remembers how many mantissa bits it carries, and arithmetic
 * allocates the result at the widest precision of its operands, so a chain
 * of operations never silently narrows. The process-wide default (256 bits)
 * can be raised once at startup; 64 bits is the floor.
 */
class Real {
public:
    static constexpr long kMinBits = 64;

    static long default_bits();
    static void set_default_bits(long bits);

    Real() { mpfr_init2(v_, default_bits()); mpfr_set_zero(v_, 1); }
    explicit Real(long bits_) { mpfr_init2(v_, clamp(bits_)); mpfr_set_zero(v_, 1); }

    Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(Real&& o) noexcept { mpfr_init2(v_, kMinBits); mpfr_swap(v_, o.v_); }
    Real& operator=(const Real& o) {
        if (this != &o) { mpfr_set_prec(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
        return *this;
    }
    Real& operator=(Real&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
    ~Real() { mpfr_clear(v_); }

    static Real of(double x, long bits = 0);
    static Real of(long x, long bits = 0);
    static Real of(int x, long bits = 0) { return of(static_cast<long>(x), bits); }
    static Real of(const mpz_class& z, long bits = 0);
    static Real of(const mpq_class& q, long bits = 0);
    // Parses a decimal string ("1.25e-3") or a rational string ("p/q").
    static Real parse(const std::string& s, long bits = 0);

    static Real pi(long bits = 0);
    static Real sqrt_of(unsigned long k, long bits = 0);
    static Real golden_ratio(long bits = 0);

    // Same value carried at a different mantissa width (never narrows
    // below the minimum).
    Real at(long bits_) const {
        Real r(clamp(bits_));
        mpfr_set(r.v_, v_, MPFR_RNDN);
        return r;
    }

    long bits() const { return mpfr_get_prec(v_); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_nan() const { return mpfr_nan_p(v_) != 0; }
    int sgn() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    // Decimal emission with explicit significant-digit count.
    std::string str(int digits = 20) const;

    Real operator-() const { Real r(bits()); mpfr_neg(r.v_, v_, MPFR_RNDN); return r; }
    Real abs() const { Real r(bits()); mpfr_abs(r.v_, v_, MPFR_RNDN); return r; }

    friend Real operator+(const Real& a, const Real& b) { Real r(join(a, b)); mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real operator-(const Real& a, const Real& b) { Real r(join(a, b)); mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real operator*(const Real& a, const Real& b) { Real r(join(a, b)); mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real operator/(const Real& a, const Real& b) { Real r(join(a, b)); mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }

    Real& operator+=(const Real& b) { mpfr_prec_round(v_, join(*this, b), MPFR_RNDN); mpfr_add(v_, v_, b.v_, MPFR_RNDN); return *this; }
    Real& operator-=(const Real& b) { mpfr_prec_round(v_, join(*this, b), MPFR_RNDN); mpfr_sub(v_, v_, b.v_, MPFR_RNDN); return *this; }
    Real& operator*=(const Real& b) { mpfr_prec_round(v_, join(*this, b), MPFR_RNDN); mpfr_mul(v_, v_, b.v_, MPFR_RNDN); return *this; }

    friend Real operator*(const Real& a, long b) { Real r(a.bits()); mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN); return r; }
    friend Real operator/(const Real& a, long b) { Real r(a.bits()); mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN); return r; }
    friend Real operator+(const Real& a, long b) { Real r(a.bits()); mpfr_add_si(r.v_, a.v_, b, MPFR_RNDN); return r; }
    friend Real operator-(const Real& a, long b) { Real r(a.bits()); mpfr_sub_si(r.v_, a.v_, b, MPFR_RNDN); return r; }

    friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
    friend bool operator>=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }
    friend bool operator==(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) == 0; }
    friend bool operator!=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) != 0; }
    friend int cmpabs(const Real& a, const Real& b) { return mpfr_cmpabs(a.v_, b.v_); }

    Real sqrt() const { Real r(bits()); mpfr_sqrt(r.v_, v_, MPFR_RNDN); return r; }
    Real log() const { Real r(bits()); mpfr_log(r.v_, v_, MPFR_RNDN); return r; }
    Real exp() const { Real r(bits()); mpfr_exp(r.v_, v_, MPFR_RNDN); return r; }
    Real pow(const Real& e) const { Real r(join(*this, e)); mpfr_pow(r.v_, v_, e.v_, MPFR_RNDN); return r; }

    // Nearest integer, ties to even.
    mpz_class round_even() const;
    mpz_class floor_z() const;
    mpz_class ceil_z() const;

    // Splits into hi + lo doubles (for the fast enumeration paths).
    std::pair<double, double> split2() const;

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

private:
    static long clamp(long b) { return b < kMinBits ? kMinBits : b; }
    static long join(const Real& a, const Real& b) {
        long pa = mpfr_get_prec(a.v_), pb = mpfr_get_prec(b.v_);
        return pa > pb ? pa : pb;
    }
    mpfr_t v_;
};

} // namespace dioph
