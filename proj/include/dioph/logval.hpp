#pragma once

#include "dioph/real.hpp"

namespace dioph {

/**
 * LogVal: a real number held as (sign, ln|value|).
 *
 * Quantities like e^t and e^{-ct} for t up to hundreds overflow any
 * fixed-range float, so inequality work happens on the logarithms.
 * sign == 0 means the value is exactly zero, in which case the log
 * field is meaningless.
 */
struct LogVal {
    int sign = 0;
    Real lnmag; // natural log of |value|; ignored when sign == 0

    LogVal() = default;
    LogVal(int s, Real ln) : sign(s), lnmag(std::move(ln)) {}

    static LogVal zero() { return LogVal(); }
    static LogVal one() { return LogVal(1, Real::of(0L)); }
    static LogVal from_real(const Real& x) {
        if (x.is_zero()) return zero();
        return LogVal(x.sgn(), x.abs().log());
    }
    static LogVal exp_of(const Real& t) { return LogVal(1, t); }

    bool is_zero() const { return sign == 0; }
    Real to_real(long bits = 0) const {
        if (sign == 0) return Real::of(0L, bits);
        Real m = lnmag.exp();
        return sign < 0 ? -m : m;
    }
    double ln_double() const { return lnmag.to_double(); }

    LogVal abs() const { return sign == 0 ? zero() : LogVal(1, lnmag); }

    friend LogVal operator*(const LogVal& a, const LogVal& b) {
        if (a.sign == 0 || b.sign == 0) return zero();
        return LogVal(a.sign * b.sign, a.lnmag + b.lnmag);
    }
    friend LogVal operator/(const LogVal& a, const LogVal& b) {
        if (b.sign == 0) throw std::domain_error("log-domain division by zero");
        if (a.sign == 0) return zero();
        return LogVal(a.sign * b.sign, a.lnmag - b.lnmag);
    }
    LogVal pow(const Real& e) const {
        if (sign == 0) return zero();
        if (sign < 0) throw std::domain_error("log-domain power of negative value");
        return LogVal(1, lnmag * e);
    }

    // Magnitude comparison: -1, 0, +1 as |a| <,=,> |b|. Zero handled first.
    friend int cmp_mag(const LogVal& a, const LogVal& b) {
        if (a.sign == 0 && b.sign == 0) return 0;
        if (a.sign == 0) return -1;
        if (b.sign == 0) return 1;
        if (a.lnmag < b.lnmag) return -1;
        if (a.lnmag > b.lnmag) return 1;
        return 0;
    }
    // |a| <= e^bound ?
    bool mag_le_exp(const Real& bound) const {
        return sign == 0 || lnmag <= bound;
    }
};

} // namespace dioph
