#pragma once

#include "dioph/real.hpp"
#include <vector>
#include <stdexcept>

namespace dioph {

using IntVec = std::vector<mpz_class>;
using RealVec = std::vector<Real>;

// max(1, |x|)
inline Real plus_abs(const Real& x) {
    Real a = x.abs();
    return a >= Real::of(1L, a.bits()) ? a : Real::of(1L, a.bits());
}
inline mpz_class plus_abs(const mpz_class& x) {
    mpz_class a = abs(x);
    return a >= 1 ? a : mpz_class(1);
}

// Multiplicative height: product of max(1, |entry|). Always >= 1.
inline mpz_class mult_height(const IntVec& v) {
    mpz_class p = 1;
    for (const auto& x : v) p *= plus_abs(x);
    return p;
}
inline Real mult_height(const RealVec& v) {
    if (v.empty()) throw std::invalid_argument("empty vector");
    Real p = Real::of(1L);
    for (const auto& x : v) p *= plus_abs(x);
    return p;
}

inline mpz_class sup_norm(const IntVec& v) {
    mpz_class m = 0;
    for (const auto& x : v) {
        mpz_class a = abs(x);
        if (a > m) m = a;
    }
    return m;
}
inline Real sup_norm(const RealVec& v) {
    if (v.empty()) throw std::invalid_argument("empty vector");
    Real m = Real::of(0L);
    for (const auto& x : v) {
        Real a = x.abs();
        if (a > m) m = a;
    }
    return m;
}

inline Real euclid_norm(const RealVec& v) {
    if (v.empty()) throw std::invalid_argument("empty vector");
    Real s = Real::of(0L);
    for (const auto& x : v) s += x * x;
    return s.sqrt();
}
inline Real euclid_norm(const IntVec& v) {
    mpz_class s = 0;
    for (const auto& x : v) s += x * x;
    return Real::of(s).sqrt();
}

inline Real dot(const IntVec& q, const RealVec& y) {
    if (q.size() != y.size()) throw std::invalid_argument("dimension mismatch");
    Real s = Real::of(0L, y.empty() ? Real::default_bits() : y[0].bits());
    for (size_t i = 0; i < q.size(); ++i) s += Real::of(q[i]) * y[i];
    return s;
}

} // namespace dioph
