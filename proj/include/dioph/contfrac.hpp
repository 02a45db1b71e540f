#pragma once

#include "dioph/real.hpp"
#include "dioph/rat.hpp"
#include <vector>

namespace dioph {

struct Convergent {
    mpz_class p, q; // p/q with q >= 1, q strictly increasing along the expansion
};

/**
 * Finite continued fraction [a0; a1, a2, ...] with its convergent table.
 * Quotients after the first are >= 1; a terminating expansion is kept in
 * the canonical form whose last quotient is >= 2 (unless it is a bare
 * integer [a0]).
 */
struct ContinuedFraction {
    std::vector<mpz_class> quotients;
    std::vector<Convergent> convergents;

    static ContinuedFraction expand(const mpq_class& x);

    void push(const mpz_class& a);
    size_t depth() const { return quotients.size(); }
};

/**
 * A number engineered so that its simultaneous-approximation exponent
 * lands at a chosen target tau >= 1. The quotient rule
 * a_{k+1} = max(1, ceil(q_k^{tau-1})) makes the convergent errors track
 * q_k^{-tau}. The realized value is the exact rational one step past the
 * requested depth, so every stored convergent error is exactly computable.
 */
struct PrescribedNumber {
    double target_tau = 1.0;
    int depth = 0;
    ContinuedFraction cf; // depth+2 quotients: index 0..depth+1
    mpq_class exact;      // convergent depth+1, the realized value
    Real value;           // exact rounded to a wide enough mantissa

    mpq_class convergent_error(int k) const; // |q_k * exact - p_k|, exact
    double convergent_quality(int k) const;  // -ln e_k / ln q_k; +inf if e_k = 0
    // Approximation-exponent readout: best quality among the deepest
    // stored convergents (the shallow ones have not converged yet).
    double measured_sigma() const;
};

// tau >= 1, depth >= 5. Throws if the construction outgrows max_bits.
PrescribedNumber build_prescribed(double tau, int depth, long max_bits = 1 << 16);

} // namespace dioph
