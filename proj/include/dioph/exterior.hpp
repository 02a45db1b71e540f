#pragma once

#include "dioph/lattice.hpp"
#include "dioph/logval.hpp"
#include "dioph/vec.hpp"
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace dioph {

/**
 * Integer multivector: a finite map from strictly increasing index sets
 * (bitmask over axes 0..ambient-1) to coefficients. Zero coefficients are
 * never stored; all stored keys share one popcount (the degree).
 */
struct MultiVector {
    int degree = 0;
    std::map<uint32_t, mpz_class> terms;

    static MultiVector zero(int degree_) { return MultiVector{degree_, {}}; }
    static MultiVector axis(int i); // basis vector e_i (0-based), degree 1
    static MultiVector from_vector(const IntVec& v);

    void add_term(uint32_t mask, const mpz_class& coeff);
    bool is_zero() const { return terms.empty(); }
    mpz_class coeff(uint32_t mask) const;
    mpq_class norm2() const; // sum of squared coefficients (integer-valued)
};

MultiVector wedge(const MultiVector& a, const MultiVector& b, int ambient);

// Signed contractions: component i collects the coefficients of the index
// sets {i} ∪ J with J inside the first (ambient-1) axes, signed by the
// parity of moving i to the front. Result has degree deg(w) - 1.
std::vector<MultiVector> contract_components(const MultiVector& w, int ambient);

// Norm of the stacked products of the (a | I_n) matrix with the
// contraction components: rows a_r * c(w)_1 + c(w)_{r+1}.
mpq_class r0c_norm2_exact(const std::vector<mpq_class>& a, const MultiVector& w);
Real r0c_norm(const std::vector<mpq_class>& a, const MultiVector& w);

/**
 * Coefficients of the flowed, sheared multivector in the orthogonal
 * splitting: plain index sets I inside the contracting axes scale by
 * e^{-sum_{i in I} t_i}; sets J ∪ {last} scale by e^{t - sum_{j in J} t_j}
 * and mix in the shear row. Squared norm = sum of squares across both
 * families.
 */
struct FlowExpansion {
    std::map<uint32_t, LogVal> contracting; // key: I (no last axis)
    std::map<uint32_t, LogVal> expanding;   // key: J (no last axis); actual set J ∪ {last}
    LogVal norm;
};
FlowExpansion flow_expansion(const MultiVector& w, const RealVec& y, const FlowVec& f);

// Exhaustive check that every nonzero degree-j integer multivector with
// coefficients in [-bound, bound] keeps the stacked norm at least 1
// (expected for j >= 2). Returns the violations found (expected empty).
std::vector<MultiVector> rank_bound_violations(int n, int j, long bound,
                                               const std::vector<mpq_class>& a,
                                               uint64_t budget = 1ull << 26);

/**
 * Search for a degree-1 integer vector w = (w_1..w_n, w_0) violating
 *   max(e^{-t_i} |w_i|, e^{t} ||R0 c(w)||) >= e^{-d t}
 * at the given flow: the box implied by the first inequality is
 * enumerated, with w_0 chosen to minimize the last row, and structured
 * candidates (good rational approximations) are checked alongside.
 */
struct ConditionViolation {
    IntVec w; // n+1 entries: w_1..w_n, w_0
    double box_log;     // log of the max over e^{-t_i}|w_i|
    double r0c_log;     // log of e^t ||R0 c(w)||
    double bound_log;   // log of e^{-d t}
};
std::optional<ConditionViolation> condition_violation_search(
    const std::vector<mpq_class>& a, double d_rate, const FlowVec& f, uint64_t box_budget = 1ull << 21,
    const std::vector<IntVec>& candidates = {});

} // namespace dioph
