#pragma once

#include "dioph/logval.hpp"
#include "dioph/real.hpp"
#include "dioph/vec.hpp"
#include <optional>
#include <vector>

namespace dioph {

/**
 * Square basis with columns as basis vectors. The exact variant carries
 * rational entries and an exactly computable determinant; the real variant
 * is used once a diagonal flow has scaled the rows beyond any fixed range
 * (mpfr keeps sign + mantissa + unbounded exponent, so magnitudes like
 * e^{±200} are representable without loss).
 */
template <class S>
struct Basis {
    std::vector<std::vector<S>> cols; // cols[j][i]
    int dim() const { return static_cast<int>(cols.size()); }
};

using QBasis = Basis<mpq_class>;
using RBasis = Basis<Real>;

mpq_class det_exact(const QBasis& b);

// Unipotent embedding: identity with y in the last row; maps integer
// (q, p) to (q, <q,y> + p). Determinant 1 by construction.
QBasis u_of_y(const std::vector<mpq_class>& y);
RBasis u_of_y_real(const RealVec& y);

struct FlowVec {
    RealVec t;  // nonnegative components
    Real total; // sum of components
};
FlowVec make_flow(RealVec t);
FlowVec make_flow_doubles(const std::vector<double>& t);

// Row scaling diag(e^{-t_1},...,e^{-t_n}, e^{t}); volume preserved since
// the scalings cancel in log domain.
RBasis apply_flow(const QBasis& b, const FlowVec& f);
RBasis apply_flow(const RBasis& b, const FlowVec& f);

// log |det| via LU in the basis' own precision (flowed bases only;
// exact bases use det_exact)
Real log_abs_det(const RBasis& b);

struct Reduction {
    // reduced = original * transform, transform integer with det ±1
    std::vector<std::vector<mpz_class>> transform;
    mpz_class transform_det;
};

Reduction lll_reduce(QBasis& b, double delta = 0.99);
Reduction lll_reduce(RBasis& b, double delta = 0.99);

struct Shortest {
    IntVec coeffs;      // w.r.t. the basis handed in, sign-canonical
    LogVal length;      // Euclidean norm
    mpq_class norm2_exact; // set only for the exact path
};

// Exact minimizer of the Euclidean norm over nonzero lattice vectors;
// reduction accelerates, enumeration certifies. dim <= 8.
Shortest shortest_vector(const QBasis& b);
Shortest shortest_vector(const RBasis& b);

// Exhaustive reference: min over integer coefficients in [-box, box]^dim.
Shortest brute_force_shortest(const QBasis& b, long box);

bool in_K_eps(const QBasis& b, const Real& eps);
bool in_K_eps(const RBasis& b, const Real& eps);

/**
 * Shortest vector of the flowed lattice restricted to vectors whose first
 * n integer coordinates have exactly k nonzero entries, searched within
 * the given norm cap. The restriction is not a sublattice, so this
 * enumerates per support.
 */
struct StratumVec {
    IntVec q;        // n entries, exactly k nonzero
    mpz_class p;
    LogVal norm;
};
std::optional<StratumVec> stratum_shortest(const RealVec& y, const FlowVec& f, int k,
                                           const Real& norm_cap);

} // namespace dioph
