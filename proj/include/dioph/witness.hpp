#pragma once

#include "dioph/logval.hpp"
#include "dioph/point.hpp"
#include "dioph/vec.hpp"
#include <stdexcept>
#include <vector>

namespace dioph {

struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class EstMode { Omega, OmegaTimes, Sigma };

const char* mode_name(EstMode m);

/**
 * A witness is a nonzero integer pair (q, p) with its exact residual and
 * the exponent it certifies. For the linear-form modes p is a scalar;
 * for simultaneous mode q is a scalar and p a vector.
 */
struct Witness {
    IntVec q;
    IntVec p;
    LogVal error;      // |<q,y> + p|, or sup-norm of q*a + p
    mpz_class height;  // sup|q| in linear-form/simultaneous mode, mult height otherwise
    double quality;    // implied exponent; +inf on a zero residual; NaN when unscored
    bool seeded = false;
    int window = 0;    // dyadic height window index, 0 = topmost [q_max/2, q_max]
};

struct ExponentEstimate {
    EstMode mode = EstMode::Omega;
    mpz_class q_max;
    mpz_class scanned_to;        // enumeration actually covered heights <= this
    double raw_max = 0.0;        // best quality over every stored witness
    double window_estimate = 0.0;// headline: top-window champion vs certified seeds
    bool exact_hit = false;
    std::vector<Witness> witnesses; // best-per-dyadic-window champions plus seeds
};

struct EstimateOptions {
    uint64_t scan_budget = 1ull << 36; // linear-form enumeration point cap
    mpz_class sigma_scan_cap = mpz_class(1) << 24;
    int threads = 0;                   // 0 = hardware concurrency
    std::vector<IntVec> extra_candidates; // structured candidate q vectors
};

// p minimizing |<q,y> + p| (ties toward even p), with the residual.
std::pair<mpz_class, Real> best_companion(const IntVec& q, const RealVec& y);

ExponentEstimate estimate_omega(const Point& y, const mpz_class& q_max,
                                const EstimateOptions& opt = {});
ExponentEstimate estimate_omega_times(const Point& y, const mpz_class& q_max,
                                      const EstimateOptions& opt = {});
ExponentEstimate estimate_sigma(const Point& a, const mpz_class& q_max,
                                const EstimateOptions& opt = {});

} // namespace dioph
