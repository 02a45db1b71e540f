#pragma once

#include "dioph/point.hpp"
#include "dioph/poly.hpp"
#include "dioph/witness.hpp"
#include <optional>
#include <string>
#include <vector>

namespace dioph {

/**
 * Hyperplane given by coefficients a = (a_1..a_{n-1}, a_n): the image of
 * x -> (a_1 x_1 + ... + a_{n-1} x_{n-1} + a_n, x_1, ..., x_{n-1}).
 * s - 1 counts nonzero entries among a_1..a_{n-1}; a_n never affects s.
 */
struct HyperplaneSpec {
    int n = 0;
    std::vector<PointCoord> a;
    int s = 1;
    double sigma = 0.0;      // simultaneous-approximation exponent of a
    bool sigma_known = true; // from construction vs estimated
};

HyperplaneSpec make_hyperplane(std::vector<PointCoord> a, const mpz_class& sigma_qmax = 100000);

struct Prediction {
    double omega_times = 0.0;
    double omega = 0.0;
    // both formulas collapse to the same value although s < n
    bool degenerate_equality = false;
};

Prediction predict(const HyperplaneSpec& spec);

// exponent of {(x_1,...,x_{n-1}, a)}: n * sigma(a)
double special_case_predict(int n, const PointCoord& a);

// the point of the hyperplane over parameter x, provenance-preserving
Point embed_point(const HyperplaneSpec& spec, const RealVec& x);

// structured witness candidates induced by scalar approximations of a
std::vector<IntVec> structured_candidates(const HyperplaneSpec& spec, const mpz_class& q_max);

struct SampleRow {
    int index = 0;
    std::vector<double> x;
    double estimate = 0.0;
    bool exact_hit = false;
    bool within = true;
};

struct SampleReport {
    double prediction = 0.0;
    double lo = 0.0, hi = 0.0; // acceptance band around the prediction
    std::vector<SampleRow> rows;
    bool all_within = true;
};

/**
 * Draws points on the hyperplane (or on the image of a polynomial map
 * into its parameter space), estimates the multiplicative exponent of
 * each at the given budget, and compares with the prediction band.
 * Samples landing near an exact rational relation are redrawn. With an
 * infinite prediction, rows assert exact hits instead.
 */
SampleReport verify_by_sampling(const HyperplaneSpec& spec, int samples, const mpz_class& q_max,
                                uint64_t seed, double band_lo, double band_hi,
                                const std::vector<Poly>& submanifold = {},
                                const EstimateOptions& opt = {});

} // namespace dioph
