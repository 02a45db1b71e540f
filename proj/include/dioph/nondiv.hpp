#pragma once

#include "dioph/lattice.hpp"
#include "dioph/poly.hpp"
#include <vector>

namespace dioph {

struct FractionCI {
    double fraction = 0.0;
    double ci_halfwidth = 0.0; // Wilson 95% half-width
    long samples = 0;
};

FractionCI wilson(long hits, long samples);

/**
 * Monte Carlo measure of {x in [lo,hi] : |f(x)| < eps} for each rung of
 * the ladder, with the log-log slope fitted over the rungs where the
 * fraction is strictly between 0 and 1.
 */
struct SublevelReport {
    Poly f;
    double lo = 0, hi = 1;
    std::vector<double> eps;
    std::vector<FractionCI> fractions;
    double fitted_slope = 0.0;
    int fit_points = 0;
};

SublevelReport sublevel_fraction(const Poly& f, double lo, double hi,
                                 const std::vector<double>& eps_ladder, long samples,
                                 uint64_t seed);

/**
 * Escape statistics of the flowed lattices over a polynomial curve:
 * fraction of sampled parameters whose lattice has a vector shorter than
 * eps after the flow. One shortest length per (sample, flow); the ladder
 * shares it, so columns are nested and monotone by construction.
 */
struct EscapeReport {
    std::vector<std::vector<double>> flows; // each flow as component list
    std::vector<double> eps;
    // fractions[flow][eps]
    std::vector<std::vector<FractionCI>> fractions;
    double fitted_alpha = 0.0; // pooled log-log slope over positive cells
    int fit_points = 0;
};

EscapeReport escape_table(const std::vector<Poly>& curve, const std::vector<std::vector<double>>& flows,
                          const std::vector<double>& eps_ladder, long samples, uint64_t seed,
                          int threads = 0);

double escape_fraction(const std::vector<Poly>& curve, const std::vector<double>& flow, double eps,
                       long samples, uint64_t seed);

/**
 * Partial sums of the series whose convergence bounds the exponent from
 * above: for each total below T_max, the Monte Carlo measure of the
 * "short stratum vector" event at a representative admissible flow, times
 * the number of admissible integer flows with that total.
 */
struct BorelCantelliRow {
    long total = 0;
    long admissible = 0;
    double event_measure = 0.0;
    double increment = 0.0;
    double partial_sum = 0.0;
};

struct BorelCantelliReport {
    std::vector<BorelCantelliRow> rows;
    double fitted_ratio = 0.0; // geometric ratio of successive increments
};

BorelCantelliReport borel_cantelli_probe(const std::vector<Poly>& curve, int k, double d_rate,
                                         long T_max, long samples, uint64_t seed);

} // namespace dioph
