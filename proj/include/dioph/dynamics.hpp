#pragma once

#include "dioph/lattice.hpp"
#include "dioph/logval.hpp"
#include "dioph/vec.hpp"
#include <optional>

namespace dioph {

/**
 * Contraction rate linking an approximation quality v > n to the decay
 * rate c = (v - n)/(kv + n) of the associated flow, exactly invertible
 * as v = (n + nc)/(1 - kc). c lies in [0, 1/k).
 */
struct ContractionRate {
    int n = 0, k = 1;
    mpq_class v;
    mpq_class c;
};

ContractionRate rate_from_v(int n, int k, const mpq_class& v);
mpq_class v_from_rate(int n, int k, const mpq_class& c);

/**
 * From an approximation pair (x, z) with |x| <= H(z)^{-v/n} (H the
 * multiplicative height, z with support size k), builds the flow t whose
 * contraction witnesses the pair: t_i = c*t + ln|z_i| on the support,
 * e^{(1-kc)t} = H(z). All defining inequalities are re-checked in the log
 * domain; `slack` is the worst signed violation (<= 0 when clean).
 */
struct FlowWitness {
    FlowVec flow;
    mpq_class c;
    double slack;
};

FlowWitness forward_witness(const LogVal& x, const IntVec& z, int n, const mpq_class& v);

/**
 * Converse direction: given a flow t and a pair (x, z) contracted at rate
 * c (with t_i >= c*t on at least k indices), certifies the quality
 * v = (n + nc)/(1 - kc), via the height bound H(z) <= e^{(1-kc)t}. Only
 * indices with t_i - c*t >= 0 may contribute to the height bound; when the
 * support is smaller than k the chain still closes through the restriction
 * indices.
 */
struct QualityCert {
    mpq_class v;
    double slack;                  // worst log-domain violation (<= 0 when clean)
    bool degenerate_norm_bounded;  // x exactly zero: bounded-z degenerate case
};

QualityCert backward_witness(const FlowVec& t, const LogVal& x, const IntVec& z, int n,
                             int k, const mpq_class& c);

/**
 * Grid estimate of the best decay rates along admissible integer flows.
 * For each k, sweeps candidate rates over {0, step, ...} below 1/k and
 * certifies a rate when some integer flow t with total in
 * [total_floor, T_max] satisfies the index restriction at that rate and
 * the k-support stratum of the flowed lattice contains a vector of norm
 * <= e^{-c t}. Certificates from small totals are ignored (the defining
 * condition wants unboundedly large flows); the floor defaults to
 * T_max/2.
 */
struct GammaEntry {
    int k = 1;
    double gamma = 0.0;
    bool boundary = false;      // certified at the top of the rate grid
    std::vector<long> t;        // certifying integer flow
    std::optional<StratumVec> vec;
    double certified_v = 0.0;   // assembled v at this rate (finite case)
};

struct GammaTable {
    int n = 0;
    long T_max = 0;
    long total_floor = 0;
    std::vector<GammaEntry> entries;
};

struct GammaOptions {
    double grid_step = 0.01;
    long total_floor = -1; // -1: T_max/2
    int threads = 0;
};

GammaTable estimate_gamma(const RealVec& y, long T_max, const GammaOptions& opt = {});

// max_k (n + n*gamma_k)/(1 - k*gamma_k); +inf when a boundary was hit
double omega_times_from_gamma(const GammaTable& g);

} // namespace dioph
