#include "dioph/nondiv.hpp"
#include "dioph/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace dioph {

FractionCI wilson(long hits, long samples) {
    FractionCI out;
    out.samples = samples;
    if (samples <= 0) return out;
    double z = 1.959963984540054; // 95%
    double n = static_cast<double>(samples);
    double p = static_cast<double>(hits) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (p + z2 / (2 * n)) / denom;
    double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
    out.fraction = p;
    out.ci_halfwidth = half;
    (void)center;
    return out;
}

namespace {

double fit_slope(const std::vector<double>& lx, const std::vector<double>& ly) {
    size_t m = lx.size();
    if (m < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < m; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    double denom = m * sxx - sx * sx;
    if (denom == 0) return 0.0;
    return (m * sxy - sx * sy) / denom;
}

} // namespace

SublevelReport sublevel_fraction(const Poly& f, double lo, double hi,
                                 const std::vector<double>& eps_ladder, long samples,
                                 uint64_t seed) {
    if (f.degree() < 1) throw std::invalid_argument("sublevel probe needs degree >= 1");
    if (samples < 10000) throw std::invalid_argument("sublevel probe needs >= 10^4 samples");
    if (!(hi > lo)) throw std::invalid_argument("empty box");

    SublevelReport rep;
    rep.f = f;
    rep.lo = lo;
    rep.hi = hi;
    rep.eps = eps_ladder;
    std::sort(rep.eps.begin(), rep.eps.end(), std::greater<double>());

    std::vector<long> hits(rep.eps.size(), 0);
    Rng rng = Rng(seed).fork(0x5b1eul);
    for (long s = 0; s < samples; ++s) {
        double x = lo + (hi - lo) * rng.uniform();
        double v = std::fabs(f.eval(x));
        for (size_t e = 0; e < rep.eps.size(); ++e)
            if (v < rep.eps[e]) ++hits[e];
    }
    std::vector<double> lx, ly;
    for (size_t e = 0; e < rep.eps.size(); ++e) {
        rep.fractions.push_back(wilson(hits[e], samples));
        double fr = rep.fractions.back().fraction;
        if (fr > 0.0 && fr < 1.0) {
            lx.push_back(std::log(rep.eps[e]));
            ly.push_back(std::log(fr));
        }
    }
    rep.fitted_slope = fit_slope(lx, ly);
    rep.fit_points = static_cast<int>(lx.size());
    return rep;
}

namespace {

// shortest length of the flowed lattice over the curve point
double flowed_shortest(const std::vector<Poly>& curve, const FlowVec& f, double x) {
    RealVec y;
    for (const auto& p : curve) y.push_back(p.eval(Real::of(x)));
    RBasis b = apply_flow(u_of_y_real(y), f);
    Shortest s = shortest_vector(b);
    return std::exp(s.length.ln_double());
}

} // namespace

EscapeReport escape_table(const std::vector<Poly>& curve, const std::vector<std::vector<double>>& flows,
                          const std::vector<double>& eps_ladder, long samples, uint64_t seed,
                          int threads) {
    if (curve.empty() || curve.size() > 3)
        throw std::invalid_argument("curve dimension supported up to 3");
    EscapeReport rep;
    rep.flows = flows;
    rep.eps = eps_ladder;
    std::sort(rep.eps.begin(), rep.eps.end(), std::greater<double>());
    rep.fractions.assign(flows.size(), {});

    int nt = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (nt < 1) nt = 1;

    for (size_t fi = 0; fi < flows.size(); ++fi) {
        FlowVec fv = make_flow_doubles(flows[fi]);
        std::vector<double> lens(static_cast<size_t>(samples));
        std::atomic<long> next{0};
        auto work = [&]() {
            for (;;) {
                long s = next.fetch_add(1);
                if (s >= samples) break;
                Rng rng = Rng(seed).fork(0xe5cul * (fi + 1)).fork(static_cast<uint64_t>(s));
                double x = rng.uniform();
                lens[static_cast<size_t>(s)] = flowed_shortest(curve, fv, x);
            }
        };
        std::vector<std::thread> pool;
        for (int t = 1; t < nt; ++t) pool.emplace_back(work);
        work();
        for (auto& th : pool) th.join();

        for (double eps : rep.eps) {
            long hits = 0;
            for (double l : lens)
                if (l < eps) ++hits;
            rep.fractions[fi].push_back(wilson(hits, samples));
        }
    }

    std::vector<double> lx, ly;
    for (size_t fi = 0; fi < flows.size(); ++fi)
        for (size_t e = 0; e < rep.eps.size(); ++e) {
            double fr = rep.fractions[fi][e].fraction;
            if (fr > 0.0 && fr < 1.0) {
                lx.push_back(std::log(rep.eps[e]));
                ly.push_back(std::log(fr));
            }
        }
    rep.fitted_alpha = fit_slope(lx, ly);
    rep.fit_points = static_cast<int>(lx.size());
    return rep;
}

double escape_fraction(const std::vector<Poly>& curve, const std::vector<double>& flow, double eps,
                       long samples, uint64_t seed) {
    auto rep = escape_table(curve, {flow}, {eps}, samples, seed);
    return rep.fractions[0][0].fraction;
}

BorelCantelliReport borel_cantelli_probe(const std::vector<Poly>& curve, int k, double d_rate,
                                         long T_max, long samples, uint64_t seed) {
    int n = static_cast<int>(curve.size());
    if (k < 1 || k > n) throw std::invalid_argument("stratum index out of range");
    BorelCantelliReport rep;
    double partial = 0;
    std::vector<double> increments;
    for (long total = 1; total <= T_max; ++total) {
        // admissible flows: t_i >= d * total on at least k indices
        long admissible = 0;
        {
            std::vector<long> t(static_cast<size_t>(n), 0);
            auto rec = [&](auto&& self, int pos, long rem) -> void {
                if (pos == n - 1) {
                    t[static_cast<size_t>(pos)] = rem;
                    int good = 0;
                    for (long v : t)
                        if (static_cast<double>(v) >= d_rate * static_cast<double>(total) - 1e-12) ++good;
                    if (good >= k) ++admissible;
                    return;
                }
                for (long v = 0; v <= rem; ++v) {
                    t[static_cast<size_t>(pos)] = v;
                    self(self, pos + 1, rem - v);
                }
            };
            rec(rec, 0, total);
        }
        // representative admissible flow: total split over the first k axes
        std::vector<double> tf(static_cast<size_t>(n), 0.0);
        for (int i = 0; i < k; ++i)
            tf[static_cast<size_t>(i)] = static_cast<double>(total) / k;
        FlowVec fv = make_flow_doubles(tf);
        double bound = std::exp(-d_rate * static_cast<double>(total));

        long hits = 0;
        Rng root = Rng(seed).fork(0xbc00ul + static_cast<uint64_t>(total));
        for (long s = 0; s < samples; ++s) {
            Rng rng = root.fork(static_cast<uint64_t>(s));
            double x = rng.uniform();
            RealVec y;
            for (const auto& p : curve) y.push_back(p.eval(Real::of(x)));
            auto sv = stratum_shortest(y, fv, k, Real::of(1L));
            bool hit = false;
            if (sv) {
                double lnn = sv->norm.is_zero() ? -std::numeric_limits<double>::infinity()
                                                : sv->norm.ln_double();
                hit = lnn <= std::log(bound) + 1e-12;
            }
            if (hit) ++hits;
        }
        BorelCantelliRow row;
        row.total = total;
        row.admissible = admissible;
        row.event_measure = static_cast<double>(hits) / static_cast<double>(samples);
        row.increment = row.event_measure * static_cast<double>(admissible);
        partial += row.increment;
        row.partial_sum = partial;
        if (row.increment > 0) increments.push_back(row.increment);
        rep.rows.push_back(row);
    }
    // geometric ratio of successive positive increments
    if (increments.size() >= 2) {
        std::vector<double> lx, ly;
        for (size_t i = 0; i < increments.size(); ++i) {
            lx.push_back(static_cast<double>(i));
            ly.push_back(std::log(increments[i]));
        }
        rep.fitted_ratio = std::exp(fit_slope(lx, ly));
    } else {
        rep.fitted_ratio = 0.0;
    }
    return rep;
}

} // namespace dioph
