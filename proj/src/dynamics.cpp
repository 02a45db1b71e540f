#include "dioph/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace dioph {

ContractionRate rate_from_v(int n, int k, const mpq_class& v) {
    if (n < 1 || k < 1 || k > n) throw std::invalid_argument("need 1 <= k <= n");
    if (v < n) throw std::invalid_argument("quality v must be >= n");
    ContractionRate r;
    r.n = n;
    r.k = k;
    r.v = v;
    r.c = (v - n) / (mpq_class(k) * v + n);
    r.c.canonicalize();
    return r;
}

mpq_class v_from_rate(int n, int k, const mpq_class& c) {
    if (c < 0 || mpq_class(k) * c >= 1) throw std::invalid_argument("rate must lie in [0, 1/k)");
    mpq_class v = (mpq_class(n) + mpq_class(n) * c) / (1 - mpq_class(k) * c);
    v.canonicalize();
    return v;
}

FlowWitness forward_witness(const LogVal& x, const IntVec& z, int n, const mpq_class& v) {
    if (static_cast<int>(z.size()) != n) throw std::invalid_argument("z must have dimension n");
    int k = 0;
    for (const auto& zi : z)
        if (zi != 0) ++k;
    if (k < 1) throw std::invalid_argument("z must be nonzero");
    if (v <= n) throw std::invalid_argument("forward construction needs v > n");

    mpq_class c = rate_from_v(n, k, v).c;
    long bits = std::max<long>(256, x.is_zero() ? 256 : x.lnmag.bits());

    mpz_class H = mult_height(z);
    Real lnH = Real::of(H, bits).log();

    // precondition |x| <= H^{-v/n}
    Real bound = -(lnH * Real::of(v, bits) / Real::of(mpq_class(n), bits));
    if (!x.mag_le_exp(bound + Real::of(1e-12, bits)))
        throw std::domain_error("pair rejected: |x| exceeds H(z)^{-v/n}");

    Real cr = Real::of(c, bits);
    Real one_minus_kc = Real::of(1L, bits) - Real::of(k, bits) * cr;
    Real total = lnH / one_minus_kc;

    RealVec t(z.size(), Real::of(0L, bits));
    for (size_t i = 0; i < z.size(); ++i) {
        if (z[i] == 0) continue;
        t[i] = cr * total + Real::of(mpz_class(abs(z[i])), bits).log();
    }
    FlowVec fv = make_flow(std::move(t));

    // verify the contraction system in the log domain
    double slack = -std::numeric_limits<double>::infinity();
    Real rhs = -(cr * fv.total);
    if (!x.is_zero()) slack = std::max(slack, (x.lnmag + fv.total - rhs).to_double());
    for (size_t i = 0; i < z.size(); ++i) {
        if (z[i] == 0) continue;
        Real lhs = Real::of(mpz_class(abs(z[i])), bits).log() - fv.t[i];
        slack = std::max(slack, (lhs - rhs).to_double());
    }
    // the totals must reproduce the height: e^{(1-kc)t} = H
    slack = std::max(slack, std::fabs((one_minus_kc * fv.total - lnH).to_double()));

    FlowWitness out;
    out.flow = std::move(fv);
    out.c = c;
    out.slack = slack;
    return out;
}

QualityCert backward_witness(const FlowVec& t, const LogVal& x, const IntVec& z, int n,
                             int k, const mpq_class& c) {
    if (static_cast<int>(z.size()) != n || static_cast<int>(t.t.size()) != n)
        throw std::invalid_argument("dimension mismatch");
    if (c < 0 || mpq_class(k) * c >= 1) throw std::invalid_argument("rate must lie in [0, 1/k)");
    long bits = 256;
    for (const auto& ti : t.t) bits = std::max(bits, ti.bits());

    Real cr = Real::of(c, bits);
    Real ct = cr * t.total;
    Real tol = Real::of(1e-9, bits);

    // contraction inequalities at rate c
    double slack = -std::numeric_limits<double>::infinity();
    if (!x.is_zero()) slack = std::max(slack, (x.lnmag + t.total + ct).to_double());
    for (size_t i = 0; i < z.size(); ++i) {
        if (z[i] == 0) continue;
        Real lhs = Real::of(mpz_class(abs(z[i])), bits).log() - t.t[i];
        slack = std::max(slack, (lhs + ct).to_double());
    }
    if (slack > 1e-9) throw std::domain_error("pair is not contracted at the given rate");

    // index restriction: t_i >= c t on at least k indices
    int good = 0;
    std::vector<size_t> idx;
    for (size_t i = 0; i < t.t.size(); ++i) {
        if (t.t[i] >= ct - tol) {
            ++good;
            idx.push_back(i);
        }
    }
    if (good < k)
        throw std::domain_error("restriction violated: only " + std::to_string(good) +
                                " indices reach the rate, need " + std::to_string(k));

    // height bound: contributions only from indices with t_i - ct >= 0
    // (an integer below e^alpha has unit-floored absolute value below
    // e^alpha only when alpha >= 0)
    Real hb = Real::of(0L, bits);
    for (size_t i : idx) {
        Real a = t.t[i] - ct;
        if (a.sgn() > 0) hb += a;
    }
    mpz_class H = mult_height(z);
    Real lnH = Real::of(H, bits).log();
    double hslack = (lnH - hb).to_double();
    // chain: H <= e^{t - k c t}, then |x| <= e^{-(1+c)t} = (e^{(1-kc)t})^{-v/n}
    Real cap = t.total - Real::of(k, bits) * ct;
    double capslack = (hb - cap).to_double();

    QualityCert out;
    out.v = v_from_rate(n, k, c);
    out.slack = std::max({slack, hslack, capslack});
    out.degenerate_norm_bounded = x.is_zero();
    return out;
}

namespace {

std::vector<std::vector<long>> flows_with_total(int n, long total) {
    std::vector<std::vector<long>> out;
    std::vector<long> cur(static_cast<size_t>(n), 0);
    auto rec = [&](auto&& self, int pos, long rem) -> void {
        if (pos == n - 1) {
            cur[static_cast<size_t>(pos)] = rem;
            out.push_back(cur);
            return;
        }
        for (long v = 0; v <= rem; ++v) {
            cur[static_cast<size_t>(pos)] = v;
            self(self, pos + 1, rem - v);
        }
    };
    rec(rec, 0, total);
    return out;
}

} // namespace

GammaTable estimate_gamma(const RealVec& y, long T_max, const GammaOptions& opt) {
    int n = static_cast<int>(y.size());
    if (n < 1) throw std::invalid_argument("point must have dimension >= 1");
    if (T_max < 1) throw std::invalid_argument("T_max must be >= 1");
    long floor_total = opt.total_floor >= 0 ? opt.total_floor : T_max / 2;
    if (floor_total > T_max) floor_total = T_max;

    GammaTable table;
    table.n = n;
    table.T_max = T_max;
    table.total_floor = floor_total;
    table.entries.assign(static_cast<size_t>(n), GammaEntry{});
    for (int k = 1; k <= n; ++k) {
        auto& e = table.entries[static_cast<size_t>(k - 1)];
        e.k = k;
        e.gamma = 0.0;
        e.certified_v = n;
    }

    // collect admissible flows
    std::vector<std::vector<long>> flows;
    for (long total = floor_total; total <= T_max; ++total)
        for (auto& f : flows_with_total(n, total)) flows.push_back(std::move(f));

    int threads = opt.threads > 0 ? opt.threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;

    struct Cert {
        double gamma = -1.0;
        bool boundary = false;
        std::vector<long> t;
        std::optional<StratumVec> vec;
    };
    std::vector<std::vector<Cert>> results(flows.size(), std::vector<Cert>(static_cast<size_t>(n)));

    std::atomic<size_t> next{0};
    auto work = [&]() {
        for (;;) {
            size_t fi = next.fetch_add(1);
            if (fi >= flows.size()) break;
            const auto& ft = flows[fi];
            long total = 0;
            for (long v : ft) total += v;
            if (total == 0) continue;
            std::vector<double> td(ft.begin(), ft.end());
            FlowVec fv = make_flow_doubles(td);
            std::vector<long> sorted(ft.begin(), ft.end());
            std::sort(sorted.begin(), sorted.end(), std::greater<long>());
            for (int k = 1; k <= n; ++k) {
                auto sv = stratum_shortest(y, fv, k, Real::of(1L));
                if (!sv) continue;
                double lnd = sv->norm.is_zero() ? -std::numeric_limits<double>::infinity()
                                                : sv->norm.ln_double();
                // sweep candidate rates from the top of the grid down
                long steps = static_cast<long>(std::floor(1.0 / (k * opt.grid_step))) - 1;
                Cert cert;
                for (long s = steps; s >= 0; --s) {
                    double c = static_cast<double>(s) * opt.grid_step;
                    // restriction: t_i >= c * total on at least k indices
                    if (static_cast<double>(sorted[static_cast<size_t>(k - 1)]) <
                        c * static_cast<double>(total) - 1e-12)
                        continue;
                    if (lnd <= -c * static_cast<double>(total) + 1e-12) {
                        cert.gamma = c;
                        cert.boundary = (s == steps);
                        cert.t = ft;
                        cert.vec = sv;
                        break;
                    }
                }
                if (cert.gamma >= 0) results[fi][static_cast<size_t>(k - 1)] = std::move(cert);
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();

    for (size_t fi = 0; fi < flows.size(); ++fi) {
        for (int k = 1; k <= n; ++k) {
            const auto& cert = results[fi][static_cast<size_t>(k - 1)];
            if (cert.gamma < 0) continue;
            auto& e = table.entries[static_cast<size_t>(k - 1)];
            if (cert.gamma > e.gamma || (e.t.empty() && cert.gamma >= e.gamma)) {
                e.gamma = cert.gamma;
                e.boundary = cert.boundary;
                e.t = cert.t;
                e.vec = cert.vec;
            }
        }
    }
    for (int k = 1; k <= n; ++k) {
        auto& e = table.entries[static_cast<size_t>(k - 1)];
        if (!e.boundary) {
            // rational rate on the grid: certified v from the exact inverse
            long num = std::lround(e.gamma / opt.grid_step);
            mpq_class c(num, std::lround(1.0 / opt.grid_step));
            c.canonicalize();
            e.certified_v = v_from_rate(n, k, c).get_d();
        } else {
            e.certified_v = std::numeric_limits<double>::infinity();
        }
    }
    return table;
}

double omega_times_from_gamma(const GammaTable& g) {
    double best = 0.0;
    for (const auto& e : g.entries) {
        if (e.boundary) return std::numeric_limits<double>::infinity();
        double denom = 1.0 - e.k * e.gamma;
        if (denom <= 0) return std::numeric_limits<double>::infinity();
        double v = (g.n + g.n * e.gamma) / denom;
        if (v > best) best = v;
    }
    return best;
}

} // namespace dioph
