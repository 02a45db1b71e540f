#include "dioph/hyperplane.hpp"
#include "dioph/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dioph {

HyperplaneSpec make_hyperplane(std::vector<PointCoord> a, const mpz_class& sigma_qmax) {
    HyperplaneSpec spec;
    spec.n = static_cast<int>(a.size());
    if (spec.n < 1) throw std::invalid_argument("hyperplane needs at least one coefficient");
    spec.a = std::move(a);

    spec.s = 1;
    for (int r = 0; r + 1 < spec.n; ++r) {
        const auto& c = spec.a[static_cast<size_t>(r)];
        bool zero = c.exact ? (*c.exact == 0) : c.value.is_zero();
        if (!zero) ++spec.s;
    }

    // sigma of the coefficient vector: known when at most one coordinate
    // is irrational and that one carries a constructed exponent
    int unknown = 0, finite_known = 0;
    double val = std::numeric_limits<double>::infinity();
    for (const auto& c : spec.a) {
        if (!c.known_sigma) {
            ++unknown;
        } else if (!std::isinf(*c.known_sigma)) {
            ++finite_known;
            val = std::min(val, *c.known_sigma);
        }
    }
    if (unknown == 0 && finite_known <= 1) {
        spec.sigma = val; // +inf when fully rational
        spec.sigma_known = true;
    } else {
        Point pt = spec.a;
        auto est = estimate_sigma(pt, sigma_qmax);
        spec.sigma = est.window_estimate;
        spec.sigma_known = false;
    }
    return spec;
}

Prediction predict(const HyperplaneSpec& spec) {
    Prediction p;
    double n = spec.n;
    p.omega_times = std::isinf(spec.sigma)
                        ? std::numeric_limits<double>::infinity()
                        : std::max(n, n / spec.s * spec.sigma);
    p.omega = std::isinf(spec.sigma) ? std::numeric_limits<double>::infinity()
                                     : std::max(n, spec.sigma);
    p.degenerate_equality = spec.s < spec.n && p.omega_times == p.omega &&
                            !std::isinf(p.omega_times);
    return p;
}

double special_case_predict(int n, const PointCoord& a) {
    if (!a.known_sigma)
        throw std::invalid_argument("special-case prediction needs a known exponent");
    return n * *a.known_sigma;
}

Point embed_point(const HyperplaneSpec& spec, const RealVec& x) {
    if (static_cast<int>(x.size()) != spec.n - 1)
        throw std::invalid_argument("parameter dimension must be n-1");
    Point y;
    bool pure_last = true;
    for (int r = 0; r + 1 < spec.n; ++r) {
        const auto& c = spec.a[static_cast<size_t>(r)];
        bool zero = c.exact ? (*c.exact == 0) : c.value.is_zero();
        if (!zero) pure_last = false;
    }
    if (pure_last) {
        // first coordinate is exactly a_n: keep its provenance
        y.push_back(spec.a.back());
    } else {
        long bits = spec.a.back().value.bits();
        for (const auto& xi : x) bits = std::max(bits, xi.bits());
        Real v = spec.a.back().value.at(bits);
        for (int r = 0; r + 1 < spec.n; ++r)
            v += spec.a[static_cast<size_t>(r)].value * x[static_cast<size_t>(r)];
        y.push_back(PointCoord::generic(v, "a.x"));
    }
    for (const auto& xi : x) y.push_back(PointCoord::generic(xi, "x"));
    return y;
}

std::vector<IntVec> structured_candidates(const HyperplaneSpec& spec, const mpz_class& q_max) {
    std::vector<IntVec> out;
    // scalar approximations of the coefficient vector, taken from the
    // convergent store of each constructed coordinate
    std::vector<mpz_class> qs;
    for (const auto& c : spec.a)
        for (const auto& cv : c.seeds)
            if (cv.q >= 3 && cv.q <= q_max) qs.push_back(cv.q);
    std::sort(qs.begin(), qs.end());
    qs.erase(std::unique(qs.begin(), qs.end()), qs.end());

    for (const auto& q : qs) {
        IntVec w(static_cast<size_t>(spec.n), mpz_class(0));
        w[0] = q;
        bool ok = true;
        for (int r = 0; r + 1 < spec.n; ++r) {
            const auto& c = spec.a[static_cast<size_t>(r)];
            mpz_class round_r;
            if (c.exact) {
                round_r = nearest_int(mpq_class(q) * *c.exact);
            } else {
                round_r = (Real::of(q) * c.value).round_even();
            }
            w[static_cast<size_t>(r + 1)] = -round_r;
            if (abs(w[static_cast<size_t>(r + 1)]) > q_max) ok = false;
        }
        if (ok && sup_norm(w) <= q_max) out.push_back(std::move(w));
    }
    return out;
}

namespace {

// reject parameters too close to a small integer relation
bool near_rational_relation(const Point& y, double tol) {
    int n = static_cast<int>(y.size());
    std::vector<double> yd;
    for (const auto& c : y) yd.push_back(c.value.to_double());
    std::vector<long> q(static_cast<size_t>(n), -8);
    for (;;) {
        bool nonzero = false;
        for (long v : q)
            if (v != 0) nonzero = true;
        if (nonzero) {
            double s = 0;
            for (int i = 0; i < n; ++i) s += static_cast<double>(q[static_cast<size_t>(i)]) * yd[static_cast<size_t>(i)];
            double e = std::fabs(s - std::nearbyint(s));
            if (e < tol) return true;
        }
        int k = n - 1;
        while (k >= 0 && q[static_cast<size_t>(k)] == 8) q[static_cast<size_t>(k--)] = -8;
        if (k < 0) break;
        ++q[static_cast<size_t>(k)];
    }
    return false;
}

} // namespace

SampleReport verify_by_sampling(const HyperplaneSpec& spec, int samples, const mpz_class& q_max,
                                uint64_t seed, double band_lo, double band_hi,
                                const std::vector<Poly>& submanifold,
                                const EstimateOptions& opt) {
    if (samples < 1) throw std::invalid_argument("need at least one sample");
    if (!submanifold.empty() && static_cast<int>(submanifold.size()) != spec.n - 1)
        throw std::invalid_argument("submanifold must map into the parameter space");

    Prediction pred = predict(spec);
    SampleReport rep;
    rep.prediction = pred.omega_times;
    rep.lo = band_lo;
    rep.hi = band_hi;

    EstimateOptions eopt = opt;
    auto structured = structured_candidates(spec, q_max);
    for (const auto& w : structured) eopt.extra_candidates.push_back(w);

    Rng root(seed);
    for (int s = 0; s < samples; ++s) {
        Rng rng = root.fork(static_cast<uint64_t>(s));
        Point y;
        std::vector<double> xd;
        for (int attempt = 0;; ++attempt) {
            if (attempt > 64) throw std::runtime_error("resampling failed to escape rational relations");
            xd.clear();
            RealVec x;
            if (submanifold.empty()) {
                for (int i = 0; i + 1 < spec.n; ++i) {
                    double u = rng.uniform();
                    xd.push_back(u);
                    x.push_back(Real::of(u));
                }
            } else {
                double u = rng.uniform();
                xd.push_back(u);
                for (const auto& p : submanifold) x.push_back(p.eval(Real::of(u)));
            }
            y = embed_point(spec, x);
            if (std::isinf(pred.omega_times) || !near_rational_relation(y, 1e-6)) break;
        }

        SampleRow row;
        row.index = s;
        row.x = xd;
        auto est = estimate_omega_times(y, q_max, eopt);
        row.exact_hit = est.exact_hit;
        row.estimate = est.window_estimate;
        if (std::isinf(pred.omega_times)) {
            row.within = est.exact_hit;
        } else {
            row.within = row.estimate >= band_lo && row.estimate <= band_hi;
        }
        rep.all_within = rep.all_within && row.within;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

} // namespace dioph
