#include "dioph/witness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <thread>

namespace dioph {

const char* mode_name(EstMode m) {
    switch (m) {
        case EstMode::Omega: return "omega";
        case EstMode::OmegaTimes: return "omegax";
        case EstMode::Sigma: return "sigma";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// double-double helpers for the precise slow path of the scanners
// ---------------------------------------------------------------------------

namespace {

struct DD {
    double hi = 0, lo = 0;
};

inline DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline DD two_prod(double a, double b) {
    double p = a * b;
    double err = std::fma(a, b, -p);
    return {p, err};
}

inline DD dd_add(DD a, DD b) {
    DD s = two_sum(a.hi, b.hi);
    double lo = s.lo + a.lo + b.lo;
    return two_sum(s.hi, lo);
}

inline DD dd_mul_int(double k, DD y) {
    DD p = two_prod(k, y.hi);
    double lo = std::fma(k, y.lo, p.lo);
    return two_sum(p.hi, lo);
}

// distance from a DD value to the nearest integer (accurate to ~1e-17 abs)
inline double dd_dist_to_int(DD s) {
    double n = std::nearbyint(s.hi);
    double d = (s.hi - n) + s.lo;
    if (d > 0.5) d -= 1.0;
    if (d < -0.5) d += 1.0;
    return std::fabs(d);
}

constexpr int kMaxDim = 8;
constexpr int kChunk = 4096;
constexpr size_t kDeepCap = 64;
constexpr double kDeepThreshold = 1e-9;

struct Champ {
    double e = DBL_MAX;
    int64_t q[kMaxDim] = {0};
};

struct ScanState {
    std::map<long, Champ> wins;            // window index -> champion
    std::vector<std::array<int64_t, kMaxDim>> deep; // near-zero residual candidates
};

// Merge that reproduces the single-threaded scan result for any shard
// split: a later shard only replaces on strictly smaller residual.
void merge_ordered(ScanState& into, const ScanState& later) {
    for (const auto& [w, c] : later.wins) {
        auto it = into.wins.find(w);
        if (it == into.wins.end() || c.e < it->second.e) into.wins[w] = c;
    }
    for (const auto& d : later.deep) {
        if (into.deep.size() >= kDeepCap) break;
        into.deep.push_back(d);
    }
}

struct ScanCtx {
    int n = 0;
    int64_t Q = 0;
    long double yL[kMaxDim];
    double yfrac[kMaxDim]; // frac(y_i) as double, in [0,1)
    DD ydd[kMaxDim];
    bool exact_inputs = false;
    // window bounds: window j holds sup-heights in [lo_j, hi_j]
    std::vector<int64_t> win_lo, win_hi;
    long window_of(int64_t h) const {
        // hi_j = Q >> j
        long j = 0;
        while ((Q >> (j + 1)) >= h) ++j;
        return j;
    }
};

// precise residual for a candidate q against the scan context
inline double precise_err(const ScanCtx& cx, const int64_t* q) {
    DD s{0, 0};
    for (int i = 0; i < cx.n; ++i)
        if (q[i] != 0) s = dd_add(s, dd_mul_int(static_cast<double>(q[i]), cx.ydd[i]));
    return dd_dist_to_int(s);
}

void consider(const ScanCtx& cx, ScanState& st, const int64_t* q, int64_t h) {
    double e2 = precise_err(cx, q);
    long w = cx.window_of(h);
    auto it = st.wins.find(w);
    if (it == st.wins.end()) {
        Champ c;
        c.e = e2;
        std::copy(q, q + cx.n, c.q);
        st.wins.emplace(w, c);
    } else if (e2 < it->second.e) {
        it->second.e = e2;
        std::copy(q, q + cx.n, it->second.q);
    }
    if (cx.exact_inputs && e2 < kDeepThreshold) {
        if (st.deep.size() < kDeepCap) {
            std::array<int64_t, kMaxDim> d{};
            std::copy(q, q + cx.n, d.begin());
            st.deep.push_back(d);
        }
    }
}

// Tight scan over the innermost coordinate for a fixed prefix.
// prefix: q[0..n-2] fixed; inner q[n-1] runs over [in_lo, in_hi].
// h_pre: sup-norm of the prefix (0 when the prefix is all zero).
void scan_inner(const ScanCtx& cx, ScanState& st, int64_t* q, int64_t h_pre,
                int64_t in_lo, int64_t in_hi) {
    const int last = cx.n - 1;
    const double yf = cx.yfrac[last];
    long double baseL = 0.0L;
    for (int i = 0; i < last; ++i) baseL += static_cast<long double>(q[i]) * cx.yL[i];

    // segments of constant window: |q_last| <= h_pre is one window, beyond
    // that the window follows |q_last|.
    struct Seg {
        int64_t lo, hi;
        long win;
    };
    std::vector<Seg> segs;
    auto add_range = [&](int64_t lo, int64_t hi) {
        // window driven by |q_last| throughout [lo, hi]; split on dyadic bounds
        while (lo <= hi) {
            if (lo < 0) { // |q| descending as q ascends
                long w = cx.window_of(std::abs(lo));
                int64_t floor_h = std::max<int64_t>(cx.win_lo[static_cast<size_t>(w)], 1);
                int64_t end = std::min<int64_t>(hi, -floor_h);
                segs.push_back({lo, end, w});
                lo = end + 1;
            } else {
                long w = cx.window_of(std::max<int64_t>(lo, 1));
                int64_t cap_h = cx.win_hi[static_cast<size_t>(w)];
                int64_t end = std::min<int64_t>(hi, cap_h);
                segs.push_back({lo, end, w});
                lo = end + 1;
            }
        }
    };
    if (h_pre == 0) {
        add_range(std::max<int64_t>(in_lo, 1), in_hi);
    } else {
        if (in_lo < -h_pre) add_range(in_lo, -h_pre - 1);
        int64_t mid_lo = std::max(in_lo, -h_pre), mid_hi = std::min(in_hi, h_pre);
        if (mid_lo <= mid_hi) segs.push_back({mid_lo, mid_hi, cx.window_of(h_pre)});
        if (in_hi > h_pre) add_range(h_pre + 1, in_hi);
    }

    for (const Seg& sg : segs) {
        auto itw = st.wins.find(sg.win);
        double thr = itw == st.wins.end() ? DBL_MAX : itw->second.e;
        if (cx.exact_inputs && st.deep.size() < kDeepCap && thr < kDeepThreshold)
            thr = kDeepThreshold;

        int64_t q2 = sg.lo;
        while (q2 <= sg.hi) {
            int64_t cnt = std::min<int64_t>(kChunk, sg.hi - q2 + 1);
            long double aL = baseL + static_cast<long double>(q2) * cx.yL[last];
            aL -= floorl(aL);
            double r = static_cast<double>(aL);
            if (r >= 1.0) r -= 1.0;
            if (r < 0.0) r += 1.0;

            // chunk min of dist-to-integer via running min/max of the
            // fractional parts: min(r, 1-r) over the chunk equals
            // min(min r, 1 - max r). Eight independent streams keep the
            // additions pipelined and vectorizable.
            double m = DBL_MAX;
            int64_t i = 0;
            if (cnt >= 16) {
                constexpr int W = 8;
                double rs[W], mn[W], mx[W];
                rs[0] = r;
                for (int w = 1; w < W; ++w) {
                    rs[w] = rs[w - 1] + yf;
                    rs[w] -= (rs[w] >= 1.0);
                }
                double step = W * yf;
                step -= std::floor(step);
                for (int w = 0; w < W; ++w) { mn[w] = rs[w]; mx[w] = rs[w]; }
                int64_t blocks = cnt / W;
                for (int64_t bl = 1; bl < blocks; ++bl) {
                    for (int w = 0; w < W; ++w) {
                        rs[w] += step;
                        rs[w] -= (rs[w] >= 1.0);
                        mn[w] = std::min(mn[w], rs[w]);
                        mx[w] = std::max(mx[w], rs[w]);
                    }
                }
                double lo = mn[0], hi = mx[0];
                for (int w = 1; w < W; ++w) {
                    lo = std::min(lo, mn[w]);
                    hi = std::max(hi, mx[w]);
                }
                m = std::min(lo, 1.0 - hi);
                i = blocks * W;
            }
            // tail (and short chunks)
            if (i < cnt) {
                long double vL = baseL + static_cast<long double>(q2 + i) * cx.yL[last];
                vL -= floorl(vL);
                double rt = static_cast<double>(vL);
                if (rt >= 1.0) rt -= 1.0;
                if (rt < 0.0) rt += 1.0;
                for (int64_t t = i; t < cnt; ++t) {
                    m = std::min(m, 0.5 - std::fabs(rt - 0.5));
                    rt += yf;
                    rt -= (rt >= 1.0);
                }
            }

            if (m <= thr + 1e-12) { // slack covers stream drift over a chunk
                // rewalk the chunk precisely
                for (int64_t t = 0; t < cnt; ++t) {
                    int64_t qq = q2 + t;
                    long double vL = baseL + static_cast<long double>(qq) * cx.yL[last];
                    vL -= floorl(vL);
                    double rr = static_cast<double>(vL);
                    double e = 0.5 - std::fabs(rr - 0.5);
                    if (e <= thr + 1e-13) {
                        q[last] = qq;
                        consider(cx, st, q, std::max(h_pre, std::abs(qq)));
                        auto it2 = st.wins.find(sg.win);
                        thr = it2 == st.wins.end() ? DBL_MAX : it2->second.e;
                        if (cx.exact_inputs && st.deep.size() < kDeepCap && thr < kDeepThreshold)
                            thr = kDeepThreshold;
                    }
                }
            }
            q2 += cnt;
        }
    }
}

// Recursive odometer over coordinates 0..n-2; leading zeros keep the
// remaining coordinates lexicographically positive.
void scan_outer(const ScanCtx& cx, ScanState& st, int64_t* q, int dim, bool lead_zero,
                int64_t h_pre) {
    if (dim == cx.n - 1) {
        int64_t lo = lead_zero ? 0 : -cx.Q; // inner handles lex-positivity via h_pre==0
        scan_inner(cx, st, q, h_pre, lo, cx.Q);
        return;
    }
    int64_t lo = lead_zero ? 0 : -cx.Q;
    for (int64_t v = lo; v <= cx.Q; ++v) {
        q[dim] = v;
        scan_outer(cx, st, q, dim + 1, lead_zero && v == 0,
                   std::max(h_pre, std::abs(v)));
    }
}

// Shard the outermost coordinate across threads; merge in scan order.
ScanState run_scan(const ScanCtx& cx, int threads) {
    if (cx.n == 1) {
        ScanState st;
        int64_t q[kMaxDim] = {0};
        scan_inner(cx, st, q, 0, 1, cx.Q);
        return st;
    }
    struct Range {
        int64_t lo, hi;
    };
    std::vector<Range> shards;
    int nsh = std::max(1, threads * 4);
    int64_t total = cx.Q + 1; // outermost coordinate 0..Q
    int64_t step = std::max<int64_t>(1, total / nsh);
    for (int64_t lo = 0; lo <= cx.Q; lo += step)
        shards.push_back({lo, std::min(cx.Q, lo + step - 1)});

    std::vector<ScanState> parts(shards.size());
    std::atomic<size_t> next{0};
    auto work = [&]() {
        for (;;) {
            size_t k = next.fetch_add(1);
            if (k >= shards.size()) break;
            ScanState& st = parts[k];
            int64_t q[kMaxDim] = {0};
            for (int64_t v = shards[k].lo; v <= shards[k].hi; ++v) {
                q[0] = v;
                scan_outer(cx, st, q, 1, v == 0, std::abs(v));
            }
        }
    };
    std::vector<std::thread> pool;
    int nt = std::max(1, threads);
    for (int t = 1; t < nt; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();

    ScanState out = std::move(parts[0]);
    for (size_t k = 1; k < parts.size(); ++k) merge_ordered(out, parts[k]);
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// residual finalization at full precision
// ---------------------------------------------------------------------------

namespace {

struct Finalizer {
    const Point* pt;
    bool exact;
    std::vector<mpq_class> xq;
    RealVec xr;
    long bits = 0;

    explicit Finalizer(const Point& p) : pt(&p) {
        exact = point_all_exact(p);
        for (const auto& c : p) {
            if (exact) xq.push_back(*c.exact);
            xr.push_back(c.value);
            bits = std::max(bits, c.value.bits());
        }
    }

    // residual of <q, y> + p with the best integer p
    std::pair<mpz_class, LogVal> companion(const IntVec& q) const {
        if (exact) {
            mpq_class s = 0;
            for (size_t i = 0; i < q.size(); ++i) s += mpq_class(q[i]) * xq[i];
            mpz_class p = -nearest_int(s);
            mpq_class e = s + p;
            if (e < 0) e = -e;
            if (e == 0) return {p, LogVal::zero()};
            return {p, LogVal(1, Real::of(e, bits + 64).log())};
        }
        Real s = Real::of(0L, bits + 64);
        for (size_t i = 0; i < q.size(); ++i)
            if (q[i] != 0) s += Real::of(q[i]) * xr[i];
        mpz_class p = -s.round_even();
        Real e = (s + Real::of(p)).abs();
        if (e.is_zero()) return {p, LogVal::zero()};
        return {p, LogVal(1, e.log())};
    }

    // simultaneous mode: componentwise nearest integers, sup-norm residual
    std::pair<IntVec, LogVal> simultaneous(const mpz_class& q) const {
        IntVec pv;
        if (exact) {
            mpq_class worst = 0;
            for (const auto& a : xq) {
                mpq_class s = mpq_class(q) * a;
                mpz_class p = -nearest_int(s);
                pv.push_back(p);
                mpq_class e = s + p;
                if (e < 0) e = -e;
                if (e > worst) worst = e;
            }
            if (worst == 0) return {pv, LogVal::zero()};
            return {pv, LogVal(1, Real::of(worst, bits + 64).log())};
        }
        Real worst = Real::of(0L, bits + 64);
        for (const auto& a : xr) {
            Real s = Real::of(q) * a;
            mpz_class p = -s.round_even();
            pv.push_back(p);
            Real e = (s + Real::of(p)).abs();
            if (e > worst) worst = e;
        }
        if (worst.is_zero()) return {pv, LogVal::zero()};
        return {pv, LogVal(1, worst.log())};
    }
};

double ln_of(const mpz_class& z) { return Real::of(z).log().to_double(); }

// quality of a finalized witness; NaN when the height carries no signal
double score(EstMode mode, int n, const LogVal& err, const mpz_class& sup,
             const mpz_class& mult) {
    if (err.is_zero()) return std::numeric_limits<double>::infinity();
    double a = -err.ln_double();
    if (mode == EstMode::OmegaTimes) {
        if (mult < 2) return std::numeric_limits<double>::quiet_NaN();
        double lnP = ln_of(mult);
        double lnH = ln_of(sup);
        // mult <= sup^n exactly, so the clamp only removes rounding noise;
        // it keeps the per-witness ordering against the linear-form score.
        if (sup >= 2) lnP = std::min(lnP, n * lnH);
        return n * a / lnP;
    }
    if (sup < 2) return std::numeric_limits<double>::quiet_NaN();
    return a / ln_of(sup);
}

long window_of_mpz(const mpz_class& q_max, const mpz_class& h) {
    // largest j with h * 2^j <= q_max
    if (h <= 0) throw std::invalid_argument("height must be positive");
    mpz_class t = h;
    long j = 0;
    while (t * 2 <= q_max) {
        t <<= 1;
        ++j;
    }
    return j;
}

bool better(const Witness& a, const Witness& b) {
    int c = cmp_mag(a.error, b.error);
    if (c != 0) return c < 0;
    if (a.height != b.height) return a.height < b.height;
    return a.q < b.q;
}

ExponentEstimate assemble(EstMode mode, const mpz_class& q_max, const mpz_class& scanned_to,
                          std::vector<Witness> champs,
                          const std::vector<std::vector<Witness>>& seed_groups) {
    ExponentEstimate est;
    est.mode = mode;
    est.q_max = q_max;
    est.scanned_to = scanned_to;

    std::vector<Witness> seeds;
    for (const auto& g : seed_groups) seeds.insert(seeds.end(), g.begin(), g.end());

    std::map<long, Witness> table;
    for (auto& w : champs) {
        auto it = table.find(w.window);
        if (it == table.end() || better(w, it->second)) table[w.window] = std::move(w);
    }
    for (const auto& s : seeds) {
        auto it = table.find(s.window);
        if (it == table.end() || better(s, it->second)) {
            table[s.window] = s;
        } else if (it->second.q == s.q) {
            it->second.seeded = true; // the scan found the same certified vector
        }
    }

    // Certified-structure contribution: each group stands for one
    // recurring construction, and its deepest member is the one whose
    // quality tracks the limit. Shallow convergents overshoot.
    double seed_best = std::numeric_limits<double>::quiet_NaN();
    for (const auto& g : seed_groups) {
        const Witness* deep = nullptr;
        for (const auto& s : g)
            if (!deep || s.height > deep->height ||
                (s.height == deep->height && s.q < deep->q))
                deep = &s;
        if (deep && !std::isnan(deep->quality) && !(seed_best >= deep->quality))
            seed_best = deep->quality;
    }

    for (auto& [w, wit] : table) est.witnesses.push_back(wit);
    for (const auto& s : seeds) {
        auto it = table.find(s.window);
        if (it != table.end() && it->second.q == s.q) continue; // already listed
        est.witnesses.push_back(s);
    }
    std::sort(est.witnesses.begin(), est.witnesses.end(), [](const Witness& a, const Witness& b) {
        if (a.window != b.window) return a.window < b.window;
        if (a.height != b.height) return a.height < b.height;
        return a.q < b.q;
    });

    double raw = std::numeric_limits<double>::quiet_NaN();
    for (const auto& w : est.witnesses) {
        if (w.error.is_zero()) est.exact_hit = true;
        if (!std::isnan(w.quality) && !(raw >= w.quality)) raw = w.quality;
    }

    double top = std::numeric_limits<double>::quiet_NaN();
    if (!table.empty()) {
        const Witness& champ = table.begin()->second; // lowest window index present
        top = champ.quality;
    }
    double win = top;
    if (!std::isnan(seed_best) && !(win >= seed_best)) win = seed_best;

    if (est.exact_hit) {
        est.raw_max = std::numeric_limits<double>::infinity();
        est.window_estimate = std::numeric_limits<double>::infinity();
    } else {
        est.raw_max = std::isnan(raw) ? 0.0 : raw;
        est.window_estimate = std::isnan(win) ? 0.0 : win;
    }
    return est;
}

} // namespace

std::pair<mpz_class, Real> best_companion(const IntVec& q, const RealVec& y) {
    if (q.size() != y.size() || q.empty())
        throw std::invalid_argument("mismatched or empty companion inputs");
    bool zero = true;
    for (const auto& v : q)
        if (v != 0) zero = false;
    if (zero) throw std::invalid_argument("companion needs q != 0");
    long bits = 0;
    for (const auto& v : y) bits = std::max(bits, v.bits());
    Real s = Real::of(0L, bits + 64);
    for (size_t i = 0; i < q.size(); ++i)
        if (q[i] != 0) s += Real::of(q[i]) * y[i];
    mpz_class p = -s.round_even();
    Real e = (s + Real::of(p)).abs();
    return {p, e};
}

namespace {

ExponentEstimate estimate_linear(EstMode mode, const Point& pt, const mpz_class& q_max,
                                 const EstimateOptions& opt) {
    int n = static_cast<int>(pt.size());
    if (n < 1) throw std::invalid_argument("point must have dimension >= 1");
    if (n > kMaxDim) throw BudgetError("dimension above enumeration limit");
    if (q_max < 2) throw std::invalid_argument("q_max must be >= 2");

    if (!mpz_fits_slong_p(q_max.get_mpz_t()))
        throw BudgetError("q_max too large for linear-form enumeration");
    int64_t Q = mpz_get_si(q_max.get_mpz_t());

    // enumeration size ~ ((2Q+1)^n - 1) / 2
    double points = (std::pow(2.0 * static_cast<double>(Q) + 1.0, n) - 1.0) / 2.0;
    if (points > static_cast<double>(opt.scan_budget))
        throw BudgetError("enumeration budget exceeded; lower q_max or raise the budget");

    ScanCtx cx;
    cx.n = n;
    cx.Q = Q;
    cx.exact_inputs = point_all_exact(pt);
    for (int i = 0; i < n; ++i) {
        auto [hi, lo] = pt[static_cast<size_t>(i)].value.split2();
        cx.ydd[i] = {hi, lo};
        cx.yL[i] = static_cast<long double>(hi) + static_cast<long double>(lo);
        long double f = cx.yL[i] - floorl(cx.yL[i]);
        double fd = static_cast<double>(f);
        if (fd >= 1.0) fd = 0.0;
        if (fd < 0.0) fd += 1.0;
        cx.yfrac[i] = fd;
    }
    long wcount = 0;
    while ((Q >> (wcount + 1)) >= 1) ++wcount;
    ++wcount;
    cx.win_lo.resize(static_cast<size_t>(wcount));
    cx.win_hi.resize(static_cast<size_t>(wcount));
    for (long j = 0; j < wcount; ++j) {
        cx.win_hi[static_cast<size_t>(j)] = Q >> j;
        cx.win_lo[static_cast<size_t>(j)] = (Q >> (j + 1)) + 1;
    }

    int threads = opt.threads > 0 ? opt.threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    ScanState st = run_scan(cx, threads);

    Finalizer fin(pt);
    std::vector<Witness> champs;
    for (const auto& [w, c] : st.wins) {
        IntVec q;
        for (int i = 0; i < n; ++i) q.push_back(mpz_class(static_cast<long>(c.q[i])));
        auto [p, err] = fin.companion(q);
        Witness wit;
        wit.q = q;
        wit.p = {p};
        wit.error = err;
        mpz_class sup = sup_norm(q), mult = mult_height(q);
        wit.height = mode == EstMode::OmegaTimes ? mult : sup;
        wit.quality = score(mode, n, err, sup, mult);
        wit.window = static_cast<int>(w);
        champs.push_back(std::move(wit));
    }
    // near-zero candidates: surface exact hits that lost a champion tie
    for (const auto& d : st.deep) {
        IntVec q;
        for (int i = 0; i < n; ++i) q.push_back(mpz_class(static_cast<long>(d[i])));
        auto [p, err] = fin.companion(q);
        if (!err.is_zero()) continue;
        mpz_class sup = sup_norm(q);
        bool present = false;
        for (const auto& cw : champs)
            if (cw.q == q) present = true;
        if (present) continue;
        Witness wit;
        wit.q = q;
        wit.p = {p};
        wit.error = err;
        mpz_class mult = mult_height(q);
        wit.height = mode == EstMode::OmegaTimes ? mult : sup;
        wit.quality = score(mode, n, err, sup, mult);
        wit.window = static_cast<int>(window_of_mpz(q_max, sup));
        champs.push_back(std::move(wit));
    }

    // certified candidates: convergents of named coordinates, plus any
    // caller-provided structured vectors; one group per recurring source
    auto finalize_seed = [&](const IntVec& q) {
        auto [p, err] = fin.companion(q);
        Witness wit;
        wit.q = q;
        wit.p = {p};
        wit.error = err;
        mpz_class sup = sup_norm(q), mult = mult_height(q);
        wit.height = mode == EstMode::OmegaTimes ? mult : sup;
        wit.quality = score(mode, n, err, sup, mult);
        wit.seeded = true;
        wit.window = static_cast<int>(window_of_mpz(q_max, sup));
        return wit;
    };
    std::vector<std::vector<Witness>> seed_groups;
    std::set<IntVec> seen;
    for (size_t i = 0; i < pt.size(); ++i) {
        std::vector<Witness> group;
        for (const auto& cv : pt[i].seeds) {
            if (cv.q < 3 || cv.q > q_max) continue;
            IntVec q(pt.size(), mpz_class(0));
            q[i] = cv.q;
            if (!seen.insert(q).second) continue;
            group.push_back(finalize_seed(q));
        }
        if (!group.empty()) seed_groups.push_back(std::move(group));
    }
    {
        std::vector<IntVec> extras;
        for (const auto& extra : opt.extra_candidates) {
            if (extra.size() != pt.size()) continue;
            mpz_class sup = sup_norm(extra);
            if (sup < 1 || sup > q_max) continue;
            IntVec q = extra;
            for (auto& v : q) { // canonical sign: leading nonzero > 0
                if (v != 0) {
                    if (v < 0)
                        for (auto& u : q) u = -u;
                    break;
                }
            }
            if (seen.insert(q).second) extras.push_back(std::move(q));
        }
        std::sort(extras.begin(), extras.end());
        std::vector<Witness> group;
        for (const auto& q : extras) group.push_back(finalize_seed(q));
        if (!group.empty()) seed_groups.push_back(std::move(group));
    }

    return assemble(mode, q_max, q_max, std::move(champs), seed_groups);
}

} // namespace

ExponentEstimate estimate_omega(const Point& y, const mpz_class& q_max,
                                const EstimateOptions& opt) {
    return estimate_linear(EstMode::Omega, y, q_max, opt);
}

ExponentEstimate estimate_omega_times(const Point& y, const mpz_class& q_max,
                                      const EstimateOptions& opt) {
    return estimate_linear(EstMode::OmegaTimes, y, q_max, opt);
}

ExponentEstimate estimate_sigma(const Point& a, const mpz_class& q_max,
                                const EstimateOptions& opt) {
    int n = static_cast<int>(a.size());
    if (n < 1) throw std::invalid_argument("point must have dimension >= 1");
    if (q_max < 2) throw std::invalid_argument("q_max must be >= 2");

    mpz_class L = q_max < opt.sigma_scan_cap ? q_max : opt.sigma_scan_cap;
    int64_t Ls = mpz_get_si(L.get_mpz_t());

    // scalar scan: n fractional accumulators, re-anchored in chunks
    long double aL[kMaxDim];
    DD add[kMaxDim];
    for (int i = 0; i < n; ++i) {
        auto [hi, lo] = a[static_cast<size_t>(i)].value.split2();
        add[i] = {hi, lo};
        aL[i] = static_cast<long double>(hi) + static_cast<long double>(lo);
    }
    bool exact_inputs = point_all_exact(a);

    struct SChamp {
        double e = DBL_MAX;
        int64_t q = 0;
    };
    std::map<long, SChamp> wins;
    std::vector<int64_t> deep;
    auto sup_err_at = [&](int64_t qq) {
        double worst = 0;
        for (int i = 0; i < n; ++i) {
            DD s = dd_mul_int(static_cast<double>(qq), add[i]);
            worst = std::max(worst, dd_dist_to_int(s));
        }
        return worst;
    };

    int64_t qq = 1;
    while (qq <= Ls) {
        int64_t cnt = std::min<int64_t>(kChunk, Ls - qq + 1);
        long w = window_of_mpz(q_max, mpz_class(static_cast<long>(qq)));
        // stay inside one window per chunk
        {
            mpz_class hi_w = q_max >> w; // largest height in window w
            if (hi_w < qq + cnt - 1) cnt = mpz_get_si(hi_w.get_mpz_t()) - qq + 1;
        }
        auto itw = wins.find(w);
        double thr = itw == wins.end() ? DBL_MAX : itw->second.e;
        if (exact_inputs && deep.size() < kDeepCap && thr < kDeepThreshold)
            thr = kDeepThreshold;

        double r[kMaxDim], yf[kMaxDim];
        for (int i = 0; i < n; ++i) {
            long double v = static_cast<long double>(qq) * aL[i];
            v -= floorl(v);
            r[i] = static_cast<double>(v);
            if (r[i] >= 1.0) r[i] -= 1.0;
            if (r[i] < 0.0) r[i] += 1.0;
            long double f = aL[i] - floorl(aL[i]);
            yf[i] = static_cast<double>(f);
            if (yf[i] >= 1.0) yf[i] = 0.0;
        }
        for (int64_t t = 0; t < cnt; ++t) {
            double worst = 0;
            for (int i = 0; i < n; ++i) worst = std::max(worst, 0.5 - std::fabs(r[i] - 0.5));
            if (worst <= thr + 1e-13) {
                int64_t qcur = qq + t;
                double e2 = sup_err_at(qcur);
                auto it2 = wins.find(w);
                if (it2 == wins.end())
                    wins[w] = {e2, qcur};
                else if (e2 < it2->second.e)
                    it2->second = {e2, qcur};
                if (exact_inputs && e2 < kDeepThreshold && deep.size() < kDeepCap)
                    deep.push_back(qcur);
                it2 = wins.find(w);
                thr = it2->second.e;
                if (exact_inputs && deep.size() < kDeepCap && thr < kDeepThreshold)
                    thr = kDeepThreshold;
            }
            for (int i = 0; i < n; ++i) {
                r[i] += yf[i];
                r[i] -= (r[i] >= 1.0);
            }
        }
        qq += cnt;
    }

    Finalizer fin(a);
    std::vector<Witness> champs;
    auto make_witness = [&](const mpz_class& qv, bool seeded) {
        auto [pv, err] = fin.simultaneous(qv);
        Witness wit;
        wit.q = {qv};
        wit.p = pv;
        wit.error = err;
        wit.height = qv;
        wit.quality = score(EstMode::Sigma, n, err, qv, qv);
        wit.seeded = seeded;
        wit.window = static_cast<int>(window_of_mpz(q_max, qv));
        return wit;
    };
    for (const auto& [w, c] : wins) {
        Witness wit = make_witness(mpz_class(static_cast<long>(c.q)), false);
        wit.window = static_cast<int>(w);
        champs.push_back(std::move(wit));
    }
    for (int64_t d : deep) {
        mpz_class qv(static_cast<long>(d));
        bool present = false;
        for (const auto& cw : champs)
            if (cw.q[0] == qv) present = true;
        if (present) continue;
        Witness wit = make_witness(qv, false);
        if (wit.error.is_zero()) champs.push_back(std::move(wit));
    }

    std::vector<std::vector<Witness>> seed_groups;
    std::set<mpz_class> seen;
    for (const auto& coord : a) {
        std::vector<Witness> group;
        for (const auto& cv : coord.seeds)
            if (cv.q >= 3 && cv.q <= q_max && seen.insert(cv.q).second)
                group.push_back(make_witness(cv.q, true));
        if (!group.empty()) seed_groups.push_back(std::move(group));
    }
    {
        std::vector<mpz_class> extras;
        for (const auto& extra : opt.extra_candidates)
            if (extra.size() == 1 && extra[0] >= 1 && extra[0] <= q_max && seen.insert(abs(extra[0])).second)
                extras.push_back(abs(extra[0]));
        std::sort(extras.begin(), extras.end());
        std::vector<Witness> group;
        for (const auto& qv : extras) group.push_back(make_witness(qv, true));
        if (!group.empty()) seed_groups.push_back(std::move(group));
    }

    return assemble(EstMode::Sigma, q_max, L, std::move(champs), seed_groups);
}

} // namespace dioph
