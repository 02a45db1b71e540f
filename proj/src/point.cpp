#include "dioph/point.hpp"

#include <cstdio>
#include <limits>
#include <stdexcept>

namespace dioph {

namespace {

// Drop convergents with q < 3: heights 1 and 2 carry no usable exponent
// signal (their log-heights are too small to score against).
std::vector<Convergent> usable(const std::vector<Convergent>& cs) {
    std::vector<Convergent> out;
    for (const auto& c : cs)
        if (c.q >= 3) out.push_back(c);
    return out;
}

} // namespace

PointCoord PointCoord::generic(Real v, std::string lbl) {
    PointCoord c;
    c.value = std::move(v);
    c.label = std::move(lbl);
    return c;
}

PointCoord PointCoord::of_rational(const mpq_class& q, std::string lbl) {
    PointCoord c;
    c.exact = q;
    c.known_sigma = std::numeric_limits<double>::infinity();
    c.value = Real::of(q);
    c.label = lbl.empty() ? rat_str(q) : std::move(lbl);
    if (q >= 0)
        c.seeds = usable(ContinuedFraction::expand(q).convergents);
    else {
        auto cs = ContinuedFraction::expand(mpq_class(-q)).convergents;
        for (auto& cv : cs) cv.p = -cv.p;
        c.seeds = usable(cs);
    }
    return c;
}

PointCoord PointCoord::of_prescribed(const PrescribedNumber& num) {
    PointCoord c;
    c.exact = num.exact;
    c.known_sigma = num.target_tau;
    c.value = num.value;
    char lbl[32];
    std::snprintf(lbl, sizeof lbl, "tau:%g", num.target_tau);
    c.label = lbl;
    std::vector<Convergent> cs(num.cf.convergents.begin(),
                               num.cf.convergents.begin() + num.depth + 1);
    c.seeds = usable(cs);
    return c;
}

PointCoord PointCoord::of_phi() {
    PointCoord c;
    c.known_sigma = 1.0;
    c.value = Real::golden_ratio();
    c.label = "phi";
    c.seeds = usable(phi_convergents());
    return c;
}

PointCoord PointCoord::of_sqrt(unsigned long k) {
    mpz_class root;
    mpz_class kk(static_cast<unsigned long>(k));
    mpz_sqrt(root.get_mpz_t(), kk.get_mpz_t());
    if (root * root == kk) // perfect square: rational after all
        return of_rational(mpq_class(root), "sqrt:" + std::to_string(k));
    PointCoord c;
    c.known_sigma = 1.0;
    c.value = Real::sqrt_of(k);
    c.label = "sqrt:" + std::to_string(k);
    c.seeds = usable(surd_convergents(k));
    return c;
}

RealVec point_values(const Point& p) {
    RealVec v;
    v.reserve(p.size());
    for (const auto& c : p) v.push_back(c.value);
    return v;
}

bool point_all_exact(const Point& p) {
    for (const auto& c : p)
        if (!c.exact) return false;
    return true;
}

std::vector<Convergent> phi_convergents(long max_bits) {
    ContinuedFraction cf;
    cf.push(1);
    while (mpz_sizeinbase(cf.convergents.back().q.get_mpz_t(), 2) < static_cast<size_t>(max_bits))
        cf.push(1);
    return cf.convergents;
}

std::vector<Convergent> surd_convergents(unsigned long k, long max_bits) {
    // classical quadratic-surd quotient stream for sqrt(k)
    mpz_class kk(static_cast<unsigned long>(k)), a0;
    mpz_sqrt(a0.get_mpz_t(), kk.get_mpz_t());
    if (a0 * a0 == kk) throw std::invalid_argument("perfect square has no surd expansion");
    ContinuedFraction cf;
    cf.push(a0);
    mpz_class m = 0, d = 1, a = a0;
    while (mpz_sizeinbase(cf.convergents.back().q.get_mpz_t(), 2) < static_cast<size_t>(max_bits)) {
        m = d * a - m;
        d = (kk - m * m) / d;
        a = (a0 + m) / d;
        cf.push(a);
    }
    return cf.convergents;
}

PointCoord parse_coord(const std::string& spec, int cf_depth) {
    if (spec.empty()) throw std::invalid_argument("empty coordinate spec");
    if (spec == "phi") return PointCoord::of_phi();
    if (spec.rfind("sqrt:", 0) == 0) {
        unsigned long k = std::stoul(spec.substr(5));
        return PointCoord::of_sqrt(k);
    }
    if (spec.rfind("tau:", 0) == 0) {
        double tau = std::stod(spec.substr(4));
        return PointCoord::of_prescribed(build_prescribed(tau, cf_depth));
    }
    auto q = parse_exact_rational(spec);
    if (!q) throw std::invalid_argument("unparseable coordinate spec: " + spec);
    return PointCoord::of_rational(*q, spec);
}

Point parse_point(const std::string& spec, int cf_depth) {
    Point p;
    size_t start = 0;
    while (start <= spec.size()) {
        size_t comma = spec.find(',', start);
        std::string piece = comma == std::string::npos ? spec.substr(start)
                                                       : spec.substr(start, comma - start);
        p.push_back(parse_coord(piece, cf_depth));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (p.empty()) throw std::invalid_argument("empty point spec");
    return p;
}

} // namespace dioph
