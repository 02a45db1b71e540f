#pragma once

#include "dioph/contfrac.hpp"
#include "dioph/real.hpp"
#include "dioph/vec.hpp"
#include <optional>
#include <string>
#include <vector>

namespace dioph {

/**
 * One coordinate of an evaluation point, with provenance.
 *
 * `exact` is set when the coordinate is a known rational, enabling exact
 * zero detection downstream. `seeds` are certified good approximations
 * (continued-fraction convergents) of the coordinate; they are injected
 * into witness searches as candidates that a bounded enumeration would
 * only reach at much larger budgets. Machine-generated sample coordinates
 * carry no seeds.
 */
struct PointCoord {
    Real value;
    std::optional<mpq_class> exact;
    std::vector<Convergent> seeds;
    std::string label;
    // simultaneous-approximation exponent when known by construction
    // (+inf for rationals, 1 for bounded-quotient irrationals)
    std::optional<double> known_sigma;

    static PointCoord generic(Real v, std::string lbl = "");
    static PointCoord of_rational(const mpq_class& q, std::string lbl = "");
    static PointCoord of_prescribed(const PrescribedNumber& num);
    static PointCoord of_phi();
    static PointCoord of_sqrt(unsigned long k);
};

using Point = std::vector<PointCoord>;

RealVec point_values(const Point& p);
bool point_all_exact(const Point& p);

/**
 * Coordinate mini-grammar, comma separated:
 *   "415/93"   exact rational
 *   "0.718"    exact decimal
 *   "phi"      golden ratio
 *   "sqrt:2"   square root of an integer
 *   "tau:3"    number built with prescribed exponent 3 (uses cf_depth)
 */
PointCoord parse_coord(const std::string& spec, int cf_depth = 8);
Point parse_point(const std::string& spec, int cf_depth = 8);

// Convergent seeds for an irrational with a known quotient stream
// (periodic surd or all-ones), up to denominators of max_bits bits.
std::vector<Convergent> surd_convergents(unsigned long k, long max_bits = 512);
std::vector<Convergent> phi_convergents(long max_bits = 512);

} // namespace dioph
