#pragma once

#include "dioph/rat.hpp"
#include "dioph/real.hpp"
#include <string>
#include <vector>

namespace dioph {

// Univariate polynomial with exact rational coefficients, low degree first.
struct Poly {
    std::vector<mpq_class> c;

    int degree() const {
        for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
            if (c[static_cast<size_t>(i)] != 0) return i;
        return -1;
    }
    double eval(double x) const {
        double acc = 0;
        for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i].get_d();
        return acc;
    }
    Real eval(const Real& x) const {
        Real acc = Real::of(0L, x.bits());
        for (size_t i = c.size(); i-- > 0;) acc = acc * x + Real::of(c[i], x.bits());
        return acc;
    }

    // "x", "x^2", "1/2*x^3+x-3", "x*(x-1/2)*(x-1)" is not supported; sums
    // of c*x^k terms are.
    static Poly parse(const std::string& s);
    static Poly monomial(int k) {
        Poly p;
        p.c.assign(static_cast<size_t>(k + 1), mpq_class(0));
        p.c[static_cast<size_t>(k)] = 1;
        return p;
    }
    std::string str() const;
};

Poly operator*(const Poly& a, const Poly& b);
Poly operator+(const Poly& a, const Poly& b);

} // namespace dioph
