#include "dioph/poly.hpp"

#include <stdexcept>

namespace dioph {

Poly operator*(const Poly& a, const Poly& b) {
    Poly r;
    if (a.c.empty() || b.c.empty()) return r;
    r.c.assign(a.c.size() + b.c.size() - 1, mpq_class(0));
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
}

Poly operator+(const Poly& a, const Poly& b) {
    Poly r;
    r.c.assign(std::max(a.c.size(), b.c.size()), mpq_class(0));
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
    return r;
}

Poly Poly::parse(const std::string& s) {
    // sums of terms: c, x, c*x, x^k, c*x^k, with +/- separators
    Poly out;
    size_t i = 0;
    auto skip_ws = [&]() { while (i < s.size() && s[i] == ' ') ++i; };
    bool first = true;
    while (true) {
        skip_ws();
        if (i >= s.size()) break;
        int sign = 1;
        if (s[i] == '+') { ++i; }
        else if (s[i] == '-') { sign = -1; ++i; }
        else if (!first) throw std::invalid_argument("polynomial: expected +/- at '" + s.substr(i) + "'");
        first = false;
        skip_ws();
        // coefficient (rational or decimal) and/or x^k
        mpq_class coeff = 1;
        bool have_coeff = false;
        size_t start = i;
        while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.' || s[i] == '/'))
            ++i;
        if (i > start) {
            auto q = parse_exact_rational(s.substr(start, i - start));
            if (!q) throw std::invalid_argument("polynomial: bad coefficient in '" + s + "'");
            coeff = *q;
            have_coeff = true;
        }
        skip_ws();
        if (i < s.size() && s[i] == '*') { ++i; skip_ws(); }
        int k = 0;
        if (i < s.size() && s[i] == 'x') {
            ++i;
            k = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                size_t es = i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
                if (i == es) throw std::invalid_argument("polynomial: missing exponent");
                k = std::stoi(s.substr(es, i - es));
            }
        } else if (!have_coeff) {
            throw std::invalid_argument("polynomial: empty term in '" + s + "'");
        }
        if (static_cast<size_t>(k) >= out.c.size()) out.c.resize(static_cast<size_t>(k) + 1, mpq_class(0));
        out.c[static_cast<size_t>(k)] += sign * coeff;
    }
    if (out.c.empty()) throw std::invalid_argument("empty polynomial");
    return out;
}

std::string Poly::str() const {
    std::string out;
    for (int k = degree(); k >= 0; --k) {
        const mpq_class& v = c[static_cast<size_t>(k)];
        if (v == 0) continue;
        if (!out.empty()) out += v > 0 ? "+" : "-";
        else if (v < 0) out += "-";
        mpq_class av = abs(v);
        if (av != 1 || k == 0) out += rat_str(av);
        if (k >= 1) {
            if (av != 1) out += "*";
            out += "x";
            if (k > 1) out += "^" + std::to_string(k);
        }
    }
    return out.empty() ? "0" : out;
}

} // namespace dioph
