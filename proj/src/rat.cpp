#include "dioph/rat.hpp"

#include <cctype>
#include <stdexcept>

namespace dioph {

mpz_class nearest_int(const mpq_class& q) {
    mpz_class num = q.get_num(), den = q.get_den();
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    mpq_class frac = q - mpq_class(fl);
    mpq_class twice = frac * 2;
    if (twice < 1) return fl;
    if (twice > 1) return fl + 1;
    // exact half: pick the even neighbor
    return mpz_even_p(fl.get_mpz_t()) ? fl : mpz_class(fl + 1);
}

std::optional<mpq_class> parse_exact_rational(const std::string& s) {
    if (s.empty()) return std::nullopt;
    if (s.find('/') != std::string::npos) {
        try {
            mpq_class q(s);
            q.canonicalize();
            return q;
        } catch (...) {
            return std::nullopt;
        }
    }
    // decimal form: sign, digits, optional '.', digits, optional exponent
    std::string t = s;
    bool neg = false;
    size_t i = 0;
    if (t[i] == '+' || t[i] == '-') { neg = t[i] == '-'; ++i; }
    std::string digits;
    long scale = 0;
    bool seen_dot = false, any = false;
    for (; i < t.size(); ++i) {
        char c = t[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits += c;
            if (seen_dot) ++scale;
            any = true;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else if ((c == 'e' || c == 'E') && any) {
            long e = std::stol(t.substr(i + 1));
            scale -= e;
            i = t.size() - 1;
        } else {
            return std::nullopt;
        }
    }
    if (!any) return std::nullopt;
    mpz_class num(digits.empty() ? "0" : digits, 10);
    if (neg) num = -num;
    mpq_class q;
    if (scale >= 0) {
        mpz_class den = 1;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(scale));
        q = mpq_class(num, den);
    } else {
        mpz_class mul = 1;
        mpz_ui_pow_ui(mul.get_mpz_t(), 10, static_cast<unsigned long>(-scale));
        q = mpq_class(num * mul);
    }
    q.canonicalize();
    return q;
}

std::string rat_str(const mpq_class& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

} // namespace dioph
