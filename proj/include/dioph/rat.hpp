#pragma once

#include <gmpxx.h>
#include <string>
#include <optional>

namespace dioph {

// Nearest integer to num/den, ties to even.
mpz_class nearest_int(const mpq_class& q);

// Parses "p/q", a plain integer, or a finite decimal ("0.125", "-3.5e2")
// into an exact rational. Returns nothing for non-terminating forms.
std::optional<mpq_class> parse_exact_rational(const std::string& s);

std::string rat_str(const mpq_class& q);

} // namespace dioph
