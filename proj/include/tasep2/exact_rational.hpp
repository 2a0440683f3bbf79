#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace tasep2
{
    /// Arbitrary-precision rational in canonical form (GMP keeps it reduced
    /// with a positive denominator after every operation).
    using ExactRational = mpq_class;
    using BigInt = mpz_class;

    /// Parses "p/q", an integer, or a finite decimal such as "0.125" exactly.
    /// Throws Error(ConfigError) on malformed input.
    ExactRational parse_rational(std::string_view text);

    std::string to_string(const ExactRational &q);

    double to_double(const ExactRational &q);
}
