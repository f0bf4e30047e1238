#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace paperfold {

using Rat = mpq_class;

// Parses "p/q", "p" or a finite decimal such as "0.125". Throws on junk.
Rat parse_rat(std::string_view text);
bool try_parse_rat(std::string_view text, Rat& out);

// Canonical "p/q" (or "p" when q == 1).
std::string rat_str(const Rat& r);

double to_double(const Rat& r);
long double to_ldouble(const Rat& r);

// 12 significant digits, the fixed report precision.
std::string dec12(double v);
std::string dec12(const Rat& r);

Rat rat_abs(const Rat& r);
Rat rat_min(const Rat& a, const Rat& b);
Rat rat_max(const Rat& a, const Rat& b);

// Largest dyadic rational p/2^bits that does not exceed v.
Rat floor_dyadic(double v, int bits);

// Exact square root when r is the square of a rational.
bool rat_sqrt(const Rat& r, Rat& out);

struct RatHash {
    std::size_t operator()(const Rat& r) const;
};

}  // namespace paperfold
