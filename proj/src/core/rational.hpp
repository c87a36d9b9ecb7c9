#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace uail {

/// Exact rational arithmetic. All probability masses, prior weights and
/// bracket endpoints are mpq_class values; doubles appear only on the far
/// side of the log/entropy boundary.
using Rat = mpq_class;

/// 2^(-n) as an exact rational.
Rat pow2_neg(unsigned n);

/// Nonnegative rational power q^n.
Rat rat_pow(const Rat& q, unsigned n);

/// Parses "p/q", "p", or a plain decimal like "0.125" into an exact rational.
/// Throws uail::SchemaError on malformed input or zero denominator.
Rat parse_rat(const std::string& text);

/// Canonical "p/q" form ("p" when the denominator is 1).
std::string rat_str(const Rat& q);

/// Shortest-round-trip decimal rendering used in reports (17 significant
/// digits); kept in one place so every emitter formats doubles identically.
std::string double_str(double v);

}  // namespace uail
