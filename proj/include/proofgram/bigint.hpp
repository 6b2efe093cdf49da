#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace proofgram {

using BigInt = boost::multiprecision::cpp_int;

/// Renders |v| >= 10^7 as "m.mm×10^e" with the given number of significant digits,
/// smaller values in full decimal with thousands separators.
std::string format_big(const BigInt& v, int significant = 3);

/// Plain decimal with ',' thousands separators.
std::string with_separators(const BigInt& v);

} // namespace proofgram
