#include "proofgram/bigint.hpp"

namespace proofgram {

std::string with_separators(const BigInt& v) {
  std::string digits = BigInt(boost::multiprecision::abs(v)).str();
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && (digits.size() - i) % 3 == 0) out += ',';
    out += digits[i];
  }
  return v < 0 ? "-" + out : out;
}

std::string format_big(const BigInt& v, int significant) {
  if (boost::multiprecision::abs(v) < BigInt(10'000'000)) return with_separators(v);
  std::string digits = BigInt(boost::multiprecision::abs(v)).str();
  auto exponent = static_cast<long>(digits.size()) - 1;
  auto keep = static_cast<std::size_t>(std::max(1, significant));
  std::string mant = digits.substr(0, keep);
  if (digits.size() > keep && digits[keep] >= '5') {
    // Round half up in decimal.
    int i = static_cast<int>(mant.size()) - 1;
    while (i >= 0 && mant[static_cast<std::size_t>(i)] == '9') mant[static_cast<std::size_t>(i--)] = '0';
    if (i < 0) {
      mant.insert(mant.begin(), '1');
      mant.pop_back();
      ++exponent;
    } else {
      ++mant[static_cast<std::size_t>(i)];
    }
  }
  std::string out = v < 0 ? "-" : "";
  out += mant[0];
  if (mant.size() > 1) out += "." + mant.substr(1);
  out += "×10^" + std::to_string(exponent);
  return out;
}

} // namespace proofgram
