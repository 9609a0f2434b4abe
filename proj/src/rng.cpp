#include "lol/rng.hpp"

#include <numeric>
#include <stdexcept>

namespace lol {

Rational parse_rational(const std::string& text) {
  Rational r;
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      // accept "0.25" style too
      if (text.find('.') != std::string::npos) {
        double v = std::stod(text);
        r.den = 1000000;
        r.num = static_cast<long>(v * static_cast<double>(r.den) + (v >= 0 ? 0.5 : -0.5));
        long g = std::gcd(r.num, r.den);
        if (g > 1) { r.num /= g; r.den /= g; }
      } else {
        r.num = std::stol(text);
        r.den = 1;
      }
    } else {
      r.num = std::stol(text.substr(0, slash));
      r.den = std::stol(text.substr(slash + 1));
    }
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse rational: " + text);
  }
  if (r.den <= 0) throw std::invalid_argument("rational denominator must be positive");
  return r;
}

}  // namespace lol
