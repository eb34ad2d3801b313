#include "openmaps/rational.hpp"

namespace openmaps {

std::optional<Rational> parse_rational(const std::string& text) {
  if (text.empty()) return std::nullopt;
  auto is_int = [](const std::string& s) {
    if (s.empty()) return false;
    size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  try {
    auto slash = text.find('/');
    if (slash != std::string::npos) {
      std::string num = text.substr(0, slash), den = text.substr(slash + 1);
      if (!is_int(num) || !is_int(den)) return std::nullopt;
      BigInt n(num), d(den);
      if (d == 0) return std::nullopt;
      return Rational(n, d);
    }
    auto dot = text.find('.');
    if (dot != std::string::npos) {
      std::string whole = text.substr(0, dot), frac = text.substr(dot + 1);
      bool neg = !whole.empty() && whole[0] == '-';
      if (whole == "-" || whole == "+" || whole.empty()) whole += "0";
      if (frac.empty()) return std::nullopt;
      if (!is_int(whole) || !is_int(frac)) return std::nullopt;
      BigInt w(whole), f(frac), scale = 1;
      for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
      BigInt n = (neg ? -1 : 1) * (abs(w) * scale + f);
      return Rational(n, scale);
    }
    if (!is_int(text)) return std::nullopt;
    return Rational(BigInt(text));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::string format_rational(const Rational& q) {
  std::string num = numerator(q).str();
  if (denominator(q) == 1) return num;
  return num + "/" + denominator(q).str();
}

}  // namespace openmaps
