#include "gasketwalk/chain.hpp"

#include <stdexcept>

namespace gasket {

namespace {

ChainParams checked(Rat p, ArithmeticMode mode) {
  if (!(p > 0 && 2 * p < 1)) throw std::invalid_argument("p must lie in (0, 1/2)");
  ChainParams params;
  params.p = std::move(p);
  params.mode = mode;
  return params;
}

}  // namespace

std::optional<Rat> parse_rational(const std::string& text) {
  if (text.empty()) return std::nullopt;
  auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      mpz_class num(text.substr(0, slash), 10);
      mpz_class den(text.substr(slash + 1), 10);
      if (den == 0) return std::nullopt;
      Rat q(num, den);
      q.canonicalize();
      return q;
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) {
      mpz_class whole(text, 10);
      return Rat(whole);
    }
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    if (digits.empty() || digits == "-" || digits == "+") return std::nullopt;
    mpz_class num(digits, 10);
    mpz_class den = 1;
    for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
    Rat q(num, den);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

ChainParams ChainParams::parse(const std::string& text) {
  const bool decimal = text.find('.') != std::string::npos;
  return parse(text, decimal ? ArithmeticMode::kFloating : ArithmeticMode::kExact);
}

ChainParams ChainParams::parse(const std::string& text, ArithmeticMode mode) {
  auto q = parse_rational(text);
  if (!q) throw std::invalid_argument("cannot parse probability: " + text);
  return checked(*q, mode);
}

ChainParams ChainParams::from_fraction(long num, long den, ArithmeticMode mode) {
  Rat q(num, den);
  q.canonicalize();
  return checked(q, mode);
}

}  // namespace gasket
