#include "rbm32/rational.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rbm32 {

namespace {

BigInt parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw std::invalid_argument("malformed rational: " + std::string(whole));
  for (char c : digits)
    if (c < '0' || c > '9') throw std::invalid_argument("malformed rational: " + std::string(whole));
  return BigInt(std::string(digits));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(s.substr(0, slash), text);
    BigInt den = parse_integer(s.substr(slash + 1), text);
    if (den == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
    value = Rational(num, den);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    if (int_part.empty() && frac_part.empty())
      throw std::invalid_argument("malformed rational: " + std::string(text));
    BigInt whole = int_part.empty() ? BigInt(0) : parse_integer(int_part, text);
    BigInt frac = frac_part.empty() ? BigInt(0) : parse_integer(frac_part, text);
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    value = Rational(whole * scale + frac, scale);
  } else {
    value = Rational(parse_integer(s, text));
  }
  return negative ? Rational(-value) : value;
}

Rational exact_from_double(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite value has no exact rational form");
  int exponent = 0;
  double mantissa = std::frexp(v, &exponent);
  // 53 bits of mantissa fit exactly in a 64-bit integer.
  auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational r{BigInt(scaled)};
  BigInt power = 1;
  for (int i = 0; i < std::abs(exponent); ++i) power *= 2;
  return exponent >= 0 ? Rational(r * power) : Rational(r / power);
}

std::string to_string(const Rational& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

ExactTensor::ExactTensor(const Array8<Rational>& entries) : q_(entries) {
  Rational sum = 0;
  for (const auto& v : q_) {
    if (v < 0) throw InvalidTensor("tensor entry is negative");
    sum += v;
  }
  if (sum == 0) throw InvalidTensor("tensor is identically zero");
  if (sum != 1) throw InvalidTensor("tensor entries do not sum to one");
}

ExactTensor ExactTensor::normalized(const Array8<Rational>& weights) {
  Rational sum = 0;
  for (const auto& v : weights) {
    if (v < 0) throw InvalidTensor("tensor entry is negative");
    sum += v;
  }
  if (sum == 0) throw InvalidTensor("tensor is identically zero");
  Array8<Rational> q;
  for (int s = 0; s < kStates; ++s) q[s] = weights[s] / sum;
  return ExactTensor(q);
}

std::uint8_t ExactTensor::zero_mask() const {
  std::uint8_t mask = 0;
  for (int s = 0; s < kStates; ++s)
    if (q_[s] == 0) mask |= std::uint8_t(1u << s);
  return mask;
}

ProbTensor ExactTensor::to_double() const {
  Tensor8 w;
  for (int s = 0; s < kStates; ++s) w[s] = q_[s].convert_to<double>();
  return ProbTensor::normalized(w);
}

}  // namespace rbm32
