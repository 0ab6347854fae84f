#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "rbm32/tensor.hpp"

namespace rbm32 {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parses "num/den", "num", or a finite decimal such as "0.125".
/// Throws std::invalid_argument on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// The exact binary value of a finite double.
Rational exact_from_double(double v);

std::string to_string(const Rational& r);

inline Sign sign_of(const Rational& r) {
  int s = r.sign();
  return s > 0 ? Sign::Positive : (s < 0 ? Sign::Negative : Sign::Zero);
}

/// Exact tensor with the same invariants as ProbTensor (non-negative, sum 1).
class ExactTensor {
 public:
  explicit ExactTensor(const Array8<Rational>& entries);
  static ExactTensor normalized(const Array8<Rational>& weights);

  const Array8<Rational>& entries() const { return q_; }
  std::uint8_t zero_mask() const;
  ProbTensor to_double() const;

 private:
  Array8<Rational> q_;
};

}  // namespace rbm32
