#include "rbm32/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rbm32 {

std::string state_label(int state) {
  std::string s(3, '0');
  for (int a = 0; a < 3; ++a) s[a] = char('0' + state_bit(state, a));
  return s;
}

ProbTensor::ProbTensor(const Tensor8& entries) : p_(entries) {
  double sum = 0.0;
  for (double v : p_) {
    if (!std::isfinite(v)) throw InvalidTensor("tensor entry is not finite");
    if (v < 0.0) throw InvalidTensor("tensor entry is negative");
    sum += v;
  }
  if (sum == 0.0) throw InvalidTensor("tensor is identically zero");
  if (std::abs(sum - 1.0) > kEpsSum) throw InvalidTensor("tensor entries do not sum to one");
}

ProbTensor ProbTensor::normalized(const Tensor8& weights) {
  double sum = 0.0;
  for (double v : weights) {
    if (!std::isfinite(v)) throw InvalidTensor("tensor entry is not finite");
    if (v < 0.0) throw InvalidTensor("tensor entry is negative");
    sum += v;
  }
  if (sum <= 0.0) throw InvalidTensor("tensor is identically zero");
  Tensor8 p;
  for (int s = 0; s < kStates; ++s) p[s] = weights[s] / sum;
  return ProbTensor(p);
}

ProbTensor ProbTensor::uniform() {
  Tensor8 p;
  p.fill(1.0 / 8.0);
  return ProbTensor(p);
}

ProbTensor ProbTensor::delta(int state) {
  Tensor8 p{};
  p[state] = 1.0;
  return ProbTensor(p);
}

bool ProbTensor::is_interior() const {
  return std::all_of(p_.begin(), p_.end(), [](double v) { return v > kEpsZero; });
}

std::uint8_t ProbTensor::zero_mask() const {
  std::uint8_t mask = 0;
  for (int s = 0; s < kStates; ++s)
    if (p_[s] <= kEpsZero) mask |= std::uint8_t(1u << s);
  return mask;
}

LogTensor LogTensor::of(const ProbTensor& p) {
  LogTensor l;
  for (int s = 0; s < kStates; ++s) l.values[s] = std::log(p[s]);
  return l;
}

bool LogTensor::is_finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

ProbTensor LogTensor::to_distribution() const {
  // Shift by the maximum so exp never overflows.
  double top = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(top)) throw InvalidTensor("log tensor has no finite maximum");
  Tensor8 w;
  for (int s = 0; s < kStates; ++s) w[s] = std::exp(values[s] - top);
  return ProbTensor::normalized(w);
}

char sign_char(Sign s) {
  switch (s) {
    case Sign::Negative: return '-';
    case Sign::Zero: return '0';
    case Sign::Positive: return '+';
  }
  return '?';
}

DetSignature determinants(const Tensor8& p) {
  DetSignature sig;
  for (int slot = 0; slot < 6; ++slot) {
    const auto& t = kDetTerms[slot];
    double plus = p[t[0]] * p[t[1]];
    double minus = p[t[2]] * p[t[3]];
    double value = plus - minus;
    double scale = std::max(std::abs(plus), std::abs(minus));
    sig.values[slot] = value;
    if (std::abs(value) <= kEpsDet * scale)
      sig.signs[slot] = Sign::Zero;
    else
      sig.signs[slot] = value > 0 ? Sign::Positive : Sign::Negative;
  }
  return sig;
}

CubeSymmetry CubeSymmetry::swap_axes(int a, int b) {
  CubeSymmetry g;
  std::swap(g.perm[a], g.perm[b]);
  return g;
}

int CubeSymmetry::apply(int state) const {
  int out = 0;
  for (int a = 0; a < 3; ++a) {
    int bit = state_bit(state, perm[a]) ^ int(flips_axis(a));
    out |= bit << (2 - a);
  }
  return out;
}

CubeSymmetry CubeSymmetry::compose(const CubeSymmetry& other) const {
  CubeSymmetry g;
  g.flips = 0;
  for (int a = 0; a < 3; ++a) {
    g.perm[a] = other.perm[perm[a]];
    int bit = int(other.flips_axis(perm[a])) ^ int(flips_axis(a));
    g.flips |= std::uint8_t(bit << (2 - a));
  }
  return g;
}

CubeSymmetry CubeSymmetry::inverse() const {
  for (const auto& g : all_symmetries())
    if (g.compose(*this) == identity()) return g;
  throw InternalError("cube symmetry has no inverse");
}

const std::array<CubeSymmetry, 48>& all_symmetries() {
  static const std::array<CubeSymmetry, 48> group = [] {
    std::array<CubeSymmetry, 48> out{};
    std::array<int, 3> perm{0, 1, 2};
    int n = 0;
    do {
      for (int f = 0; f < 8; ++f) out[n++] = CubeSymmetry{perm, std::uint8_t(f)};
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
  }();
  return group;
}

ProbTensor apply_symmetry(const CubeSymmetry& g, const ProbTensor& p) {
  return ProbTensor(apply_symmetry(g, p.entries()));
}

CharacterVector to_character_basis(const LogTensor& l) {
  if (!l.is_finite())
    throw InvalidTensor("log tensor has zero probability; character basis undefined");
  CharacterVector out;
  for (int s = 0; s < kStates; ++s) {
    double acc = 0.0;
    for (int x = 0; x < kStates; ++x) acc += character_entry(s, x) * l.values[x];
    out.m[s] = acc;
  }
  return out;
}

LogTensor from_character_basis(const CharacterVector& m) {
  LogTensor l;
  for (int x = 0; x < kStates; ++x) {
    double acc = 0.0;
    for (int s = 0; s < kStates; ++s) acc += character_entry(s, x) * m.m[s];
    l.values[x] = acc / 8.0;
  }
  return l;
}

}  // namespace rbm32
