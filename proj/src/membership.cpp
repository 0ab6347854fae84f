#include "rbm32/membership.hpp"

#include <stdexcept>
#include <string>

namespace rbm32 {

namespace {

bool at_least(Sign s, Sign bound) { return s == Sign::Zero || s == bound; }

// Sign each determinant pair must carry in the M(3,2) patterns.
constexpr std::array<std::array<Sign, 3>, 4> kM32Patterns = {{
    {Sign::Positive, Sign::Positive, Sign::Positive},
    {Sign::Positive, Sign::Negative, Sign::Negative},
    {Sign::Negative, Sign::Positive, Sign::Negative},
    {Sign::Negative, Sign::Negative, Sign::Positive},
}};

MembershipVerdict pair_set_verdict(const std::array<Sign, 6>& signs, bool boundary) {
  MembershipVerdict v;
  v.witness_set = pair_set_witness(signs);
  v.member = v.witness_set.has_value();
  v.boundary_case = boundary;
  return v;
}

MembershipVerdict rbm32_verdict(const std::array<Sign, 6>& signs, std::uint8_t zeros) {
  MembershipVerdict v = pair_set_verdict(signs, zeros != 0);
  if (zeros != 0) v.member = hamming_zero_condition(zeros);
  if (!v.member) v.witness_set.reset();
  return v;
}

MembershipVerdict m32_verdict(const std::array<Sign, 6>& signs) {
  MembershipVerdict v;
  v.witness_set = m32_pattern_witness(signs);
  v.member = v.witness_set.has_value();
  return v;
}

MembershipVerdict independence_verdict(const std::array<Sign, 6>& signs) {
  MembershipVerdict v;
  v.member = true;
  for (Sign s : signs) v.member = v.member && s == Sign::Zero;
  if (v.member) v.witness_set = 1;
  return v;
}

void require_interior(std::uint8_t zeros) {
  if (zeros != 0) throw DegenerateInput("M32 membership implemented on interior only");
}

MembershipVerdict dispatch(Model model, const std::array<Sign, 6>& signs, std::uint8_t zeros) {
  switch (model) {
    case Model::RBM32: return rbm32_verdict(signs, zeros);
    case Model::M33: return pair_set_verdict(signs, zeros != 0);
    case Model::M32: require_interior(zeros); return m32_verdict(signs);
    case Model::Independence: require_interior(zeros); return independence_verdict(signs);
  }
  throw std::invalid_argument("unknown model");
}

}  // namespace

std::string_view model_name(Model m) {
  switch (m) {
    case Model::RBM32: return "rbm32";
    case Model::M33: return "m33";
    case Model::M32: return "m32";
    case Model::Independence: return "indep";
  }
  return "?";
}

Model parse_model(std::string_view name) {
  if (name == "rbm32") return Model::RBM32;
  if (name == "m33") return Model::M33;
  if (name == "m32") return Model::M32;
  if (name == "indep" || name == "independence") return Model::Independence;
  throw std::invalid_argument("unknown model '" + std::string(name) + "' (expected rbm32, m33, m32, indep)");
}

std::optional<int> pair_set_witness(const std::array<Sign, 6>& signs) {
  for (int axis = 0; axis < 3; ++axis) {
    Sign lo = signs[2 * axis], hi = signs[2 * axis + 1];
    if (at_least(lo, Sign::Positive) && at_least(hi, Sign::Positive)) return 2 * axis + 1;
    if (at_least(lo, Sign::Negative) && at_least(hi, Sign::Negative)) return 2 * axis + 2;
  }
  return std::nullopt;
}

std::optional<int> m32_pattern_witness(const std::array<Sign, 6>& signs) {
  for (int pat = 0; pat < 4; ++pat) {
    bool ok = true;
    for (int axis = 0; axis < 3 && ok; ++axis) {
      Sign want = kM32Patterns[pat][axis];
      ok = at_least(signs[2 * axis], want) && at_least(signs[2 * axis + 1], want);
    }
    if (ok) return pat + 1;
  }
  return std::nullopt;
}

bool hamming_zero_condition(std::uint8_t zero_mask) {
  for (int s = 0; s < kStates; ++s) {
    if (!((zero_mask >> s) & 1)) continue;
    bool has_zero_neighbour = false;
    for (int axis = 0; axis < 3; ++axis)
      has_zero_neighbour = has_zero_neighbour || ((zero_mask >> hamming_neighbour(s, axis)) & 1);
    if (!has_zero_neighbour) return false;
  }
  return true;
}

MembershipVerdict in_rbm32(const ProbTensor& p) { return check_membership(Model::RBM32, p); }
MembershipVerdict in_m33(const ProbTensor& p) { return check_membership(Model::M33, p); }
MembershipVerdict in_m32(const ProbTensor& p) { return check_membership(Model::M32, p); }
MembershipVerdict in_independence(const ProbTensor& p) {
  return check_membership(Model::Independence, p);
}

MembershipVerdict check_membership(Model model, const ProbTensor& p) {
  // Entries at or below kEpsZero count as exact zeros, both for the support
  // condition and for the determinant signs.
  std::uint8_t zeros = p.zero_mask();
  Tensor8 cleaned = p.entries();
  for (int s = 0; s < kStates; ++s)
    if ((zeros >> s) & 1) cleaned[s] = 0.0;
  return dispatch(model, determinants(cleaned).signs, zeros);
}

MembershipVerdict check_membership(Model model, const ExactTensor& p) {
  auto dets = slice_determinants(p.entries());
  std::array<Sign, 6> signs;
  for (int i = 0; i < 6; ++i) signs[i] = sign_of(dets[i]);
  return dispatch(model, signs, p.zero_mask());
}

bool accepts(Model model, const ProbTensor& p) {
  std::uint8_t zeros = p.zero_mask();
  if (zeros != 0 && (model == Model::M32 || model == Model::Independence)) return false;
  return check_membership(model, p).member;
}

}  // namespace rbm32
