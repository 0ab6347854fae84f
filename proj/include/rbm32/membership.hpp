#pragma once

// Semi-algebraic membership tests.
//
// On the interior of the simplex the models RBM(3,2) and M(3,3) coincide and
// are the union of six sets, each asking that the two determinants of an
// opposite slice pair share a sign:
//
//   set 1 {d10 >= 0, d11 >= 0}   set 2 {d10 <= 0, d11 <= 0}
//   set 3 {d20 >= 0, d21 >= 0}   set 4 {d20 <= 0, d21 <= 0}
//   set 5 {d30 >= 0, d31 >= 0}   set 6 {d30 <= 0, d31 <= 0}
//
// M(3,3) is closed and the same six sets describe it on all of the simplex.
// RBM(3,2) is not closed: on the boundary it holds exactly the distributions
// where every zero state has a zero Hamming neighbour.

#include <cstdint>
#include <optional>
#include <string_view>

#include "rbm32/rational.hpp"
#include "rbm32/tensor.hpp"

namespace rbm32 {

enum class Model { RBM32, M33, M32, Independence };

std::string_view model_name(Model m);
/// Accepts "rbm32", "m33", "m32", "indep"/"independence". Throws std::invalid_argument.
Model parse_model(std::string_view name);

struct MembershipVerdict {
  bool member = false;
  /// 1..6 for the opposite-pair sets, 1..4 for the M(3,2) patterns; lowest index
  /// wins. Empty for non-members.
  std::optional<int> witness_set;
  /// Some entry is at or below kEpsZero (exactly zero in exact mode).
  bool boundary_case = false;
};

/// Lowest-index opposite-pair set satisfied by the signs (zero satisfies both).
std::optional<int> pair_set_witness(const std::array<Sign, 6>& signs);

/// Lowest-index M(3,2) sign pattern satisfied: pattern 1 is all >= 0,
/// patterns 2..4 reverse two of the three determinant pairs, leaving pair
/// 1, 2, 3 respectively untouched.
std::optional<int> m32_pattern_witness(const std::array<Sign, 6>& signs);

/// Every zero state has a zero Hamming neighbour.
bool hamming_zero_condition(std::uint8_t zero_mask);

MembershipVerdict in_rbm32(const ProbTensor& p);
MembershipVerdict in_m33(const ProbTensor& p);
/// Interior only; throws DegenerateInput on boundary input.
MembershipVerdict in_m32(const ProbTensor& p);
/// Interior only; throws DegenerateInput on boundary input.
MembershipVerdict in_independence(const ProbTensor& p);

MembershipVerdict check_membership(Model model, const ProbTensor& p);

/// Same tests with exact signs and exact zeros.
MembershipVerdict check_membership(Model model, const ExactTensor& p);

/// Non-throwing accept used by the batch kernels; boundary input to the
/// interior-only tests counts as rejected.
bool accepts(Model model, const ProbTensor& p);

}  // namespace rbm32
