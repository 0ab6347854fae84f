#pragma once

// Constructive membership certificates.
//
//  * rank3_decompose: p as a sum of three non-negative rank-one tensors
//    (any member of M(3,3)).
//  * hadamard_factorize: p as the entrywise product of two non-negative
//    rank-two tensors (any member of RBM(3,2)).
//  * rank2_decompose: the two rank-one terms of a non-negative rank-two tensor.

#include <array>
#include <string_view>

#include "rbm32/tensor.hpp"

namespace rbm32 {

inline constexpr double kEpsReconstruct = 1e-10;
/// Factor entries in (-kClampNegative, 0) are rounded to zero; anything more
/// negative is a failed construction.
inline constexpr double kClampNegative = 1e-14;

using Factor = std::array<double, 2>;

/// a ⊗ b ⊗ c with factors along axes 1, 2, 3.
struct RankOneTensor {
  Factor a{}, b{}, c{};

  static RankOneTensor zero() { return {}; }
  /// Factors listed by axis.
  static RankOneTensor from_axes(const std::array<Factor, 3>& by_axis);

  const Factor& factor(int axis) const { return axis == 0 ? a : (axis == 1 ? b : c); }
  Factor& factor(int axis) { return axis == 0 ? a : (axis == 1 ? b : c); }

  double at(int state) const {
    return a[state_bit(state, 0)] * b[state_bit(state, 1)] * c[state_bit(state, 2)];
  }
  Tensor8 expand() const;
  double min_entry() const;
};

/// The rank-one tensor whose expansion is apply_symmetry(g, t.expand()).
RankOneTensor apply_symmetry(const CubeSymmetry& g, const RankOneTensor& t);

/// Which construction produced a certificate.
enum class CertificateRoute {
  RankOne,              ///< input already rank one
  Boundary,             ///< support-based split for boundary input
  VanishingDeterminant, ///< a slice of rank one
  Generic,              ///< interior, all determinants non-zero
};

std::string_view route_name(CertificateRoute r);

struct Rank3Decomposition {
  std::array<RankOneTensor, 3> terms{};
  CertificateRoute route = CertificateRoute::Generic;

  Tensor8 expand() const;
};

/// (first[0] + first[1]) * (second[0] + second[1]), entrywise.
struct HadamardFactorization {
  std::array<RankOneTensor, 2> first{};
  std::array<RankOneTensor, 2> second{};
  CertificateRoute route = CertificateRoute::Generic;

  Tensor8 first_tensor() const;
  Tensor8 second_tensor() const;
  Tensor8 expand() const;
};

/// Throws NotMember for tensors outside M(3,3).
Rank3Decomposition rank3_decompose(const ProbTensor& p);

/// Throws NotMember for tensors outside RBM(3,2).
HadamardFactorization hadamard_factorize(const ProbTensor& p);

/// Splits a non-negative tensor of non-negative rank at most two into two
/// rank-one terms. Any positive scale is accepted. A rank-one input comes back
/// as itself plus a zero term. Throws NotMember when no non-negative rank-two
/// representation exists (for positive input: none of the M(3,2) sign
/// patterns holds).
std::array<RankOneTensor, 2> rank2_decompose(const Tensor8& t);

/// sup |x - y|.
double sup_distance(const Tensor8& x, const Tensor8& y);

}  // namespace rbm32
