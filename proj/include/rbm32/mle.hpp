#pragma once

// Kullback-Leibler divergence and information projections onto M(3,3).
//
// The boundary of M(3,3) inside the simplex consists of six toric pieces
// P_{i,j} = {d_{i,j} = 0}. The projection of p onto P_{i,j} keeps the slice
// X_i = 1 - j and replaces the slice X_i = j by the product of its
// conditional marginals.

#include <optional>
#include <utility>
#include <vector>

#include "rbm32/tensor.hpp"

namespace rbm32 {

inline constexpr double kEpsTie = 1e-10;

/// A boundary piece P_{axis,value}; axis is 1-based.
struct Piece {
  int axis = 1;
  int value = 0;

  friend auto operator<=>(const Piece&, const Piece&) = default;
};

struct ProjectionResult {
  /// nullopt when the source already lies in the model.
  std::optional<Piece> piece;
  ProbTensor projected = ProbTensor::uniform();
  double divergence = 0.0;
};

/// sum_x p_x log(p_x / q_x) in nats; +inf when supp(p) is not inside supp(q).
double kl_divergence(const ProbTensor& p, const ProbTensor& q);

/// A slice of zero mass projects to p itself with divergence 0. Otherwise
/// the divergence is p(X_i = j) times the conditional mutual information of
/// the other two variables.
ProjectionResult project_to_piece(const ProbTensor& p, Piece piece);

struct ModelProjection {
  double divergence = 0.0;
  /// Every piece within kEpsTie of the minimum, sorted by (axis, value); a
  /// single entry with no piece for members of the model.
  std::vector<ProjectionResult> projections;
};

ModelProjection project_to_model(const ProbTensor& p);

/// u+ (even-parity states, 1/4 each) and u- (odd-parity states).
std::pair<ProbTensor, ProbTensor> divergence_maximizers();

/// (1/2) log 2, the largest divergence from any distribution to M(3,3).
double max_model_divergence();

}  // namespace rbm32
