#include "rbm32/mle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rbm32/membership.hpp"

namespace rbm32 {

namespace {

std::array<int, 2> other_axes(int axis0) {
  switch (axis0) {
    case 0: return {1, 2};
    case 1: return {0, 2};
    default: return {0, 1};
  }
}

int slice_state(int axis0, int value, int x, int y) {
  auto [b, c] = other_axes(axis0);
  return (value << (2 - axis0)) | (x << (2 - b)) | (y << (2 - c));
}

}  // namespace

double kl_divergence(const ProbTensor& p, const ProbTensor& q) {
  double d = 0.0;
  for (int s = 0; s < kStates; ++s) {
    if (p[s] <= 0.0) continue;
    if (q[s] <= 0.0) return std::numeric_limits<double>::infinity();
    d += p[s] * std::log(p[s] / q[s]);
  }
  return std::max(d, 0.0);
}

ProjectionResult project_to_piece(const ProbTensor& p, Piece piece) {
  if (piece.axis < 1 || piece.axis > 3 || (piece.value != 0 && piece.value != 1))
    throw std::invalid_argument("piece must have axis in 1..3 and value in {0,1}");
  const int axis0 = piece.axis - 1;
  ProjectionResult out;
  out.piece = piece;

  double mass = 0.0;
  std::array<double, 2> rows{}, cols{};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      double v = p[slice_state(axis0, piece.value, x, y)];
      mass += v;
      rows[x] += v;
      cols[y] += v;
    }
  if (mass <= 0.0) {
    out.projected = p;
    return out;
  }

  Tensor8 q = p.entries();
  double divergence = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      int s = slice_state(axis0, piece.value, x, y);
      double independent = rows[x] * cols[y] / mass;
      if (p[s] > 0.0) divergence += p[s] * std::log(p[s] / independent);
      q[s] = independent;
    }
  out.projected = ProbTensor::normalized(q);
  out.divergence = std::max(divergence, 0.0);
  return out;
}

ModelProjection project_to_model(const ProbTensor& p) {
  ModelProjection out;
  if (in_m33(p).member) {
    out.projections.push_back(ProjectionResult{std::nullopt, p, 0.0});
    return out;
  }
  std::vector<ProjectionResult> all;
  for (int axis = 1; axis <= 3; ++axis)
    for (int value = 0; value < 2; ++value) all.push_back(project_to_piece(p, Piece{axis, value}));
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : all) best = std::min(best, r.divergence);
  for (auto& r : all)
    if (r.divergence <= best + kEpsTie) out.projections.push_back(std::move(r));
  out.divergence = best;
  return out;
}

std::pair<ProbTensor, ProbTensor> divergence_maximizers() {
  Tensor8 plus{}, minus{};
  for (int s = 0; s < kStates; ++s) {
    bool even = (__builtin_popcount(unsigned(s)) % 2) == 0;
    (even ? plus : minus)[s] = 0.25;
  }
  return {ProbTensor(plus), ProbTensor(minus)};
}

double max_model_divergence() { return 0.5 * std::log(2.0); }

}  // namespace rbm32
