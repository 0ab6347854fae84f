#pragma once

// Dense tableau simplex over the rationals, for small LPs.

#include <optional>
#include <vector>

#include "rbm32/rational.hpp"

namespace rbm32 {

struct LpSolution {
  Rational value;
  std::vector<Rational> x;
};

/// maximize c.x subject to A x <= b, x >= 0, with b >= 0 so the origin is
/// feasible. Bland's rule; returns nullopt when the objective is unbounded.
/// Throws std::invalid_argument on inconsistent shapes or negative b.
std::optional<LpSolution> maximize(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& b,
                                   const std::vector<Rational>& c);

/// Rank by Gaussian elimination over the rationals.
int exact_rank(std::vector<std::vector<Rational>> rows);

}  // namespace rbm32
