#pragma once

// Internals of the interior Hadamard factorization, exposed for tests.

#include <array>

#include "rbm32/tensor.hpp"

namespace rbm32::detail {

/// The eight spanning vectors of the lineality space of the tropical
/// factorization, as lexicographic tensors. Rows 0-3 belong to the X cone,
/// rows 4-7 to the Y cone.
const std::array<Tensor8, 8>& spanning_rows();

/// A log-tensor l with d10, d11 >= 0 written as l = x_part + y_part, where
/// exp(x_part) and exp(y_part) each satisfy the M(3,2) sign condition.
struct LogSplit {
  double alpha = 0.0;  ///< l000 + l011 - l001 - l010
  double beta = 0.0;   ///< l100 + l111 - l101 - l110
  std::array<double, 8> coefficients{};
  Tensor8 x_part{};
  Tensor8 y_part{};
};

/// Throws InternalError when the least-squares residual exceeds 1e-9.
LogSplit split_log_tensor(const Tensor8& l);

}  // namespace rbm32::detail
