#include "rbm32/exact_lp.hpp"

#include <stdexcept>
#include <utility>

namespace rbm32 {

std::optional<LpSolution> maximize(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& b,
                                   const std::vector<Rational>& c) {
  const std::size_t m = A.size(), n = c.size();
  if (b.size() != m) throw std::invalid_argument("lp: row count mismatch");
  for (std::size_t i = 0; i < m; ++i) {
    if (A[i].size() != n) throw std::invalid_argument("lp: column count mismatch");
    if (b[i] < 0) throw std::invalid_argument("lp: right-hand side must be non-negative");
  }

  // Tableau rows 0..m-1 are constraints with slack columns n..n+m-1; the last
  // column is the right-hand side. The objective row holds reduced costs -c.
  const std::size_t cols = n + m + 1;
  std::vector<std::vector<Rational>> T(m + 1, std::vector<Rational>(cols));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) T[i][j] = A[i][j];
    T[i][n + i] = 1;
    T[i][cols - 1] = b[i];
    basis[i] = n + i;
  }
  for (std::size_t j = 0; j < n; ++j) T[m][j] = -c[j];

  for (;;) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j + 1 < cols; ++j)
      if (T[m][j] < 0) {
        enter = j;
        break;
      }
    if (enter == cols) break;

    std::size_t leave = m;
    Rational best_ratio;
    for (std::size_t i = 0; i < m; ++i) {
      if (T[i][enter] <= 0) continue;
      Rational ratio = T[i][cols - 1] / T[i][enter];
      if (leave == m || ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == m) return std::nullopt;

    Rational pivot = T[leave][enter];
    for (auto& v : T[leave]) v /= pivot;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave || T[i][enter] == 0) continue;
      Rational f = T[i][enter];
      for (std::size_t j = 0; j < cols; ++j)
        if (T[leave][j] != 0) T[i][j] -= f * T[leave][j];
    }
    basis[leave] = enter;
  }

  LpSolution sol;
  sol.value = T[m][cols - 1];
  sol.x.assign(n, Rational(0));
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) sol.x[basis[i]] = T[i][cols - 1];
  return sol;
}

int exact_rank(std::vector<std::vector<Rational>> rows) {
  if (rows.empty()) return 0;
  const std::size_t n = rows[0].size();
  int rank = 0;
  for (std::size_t col = 0; col < n && rank < int(rows.size()); ++col) {
    std::size_t pivot = rows.size();
    for (std::size_t r = rank; r < rows.size(); ++r)
      if (rows[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (rows[r][col] == 0) continue;
      Rational f = rows[r][col] / rows[rank][col];
      for (std::size_t j = col; j < n; ++j) rows[r][j] -= f * rows[rank][j];
    }
    ++rank;
  }
  return rank;
}

}  // namespace rbm32
