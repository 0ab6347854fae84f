#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "rbm32/membership.hpp"
#include "rbm32/mle.hpp"
#include "test_support.hpp"

using namespace rbm32;
using namespace rbm32::testing;

namespace {

const double kHalfLog2 = 0.5 * std::log(2.0);

// State with bit `axis` (1-based) equal to `value` and the remaining two
// axes, in increasing order, equal to u and v.
int slice_state(int axis, int value, int u, int v) {
  int bits[3];
  int other = 0;
  for (int a = 0; a < 3; ++a) bits[a] = (a == axis - 1) ? value : (other++ == 0 ? u : v);
  return state_index(bits[0], bits[1], bits[2]);
}

// Conditional mutual information of the other two variables given X_axis = value,
// weighted by the slice mass.
double weighted_cmi(const ProbTensor& p, Piece piece) {
  double m = 0.0, r[2] = {0, 0}, c[2] = {0, 0};
  for (int u = 0; u < 2; ++u)
    for (int v = 0; v < 2; ++v) {
      double x = p[slice_state(piece.axis, piece.value, u, v)];
      m += x;
      r[u] += x;
      c[v] += x;
    }
  double acc = 0.0;
  for (int u = 0; u < 2; ++u)
    for (int v = 0; v < 2; ++v) {
      double x = p[slice_state(piece.axis, piece.value, u, v)];
      if (x > 0) acc += x * std::log(x * m / (r[u] * c[v]));
    }
  return acc;
}

double piece_determinant(const Tensor8& q, Piece piece) {
  return q[slice_state(piece.axis, piece.value, 0, 0)] * q[slice_state(piece.axis, piece.value, 1, 1)] -
         q[slice_state(piece.axis, piece.value, 0, 1)] * q[slice_state(piece.axis, piece.value, 1, 0)];
}

std::vector<Piece> all_pieces() {
  std::vector<Piece> out;
  for (int a = 1; a <= 3; ++a)
    for (int v = 0; v < 2; ++v) out.push_back({a, v});
  return out;
}

// A point of the mixture of three product distributions: softmax weights
// and logistic factor entries, so every parameter vector is admissible.
ProbTensor mixture3(const std::array<double, 12>& t) {
  Tensor8 q{};
  double wmax = std::max({t[0], t[1], t[2]});
  double w[3], wsum = 0.0;
  for (int k = 0; k < 3; ++k) wsum += w[k] = std::exp(t[k] - wmax);
  for (int k = 0; k < 3; ++k) {
    double f[3];
    for (int a = 0; a < 3; ++a) f[a] = 1.0 / (1.0 + std::exp(-t[3 + 3 * k + a]));
    for (int s = 0; s < kStates; ++s) {
      double x = w[k] / wsum;
      for (int a = 0; a < 3; ++a) x *= state_bit(s, a) ? f[a] : 1.0 - f[a];
      q[s] += x;
    }
  }
  return ProbTensor::normalized(q);
}

// Minimizes D(p||q) over the three-component mixture parametrization: random
// draws, then adaptive random-walk refinement from the best few of them.
double parametric_divergence_oracle(const ProbTensor& p, std::uint64_t seed, int draws) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  std::vector<std::pair<double, std::array<double, 12>>> pool;
  for (int it = 0; it < draws; ++it) {
    std::array<double, 12> t;
    for (double& x : t) x = u(rng);
    pool.push_back({kl_divergence(p, mixture3(t)), t});
  }
  std::partial_sort(pool.begin(), pool.begin() + 8, pool.end(),
                    [](const auto& a, const auto& b) { return a.first < b.first; });
  double overall = pool.front().first;
  for (int start = 0; start < 8; ++start) {
    auto [best_d, best] = pool[start];
    double step = 0.5;
    int since_improvement = 0;
    for (int it = 0; it < 60000 && step > 1e-8; ++it) {
      std::array<double, 12> t = best;
      for (double& x : t) x += step * n(rng);
      double d = kl_divergence(p, mixture3(t));
      if (d < best_d) {
        best_d = d, best = t;
        step *= 1.5;
        since_improvement = 0;
      } else if (++since_improvement > 30) {
        step *= 0.7;
        since_improvement = 0;
      }
    }
    overall = std::min(overall, best_d);
  }
  return overall;
}

}  // namespace

TEST_CASE("KL divergence examples") {
  ProbTensor d000 = ProbTensor::delta(0);
  CHECK(kl_divergence(u_plus(), u_plus()) == 0.0);
  CHECK(kl_divergence(u_plus(), ProbTensor::uniform()) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(kl_divergence(d000, u_plus()) == doctest::Approx(std::log(4.0)).epsilon(1e-15));
  CHECK(std::isinf(kl_divergence(u_plus(), d000)));
}

TEST_CASE("projection of the uniform distribution is itself") {
  for (Piece piece : all_pieces()) {
    ProjectionResult r = project_to_piece(ProbTensor::uniform(), piece);
    CHECK(max_abs_diff(r.projected.entries(), ProbTensor::uniform().entries()) <= 1e-16);
    CHECK(r.divergence == doctest::Approx(0.0).epsilon(1e-15));
  }
  ModelProjection m = project_to_model(ProbTensor::uniform());
  CHECK(m.divergence == 0.0);
  REQUIRE(m.projections.size() == 1);
  CHECK_FALSE(m.projections[0].piece.has_value());
}

TEST_CASE("projections of u+ onto the six pieces") {
  // 1/8 on the slice of the piece, 1/4 on the two even states of the opposite slice.
  const std::array<std::pair<Piece, Tensor8>, 6> expected = {{
      {{1, 0}, weights({0.125, 0.125, 0.125, 0.125, 0, 0.25, 0.25, 0})},
      {{1, 1}, weights({0.25, 0, 0, 0.25, 0.125, 0.125, 0.125, 0.125})},
      {{2, 0}, weights({0.125, 0.125, 0, 0.25, 0.125, 0.125, 0.25, 0})},
      {{2, 1}, weights({0.25, 0, 0.125, 0.125, 0, 0.25, 0.125, 0.125})},
      {{3, 0}, weights({0.125, 0, 0.125, 0.25, 0.125, 0.25, 0.125, 0})},
      {{3, 1}, weights({0.25, 0.125, 0, 0.125, 0, 0.125, 0.25, 0.125})},
  }};
  ModelProjection m = project_to_model(u_plus());
  CHECK(m.divergence == doctest::Approx(kHalfLog2).epsilon(1e-12));
  REQUIRE(m.projections.size() == 6);
  for (int i = 0; i < 6; ++i) {
    REQUIRE(m.projections[i].piece.has_value());
    CHECK(*m.projections[i].piece == expected[i].first);
    CHECK(max_abs_diff(m.projections[i].projected.entries(), expected[i].second) == 0.0);
    CHECK(m.projections[i].divergence == doctest::Approx(kHalfLog2).epsilon(1e-12));
  }
}

TEST_CASE("projection lies on the piece and the two divergence formulas agree") {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 2000; ++it) {
    ProbTensor p = random_simplex_point(rng);
    for (Piece piece : all_pieces()) {
      ProjectionResult r = project_to_piece(p, piece);
      CHECK(std::abs(piece_determinant(r.projected.entries(), piece)) <= 1e-12);
      CHECK(std::abs(r.divergence - kl_divergence(p, r.projected)) <= 1e-12);
      CHECK(std::abs(r.divergence - weighted_cmi(p, piece)) <= 1e-12);
      // The opposite slice is untouched.
      for (int u = 0; u < 2; ++u)
        for (int v = 0; v < 2; ++v) {
          int s = slice_state(piece.axis, 1 - piece.value, u, v);
          CHECK(r.projected[s] == doctest::Approx(p[s]).epsilon(1e-14));
        }
      CHECK(kl_divergence(p, ProbTensor::uniform()) >= r.divergence - 1e-12);
    }
  }
}

TEST_CASE("a slice of zero mass projects to the input") {
  ProbTensor p = ProbTensor::normalized(weights({1, 2, 3, 4, 0, 0, 0, 0}));
  ProjectionResult r = project_to_piece(p, {1, 1});
  CHECK(r.projected == p);
  CHECK(r.divergence == 0.0);
  CHECK_THROWS_AS(project_to_piece(p, {4, 0}), std::invalid_argument);
  CHECK_THROWS_AS(project_to_piece(p, {1, 2}), std::invalid_argument);
}

TEST_CASE("projection is optimal against perturbations along the piece") {
  std::mt19937_64 rng(32);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int it = 0; it < 200; ++it) {
    ProbTensor p = random_simplex_point(rng);
    for (Piece piece : all_pieces()) {
      ProjectionResult r = project_to_piece(p, piece);
      for (int rep = 0; rep < 20; ++rep) {
        // Perturb the row and column marginals of the rank-one slice and the
        // opposite slice freely, keeping the piece determinant at zero.
        double scale = 0.05;
        std::array<double, 2> row{}, col{};
        for (int u = 0; u < 2; ++u)
          for (int v = 0; v < 2; ++v) {
            row[u] += r.projected[slice_state(piece.axis, piece.value, u, v)];
            col[v] += r.projected[slice_state(piece.axis, piece.value, u, v)];
          }
        for (double& x : row) x *= std::exp(scale * n(rng));
        for (double& x : col) x *= std::exp(scale * n(rng));
        Tensor8 q = r.projected.entries();
        for (int u = 0; u < 2; ++u)
          for (int v = 0; v < 2; ++v) {
            q[slice_state(piece.axis, piece.value, u, v)] = row[u] * col[v];
            q[slice_state(piece.axis, 1 - piece.value, u, v)] *= std::exp(scale * n(rng));
          }
        ProbTensor qt = ProbTensor::normalized(q);
        CHECK(std::abs(piece_determinant(qt.entries(), piece)) <= 1e-12);
        CHECK(kl_divergence(p, qt) >= r.divergence - 1e-12);
      }
    }
  }
}

TEST_CASE("members of the model project to themselves") {
  std::mt19937_64 rng(33);
  int members = 0;
  for (int it = 0; it < 2000; ++it) {
    ProbTensor p = random_simplex_point(rng);
    ModelProjection m = project_to_model(p);
    if (in_m33(p).member) {
      ++members;
      CHECK(m.divergence == 0.0);
      REQUIRE(m.projections.size() == 1);
      CHECK(m.projections[0].projected == p);
    } else {
      CHECK(m.divergence > 0.0);
      double best = std::numeric_limits<double>::infinity();
      for (Piece piece : all_pieces()) best = std::min(best, project_to_piece(p, piece).divergence);
      CHECK(m.divergence == best);
      for (const auto& r : m.projections) CHECK(r.divergence <= best + kEpsTie);
    }
  }
  CHECK(members > 1000);
}

TEST_CASE("no divergence from a simplex sample exceeds half log 2") {
  std::mt19937_64 rng(34);
  double worst = 0.0;
  for (int it = 0; it < 100000; ++it) worst = std::max(worst, project_to_model(random_simplex_point(rng)).divergence);
  CHECK(worst <= kHalfLog2 + 1e-9);
  CHECK(max_model_divergence() == doctest::Approx(kHalfLog2).epsilon(1e-15));
}

TEST_CASE("model divergence matches a parametric search") {
  std::mt19937_64 rng(35);
  int tested = 0;
  while (tested < 3) {
    ProbTensor p = random_simplex_point(rng);
    if (in_m33(p).member) continue;
    ++tested;
    double d = project_to_model(p).divergence;
    double oracle = parametric_divergence_oracle(p, 1000 + tested, 200000);
    CHECK(oracle >= d - 1e-9);
    CHECK(oracle - d <= 1e-3);
  }
  double oracle = parametric_divergence_oracle(u_plus(), 7, 200000);
  CHECK(oracle >= kHalfLog2 - 1e-9);
  CHECK(oracle - kHalfLog2 <= 1e-3);
}

TEST_CASE("divergence maximizers") {
  auto [plus, minus] = divergence_maximizers();
  CHECK(plus == u_plus());
  CHECK(minus == u_minus());
  CHECK(minus == apply_symmetry(CubeSymmetry::flip_axis(0), plus));
  for (const auto& p : {plus, minus}) {
    CHECK(project_to_model(p).divergence == doctest::Approx(kHalfLog2).epsilon(1e-12));
    CHECK_FALSE(in_m33(p).member);
  }
}
