#include <doctest.h>

#include "rbm32/membership.hpp"
#include "rbm32/sampling.hpp"
#include "test_support.hpp"

using namespace rbm32;
using namespace rbm32::testing;

TEST_CASE("model names round trip") {
  for (Model m : {Model::RBM32, Model::M33, Model::M32, Model::Independence})
    CHECK(parse_model(model_name(m)) == m);
  CHECK(parse_model("independence") == Model::Independence);
  CHECK_THROWS_AS(parse_model("rbm"), std::invalid_argument);
}

TEST_CASE("uniform distribution belongs to every model") {
  ProbTensor u = ProbTensor::uniform();
  auto v = in_rbm32(u);
  CHECK(v.member);
  CHECK(v.witness_set == 1);
  CHECK_FALSE(v.boundary_case);
  CHECK(in_m33(u).member);
  CHECK(in_m32(u).member);
  CHECK(in_independence(u).member);
}

TEST_CASE("even-parity distribution lies outside every model") {
  ProbTensor p = u_plus();
  CHECK_FALSE(in_rbm32(p).member);
  CHECK_FALSE(in_m33(p).member);
  CHECK_FALSE(in_m33(u_minus()).member);
}

TEST_CASE("three-point distribution is in M33 but not in RBM32") {
  ProbTensor p = three_point();
  auto r = in_rbm32(p);
  CHECK_FALSE(r.member);
  CHECK(r.boundary_case);
  CHECK_FALSE(r.witness_set.has_value());
  // 000 is zero while its neighbours 001, 010, 100 are positive.
  CHECK_FALSE(hamming_zero_condition(p.zero_mask()));
  auto m = in_m33(p);
  CHECK(m.member);
  CHECK(m.boundary_case);
  CHECK(m.witness_set == 2);
}

TEST_CASE("tensors approaching the three-point distribution are in RBM32") {
  for (double e : {0.1, 0.01}) {
    ProbTensor p = approaching_three_point(e);
    CHECK(p.is_interior());
    CHECK(in_rbm32(p).member);
  }
}

TEST_CASE("M32 and independence tests are interior only") {
  CHECK_THROWS_WITH_AS(in_m32(three_point()), "M32 membership implemented on interior only", DegenerateInput);
  CHECK_THROWS_AS(in_independence(three_point()), DegenerateInput);
  CHECK_FALSE(accepts(Model::M32, three_point()));
}

TEST_CASE("product tensors are in M32 and the independence model") {
  ProbTensor p = product({0.3, 0.7}, {0.4, 0.6}, {0.5, 0.5});
  CHECK(in_independence(p).member);
  CHECK(in_m32(p).member);
}

TEST_CASE("even-parity distribution is rejected by the independence test") {
  // Its determinants are +-1/16, but it has zeros, so the interior-only test
  // refuses it and the batch accept reports it as outside.
  CHECK_FALSE(accepts(Model::Independence, u_plus()));
  CHECK_THROWS_AS(in_independence(u_plus()), DegenerateInput);
}

TEST_CASE("a positive tensor with signature (+,+,+,+,+,-) is in RBM32 but not M32") {
  std::mt19937_64 rng(99);
  int found = 0;
  for (int it = 0; it < 200000 && found < 20; ++it) {
    ProbTensor p = random_simplex_point(rng);
    auto s = determinants(p).signs;
    const std::array<Sign, 6> want{Sign::Positive, Sign::Positive, Sign::Positive,
                                   Sign::Positive, Sign::Positive, Sign::Negative};
    if (s != want) continue;
    ++found;
    CHECK_FALSE(in_m32(p).member);
    auto v = in_rbm32(p);
    CHECK(v.member);
    CHECK(v.witness_set == 1);
  }
  CHECK(found == 20);
}

TEST_CASE("sign-pair sets and M32 patterns") {
  using S = Sign;
  CHECK(pair_set_witness({S::Positive, S::Negative, S::Negative, S::Negative, S::Positive, S::Positive}) == 4);
  CHECK(pair_set_witness({S::Positive, S::Negative, S::Negative, S::Positive, S::Positive, S::Negative}) ==
        std::nullopt);
  CHECK(pair_set_witness({S::Zero, S::Negative, S::Negative, S::Positive, S::Positive, S::Negative}) == 2);
  CHECK(m32_pattern_witness({S::Positive, S::Positive, S::Negative, S::Negative, S::Negative, S::Negative}) == 2);
  CHECK(m32_pattern_witness({S::Negative, S::Negative, S::Positive, S::Positive, S::Negative, S::Negative}) == 3);
  CHECK(m32_pattern_witness({S::Negative, S::Negative, S::Negative, S::Negative, S::Positive, S::Positive}) == 4);
  CHECK(m32_pattern_witness({S::Negative, S::Negative, S::Negative, S::Negative, S::Negative, S::Negative}) ==
        std::nullopt);
}

TEST_CASE("parametric samples pass their membership oracles") {
  SamplerConfig cfg{31, 10000, 1};
  for (const auto& p : sample_rbm_parametric(cfg)) CHECK(in_rbm32(p).member);
  for (const auto& p : sample_mixture_parametric(cfg, 3)) CHECK(in_m33(p).member);
  for (const auto& p : sample_mixture_parametric(cfg, 2)) CHECK(in_m32(p).member);
  for (const auto& p : sample_mixture_parametric(cfg, 1)) CHECK(in_independence(p).member);
}

TEST_CASE("membership is invariant under cube symmetries") {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 300; ++it) {
    ProbTensor p = random_simplex_point(rng);
    const bool r = in_rbm32(p).member, m = in_m33(p).member, t = in_m32(p).member, i = in_independence(p).member;
    for (const auto& g : all_symmetries()) {
      ProbTensor q = apply_symmetry(g, p);
      CHECK(in_rbm32(q).member == r);
      CHECK(in_m33(q).member == m);
      CHECK(in_m32(q).member == t);
      CHECK(in_independence(q).member == i);
    }
  }
}

TEST_CASE("models are nested on the interior") {
  SamplerConfig cfg{8, 4000, 1};
  std::vector<ProbTensor> pool = sample_simplex(cfg);
  auto more = sample_mixture_parametric(cfg, 2);
  pool.insert(pool.end(), more.begin(), more.end());
  auto ones = sample_mixture_parametric(cfg, 1);
  pool.insert(pool.end(), ones.begin(), ones.end());
  for (const auto& p : pool) {
    if (in_independence(p).member) CHECK(in_m32(p).member);
    if (in_m32(p).member) CHECK(in_rbm32(p).member);
    if (in_rbm32(p).member) CHECK(in_m33(p).member);
  }
}

TEST_CASE("a single isolated zero is rejected by RBM32") {
  std::mt19937_64 rng(41);
  for (int it = 0; it < 500; ++it) {
    ProbTensor base = random_simplex_point(rng);
    int zero = int(rng() % 8);
    Tensor8 w = base.entries();
    w[zero] = 0.0;
    ProbTensor p = ProbTensor::normalized(w);
    CHECK_FALSE(in_rbm32(p).member);
    // With one zero, M33 membership still follows the sign-pair sets.
    CHECK(in_m33(p).member == pair_set_witness(determinants(p).signs).has_value());
  }
}

TEST_CASE("boundary RBM32 membership follows the zero-neighbour condition") {
  // Zeros at 000 and 001 are neighbours.
  ProbTensor pair = ProbTensor::normalized(weights({0, 0, 1, 2, 3, 1, 2, 1}));
  CHECK(in_rbm32(pair).member);
  // Zeros at 000 and 011 are not.
  ProbTensor split = ProbTensor::normalized(weights({0, 1, 1, 0, 1, 2, 3, 1}));
  CHECK_FALSE(in_rbm32(split).member);
  CHECK(hamming_zero_condition(0));
  CHECK(hamming_zero_condition(0b11));
  CHECK_FALSE(hamming_zero_condition(0b1001));
}

TEST_CASE("exact arithmetic agrees with floating point away from thresholds") {
  Array8<Rational> q;
  const char* text[8] = {"0", "1/3", "1/3", "0", "1/3", "0", "0", "0"};
  for (int s = 0; s < kStates; ++s) q[s] = parse_rational(text[s]);
  ExactTensor e(q);
  CHECK(check_membership(Model::M33, e).member);
  CHECK_FALSE(check_membership(Model::RBM32, e).member);
  CHECK_THROWS_AS(check_membership(Model::M32, e), DegenerateInput);

  std::mt19937_64 rng(77);
  for (int it = 0; it < 200; ++it) {
    ProbTensor p = random_simplex_point(rng);
    Array8<Rational> x;
    for (int s = 0; s < kStates; ++s) x[s] = exact_from_double(p[s]);
    ExactTensor ex = ExactTensor::normalized(x);
    for (Model m : {Model::RBM32, Model::M33, Model::M32})
      CHECK(check_membership(m, ex).member == check_membership(m, p).member);
  }
}

TEST_CASE("exact mode resolves a determinant far below the floating threshold") {
  // d10 = p000 p011 - p001 p010 = 10^-30 / N^2 > 0 exactly, while in floating
  // point it rounds to zero.
  Array8<Rational> q;
  Rational tiny = parse_rational("1/1000000000000000000000000000000");
  q = {Rational(1) + tiny, Rational(1), Rational(1), Rational(1), Rational(1), Rational(1), Rational(1), Rational(1)};
  ExactTensor e = ExactTensor::normalized(q);
  auto dets = slice_determinants(e.entries());
  CHECK(sign_of(dets[0]) == Sign::Positive);
  CHECK(determinants(e.to_double()).signs[0] == Sign::Zero);
}
