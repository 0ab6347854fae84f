#include <doctest.h>

#include <Eigen/Dense>
#include <bit>
#include <map>
#include <random>
#include <set>

#include "rbm32/arrangement.hpp"
#include "rbm32/exact_lp.hpp"
#include "rbm32/membership.hpp"
#include "test_support.hpp"

using namespace rbm32;
using namespace rbm32::testing;

namespace {

// Rank of a set of hyperplane normals in floating point; entries are small
// integers so this is exact.
int float_rank(HyperplaneSet s) {
  Eigen::MatrixXd m(std::popcount(unsigned(s)), kStates);
  int r = 0;
  for (int k = 0; k < 6; ++k)
    if ((s >> k) & 1) {
      for (int x = 0; x < kStates; ++x) m(r, x) = boundary_hyperplanes()[k].normal[x];
      ++r;
    }
  if (r == 0) return 0;
  return int(Eigen::FullPivLU<Eigen::MatrixXd>(m).rank());
}

// Whitney's formula: chi(t) = sum over subsets S of (-1)^|S| t^(8 - rank S).
std::array<long, kStates + 1> whitney_coefficients() {
  std::array<long, kStates + 1> c{};
  for (int s = 0; s < 64; ++s) c[kStates - float_rank(HyperplaneSet(s))] += (std::popcount(unsigned(s)) % 2) ? -1 : 1;
  return c;
}

int sign_index(const std::array<Sign, 6>& signs) {
  int v = 0;
  for (int k = 0; k < 6; ++k)
    if (signs[k] == Sign::Negative) v |= 1 << (5 - k);
  return v;
}

}  // namespace

TEST_CASE("hyperplane normals are the log-determinant forms") {
  const auto& hs = boundary_hyperplanes();
  for (int k = 0; k < 6; ++k) {
    std::array<int, kStates> expected{};
    expected[kDetTerms[k][0]] += 1;
    expected[kDetTerms[k][1]] += 1;
    expected[kDetTerms[k][2]] -= 1;
    expected[kDetTerms[k][3]] -= 1;
    CHECK(hs[k].normal == expected);
    CHECK(det_slot(hs[k].axis, hs[k].value) == k);
  }
  // L10: l000 + l011 - l001 - l010.
  CHECK(hs[0].normal == std::array<int, kStates>{1, -1, -1, 1, 0, 0, 0, 0});
}

TEST_CASE("intersection poset levels and Mobius values") {
  std::vector<Flat> poset = build_poset();
  std::map<int, int> per_level;
  for (const Flat& f : poset) ++per_level[f.codimension()];
  CHECK(per_level[0] == 1);
  CHECK(per_level[1] == 6);
  CHECK(per_level[2] == 15);
  CHECK(per_level[3] == 11);
  CHECK(per_level[4] == 1);
  CHECK(poset.size() == 34);

  CHECK(poset.front().closure == 0);
  CHECK(poset.front().mobius == 1);
  CHECK(poset.back().closure == 0x3f);
  CHECK(poset.back().dimension == 4);
  CHECK(poset.back().mobius == 7);

  std::multiset<int> level3;
  std::set<HyperplaneSet> enlarged;
  for (const Flat& f : poset) {
    CHECK(float_rank(f.defining_set) == f.codimension());
    CHECK(float_rank(f.closure) == f.codimension());
    for (HyperplaneSet m : f.members) CHECK(float_rank(m) == f.codimension());
    if (f.codimension() == 1) CHECK(f.mobius == -1);
    if (f.codimension() == 2) CHECK(f.mobius == 1);
    if (f.codimension() == 3) {
      level3.insert(f.mobius);
      if (f.mobius == -3) enlarged.insert(f.closure);
    }
  }
  CHECK(level3.count(-3) == 3);
  CHECK(level3.count(-1) == 8);
  // L_{i,0} with L_{i,1} and the remaining axis pair: four hyperplanes each.
  CHECK(enlarged == std::set<HyperplaneSet>{0x0f, 0x33, 0x3c});
  for (HyperplaneSet c : enlarged) CHECK(std::popcount(unsigned(c)) == 4);
}

TEST_CASE("Mobius values satisfy the defining recursion") {
  std::vector<Flat> poset = build_poset();
  auto below = [&](const Flat& lower, const Flat& upper) { return (lower.closure & upper.closure) == lower.closure; };
  for (const Flat& f : poset) {
    if (f.closure == 0) continue;
    int sum = 0;
    for (const Flat& g : poset)
      if (below(g, f)) sum += g.mobius;
    CHECK(sum == 0);
  }
}

TEST_CASE("every subset of hyperplanes belongs to exactly one flat") {
  std::vector<Flat> poset = build_poset();
  std::map<HyperplaneSet, int> owner;
  for (int i = 0; i < int(poset.size()); ++i)
    for (HyperplaneSet m : poset[i].members) owner[m] += 1;
  CHECK(owner.size() == 64);
  for (auto& [m, n] : owner) CHECK(n == 1);
}

TEST_CASE("cover edges join adjacent levels") {
  std::vector<Flat> poset = build_poset();
  int edges = 0;
  for (const Flat& f : poset)
    for (int c : f.covers) {
      ++edges;
      CHECK(poset[c].dimension == f.dimension + 1);
      CHECK((poset[c].closure & f.closure) == poset[c].closure);
    }
  CHECK(edges > 0);
}

TEST_CASE("characteristic polynomial") {
  CharacteristicPolynomial chi = characteristic_polynomial();
  auto whitney = whitney_coefficients();
  for (int k = 0; k <= kStates; ++k) CHECK(chi.coefficients[k] == BigInt(whitney[k]));
  CHECK(chi(BigInt(-1)) == 46);
  CHECK(chi(BigInt(1)) == 0);
  CHECK(generic_region_count(6, 4) == 52);
  CHECK(generic_region_count(2, 2) == 4);
  CHECK(generic_region_count(3, 3) == 8);
}

TEST_CASE("region census") {
  std::vector<SignRegion> regions = census_regions(4);
  REQUIRE(regions.size() == 64);
  CensusCounts counts = count_regions(regions);
  CHECK(counts.feasible == 46);
  CHECK(counts.in_model == 44);
  CHECK(counts.m32 == 4);

  CHECK(regions[0].feasible);
  CHECK(regions[0].in_model);
  CHECK(regions[0].m32);

  // d10 +, d11 -, d20 +, d21 -, d30 +, d31 -.
  std::array<Sign, 6> alternating;
  for (int k = 0; k < 6; ++k) alternating[k] = (k % 2) ? Sign::Negative : Sign::Positive;
  const SignRegion& alt = regions[sign_index(alternating)];
  CHECK(alt.signs == alternating);
  CHECK(alt.feasible);
  CHECK_FALSE(alt.in_model);

  for (const SignRegion& r : regions) {
    CHECK(r.witness.has_value() == r.feasible);
    if (!r.witness) continue;
    for (int k = 0; k < 6; ++k) {
      Rational form = 0;
      for (int x = 0; x < kStates; ++x) form += boundary_hyperplanes()[k].normal[x] * (*r.witness)[x];
      CHECK(sign_of(form) == r.signs[k]);
    }
    CHECK(r.in_model == pair_set_witness(r.signs).has_value());
    CHECK(r.m32 == m32_pattern_witness(r.signs).has_value());
  }
}

TEST_CASE("smoothed u+ realizes the alternating region outside the model") {
  Tensor8 w;
  for (int s = 0; s < kStates; ++s) w[s] = 0.75 * u_plus()[s] + 0.25 * u_minus()[s];
  ProbTensor p(w);
  DetSignature sig = determinants(p);
  for (int k = 0; k < 6; ++k) CHECK(sig.signs[k] == ((k % 2) ? Sign::Negative : Sign::Positive));
  CHECK_FALSE(in_m33(p).member);
}

TEST_CASE("parallel and serial census agree") {
  auto a = census_regions(3);
  auto b = census_regions_serial();
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].signs == b[i].signs);
    CHECK(a[i].feasible == b[i].feasible);
    CHECK(a[i].in_model == b[i].in_model);
    CHECK(a[i].witness == b[i].witness);
  }
}

TEST_CASE("sampled sign vectors match the census") {
  std::vector<SignRegion> regions = census_regions();
  std::mt19937_64 rng(51);
  std::set<int> observed;
  for (int it = 0; it < 1000000; ++it) {
    ProbTensor p = random_simplex_point(rng);
    DetSignature sig = determinants(p);
    bool generic = true;
    for (Sign s : sig.signs) generic = generic && s != Sign::Zero;
    if (!generic) continue;
    int v = sign_index(sig.signs);
    observed.insert(v);
    CHECK(regions[v].feasible);
    CHECK(regions[v].in_model == in_m33(p).member);
  }
  std::set<int> feasible;
  for (int v = 0; v < 64; ++v)
    if (regions[v].feasible) feasible.insert(v);
  CHECK(observed == feasible);
}

TEST_CASE("exact simplex on small problems") {
  using R = Rational;
  // max x + y s.t. x + 2y <= 4, 3x + y <= 6.
  auto sol = maximize({{R(1), R(2)}, {R(3), R(1)}}, {R(4), R(6)}, {R(1), R(1)});
  REQUIRE(sol.has_value());
  CHECK(sol->value == R(14, 5));
  CHECK(sol->x[0] == R(8, 5));
  CHECK(sol->x[1] == R(6, 5));
  // Unbounded: max x s.t. -x <= 1.
  CHECK_FALSE(maximize({{R(-1)}}, {R(1)}, {R(1)}).has_value());
  // Degenerate vertex at the origin.
  auto deg = maximize({{R(1), R(-1)}, {R(-1), R(1)}, {R(1), R(1)}}, {R(0), R(0), R(2)}, {R(1), R(0)});
  REQUIRE(deg.has_value());
  CHECK(deg->value == 1);
  CHECK_THROWS_AS(maximize({{R(1)}}, {R(-1)}, {R(1)}), std::invalid_argument);
  CHECK(exact_rank({{R(1), R(2)}, {R(2), R(4)}}) == 1);
  CHECK(exact_rank({{R(1), R(2)}, {R(0), R(1, 3)}}) == 2);
}
