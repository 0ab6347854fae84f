#include "rbm32/arrangement.hpp"

#include <algorithm>
#include <map>

#include <omp.h>

#include "rbm32/exact_lp.hpp"
#include "rbm32/membership.hpp"

namespace rbm32 {

namespace {

std::vector<Rational> normal_row(int slot) {
  const auto& n = boundary_hyperplanes()[slot].normal;
  return std::vector<Rational>(n.begin(), n.end());
}

int rank_of(HyperplaneSet set) {
  std::vector<std::vector<Rational>> rows;
  for (int k = 0; k < 6; ++k)
    if ((set >> k) & 1) rows.push_back(normal_row(k));
  return exact_rank(rows);
}

bool is_subset(HyperplaneSet a, HyperplaneSet b) { return (a & ~b) == 0; }

}  // namespace

const std::array<Hyperplane, 6>& boundary_hyperplanes() {
  static const std::array<Hyperplane, 6> planes = [] {
    std::array<Hyperplane, 6> out{};
    for (int slot = 0; slot < 6; ++slot) {
      const auto& t = kDetTerms[slot];
      out[slot].normal[t[0]] += 1;
      out[slot].normal[t[1]] += 1;
      out[slot].normal[t[2]] -= 1;
      out[slot].normal[t[3]] -= 1;
      out[slot].axis = slot / 2 + 1;
      out[slot].value = slot % 2;
    }
    return out;
  }();
  return planes;
}

std::vector<Flat> build_poset() {
  std::array<int, 64> rank{};
  for (int s = 0; s < 64; ++s) rank[s] = rank_of(HyperplaneSet(s));

  // The closure of S adds every hyperplane whose normal already lies in the
  // span of S's normals.
  std::map<HyperplaneSet, Flat> by_closure;
  for (int s = 0; s < 64; ++s) {
    HyperplaneSet closure = HyperplaneSet(s);
    for (int k = 0; k < 6; ++k)
      if (rank[s | (1 << k)] == rank[s]) closure |= HyperplaneSet(1 << k);
    Flat& f = by_closure[closure];
    f.closure = closure;
    f.dimension = kStates - rank[s];
    f.members.push_back(HyperplaneSet(s));
  }

  std::vector<Flat> flats;
  for (auto& [closure, f] : by_closure) {
    f.defining_set = *std::min_element(f.members.begin(), f.members.end(), [](HyperplaneSet a, HyperplaneSet b) {
      int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
      return pa != pb ? pa < pb : a < b;
    });
    flats.push_back(f);
  }
  std::sort(flats.begin(), flats.end(), [](const Flat& a, const Flat& b) {
    return a.dimension != b.dimension ? a.dimension > b.dimension : a.closure < b.closure;
  });

  // Below F in the reverse-inclusion order are the flats containing F, i.e.
  // those whose closure is a proper subset of F's.
  for (std::size_t i = 0; i < flats.size(); ++i) {
    if (i == 0) {
      flats[i].mobius = 1;
      continue;
    }
    int acc = 0;
    for (std::size_t j = 0; j < i; ++j) {
      if (flats[j].closure != flats[i].closure && is_subset(flats[j].closure, flats[i].closure)) {
        acc += flats[j].mobius;
        if (flats[j].dimension == flats[i].dimension + 1) flats[i].covers.push_back(int(j));
      }
    }
    flats[i].mobius = -acc;
  }
  return flats;
}

BigInt CharacteristicPolynomial::operator()(const BigInt& t) const {
  BigInt acc = 0;
  for (int k = kStates; k >= 0; --k) acc = acc * t + coefficients[k];
  return acc;
}

CharacteristicPolynomial characteristic_polynomial(const std::vector<Flat>& poset) {
  CharacteristicPolynomial chi;
  for (const auto& f : poset) chi.coefficients[f.dimension] += f.mobius;
  return chi;
}

CharacteristicPolynomial characteristic_polynomial() { return characteristic_polynomial(build_poset()); }

long generic_region_count(int hyperplanes, int dimension) {
  // 2 * sum_{i < d} C(n - 1, i)
  long total = 0, binom = 1;
  for (int i = 0; i < dimension && i <= hyperplanes - 1; ++i) {
    total += binom;
    binom = binom * (hyperplanes - 1 - i) / (i + 1);
  }
  return 2 * total;
}

std::array<Sign, 6> sign_vector(int v) {
  std::array<Sign, 6> s;
  for (int k = 0; k < 6; ++k) s[k] = ((v >> (5 - k)) & 1) ? Sign::Negative : Sign::Positive;
  return s;
}

SignRegion classify_region(const std::array<Sign, 6>& signs) {
  // With y = x + 1 in [0, 2]^8, normal.x = normal.y because every normal sums
  // to zero. Variables (y_0..y_7, s); constraints
  //   s - sign_k normal_k . y <= 0   and   y_i <= 2.
  constexpr int n = kStates + 1;
  std::vector<std::vector<Rational>> A;
  std::vector<Rational> b;
  for (int k = 0; k < 6; ++k) {
    std::vector<Rational> row(n, Rational(0));
    int sg = static_cast<int>(signs[k]);
    const auto& normal = boundary_hyperplanes()[k].normal;
    for (int i = 0; i < kStates; ++i) row[i] = -sg * normal[i];
    row[kStates] = 1;
    A.push_back(row);
    b.push_back(0);
  }
  for (int i = 0; i < kStates; ++i) {
    std::vector<Rational> row(n, Rational(0));
    row[i] = 1;
    A.push_back(row);
    b.push_back(2);
  }
  std::vector<Rational> c(n, Rational(0));
  c[kStates] = 1;

  SignRegion region;
  region.signs = signs;
  region.in_model = pair_set_witness(signs).has_value();
  region.m32 = m32_pattern_witness(signs).has_value();
  auto sol = maximize(A, b, c);
  // s is bounded by 4 * 2 through the first constraint.
  if (sol && sol->value > 0) {
    region.feasible = true;
    Array8<Rational> x;
    for (int i = 0; i < kStates; ++i) x[i] = sol->x[i] - 1;
    region.witness = x;
  }
  return region;
}

std::vector<SignRegion> census_regions(int workers) {
  std::vector<SignRegion> out(64);
  int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for num_threads(threads) schedule(dynamic)
  for (int v = 0; v < 64; ++v) out[v] = classify_region(sign_vector(v));
  return out;
}

std::vector<SignRegion> census_regions_serial() {
  std::vector<SignRegion> out;
  for (int v = 0; v < 64; ++v) out.push_back(classify_region(sign_vector(v)));
  return out;
}

CensusCounts count_regions(const std::vector<SignRegion>& regions) {
  CensusCounts c;
  for (const auto& r : regions) {
    if (!r.feasible) continue;
    ++c.feasible;
    if (r.in_model) ++c.in_model;
    if (r.m32) ++c.m32;
  }
  return c;
}

}  // namespace rbm32
