#pragma once

// The six boundary hyperplanes L_{i,j} = {log d_{i,j} = 0} in log-probability
// space R^8, their intersection poset, and the census of sign regions.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "rbm32/rational.hpp"
#include "rbm32/tensor.hpp"

namespace rbm32 {

struct Hyperplane {
  /// Over lexicographic coordinates l000..l111.
  std::array<int, kStates> normal{};
  int axis = 1;  ///< 1-based
  int value = 0;
};

/// In determinant slot order L10, L11, L20, L21, L30, L31.
const std::array<Hyperplane, 6>& boundary_hyperplanes();

/// A bitmask over the six hyperplanes, bit k for slot k.
using HyperplaneSet = std::uint8_t;

struct Flat {
  /// The largest set of hyperplanes containing this flat.
  HyperplaneSet closure = 0;
  /// Smallest-cardinality subset cutting the flat (lowest mask on ties).
  HyperplaneSet defining_set = 0;
  int dimension = kStates;
  int mobius = 0;
  /// Every subset of hyperplanes whose intersection is this flat.
  std::vector<HyperplaneSet> members;
  /// Indices of flats covered by this one (one dimension higher).
  std::vector<int> covers;

  int codimension() const { return kStates - dimension; }
};

/// All distinct intersections ordered by codimension, then closure. Flat 0 is
/// the ambient space; the last flat is the common intersection of all six.
std::vector<Flat> build_poset();

/// Coefficients by degree: chi(t) = sum_k coefficients[k] t^k.
struct CharacteristicPolynomial {
  std::array<BigInt, kStates + 1> coefficients{};

  BigInt operator()(const BigInt& t) const;
};

CharacteristicPolynomial characteristic_polynomial(const std::vector<Flat>& poset);
CharacteristicPolynomial characteristic_polynomial();

/// Regions of a generic central arrangement of n hyperplanes in dimension d.
long generic_region_count(int hyperplanes, int dimension);

struct SignRegion {
  /// Strict signs in determinant slot order.
  std::array<Sign, 6> signs{};
  bool feasible = false;
  /// Some opposite pair shares its sign.
  bool in_model = false;
  /// Matches an M(3,2) sign pattern.
  bool m32 = false;
  /// A rational log-tensor with exactly these signs, when feasible.
  std::optional<Array8<Rational>> witness;
};

/// Sign vector number v has a negative sign in slot k when bit (5 - k) is set,
/// so vector 0 is all-positive.
std::array<Sign, 6> sign_vector(int v);

/// Feasibility of one sign vector: maximize s subject to
/// sign_k * (normal_k . x) >= s and |x_i| <= 1.
SignRegion classify_region(const std::array<Sign, 6>& signs);

/// All 64 sign vectors; the independent feasibility LPs run in parallel.
std::vector<SignRegion> census_regions(int workers = 0);
std::vector<SignRegion> census_regions_serial();

struct CensusCounts {
  int feasible = 0;
  int in_model = 0;
  int m32 = 0;
};

CensusCounts count_regions(const std::vector<SignRegion>& regions);

}  // namespace rbm32
