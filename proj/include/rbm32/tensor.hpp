#pragma once

// 2x2x2 tensors over three binary variables.
//
// States (i,j,k) are stored lexicographically: index = 4*i + 2*j + k, so the
// storage order is p000, p001, p010, p011, p100, p101, p110, p111. Axis 1 is
// the most significant bit.

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "rbm32/errors.hpp"

namespace rbm32 {

inline constexpr int kStates = 8;

inline constexpr double kEpsSum = 1e-12;   ///< tolerance on the entry sum of a ProbTensor
inline constexpr double kEpsDet = 1e-12;   ///< relative threshold for a vanishing determinant
inline constexpr double kEpsZero = 1e-12;  ///< entries at or below this are on the boundary

template <typename T>
using Array8 = std::array<T, kStates>;
using Tensor8 = Array8<double>;

constexpr int state_index(int i, int j, int k) { return 4 * i + 2 * j + k; }

/// Bit of `state` belonging to `axis` (0-based: 0 is the first index).
constexpr int state_bit(int state, int axis) { return (state >> (2 - axis)) & 1; }

/// The state differing from `state` only along `axis`.
constexpr int hamming_neighbour(int state, int axis) { return state ^ (1 << (2 - axis)); }

/// Three-character label such as "010".
std::string state_label(int state);

/// Column order of the lineality spanning matrix: (l000, l100, l010, l001,
/// l110, l101, l011, l111) expressed as lexicographic indices.
inline constexpr std::array<int, kStates> kSpanningOrder = {0, 4, 2, 1, 6, 5, 3, 7};

/// A probability distribution on {0,1}^3.
class ProbTensor {
 public:
  /// Validates non-negativity and unit sum (within kEpsSum).
  /// Throws InvalidTensor otherwise.
  explicit ProbTensor(const Tensor8& entries);

  /// Scales non-negative weights to sum one.
  static ProbTensor normalized(const Tensor8& weights);

  static ProbTensor uniform();
  static ProbTensor delta(int state);

  double operator[](int state) const { return p_[state]; }
  double at(int i, int j, int k) const { return p_[state_index(i, j, k)]; }
  const Tensor8& entries() const { return p_; }

  /// True when every entry exceeds kEpsZero.
  bool is_interior() const;

  /// Bitmask (bit s for state s) of entries at or below kEpsZero.
  std::uint8_t zero_mask() const;

  friend bool operator==(const ProbTensor&, const ProbTensor&) = default;

 private:
  Tensor8 p_;
};

/// Natural logarithms of a distribution's entries; -inf marks a zero entry.
struct LogTensor {
  Tensor8 values{};

  static LogTensor of(const ProbTensor& p);
  bool is_finite() const;
  /// exp of the entries, normalized.
  ProbTensor to_distribution() const;
};

enum class Sign : std::int8_t { Negative = -1, Zero = 0, Positive = 1 };

char sign_char(Sign s);

/// Slot of d_{axis,value} in a DetSignature (axis is 1-based as in d_{1,0}).
constexpr int det_slot(int axis, int value) { return 2 * (axis - 1) + value; }

/// The six slice determinants d10, d11, d20, d21, d30, d31.
///
/// d_{a,v} is the 2x2 determinant of the slice with index a fixed to v, rows
/// and columns being the remaining two indices in increasing order.
struct DetSignature {
  std::array<double, 6> values{};
  std::array<Sign, 6> signs{};
};

/// Exact slice determinants over any field-like scalar type.
template <typename T>
std::array<T, 6> slice_determinants(const Array8<T>& p) {
  return {p[0] * p[3] - p[1] * p[2], p[4] * p[7] - p[5] * p[6],
          p[0] * p[5] - p[1] * p[4], p[2] * p[7] - p[3] * p[6],
          p[0] * p[6] - p[2] * p[4], p[1] * p[7] - p[3] * p[5]};
}

/// Entry indices (a, b, c, d) with d_slot = p[a]p[b] - p[c]p[d].
inline constexpr std::array<std::array<int, 4>, 6> kDetTerms = {{
    {0, 3, 1, 2}, {4, 7, 5, 6}, {0, 5, 1, 4}, {2, 7, 3, 6}, {0, 6, 2, 4}, {1, 7, 3, 5}}};

/// Determinants with signs thresholded relative to the larger product.
DetSignature determinants(const Tensor8& p);
inline DetSignature determinants(const ProbTensor& p) { return determinants(p.entries()); }

/// An element of the 48-element symmetry group of the cube: an axis
/// permutation followed by bit flips.
///
/// Acting on a state x it produces y with y[a] = x[perm[a]] ^ flip[a].
struct CubeSymmetry {
  std::array<int, 3> perm{0, 1, 2};
  std::uint8_t flips = 0;  ///< bit (2 - a) flips axis a, matching state bit order

  static CubeSymmetry identity() { return {}; }
  static CubeSymmetry flip_axis(int axis) { return {{0, 1, 2}, std::uint8_t(1 << (2 - axis))}; }
  static CubeSymmetry swap_axes(int a, int b);

  int apply(int state) const;
  bool flips_axis(int axis) const { return (flips >> (2 - axis)) & 1; }

  /// (*this ∘ other)(x) = this->apply(other.apply(x)).
  CubeSymmetry compose(const CubeSymmetry& other) const;
  CubeSymmetry inverse() const;

  friend bool operator==(const CubeSymmetry&, const CubeSymmetry&) = default;
};

/// All 48 symmetries, lexicographic in (perm, flips). Identity first.
const std::array<CubeSymmetry, 48>& all_symmetries();

template <typename T>
Array8<T> apply_symmetry(const CubeSymmetry& g, const Array8<T>& t) {
  Array8<T> out{};
  for (int x = 0; x < kStates; ++x) out[g.apply(x)] = t[x];
  return out;
}

ProbTensor apply_symmetry(const CubeSymmetry& g, const ProbTensor& p);

/// Log-linear coordinates indexed by subsets of {1,2,3}: slot s has bit 2
/// for variable 1, bit 1 for variable 2, bit 0 for variable 3. The slot
/// order is m_{}, m_{3}, m_{2}, m_{23}, m_{1}, m_{13}, m_{12}, m_{123}.
struct CharacterVector {
  std::array<double, kStates> m{};

  double empty() const { return m[0]; }
  double m12() const { return m[6]; }
  double m13() const { return m[5]; }
  double m23() const { return m[3]; }
  double m123() const { return m[7]; }
};

/// The +-1 character matrix: entry (s, x) is (-1)^{|s & x|}.
constexpr int character_entry(int subset, int state) {
  return (__builtin_popcount(unsigned(subset & state)) & 1) ? -1 : 1;
}

/// Throws InvalidTensor when an entry is not finite.
CharacterVector to_character_basis(const LogTensor& l);

/// Inverse transform (character matrix divided by 8).
LogTensor from_character_basis(const CharacterVector& m);

}  // namespace rbm32
