#pragma once

// Regular triangulations of the 3-cube lifted by log-probabilities.
//
// Vertex (i,j,k) of the unit cube gets height l_ijk; the lower convex hull of
// the eight lifted points projects to a subdivision of the cube. For generic
// heights this is a triangulation with 5 or 6 tetrahedra, and 74 such
// triangulations fall into six orbits under the cube symmetries.

#include <array>
#include <cstdint>
#include <vector>

#include "rbm32/tensor.hpp"

namespace rbm32 {

inline constexpr double kEpsHull = 1e-10;

/// How the triangulation cuts a facet of the cube. With the facet's vertices
/// laid out as in its slice determinant d = q00 q11 - q01 q10, AntiDiagonal
/// is the edge q01-q10 (present when d > 0) and MainDiagonal the edge q00-q11
/// (present when d < 0).
enum class FaceDiagonal : std::int8_t { MainDiagonal = -1, Unsliced = 0, AntiDiagonal = 1 };

char diagonal_char(FaceDiagonal d);

/// A tetrahedron as a bitmask over the eight states.
using TetraMask = std::uint8_t;

struct Triangulation {
  /// Sorted ascending.
  std::vector<TetraMask> tetrahedra;
  /// Indexed by determinant slot (d10, d11, d20, d21, d30, d31).
  std::array<FaceDiagonal, 6> face_slices{};

  friend bool operator==(const Triangulation& a, const Triangulation& b) { return a.tetrahedra == b.tetrahedra; }
};

/// Vertices of a tetrahedron mask, ascending.
std::array<int, 4> tetra_vertices(TetraMask m);

/// Volume in cube units (1/6 or 1/3 for cube tetrahedra).
double tetra_volume(TetraMask m);

/// Throws InvalidTensor on non-finite heights and DegenerateInput when five
/// lifted points share a lower facet ("non-generic heights: subdivision is not
/// a triangulation").
Triangulation regular_triangulation(const LogTensor& l);

/// Face diagonals read off a set of tetrahedra.
std::array<FaceDiagonal, 6> face_slices_of(const std::vector<TetraMask>& tetrahedra);

/// The image of a triangulation under a cube symmetry.
Triangulation apply_symmetry(const CubeSymmetry& g, const Triangulation& t);

/// Lexicographically smallest tetrahedron list over the 48 symmetric images.
std::vector<TetraMask> canonical_form(const Triangulation& t);

struct TriangulationType {
  int type_id = 0;
  /// canonical_form of every member of the orbit.
  std::vector<TetraMask> representative;
};

struct TriangulationOrbit {
  int type_id = 0;
  std::vector<TetraMask> representative;
  int tetrahedron_count = 0;
  /// Opposite facet pairs cut by parallel diagonals (same determinant sign).
  int same_direction_pairs = 0;
  /// Labeled triangulations in the orbit.
  int size = 0;
};

/// Triangulations reachable from generic heights, found by sampling random
/// heights from a fixed seed until no new one appears for a long stretch.
struct TriangulationCatalog {
  std::vector<std::vector<TetraMask>> labeled;
  /// Sorted by type id.
  std::vector<TriangulationOrbit> orbits;
  long draws = 0;
};

/// Built once on first use; thread-safe.
const TriangulationCatalog& triangulation_catalog();

/// Type numbering:
///   1  five tetrahedra
///   2  six tetrahedra, every opposite facet pair cut in opposing directions
///   3  six tetrahedra, exactly one pair cut in the same direction
///   5  six tetrahedra, exactly two pairs cut in the same direction
///   4  all three pairs cut in the same direction, signs outside M(3,2)
///   6  all three pairs cut in the same direction, signs of an M(3,2) pattern
TriangulationType classify_type(const LogTensor& l);
TriangulationType classify_type(const Triangulation& t);

/// States strictly more probable than each of their three Hamming neighbours.
int count_modes(const ProbTensor& p);

}  // namespace rbm32
