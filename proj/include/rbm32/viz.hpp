#pragma once

// Coordinates for drawing the boundary pieces L_{i,j} in character space.
//
// Only m12, m13, m23 and m123 enter the determinants. Piece L_{i,j} is the
// plane m_S + (-1)^j m123 = 0, where S is the pair of variables other than i.
// Each piece is sampled on the unit sphere of (m12, m13, m23, m123) and shown
// as (m12, m13, m23) divided by the norm of the 4-vector, split into panels
// by the sign of m123.

#include <ostream>
#include <string>
#include <vector>

#include "rbm32/mle.hpp"
#include "rbm32/tensor.hpp"

namespace rbm32 {

inline constexpr int kMinVizResolution = 8;

struct VizPoint {
  Piece piece;
  double m12 = 0.0, m13 = 0.0, m23 = 0.0, m123 = 0.0;

  /// The three plotted coordinates (already normalized).
  std::array<double, 3> projected() const { return {m12, m13, m23}; }
};

/// "L10", "L11", ..., "L31".
std::string piece_label(Piece piece);

/// Points of one piece on a (2R+1) x R latitude-longitude grid, keeping those
/// with m123 >= 0 for panel '+' and m123 <= 0 for panel '-'. The equator of
/// every piece (m_S = m123 = 0) lies in both panels.
std::vector<VizPoint> viz_piece_mesh(Piece piece, char panel, int resolution);

/// All six pieces in (axis, value) order. Throws std::invalid_argument for a
/// panel other than '+'/'-' or resolution below kMinVizResolution.
std::vector<VizPoint> viz_mesh(char panel, int resolution);

/// CSV with header piece_label,m12bar,m13bar,m23bar.
void write_viz_csv(std::ostream& out, const std::vector<VizPoint>& points, bool header = true);

/// The log-tensor with these character coordinates (all others zero).
LogTensor viz_point_log_tensor(const VizPoint& v);

}  // namespace rbm32
