#include "rbm32/viz.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <stdexcept>

namespace rbm32 {

namespace {

// Slots in CharacterVector::m.
constexpr int kM12 = 6, kM13 = 5, kM23 = 3, kM123 = 7;

// The pair coordinate tied to m123 on pieces of this axis.
int tied_slot(int axis) { return axis == 1 ? kM23 : (axis == 2 ? kM13 : kM12); }

void validate(char panel, int resolution) {
  if (panel != '+' && panel != '-') throw std::invalid_argument("panel must be '+' or '-'");
  if (resolution < kMinVizResolution)
    throw std::invalid_argument("resolution must be at least " + std::to_string(kMinVizResolution));
}

}  // namespace

std::string piece_label(Piece piece) { return "L" + std::to_string(piece.axis) + std::to_string(piece.value); }

std::vector<VizPoint> viz_piece_mesh(Piece piece, char panel, int resolution) {
  validate(panel, resolution);
  const int tied = tied_slot(piece.axis);
  std::array<int, 2> free_slots{};
  int n = 0;
  for (int slot : {kM12, kM13, kM23})
    if (slot != tied) free_slots[n++] = slot;
  // m_S + (-1)^j m123 = 0 along the unit direction (e_S - (-1)^j e_123) / sqrt 2.
  const double tied_sign = piece.value == 0 ? -1.0 : 1.0;

  std::vector<VizPoint> out;
  for (int a = -resolution; a <= resolution; ++a) {
    double psi = 0.5 * std::numbers::pi * double(a) / double(resolution);
    for (int b = 0; b < resolution; ++b) {
      double theta = 2.0 * std::numbers::pi * double(b) / double(resolution);
      std::array<double, kStates> m{};
      m[free_slots[0]] = std::cos(psi) * std::cos(theta);
      m[free_slots[1]] = std::cos(psi) * std::sin(theta);
      m[tied] = std::sin(psi) / std::numbers::sqrt2;
      m[kM123] = tied_sign * std::sin(psi) / std::numbers::sqrt2;
      if (a == 0) m[tied] = m[kM123] = 0.0;
      if (panel == '+' ? m[kM123] < 0.0 : m[kM123] > 0.0) continue;
      out.push_back(VizPoint{piece, m[kM12], m[kM13], m[kM23], m[kM123]});
    }
  }
  return out;
}

std::vector<VizPoint> viz_mesh(char panel, int resolution) {
  std::vector<VizPoint> out;
  for (int axis = 1; axis <= 3; ++axis)
    for (int value = 0; value < 2; ++value) {
      auto piece = viz_piece_mesh(Piece{axis, value}, panel, resolution);
      out.insert(out.end(), piece.begin(), piece.end());
    }
  return out;
}

void write_viz_csv(std::ostream& out, const std::vector<VizPoint>& points, bool header) {
  if (header) out << "piece_label,m12bar,m13bar,m23bar\n";
  out << std::setprecision(17);
  for (const auto& v : points) out << piece_label(v.piece) << ',' << v.m12 << ',' << v.m13 << ',' << v.m23 << '\n';
}

LogTensor viz_point_log_tensor(const VizPoint& v) {
  CharacterVector c;
  c.m[kM12] = v.m12;
  c.m[kM13] = v.m13;
  c.m[kM23] = v.m23;
  c.m[kM123] = v.m123;
  return from_character_basis(c);
}

}  // namespace rbm32
