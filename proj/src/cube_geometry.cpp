#include "rbm32/cube_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include <Eigen/Dense>

#include "rbm32/membership.hpp"

namespace rbm32 {

namespace {

std::array<int, 3> coords(int state) { return {state_bit(state, 0), state_bit(state, 1), state_bit(state, 2)}; }

// 6 * signed volume of the tetrahedron, exact for cube vertices.
int six_volume(const std::array<int, 4>& v) {
  auto p0 = coords(v[0]);
  int m[3][3];
  for (int r = 0; r < 3; ++r) {
    auto pr = coords(v[r + 1]);
    for (int c = 0; c < 3; ++c) m[r][c] = pr[c] - p0[c];
  }
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

const std::vector<TetraMask>& full_dimensional_subsets() {
  static const std::vector<TetraMask> subsets = [] {
    std::vector<TetraMask> out;
    for (int m = 0; m < 256; ++m)
      if (__builtin_popcount(unsigned(m)) == 4 && six_volume(tetra_vertices(TetraMask(m))) != 0)
        out.push_back(TetraMask(m));
    return out;
  }();
  return subsets;
}

// States of the facet for determinant slot `slot`, in the order
// (q00, q01, q10, q11) of that slice.
std::array<int, 4> facet_states(int slot) {
  const auto& t = kDetTerms[slot];  // d = p[t0] p[t1] - p[t2] p[t3]
  return {t[0], t[2], t[3], t[1]};
}

TetraMask map_mask(const CubeSymmetry& g, TetraMask m) {
  TetraMask out = 0;
  for (int s = 0; s < kStates; ++s)
    if ((m >> s) & 1) out |= TetraMask(1u << g.apply(s));
  return out;
}

int type_for(int tetrahedra, int same_pairs, const std::array<FaceDiagonal, 6>& faces) {
  if (tetrahedra == 5) return 1;
  switch (same_pairs) {
    case 0: return 2;
    case 1: return 3;
    case 2: return 5;
    default: break;
  }
  std::array<Sign, 6> signs;
  for (int i = 0; i < 6; ++i) signs[i] = static_cast<Sign>(faces[i]);
  return m32_pattern_witness(signs) ? 6 : 4;
}

int same_direction_pairs(const std::array<FaceDiagonal, 6>& faces) {
  int n = 0;
  for (int a = 0; a < 3; ++a)
    if (faces[2 * a] != FaceDiagonal::Unsliced && faces[2 * a] == faces[2 * a + 1]) ++n;
  return n;
}

TriangulationCatalog build_catalog() {
  TriangulationCatalog cat;
  std::mt19937_64 rng(0x74u);
  std::normal_distribution<double> height(0.0, 1.0);
  std::set<std::vector<TetraMask>> seen;
  long since_new = 0;
  constexpr long kQuietStretch = 40000;
  constexpr long kMaxDraws = 2000000;
  while (since_new < kQuietStretch && cat.draws < kMaxDraws) {
    ++cat.draws;
    LogTensor l;
    for (double& v : l.values) v = height(rng);
    Triangulation t;
    try {
      t = regular_triangulation(l);
    } catch (const DegenerateInput&) {
      continue;
    }
    if (seen.insert(t.tetrahedra).second)
      since_new = 0;
    else
      ++since_new;
  }
  cat.labeled.assign(seen.begin(), seen.end());

  std::map<std::vector<TetraMask>, TriangulationOrbit> orbits;
  for (const auto& tets : cat.labeled) {
    Triangulation t{tets, face_slices_of(tets)};
    auto key = canonical_form(t);
    auto [it, fresh] = orbits.try_emplace(key);
    TriangulationOrbit& o = it->second;
    if (fresh) {
      Triangulation rep{key, face_slices_of(key)};
      o.representative = key;
      o.tetrahedron_count = int(key.size());
      o.same_direction_pairs = same_direction_pairs(rep.face_slices);
      o.type_id = type_for(o.tetrahedron_count, o.same_direction_pairs, rep.face_slices);
    }
    ++o.size;
  }
  for (auto& [key, o] : orbits) cat.orbits.push_back(o);
  std::sort(cat.orbits.begin(), cat.orbits.end(),
            [](const TriangulationOrbit& a, const TriangulationOrbit& b) { return a.type_id < b.type_id; });
  return cat;
}

}  // namespace

char diagonal_char(FaceDiagonal d) {
  switch (d) {
    case FaceDiagonal::AntiDiagonal: return '+';
    case FaceDiagonal::MainDiagonal: return '-';
    case FaceDiagonal::Unsliced: return '0';
  }
  return '?';
}

std::array<int, 4> tetra_vertices(TetraMask m) {
  std::array<int, 4> v{};
  int n = 0;
  for (int s = 0; s < kStates && n < 4; ++s)
    if ((m >> s) & 1) v[n++] = s;
  return v;
}

double tetra_volume(TetraMask m) { return std::abs(six_volume(tetra_vertices(m))) / 6.0; }

std::array<FaceDiagonal, 6> face_slices_of(const std::vector<TetraMask>& tetrahedra) {
  std::array<FaceDiagonal, 6> out{};
  for (int slot = 0; slot < 6; ++slot) {
    auto f = facet_states(slot);
    TetraMask main_edge = TetraMask((1u << f[0]) | (1u << f[3]));
    TetraMask anti_edge = TetraMask((1u << f[1]) | (1u << f[2]));
    bool has_main = false, has_anti = false;
    for (TetraMask t : tetrahedra) {
      has_main = has_main || (t & main_edge) == main_edge;
      has_anti = has_anti || (t & anti_edge) == anti_edge;
    }
    if (has_main && !has_anti)
      out[slot] = FaceDiagonal::MainDiagonal;
    else if (has_anti && !has_main)
      out[slot] = FaceDiagonal::AntiDiagonal;
    else
      out[slot] = FaceDiagonal::Unsliced;
  }
  return out;
}

Triangulation regular_triangulation(const LogTensor& l) {
  if (!l.is_finite()) throw InvalidTensor("heights must be finite");
  double scale = 1.0;
  for (double v : l.values) scale = std::max(scale, std::abs(v));
  const double tol = kEpsHull * scale;

  Triangulation out;
  for (TetraMask m : full_dimensional_subsets()) {
    auto v = tetra_vertices(m);
    // Affine height function through the four lifted vertices.
    Eigen::Matrix4d A;
    Eigen::Vector4d h;
    for (int r = 0; r < 4; ++r) {
      auto c = coords(v[r]);
      A(r, 0) = 1.0;
      A(r, 1) = c[0];
      A(r, 2) = c[1];
      A(r, 3) = c[2];
      h(r) = l.values[v[r]];
    }
    Eigen::Vector4d f = A.partialPivLu().solve(h);
    bool below = false, touching = false;
    for (int s = 0; s < kStates && !below; ++s) {
      if ((m >> s) & 1) continue;
      auto c = coords(s);
      double gap = l.values[s] - (f(0) + f(1) * c[0] + f(2) * c[1] + f(3) * c[2]);
      if (gap < -tol) below = true;
      else if (gap <= tol) touching = true;
    }
    if (below) continue;
    if (touching) throw DegenerateInput("non-generic heights: subdivision is not a triangulation");
    out.tetrahedra.push_back(m);
  }
  std::sort(out.tetrahedra.begin(), out.tetrahedra.end());

  int six_total = 0;
  for (TetraMask m : out.tetrahedra) six_total += std::abs(six_volume(tetra_vertices(m)));
  if (six_total != 6) throw DegenerateInput("non-generic heights: subdivision is not a triangulation");
  out.face_slices = face_slices_of(out.tetrahedra);
  return out;
}

Triangulation apply_symmetry(const CubeSymmetry& g, const Triangulation& t) {
  Triangulation out;
  for (TetraMask m : t.tetrahedra) out.tetrahedra.push_back(map_mask(g, m));
  std::sort(out.tetrahedra.begin(), out.tetrahedra.end());
  out.face_slices = face_slices_of(out.tetrahedra);
  return out;
}

std::vector<TetraMask> canonical_form(const Triangulation& t) {
  std::vector<TetraMask> best;
  for (const auto& g : all_symmetries()) {
    std::vector<TetraMask> img;
    for (TetraMask m : t.tetrahedra) img.push_back(map_mask(g, m));
    std::sort(img.begin(), img.end());
    if (best.empty() || img < best) best = std::move(img);
  }
  return best;
}

const TriangulationCatalog& triangulation_catalog() {
  static const TriangulationCatalog cat = build_catalog();
  return cat;
}

TriangulationType classify_type(const Triangulation& t) {
  auto key = canonical_form(t);
  for (const auto& o : triangulation_catalog().orbits)
    if (o.representative == key) return TriangulationType{o.type_id, key};
  // Not in the sampled catalog: classify from the triangulation itself.
  return TriangulationType{type_for(int(t.tetrahedra.size()), same_direction_pairs(t.face_slices), t.face_slices),
                           key};
}

TriangulationType classify_type(const LogTensor& l) { return classify_type(regular_triangulation(l)); }

int count_modes(const ProbTensor& p) {
  int modes = 0;
  for (int s = 0; s < kStates; ++s) {
    bool mode = true;
    for (int axis = 0; axis < 3; ++axis) mode = mode && p[s] > p[hamming_neighbour(s, axis)];
    if (mode) modes += 1;
  }
  return modes;
}

}  // namespace rbm32
