#include "rbm32/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "rbm32/decompose_detail.hpp"
#include "rbm32/membership.hpp"

namespace rbm32 {

namespace {

using Matrix2 = std::array<std::array<double, 2>, 2>;

constexpr double kClampRelative = 1e-11;
// Looser rounding for rank-two candidates, which are polished and re-checked.
constexpr double kClampCandidate = 1e-6;

constexpr Factor kE0{1.0, 0.0};
constexpr Factor kE1{0.0, 1.0};
constexpr Factor kOnes{1.0, 1.0};

Factor basis(int v) { return v == 0 ? kE0 : kE1; }

// The two axes other than `axis`, ascending.
std::array<int, 2> other_axes(int axis) {
  switch (axis) {
    case 0: return {1, 2};
    case 1: return {0, 2};
    default: return {0, 1};
  }
}

int compose_state(int axis, int v, int row, int col) {
  auto [b, c] = other_axes(axis);
  int s = 0;
  s |= v << (2 - axis);
  s |= row << (2 - b);
  s |= col << (2 - c);
  return s;
}

Matrix2 slice(const Tensor8& t, int axis, int v) {
  Matrix2 m;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m[r][c] = t[compose_state(axis, v, r, c)];
  return m;
}

double max_abs(const Tensor8& t) {
  double m = 0.0;
  for (double v : t) m = std::max(m, std::abs(v));
  return m;
}

Tensor8 zero_small_entries(const Tensor8& t) {
  Tensor8 out = t;
  for (double& v : out)
    if (v <= kEpsZero) v = 0.0;
  return out;
}

// Rounds negative factor entries that are round-off relative to the factor to
// zero; false if a factor is genuinely negative. Callers check the residual.
bool clamp_factor(Factor& f, double scale, double relative) {
  for (double& v : f) {
    if (v < 0.0) {
      if (v < -kClampNegative * std::max(scale, 1.0) && v < -relative * scale) return false;
      v = 0.0;
    }
  }
  return true;
}

bool clamp_term(RankOneTensor& t, double relative = kClampRelative) {
  for (int axis = 0; axis < 3; ++axis) {
    Factor& f = t.factor(axis);
    double scale = std::max(std::abs(f[0]), std::abs(f[1]));
    if (!clamp_factor(f, scale, relative)) return false;
  }
  return true;
}

// Factors u, w with m = u w^T for a rank-one 2x2 matrix, pivoting on the
// largest entry. Returns nullopt for the zero matrix.
std::optional<std::pair<Factor, Factor>> rank_one_matrix_factors(const Matrix2& m) {
  int pr = 0, pc = 0;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      if (std::abs(m[r][c]) > std::abs(m[pr][pc])) pr = r, pc = c;
  double pivot = m[pr][pc];
  if (pivot == 0.0) return std::nullopt;
  Factor u{m[0][pc], m[1][pc]};
  Factor w{m[pr][0] / pivot, m[pr][1] / pivot};
  return std::make_pair(u, w);
}

RankOneTensor slice_term(int axis, Factor along, const Factor& rows, const Factor& cols) {
  auto [b, c] = other_axes(axis);
  std::array<Factor, 3> by_axis;
  by_axis[axis] = along;
  by_axis[b] = rows;
  by_axis[c] = cols;
  return RankOneTensor::from_axes(by_axis);
}

// Rank-one factorization of a tensor, pivoting on its largest entry. Exact
// when t has rank one; the caller checks the residual otherwise.
RankOneTensor rank_one_candidate(const Tensor8& t) {
  int pivot = int(std::max_element(t.begin(), t.end()) - t.begin());
  double top = t[pivot];
  if (top <= 0.0) return RankOneTensor::zero();
  int i = state_bit(pivot, 0), j = state_bit(pivot, 1), k = state_bit(pivot, 2);
  RankOneTensor r;
  r.a = {t[state_index(0, j, k)], t[state_index(1, j, k)]};
  r.b = {t[state_index(i, 0, k)] / top, t[state_index(i, 1, k)] / top};
  r.c = {t[state_index(i, j, 0)] / top, t[state_index(i, j, 1)] / top};
  return r;
}

std::optional<RankOneTensor> as_rank_one(const Tensor8& t) {
  RankOneTensor r = rank_one_candidate(t);
  if (!clamp_term(r)) return std::nullopt;
  if (sup_distance(r.expand(), t) > kEpsReconstruct * max_abs(t)) return std::nullopt;
  return r;
}

Tensor8 sum(const Tensor8& x, const Tensor8& y) {
  Tensor8 out;
  for (int s = 0; s < kStates; ++s) out[s] = x[s] + y[s];
  return out;
}

template <std::size_t N>
std::array<RankOneTensor, N> map_terms(const CubeSymmetry& g, std::array<RankOneTensor, N> terms) {
  for (auto& t : terms) t = apply_symmetry(g, t);
  return terms;
}

// --- rank two ---------------------------------------------------------------

struct Rank2Candidate {
  std::array<RankOneTensor, 2> terms;
  double residual = std::numeric_limits<double>::infinity();
};

std::optional<Rank2Candidate> finish_candidate(const Tensor8& t, std::array<RankOneTensor, 2> terms) {
  for (auto& term : terms)
    if (!clamp_term(term, kClampCandidate)) return std::nullopt;
  Rank2Candidate c;
  c.terms = terms;
  c.residual = sup_distance(sum(terms[0].expand(), terms[1].expand()), t);
  return c;
}

// t = (rho_A, rho_B) ⊗ M when the two slices along `axis` are parallel; the
// rows of M then give two rank-one terms.
std::optional<Rank2Candidate> split_parallel_slices(const Tensor8& t, int axis) {
  Matrix2 A = slice(t, axis, 0), B = slice(t, axis, 1);
  auto norm2 = [](const Matrix2& m) {
    return m[0][0] * m[0][0] + m[0][1] * m[0][1] + m[1][0] * m[1][0] + m[1][1] * m[1][1];
  };
  auto dot = [](const Matrix2& x, const Matrix2& y) {
    return x[0][0] * y[0][0] + x[0][1] * y[0][1] + x[1][0] * y[1][0] + x[1][1] * y[1][1];
  };
  const Matrix2& M = norm2(B) >= norm2(A) ? B : A;
  double mm = norm2(M);
  if (mm == 0.0) return std::nullopt;
  Factor along{dot(A, M) / mm, dot(B, M) / mm};
  std::array<RankOneTensor, 2> terms = {
      slice_term(axis, along, kE0, {M[0][0], M[0][1]}),
      slice_term(axis, along, kE1, {M[1][0], M[1][1]}),
  };
  return finish_candidate(t, terms);
}

// Signs each factor so the term is entrywise non-negative; false when the
// signs cannot be balanced.
bool orient_term(Factor& along, Factor& rows, Factor& cols) {
  auto dominant_sign = [](const Factor& f) {
    double v = std::abs(f[0]) >= std::abs(f[1]) ? f[0] : f[1];
    return v < 0.0 ? -1.0 : 1.0;
  };
  double sa = dominant_sign(along), sr = dominant_sign(rows), sc = dominant_sign(cols);
  if (sa * sr * sc < 0.0) return false;
  for (double& v : along) v *= sa;
  for (double& v : rows) v *= sr;
  for (double& v : cols) v *= sc;
  return true;
}

// The slices A, B along `axis` span a pencil sigma*A + tau*B containing two
// rank-one matrices R1, R2 (the roots of det(sigma*A + tau*B) = 0). Writing A
// and B back in terms of R1, R2 gives t = f1 ⊗ R1 + f2 ⊗ R2.
std::optional<Rank2Candidate> split_by_pencil(const Tensor8& t, int axis) {
  Matrix2 A = slice(t, axis, 0), B = slice(t, axis, 1);
  double detA = A[0][0] * A[1][1] - A[0][1] * A[1][0];
  double detB = B[0][0] * B[1][1] - B[0][1] * B[1][0];
  double mixed = A[0][0] * B[1][1] + A[1][1] * B[0][0] - A[0][1] * B[1][0] - A[1][0] * B[0][1];
  double disc = mixed * mixed - 4.0 * detA * detB;
  if (disc < 0.0) {
    double scale = std::max(mixed * mixed, std::abs(4.0 * detA * detB));
    if (disc < -1e-12 * scale) return std::nullopt;
    disc = 0.0;
  }
  double q = -0.5 * (mixed + std::copysign(std::sqrt(disc), mixed));
  // Homogeneous roots (sigma, tau) of detA s^2 + mixed s t + detB t^2.
  std::array<std::array<double, 2>, 2> roots = {{{q, detA}, {detB, q}}};
  for (auto& r : roots) {
    double n = std::hypot(r[0], r[1]);
    if (n == 0.0) return std::nullopt;
    r[0] /= n;
    r[1] /= n;
  }
  double D = roots[0][0] * roots[1][1] - roots[0][1] * roots[1][0];
  if (std::abs(D) < 1e-12) return std::nullopt;

  std::array<Factor, 2> along = {Factor{roots[1][1] / D, -roots[1][0] / D},
                                 Factor{-roots[0][1] / D, roots[0][0] / D}};
  std::array<RankOneTensor, 2> terms;
  for (int r = 0; r < 2; ++r) {
    Matrix2 R;
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) R[x][y] = roots[r][0] * A[x][y] + roots[r][1] * B[x][y];
    auto uw = rank_one_matrix_factors(R);
    if (!uw) {
      terms[r] = RankOneTensor::zero();
      continue;
    }
    auto [u, w] = *uw;
    Factor f = along[r];
    if (!orient_term(f, u, w)) return std::nullopt;
    terms[r] = slice_term(axis, f, u, w);
  }
  return finish_candidate(t, terms);
}

// Damped Gauss-Newton on the twelve factor entries. Near a double root of the
// pencil, or when two factors are almost parallel, the closed form loses
// digits; a few steps from the closed-form start recover them.
std::optional<Rank2Candidate> refine(const Tensor8& t, const Rank2Candidate& start) {
  using Params = Eigen::Matrix<double, 12, 1>;
  auto pack = [](const std::array<RankOneTensor, 2>& terms) {
    Params x;
    for (int r = 0; r < 2; ++r)
      for (int axis = 0; axis < 3; ++axis)
        for (int v = 0; v < 2; ++v) x(6 * r + 2 * axis + v) = terms[r].factor(axis)[v];
    return x;
  };
  auto unpack = [](const Params& x) {
    std::array<RankOneTensor, 2> terms;
    for (int r = 0; r < 2; ++r)
      for (int axis = 0; axis < 3; ++axis)
        for (int v = 0; v < 2; ++v) terms[r].factor(axis)[v] = std::max(x(6 * r + 2 * axis + v), 0.0);
    return terms;
  };
  auto residual_of = [&](const std::array<RankOneTensor, 2>& terms) {
    Eigen::Matrix<double, 8, 1> res;
    Tensor8 e = sum(terms[0].expand(), terms[1].expand());
    for (int s = 0; s < kStates; ++s) res(s) = e[s] - t[s];
    return res;
  };

  Rank2Candidate best = start;
  Params x = pack(start.terms);
  Eigen::Matrix<double, 8, 1> res = residual_of(unpack(x));
  double mu = 1e-6;
  const double target = 1e-3 * kEpsReconstruct * max_abs(t);
  for (int iter = 0; iter < 200 && best.residual > target; ++iter) {
    auto terms = unpack(x);
    Eigen::Matrix<double, 8, 12> J;
    for (int s = 0; s < kStates; ++s)
      for (int r = 0; r < 2; ++r)
        for (int axis = 0; axis < 3; ++axis) {
          double others = 1.0;
          for (int o = 0; o < 3; ++o)
            if (o != axis) others *= terms[r].factor(o)[state_bit(s, o)];
          int bit = state_bit(s, axis);
          J(s, 6 * r + 2 * axis + bit) = others;
          J(s, 6 * r + 2 * axis + 1 - bit) = 0.0;
        }
    Eigen::Matrix<double, 12, 12> H = J.transpose() * J;
    Eigen::Matrix<double, 12, 1> g = J.transpose() * res;
    bool improved = false;
    for (int attempt = 0; attempt < 20 && !improved; ++attempt) {
      Eigen::Matrix<double, 12, 12> damped = H;
      damped.diagonal().array() += mu * (H.diagonal().maxCoeff() + 1e-300);
      Params step = damped.ldlt().solve(-g);
      Params trial = x + step;
      Eigen::Matrix<double, 8, 1> trial_res = residual_of(unpack(trial));
      if (trial_res.squaredNorm() < res.squaredNorm()) {
        x = trial;
        res = trial_res;
        mu = std::max(mu / 10.0, 1e-15);
        improved = true;
      } else {
        mu *= 10.0;
      }
    }
    if (!improved) break;
    double sup = res.cwiseAbs().maxCoeff();
    if (sup < best.residual) {
      best.terms = unpack(x);
      best.residual = sup;
    }
  }
  return best.residual < start.residual ? std::optional(best) : std::nullopt;
}

// --- Hadamard factorization routes -------------------------------------------

// Boundary route. With p000 = p010 = 0 and p101, p111 > 0:
//   first  = e0 ⊗ (p001, p011) ⊗ e1 + e1 ⊗ (p101, p111) ⊗ (1, 1)
//   second = (1,1) ⊗ (1,1) ⊗ e1 + e1 ⊗ (p100/p101, p110/p111) ⊗ e0
std::optional<HadamardFactorization> hadamard_boundary(const Tensor8& p) {
  for (const auto& g : all_symmetries()) {
    Tensor8 q = apply_symmetry(g, p);
    if (q[0] != 0.0 || q[2] != 0.0 || q[5] <= 0.0 || q[7] <= 0.0) continue;
    HadamardFactorization h;
    h.route = CertificateRoute::Boundary;
    h.first = {RankOneTensor{kE0, {q[1], q[3]}, kE1}, RankOneTensor{kE1, {q[5], q[7]}, kOnes}};
    h.second = {RankOneTensor{kOnes, kOnes, kE1},
                RankOneTensor{kE1, {q[4] / q[5], q[6] / q[7]}, kE0}};
    CubeSymmetry back = g.inverse();
    h.first = map_terms(back, h.first);
    h.second = map_terms(back, h.second);
    return h;
  }
  // No such relabeling: the support is covered by two rank-one blocks.
  try {
    HadamardFactorization h;
    h.route = CertificateRoute::Boundary;
    h.first = rank2_decompose(p);
    h.second = {RankOneTensor{kOnes, kOnes, kOnes}, RankOneTensor::zero()};
    return h;
  } catch (const NotMember&) {
    return std::nullopt;
  }
}

// Rank-one slice route, with d31 = 0 after relabeling. q is the rank-one
// tensor agreeing with the slice k = 1 and carrying the largest multiple of
// it below the slice k = 0; the residual has at most three non-zero entries.
// r takes two adjacent ones, and the last is fixed by the multiplicative
// factor s + t.
HadamardFactorization hadamard_rank_one_slice(const Tensor8& q) {
  Matrix2 S1 = slice(q, 2, 1);
  auto uw = rank_one_matrix_factors(S1);
  if (!uw) throw InternalError("rank-one slice route: slice vanishes on an interior tensor");
  auto [u, w] = *uw;
  Matrix2 R{{{u[0] * w[0], u[0] * w[1]}, {u[1] * w[0], u[1] * w[1]}}};

  double lambda = std::numeric_limits<double>::infinity();
  int i0 = 0, j0 = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double ratio = q[state_index(i, j, 0)] / R[i][j];
      if (ratio < lambda) lambda = ratio, i0 = i, j0 = j;
    }
  Matrix2 D0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) D0[i][j] = std::max(0.0, q[state_index(i, j, 0)] - lambda * R[i][j]);
  D0[i0][j0] = 0.0;

  RankOneTensor main{u, w, {lambda, 1.0}};
  Factor r_row{};
  r_row[j0] = D0[1 - i0][j0];
  r_row[1 - j0] = D0[1 - i0][1 - j0];
  RankOneTensor r{basis(1 - i0), r_row, kE0};

  double fixed = lambda * R[i0][1 - j0];
  double boost = q[state_index(i0, 1 - j0, 0)] / fixed - 1.0;
  RankOneTensor t{basis(i0), basis(1 - j0), {std::max(0.0, boost), 0.0}};

  HadamardFactorization h;
  h.route = CertificateRoute::VanishingDeterminant;
  h.first = {main, r};
  h.second = {RankOneTensor{kOnes, kOnes, kOnes}, t};
  return h;
}

// Interior route on log-probabilities.
HadamardFactorization hadamard_generic(const Tensor8& q) {
  Tensor8 l;
  for (int s = 0; s < kStates; ++s) l[s] = std::log(q[s]);
  detail::LogSplit split = detail::split_log_tensor(l);
  Tensor8 fx, fy;
  for (int s = 0; s < kStates; ++s) {
    fx[s] = std::exp(split.x_part[s]);
    fy[s] = std::exp(split.y_part[s]);
  }
  HadamardFactorization h;
  h.route = CertificateRoute::Generic;
  try {
    h.first = rank2_decompose(fx);
    h.second = rank2_decompose(fy);
  } catch (const NotMember& e) {
    throw InternalError(std::string("log-space split produced a factor outside M32: ") + e.what());
  }
  return h;
}

void verify(const Tensor8& target, const Tensor8& rebuilt, const char* what) {
  if (sup_distance(target, rebuilt) > kEpsReconstruct * std::max(max_abs(target), 1e-300))
    throw InternalError(std::string(what) + ": reconstruction residual exceeds tolerance");
}

}  // namespace

// --- public -----------------------------------------------------------------

std::string_view route_name(CertificateRoute r) {
  switch (r) {
    case CertificateRoute::RankOne: return "rank_one";
    case CertificateRoute::Boundary: return "boundary";
    case CertificateRoute::VanishingDeterminant: return "vanishing_determinant";
    case CertificateRoute::Generic: return "generic";
  }
  return "?";
}

RankOneTensor RankOneTensor::from_axes(const std::array<Factor, 3>& by_axis) {
  return RankOneTensor{by_axis[0], by_axis[1], by_axis[2]};
}

Tensor8 RankOneTensor::expand() const {
  Tensor8 out;
  for (int s = 0; s < kStates; ++s) out[s] = at(s);
  return out;
}

double RankOneTensor::min_entry() const {
  return std::min({a[0], a[1], b[0], b[1], c[0], c[1]});
}

RankOneTensor apply_symmetry(const CubeSymmetry& g, const RankOneTensor& t) {
  // Output axis a reads input axis perm[a], with its entries swapped if a flips.
  RankOneTensor out;
  for (int a = 0; a < 3; ++a) {
    Factor f = t.factor(g.perm[a]);
    if (g.flips_axis(a)) std::swap(f[0], f[1]);
    out.factor(a) = f;
  }
  return out;
}

Tensor8 Rank3Decomposition::expand() const {
  return sum(sum(terms[0].expand(), terms[1].expand()), terms[2].expand());
}

Tensor8 HadamardFactorization::first_tensor() const {
  return sum(first[0].expand(), first[1].expand());
}

Tensor8 HadamardFactorization::second_tensor() const {
  return sum(second[0].expand(), second[1].expand());
}

Tensor8 HadamardFactorization::expand() const {
  Tensor8 x = first_tensor(), y = second_tensor(), out;
  for (int s = 0; s < kStates; ++s) out[s] = x[s] * y[s];
  return out;
}

double sup_distance(const Tensor8& x, const Tensor8& y) {
  double d = 0.0;
  for (int s = 0; s < kStates; ++s) d = std::max(d, std::abs(x[s] - y[s]));
  return d;
}

std::array<RankOneTensor, 2> rank2_decompose(const Tensor8& t) {
  double scale = max_abs(t);
  if (scale == 0.0) return {RankOneTensor::zero(), RankOneTensor::zero()};
  for (double v : t)
    if (!(v >= -kClampNegative * scale)) throw InvalidTensor("rank-two split needs a non-negative tensor");
  Tensor8 clean = t;
  for (double& v : clean) v = std::max(v, 0.0);

  bool positive = std::all_of(clean.begin(), clean.end(), [&](double v) { return v > kEpsZero * scale; });
  DetSignature sig = determinants(clean);
  if (positive && !m32_pattern_witness(sig.signs))
    throw NotMember("tensor violates every M32 sign pattern: non-negative rank exceeds two");

  if (auto r = as_rank_one(clean)) return {*r, RankOneTensor::zero()};

  std::vector<Rank2Candidate> candidates;
  for (int axis = 0; axis < 3; ++axis)
    for (auto cand : {split_by_pencil(clean, axis), split_parallel_slices(clean, axis)})
      if (cand) candidates.push_back(*cand);
  auto by_residual = [](const Rank2Candidate& x, const Rank2Candidate& y) { return x.residual < y.residual; };
  std::sort(candidates.begin(), candidates.end(), by_residual);
  if (!candidates.empty() && candidates.front().residual > 1e-3 * kEpsReconstruct * scale) {
    for (auto& cand : candidates)
      if (auto polished = refine(clean, cand)) cand = *polished;
    std::sort(candidates.begin(), candidates.end(), by_residual);
  }
  std::optional<Rank2Candidate> best;
  if (!candidates.empty()) best = candidates.front();
  if (!best || best->residual > kEpsReconstruct * scale)
    throw NotMember("no non-negative rank-two representation found");
  return best->terms;
}

Rank3Decomposition rank3_decompose(const ProbTensor& p) {
  if (!in_m33(p).member)
    throw NotMember("tensor outside M33: no non-negative rank-3 decomposition exists in this model");
  const Tensor8 clean = zero_small_entries(p.entries());
  const DetSignature sig = determinants(clean);
  Rank3Decomposition out;

  auto finish = [&](Rank3Decomposition d) {
    for (auto& t : d.terms)
      if (!clamp_term(t)) throw InternalError("rank-3 decomposition produced a negative factor");
    verify(p.entries(), d.expand(), "rank-3 decomposition");
    return d;
  };

  bool all_zero = std::all_of(sig.signs.begin(), sig.signs.end(), [](Sign s) { return s == Sign::Zero; });
  if (all_zero) {
    if (auto r = as_rank_one(clean)) {
      out.route = CertificateRoute::RankOne;
      out.terms = {*r, RankOneTensor::zero(), RankOneTensor::zero()};
      return finish(out);
    }
  }

  // Two adjacent zeros: move them to 000 and 001; the other six entries pair
  // up along the third axis into three rank-one terms.
  if (p.zero_mask() != 0) {
    for (const auto& g : all_symmetries()) {
      Tensor8 q = apply_symmetry(g, clean);
      if (q[0] != 0.0 || q[1] != 0.0) continue;
      out.route = CertificateRoute::Boundary;
      out.terms = {RankOneTensor{kE1, kE0, {q[4], q[5]}}, RankOneTensor{kE0, kE1, {q[2], q[3]}},
                   RankOneTensor{kE1, kE1, {q[6], q[7]}}};
      out.terms = map_terms(g.inverse(), out.terms);
      return finish(out);
    }
    // Antipodal zeros at 000 and 111: the remaining six states form a cycle
    // covered by three adjacent pairs.
    for (const auto& g : all_symmetries()) {
      Tensor8 q = apply_symmetry(g, clean);
      if (q[0] != 0.0 || q[7] != 0.0) continue;
      out.route = CertificateRoute::Boundary;
      out.terms = {RankOneTensor{kE0, {q[1], q[3]}, kE1}, RankOneTensor{{q[2], q[6]}, kE1, kE0},
                   RankOneTensor{kE1, kE0, {q[4], q[5]}}};
      out.terms = map_terms(g.inverse(), out.terms);
      return finish(out);
    }
  }

  // A vanishing determinant: rank-one slice plus the two rows of the opposite slice.
  for (int slot = 0; slot < 6; ++slot) {
    if (sig.signs[slot] != Sign::Zero) continue;
    int axis = slot / 2, v = slot % 2;
    Matrix2 S = slice(clean, axis, v), T = slice(clean, axis, 1 - v);
    RankOneTensor first = RankOneTensor::zero();
    if (auto uw = rank_one_matrix_factors(S)) first = slice_term(axis, basis(v), uw->first, uw->second);
    out.route = CertificateRoute::VanishingDeterminant;
    out.terms = {first, slice_term(axis, basis(1 - v), kE0, {T[0][0], T[0][1]}),
                 slice_term(axis, basis(1 - v), kE1, {T[1][0], T[1][1]})};
    return finish(out);
  }

  // Relabel so d21 and d11 have strictly opposite signs, then
  //   p = [p000, p001 at i=j=0] + e1 ⊗ (1, x/p100) ⊗ (p100, p101)
  //                             + (1, y/p010) ⊗ e1 ⊗ (p010, p011).
  for (const auto& g : all_symmetries()) {
    Tensor8 q = apply_symmetry(g, clean);
    DetSignature s = determinants(q);
    Sign s21 = s.signs[det_slot(2, 1)], s11 = s.signs[det_slot(1, 1)];
    if (s21 == Sign::Zero || s11 == Sign::Zero || s21 == s11) continue;
    if (q[4] <= 0.0 || q[2] <= 0.0) continue;
    double d21 = s.values[det_slot(2, 1)], d11 = s.values[det_slot(1, 1)];
    double x = q[4] * q[7] * d21 / (q[5] * d21 - q[3] * d11);
    double y = q[2] * q[7] * d11 / (q[3] * d11 - q[5] * d21);
    Rank3Decomposition d;
    d.route = CertificateRoute::Generic;
    d.terms = {RankOneTensor{kE0, kE0, {q[0], q[1]}}, RankOneTensor{kE1, {1.0, x / q[4]}, {q[4], q[5]}},
               RankOneTensor{{1.0, y / q[2]}, kE1, {q[2], q[3]}}};
    bool ok = true;
    for (auto& t : d.terms) ok = ok && clamp_term(t);
    if (!ok) continue;
    d.terms = map_terms(g.inverse(), d.terms);
    if (sup_distance(d.expand(), p.entries()) > kEpsReconstruct) continue;
    return finish(d);
  }
  throw InternalError("member of M33 without a relabeling giving d21, d11 opposite signs");
}

HadamardFactorization hadamard_factorize(const ProbTensor& p) {
  if (!in_rbm32(p).member) throw NotMember("tensor outside RBM32");
  const Tensor8 clean = zero_small_entries(p.entries());
  const DetSignature sig = determinants(clean);

  auto finish = [&](HadamardFactorization h) {
    for (auto* half : {&h.first, &h.second})
      for (auto& t : *half)
        if (!clamp_term(t)) throw InternalError("Hadamard factorization produced a negative factor");
    verify(p.entries(), h.expand(), "Hadamard factorization");
    return h;
  };

  bool all_zero = std::all_of(sig.signs.begin(), sig.signs.end(), [](Sign s) { return s == Sign::Zero; });
  if (all_zero) {
    if (auto r = as_rank_one(clean)) {
      HadamardFactorization h;
      h.route = CertificateRoute::RankOne;
      h.first = {*r, RankOneTensor::zero()};
      h.second = {RankOneTensor{kOnes, kOnes, kOnes}, RankOneTensor::zero()};
      return finish(h);
    }
  }

  if (p.zero_mask() != 0) {
    if (auto h = hadamard_boundary(clean)) return finish(*h);
    throw InternalError("boundary member of RBM32 without a Hadamard factorization");
  }

  for (const auto& g : all_symmetries()) {
    Tensor8 q = apply_symmetry(g, clean);
    if (determinants(q).signs[det_slot(3, 1)] != Sign::Zero) continue;
    HadamardFactorization h = hadamard_rank_one_slice(q);
    CubeSymmetry back = g.inverse();
    h.first = map_terms(back, h.first);
    h.second = map_terms(back, h.second);
    return finish(h);
  }

  for (const auto& g : all_symmetries()) {
    Tensor8 q = apply_symmetry(g, clean);
    DetSignature s = determinants(q);
    if (s.signs[det_slot(1, 0)] == Sign::Negative || s.signs[det_slot(1, 1)] == Sign::Negative) continue;
    HadamardFactorization h = hadamard_generic(q);
    CubeSymmetry back = g.inverse();
    h.first = map_terms(back, h.first);
    h.second = map_terms(back, h.second);
    return finish(h);
  }
  throw InternalError("member of RBM32 without a relabeling into {d10 >= 0, d11 >= 0}");
}

namespace detail {

const std::array<Tensor8, 8>& spanning_rows() {
  // Rows of the lineality spanning matrix, written over (l000, l100, l010,
  // l001, l110, l101, l011, l111); rows 1-4 lie in X, rows 5-8 in Y.
  static const std::array<Tensor8, 8> rows = [] {
    constexpr std::array<std::array<int, 8>, 8> in_spanning_order = {{
        {1, 0, 1, 0, 0, 0, 0, 0},
        {1, 0, 0, 1, 0, 0, 0, 0},
        {0, 0, 0, 0, 1, 0, 0, 1},
        {0, 0, 0, 0, 0, 1, 0, 1},
        {0, 0, 1, 0, 0, 0, 1, 0},
        {0, 0, 0, 1, 0, 0, 1, 0},
        {0, 1, 0, 0, 1, 0, 0, 0},
        {0, 1, 0, 0, 0, 1, 0, 0},
    }};
    std::array<Tensor8, 8> out{};
    for (int r = 0; r < 8; ++r)
      for (int c = 0; c < 8; ++c) out[r][kSpanningOrder[c]] = in_spanning_order[r][c];
    return out;
  }();
  return rows;
}

LogSplit split_log_tensor(const Tensor8& l) {
  static const Eigen::Matrix<double, 8, 8> pinv = [] {
    Eigen::Matrix<double, 8, 8> S;
    const auto& rows = spanning_rows();
    for (int r = 0; r < 8; ++r)
      for (int s = 0; s < kStates; ++s) S(s, r) = rows[r][s];
    return Eigen::Matrix<double, 8, 8>(S.completeOrthogonalDecomposition().pseudoInverse());
  }();

  LogSplit out;
  out.alpha = l[0] + l[3] - l[1] - l[2];
  out.beta = l[4] + l[7] - l[5] - l[6];

  Eigen::Matrix<double, 8, 1> r;
  for (int s = 0; s < kStates; ++s) r(s) = l[s];
  r(0) -= out.alpha;
  r(4) -= out.beta;
  Eigen::Matrix<double, 8, 1> c = pinv * r;

  const auto& rows = spanning_rows();
  double worst = 0.0, rmax = 1.0;
  for (int s = 0; s < kStates; ++s) {
    double acc = 0.0;
    for (int k = 0; k < 8; ++k) acc += c(k) * rows[k][s];
    worst = std::max(worst, std::abs(acc - r(s)));
    rmax = std::max(rmax, std::abs(r(s)));
  }
  if (worst > 1e-9 * rmax) throw InternalError("log tensor is not in the lineality space plus the quotient cone");

  out.x_part.fill(0.0);
  out.y_part.fill(0.0);
  out.x_part[0] = out.alpha;
  out.y_part[4] = out.beta;
  for (int k = 0; k < 8; ++k) {
    out.coefficients[k] = c(k);
    // Rows 1-4 and the negatives of rows 5-8 lie in X; the rest in Y.
    bool to_x = (k < 4) == (c(k) > 0.0);
    Tensor8& part = to_x ? out.x_part : out.y_part;
    for (int s = 0; s < kStates; ++s) part[s] += c(k) * rows[k][s];
  }
  return out;
}

}  // namespace detail

}  // namespace rbm32
