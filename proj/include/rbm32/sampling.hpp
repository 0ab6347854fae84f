#pragma once

// Random distributions on {0,1}^3 and Monte Carlo volume estimates.
//
// Samples are generated in fixed blocks of kBlockSize; block b draws from its
// own generator seeded by (seed, stream, b), so the output depends only on
// the seed and count, never on how blocks are spread over workers.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "rbm32/membership.hpp"
#include "rbm32/tensor.hpp"

namespace rbm32 {

inline constexpr long kBlockSize = 4096;
inline constexpr long kMinVolumeSamples = 10000;

struct SamplerConfig {
  std::uint64_t seed = 0;
  long count = 0;
  int workers = 1;
};

enum class SampleSource {
  Simplex,        ///< uniform on the simplex (flat Dirichlet)
  RbmParametric,  ///< Hadamard product of two rank-two tensors
  Mixture1,       ///< a single rank-one tensor
  Mixture2,       ///< sum of two rank-one tensors
  Mixture3,       ///< sum of three rank-one tensors
};

/// Generator for one block of one source.
std::mt19937_64 block_generator(std::uint64_t seed, SampleSource source, long block);

/// Single draws. Parametric sources use i.i.d. uniform(0,1) factor entries.
ProbTensor draw(SampleSource source, std::mt19937_64& rng);

std::vector<ProbTensor> sample(SampleSource source, const SamplerConfig& cfg);

std::vector<ProbTensor> sample_simplex(const SamplerConfig& cfg);
std::vector<ProbTensor> sample_rbm_parametric(const SamplerConfig& cfg);
/// k in 1..3; throws std::invalid_argument otherwise.
std::vector<ProbTensor> sample_mixture_parametric(const SamplerConfig& cfg, int k);

struct VolumeEstimate {
  long samples = 0;
  long inside = 0;
  double fraction = 0.0;
  double standard_error = 0.0;
};

VolumeEstimate make_estimate(long samples, long inside);

/// Called after each round of blocks with the running totals.
using VolumeProgress = std::function<void(const VolumeEstimate&)>;

/// Fraction of uniform simplex samples accepted by the model, with its
/// binomial standard error. Requires count >= kMinVolumeSamples.
VolumeEstimate estimate_volume(Model model, const SamplerConfig& cfg, const VolumeProgress& progress = {});

/// Single-threaded reference; bit-identical to estimate_volume.
VolumeEstimate estimate_volume_serial(Model model, const SamplerConfig& cfg);

/// Members of `model` among the tensors, in parallel and serially.
long count_members(Model model, const std::vector<ProbTensor>& tensors, int workers);
long count_members_serial(Model model, const std::vector<ProbTensor>& tensors);

}  // namespace rbm32
