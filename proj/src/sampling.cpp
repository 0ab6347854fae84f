#include "rbm32/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <omp.h>

namespace rbm32 {

namespace {

constexpr long kBlocksPerRound = 32;

int thread_count(int workers) { return workers > 0 ? workers : omp_get_max_threads(); }

long block_count(long count) { return (count + kBlockSize - 1) / kBlockSize; }

long block_length(long count, long block) { return std::min(kBlockSize, count - block * kBlockSize); }

void validate(const SamplerConfig& cfg) {
  if (cfg.count < 0) throw std::invalid_argument("sample count must be non-negative");
  if (cfg.workers < 1) throw std::invalid_argument("worker count must be positive");
}

Tensor8 rank_one_uniform(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double a0 = u(rng), a1 = u(rng), b0 = u(rng), b1 = u(rng), c0 = u(rng), c1 = u(rng);
  std::array<double, 2> a{a0, a1}, b{b0, b1}, c{c0, c1};
  Tensor8 t;
  for (int s = 0; s < kStates; ++s) t[s] = a[state_bit(s, 0)] * b[state_bit(s, 1)] * c[state_bit(s, 2)];
  return t;
}

Tensor8 mixture_weights(std::mt19937_64& rng, int k) {
  Tensor8 t{};
  for (int r = 0; r < k; ++r) {
    Tensor8 term = rank_one_uniform(rng);
    for (int s = 0; s < kStates; ++s) t[s] += term[s];
  }
  return t;
}

long count_block(Model model, const SamplerConfig& cfg, long block) {
  std::mt19937_64 rng = block_generator(cfg.seed, SampleSource::Simplex, block);
  long n = block_length(cfg.count, block), inside = 0;
  for (long i = 0; i < n; ++i)
    if (accepts(model, draw(SampleSource::Simplex, rng))) ++inside;
  return inside;
}

}  // namespace

std::mt19937_64 block_generator(std::uint64_t seed, SampleSource source, long block) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(source),
                    std::uint32_t(block), std::uint32_t(std::uint64_t(block) >> 32)};
  return std::mt19937_64(seq);
}

ProbTensor draw(SampleSource source, std::mt19937_64& rng) {
  switch (source) {
    case SampleSource::Simplex: {
      std::exponential_distribution<double> e(1.0);
      Tensor8 w;
      for (double& v : w) v = e(rng);
      return ProbTensor::normalized(w);
    }
    case SampleSource::RbmParametric: {
      Tensor8 x = mixture_weights(rng, 2), y = mixture_weights(rng, 2);
      for (int s = 0; s < kStates; ++s) x[s] *= y[s];
      return ProbTensor::normalized(x);
    }
    case SampleSource::Mixture1: return ProbTensor::normalized(mixture_weights(rng, 1));
    case SampleSource::Mixture2: return ProbTensor::normalized(mixture_weights(rng, 2));
    case SampleSource::Mixture3: return ProbTensor::normalized(mixture_weights(rng, 3));
  }
  throw std::invalid_argument("unknown sample source");
}

std::vector<ProbTensor> sample(SampleSource source, const SamplerConfig& cfg) {
  validate(cfg);
  std::vector<ProbTensor> out(std::size_t(cfg.count), ProbTensor::uniform());
  const long blocks = block_count(cfg.count);
#pragma omp parallel for num_threads(thread_count(cfg.workers)) schedule(dynamic)
  for (long b = 0; b < blocks; ++b) {
    std::mt19937_64 rng = block_generator(cfg.seed, source, b);
    long n = block_length(cfg.count, b);
    for (long i = 0; i < n; ++i) out[std::size_t(b * kBlockSize + i)] = draw(source, rng);
  }
  return out;
}

std::vector<ProbTensor> sample_simplex(const SamplerConfig& cfg) { return sample(SampleSource::Simplex, cfg); }

std::vector<ProbTensor> sample_rbm_parametric(const SamplerConfig& cfg) {
  return sample(SampleSource::RbmParametric, cfg);
}

std::vector<ProbTensor> sample_mixture_parametric(const SamplerConfig& cfg, int k) {
  switch (k) {
    case 1: return sample(SampleSource::Mixture1, cfg);
    case 2: return sample(SampleSource::Mixture2, cfg);
    case 3: return sample(SampleSource::Mixture3, cfg);
    default: throw std::invalid_argument("mixture size must be 1, 2 or 3");
  }
}

VolumeEstimate make_estimate(long samples, long inside) {
  VolumeEstimate e;
  e.samples = samples;
  e.inside = inside;
  if (samples > 0) {
    e.fraction = double(inside) / double(samples);
    e.standard_error = std::sqrt(e.fraction * (1.0 - e.fraction) / double(samples));
  }
  return e;
}

VolumeEstimate estimate_volume(Model model, const SamplerConfig& cfg, const VolumeProgress& progress) {
  validate(cfg);
  if (cfg.count < kMinVolumeSamples) throw std::invalid_argument("volume estimates need at least 10000 samples");
  const long blocks = block_count(cfg.count);
  long inside = 0, done = 0;
  for (long first = 0; first < blocks; first += kBlocksPerRound) {
    long last = std::min(blocks, first + kBlocksPerRound);
    long round_inside = 0;
#pragma omp parallel for num_threads(thread_count(cfg.workers)) schedule(dynamic) reduction(+ : round_inside)
    for (long b = first; b < last; ++b) round_inside += count_block(model, cfg, b);
    inside += round_inside;
    done = std::min(cfg.count, last * kBlockSize);
    if (progress) progress(make_estimate(done, inside));
  }
  return make_estimate(done, inside);
}

VolumeEstimate estimate_volume_serial(Model model, const SamplerConfig& cfg) {
  validate(cfg);
  if (cfg.count < kMinVolumeSamples) throw std::invalid_argument("volume estimates need at least 10000 samples");
  long inside = 0;
  for (long b = 0; b < block_count(cfg.count); ++b) inside += count_block(model, cfg, b);
  return make_estimate(cfg.count, inside);
}

long count_members(Model model, const std::vector<ProbTensor>& tensors, int workers) {
  long n = 0;
  const long size = long(tensors.size());
#pragma omp parallel for num_threads(thread_count(workers)) reduction(+ : n)
  for (long i = 0; i < size; ++i)
    if (accepts(model, tensors[std::size_t(i)])) ++n;
  return n;
}

long count_members_serial(Model model, const std::vector<ProbTensor>& tensors) {
  long n = 0;
  for (const auto& p : tensors)
    if (accepts(model, p)) ++n;
  return n;
}

}  // namespace rbm32
