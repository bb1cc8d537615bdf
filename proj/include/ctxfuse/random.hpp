#pragma once

// Seedable sampling primitives for the Monte Carlo harness. Every run draws from its
// own generator whose seed is a pure function of (master seed, run index, stream tag),
// so results do not depend on the order in which runs execute.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace ctxfuse {

using Rng = std::mt19937_64;

/// Shape parameters of a Beta distribution; both strictly positive.
struct BetaParams {
  double alpha = 1.0;
  double beta = 1.0;

  [[nodiscard]] double mean() const { return alpha / (alpha + beta); }
  bool operator==(const BetaParams&) const = default;
};

/// One splitmix64 step: advances `state` and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state);

/// Seed for substream `stream` of run `run` under `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t run, std::uint64_t stream);

Rng make_stream(std::uint64_t master, std::uint64_t run, std::uint64_t stream);

/// Uniform on [0,1) with 53 random bits.
double uniform01(Rng& rng);

/// Uniform on [lo, hi).
double uniform(Rng& rng, double lo, double hi);

/// Uniform integer in [0, n); n > 0.
std::size_t uniform_index(Rng& rng, std::size_t n);

double sample_beta(Rng& rng, BetaParams params);

/// Dirichlet(1,...,1) of dimension k via normalised unit-rate exponentials.
std::vector<double> sample_flat_dirichlet(Rng& rng, std::size_t k);

/// Index drawn from a discrete distribution given by (not necessarily normalised) weights.
std::size_t sample_categorical(Rng& rng, std::span<const double> weights);

/// min(Poisson(lambda), cap) by CDF inversion. Always consumes exactly one uniform.
std::size_t sample_truncated_poisson(Rng& rng, double lambda, std::size_t cap);

/// `k` distinct values from [0, n) in draw order (partial Fisher-Yates).
std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t n, std::size_t k);

}  // namespace ctxfuse
