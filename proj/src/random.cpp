#include "ctxfuse/random.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ctxfuse/errors.hpp"

namespace ctxfuse {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t run, std::uint64_t stream) {
  std::uint64_t state = master;
  std::uint64_t h = splitmix64(state);
  state = h ^ run;
  h = splitmix64(state);
  state = h ^ stream;
  return splitmix64(state);
}

Rng make_stream(std::uint64_t master, std::uint64_t run, std::uint64_t stream) {
  return Rng(derive_seed(master, run, stream));
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

std::size_t uniform_index(Rng& rng, std::size_t n) {
  if (n == 0) throw ContractViolation("uniform_index over empty range");
  const std::uint64_t bound = n;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

double sample_beta(Rng& rng, BetaParams params) {
  if (!(params.alpha > 0.0) || !(params.beta > 0.0)) {
    throw ContractViolation("Beta parameters must be strictly positive");
  }
  std::gamma_distribution<double> ga(params.alpha, 1.0);
  std::gamma_distribution<double> gb(params.beta, 1.0);
  const double x = ga(rng);
  const double y = gb(rng);
  return x / (x + y);
}

std::vector<double> sample_flat_dirichlet(Rng& rng, std::size_t k) {
  std::vector<double> u(k);
  for (auto& v : u) v = -std::log1p(-uniform01(rng));
  const double total = std::accumulate(u.begin(), u.end(), 0.0);
  if (!(total > 0.0)) {
    // every exponential draw was exactly zero; return the centre of the simplex
    for (auto& v : u) v = 1.0 / static_cast<double>(k);
    return u;
  }
  for (auto& v : u) v /= total;
  return u;
}

std::size_t sample_categorical(Rng& rng, std::span<const double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw ContractViolation("categorical weights sum to zero");
  const double target = uniform01(rng) * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (target < acc) return i;
  }
  return last_positive;
}

std::size_t sample_truncated_poisson(Rng& rng, double lambda, std::size_t cap) {
  if (!(lambda >= 0.0)) throw ContractViolation("Poisson rate must be nonnegative");
  const double u = uniform01(rng);
  if (lambda == 0.0) return 0;
  double pmf = std::exp(-lambda);
  double cdf = pmf;
  std::size_t k = 0;
  while (u >= cdf && k < cap) {
    ++k;
    pmf *= lambda / static_cast<double>(k);
    cdf += pmf;
  }
  return k;
}

std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t n, std::size_t k) {
  if (k > n) throw ContractViolation("cannot draw more items than available");
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + uniform_index(rng, n - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace ctxfuse
