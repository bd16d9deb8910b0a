#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace zentropy {

// splitmix64 finalizer; used to derive independent seed streams.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(mix64(seed) ^ mix64(stream + 0x5851F42D4C957F2Dull));
}

// Seeded generator whose every draw is defined in terms of the raw
// mt19937_64 output, so sequences do not depend on the standard library's
// distribution implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), n >= 1.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  // Index drawn from a (not necessarily normalized) weight vector by inversion.
  std::size_t categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    const double target = uniform() * total;
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

  // Exact binomial draw by inversion, searching outward from the mode.
  std::uint64_t binomial(std::uint64_t n, double p) {
    if (n == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    const double q = 1.0 - p;
    const double nd = static_cast<double>(n);
    auto mode = static_cast<std::uint64_t>(std::floor((nd + 1.0) * p));
    if (mode > n) mode = n;
    const double md = static_cast<double>(mode);
    const double pmf_mode = std::exp(std::lgamma(nd + 1.0) - std::lgamma(md + 1.0) -
                                     std::lgamma(nd - md + 1.0) + md * std::log(p) +
                                     (nd - md) * std::log(q));
    double u = uniform() - pmf_mode;
    if (u < 0.0) return mode;

    const double ratio = p / q;
    std::uint64_t up = mode, down = mode;
    double pmf_up = pmf_mode, pmf_down = pmf_mode;
    bool up_open = mode < n, down_open = mode > 0;
    while (up_open || down_open) {
      if (up_open) {
        pmf_up *= static_cast<double>(n - up) / static_cast<double>(up + 1) * ratio;
        ++up;
        u -= pmf_up;
        if (u < 0.0) return up;
        up_open = up < n && pmf_up > 0.0;
      }
      if (down_open) {
        pmf_down *= static_cast<double>(down) / static_cast<double>(n - down + 1) / ratio;
        --down;
        u -= pmf_down;
        if (u < 0.0) return down;
        down_open = down > 0 && pmf_down > 0.0;
      }
    }
    return mode;  // rounding residue
  }

  // Multinomial draw via sequential conditional binomials.
  std::vector<std::uint64_t> multinomial(std::uint64_t n, std::span<const double> probs) {
    std::vector<std::uint64_t> out(probs.size(), 0);
    double remaining_mass = 0.0;
    for (double p : probs) remaining_mass += p;
    std::uint64_t remaining = n;
    for (std::size_t i = 0; i < probs.size() && remaining > 0; ++i) {
      if (i + 1 == probs.size() || probs[i] >= remaining_mass) {
        out[i] = remaining;
        remaining = 0;
        break;
      }
      const double p = remaining_mass > 0.0 ? probs[i] / remaining_mass : 0.0;
      out[i] = binomial(remaining, p);
      remaining -= out[i];
      remaining_mass -= probs[i];
    }
    return out;
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace zentropy
