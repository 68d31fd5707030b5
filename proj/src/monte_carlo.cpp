#include <cmath>
#include <random>
#include <stdexcept>

#include "partfec/analysis.hpp"
#include "partfec/errors.hpp"

namespace partfec {

namespace {

constexpr std::size_t kSimulatedPacketSize = 8;
constexpr double kZ95 = 1.959963984540054;

constexpr std::uint64_t mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// SplitMix64; one instance per trial, seeded from (seed, trial index).
class TrialRng {
 public:
  using result_type = std::uint64_t;

  TrialRng(std::uint64_t seed, std::uint64_t trial) noexcept
      : state_(mix(seed + 0x9E3779B97F4A7C15ULL * (trial + 1))) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

 private:
  std::uint64_t state_;
};

PacketBlock random_source(std::size_t k, std::uint64_t seed) {
  TrialRng rng(seed, ~std::uint64_t{0});
  PacketBlock source(k, kSimulatedPacketSize);
  for (std::size_t i = 0; i < k; ++i) {
    for (auto& byte : source.emplace(i)) byte = static_cast<gf::Symbol>(rng());
  }
  return source;
}

// Applies fresh erasures to `received` from a pristine copy.
void apply_erasures(const PacketBlock& pristine, PacketBlock& received,
                    std::bernoulli_distribution& erased, TrialRng& rng) {
  for (std::size_t i = 0; i < pristine.slots(); ++i) {
    if (erased(rng)) {
      received.erase(i);
    } else {
      received.set(i, pristine.packet(i));
    }
  }
}

class LossAccumulator {
 public:
  explicit LossAccumulator(std::size_t k) : k_(static_cast<double>(k)) {}

  void add(std::size_t lost) noexcept {
    const double x = static_cast<double>(lost) / k_;
    sum_ += x;
    sum_sq_ += x * x;
    ++trials_;
  }

  PlrReport report() const {
    const auto t = static_cast<double>(trials_);
    const double mean = sum_ / t;
    double half_width = 0.0;
    if (trials_ > 1) {
      const double variance = std::max(0.0, (sum_sq_ - sum_ * mean) / (t - 1.0));
      half_width = kZ95 * std::sqrt(variance / t);
    }
    return {.plr = mean, .method = PlrMethod::monte_carlo, .trials = trials_,
            .half_width = half_width};
  }

 private:
  double k_;
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
  std::uint64_t trials_ = 0;
};

void check_trials(std::uint64_t trials) {
  if (trials == 0) throw std::invalid_argument("Monte-Carlo needs at least one trial");
}

}  // namespace

PlrReport monte_carlo_plr(const CodeSpec& spec, const BecChannel& channel, std::uint64_t trials,
                          std::uint64_t seed) {
  check_trials(trials);
  const GeneratorMatrix gen = build_generator(spec);
  const PacketBlock source = random_source(spec.k(), seed);
  const PacketBlock encoded = encode(gen, source);
  PacketBlock received = encoded;
  PacketBlock recovered(spec.k(), kSimulatedPacketSize);
  std::bernoulli_distribution erased(channel.erasure_probability());

  LossAccumulator losses(spec.k());
  for (std::uint64_t t = 0; t < trials; ++t) {
    TrialRng rng(seed, t);
    apply_erasures(encoded, received, erased, rng);
    try {
      decode_into(gen, received, recovered);
    } catch (const UnrecoverableError& e) {
      losses.add(e.lost_count());
      continue;
    }
    if (!(recovered == source)) throw std::logic_error("decoder returned corrupted source data");
    losses.add(0);
  }
  return losses.report();
}

PlrReport monte_carlo_plr(const PartitionSpec& spec, const BecChannel& channel,
                          std::uint64_t trials, std::uint64_t seed) {
  check_trials(trials);
  const PartitionedCodec codec(spec);
  const PacketBlock source = random_source(spec.parent().k(), seed);
  const PartitionedBlocks encoded = encode_partitioned(codec, source);
  PartitionedBlocks received = encoded;
  PacketBlock recovered(spec.parent().k(), kSimulatedPacketSize);
  std::bernoulli_distribution erased(channel.erasure_probability());

  LossAccumulator losses(spec.parent().k());
  for (std::uint64_t t = 0; t < trials; ++t) {
    TrialRng rng(seed, t);
    apply_erasures(encoded.first, received.first, erased, rng);
    apply_erasures(encoded.second, received.second, erased, rng);
    try {
      decode_partitioned_into(codec, received, recovered);
    } catch (const UnrecoverableError& e) {
      losses.add(e.lost_count());
      continue;
    }
    if (!(recovered == source)) throw std::logic_error("decoder returned corrupted source data");
    losses.add(0);
  }
  return losses.report();
}

}  // namespace partfec
