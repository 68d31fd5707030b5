#include "partfec/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include "partfec/errors.hpp"
#include "partfec/partition.hpp"

#ifdef __linux__
#include <sched.h>
#endif

namespace partfec {

namespace {

using Clock = std::chrono::steady_clock;

// A single sample should last at least this long; shorter calls are batched.
constexpr double kMinSampleMs = 0.02;

struct Summary {
  double median_ms;
  double mad_ms;
};

double median(std::vector<double> values) {
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  double m = values[mid];
  if (values.size() % 2 == 0) {
    m = (m + *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid))) /
        2.0;
  }
  return m;
}

template <class F>
double time_ms(F& fn, std::size_t calls) {
  const auto start = Clock::now();
  for (std::size_t i = 0; i < calls; ++i) fn();
  const auto stop = Clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

template <class F>
Summary measure(F&& fn, std::size_t iterations, std::size_t warmup) {
  const std::size_t warm = std::max<std::size_t>(warmup, 1);
  const double warm_ms = time_ms(fn, warm) / static_cast<double>(warm);
  std::size_t batch = 1;
  if (warm_ms < kMinSampleMs) {
    batch = static_cast<std::size_t>(std::ceil(kMinSampleMs / std::max(warm_ms, 1e-6)));
  }

  std::vector<double> samples(iterations);
  for (auto& s : samples) s = time_ms(fn, batch) / static_cast<double>(batch);

  const double med = median(samples);
  std::vector<double> deviations(samples.size());
  std::transform(samples.begin(), samples.end(), deviations.begin(),
                 [med](double s) { return std::abs(s - med); });
  return {med, median(std::move(deviations))};
}

std::vector<std::size_t> pick_erasures(std::size_t k, std::size_t count, std::mt19937_64& rng) {
  std::vector<std::size_t> positions(k);
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  std::shuffle(positions.begin(), positions.end(), rng);
  positions.resize(std::min(count, k));
  std::sort(positions.begin(), positions.end());
  return positions;
}

CodeSpec parent_spec(std::size_t k, const BenchConfig& config) {
  return CodeSpec(k + config.parity, k);
}

}  // namespace

std::string_view to_string(BenchMode mode) noexcept {
  return mode == BenchMode::plain ? "plain" : "partitioned";
}

std::string_view to_string(BenchPhase phase) noexcept {
  switch (phase) {
    case BenchPhase::encode:
      return "encode";
    case BenchPhase::decode:
      return "decode";
    case BenchPhase::invert:
      return "invert";
  }
  return "unknown";
}

void BenchConfig::validate() const {
  if (iterations < 10) throw std::invalid_argument("at least 10 iterations per point are required");
  if (packet_size == 0) throw std::invalid_argument("packet size must be positive");
  if (parity == 0) throw std::invalid_argument("parity must be at least 1");
  if (erasures() > parity) {
    throw std::invalid_argument("cannot erase more packets than there are parity packets");
  }
  if (k_values.empty()) throw std::invalid_argument("no block lengths to benchmark");
  for (const std::size_t k : k_values) {
    if (k < std::max<std::size_t>(2, erasures())) {
      throw std::invalid_argument("block length " + std::to_string(k) +
                                  " too small for the configured erasures");
    }
    if (k + parity > kMaxCodeLength) {
      throw std::invalid_argument("block length " + std::to_string(k) + " plus parity exceeds " +
                                  std::to_string(kMaxCodeLength));
    }
  }
}

PacketBlock bench_payload(std::size_t k, std::size_t packet_size, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ (0xA5A5A5A5ULL * (k + 1)));
  PacketBlock source(k, packet_size);
  for (std::size_t i = 0; i < k; ++i) {
    for (auto& byte : source.emplace(i)) byte = static_cast<gf::Symbol>(rng());
  }
  return source;
}

std::vector<BenchPoint> bench_encode(const BenchConfig& config, BenchMode mode) {
  config.validate();
  pin_to_current_cpu();
  std::vector<BenchPoint> points;
  for (const std::size_t k : config.k_values) {
    const PacketBlock source = bench_payload(k, config.packet_size, config.seed);
    const CodeSpec parent = parent_spec(k, config);
    Summary s{};
    if (mode == BenchMode::plain) {
      const GeneratorMatrix gen = build_generator(parent);
      PacketBlock out(parent.n(), config.packet_size);
      s = measure([&] { encode_into(gen, source, out); }, config.iterations, config.warmup);
    } else {
      const PartitionedCodec codec(split(parent, 0));
      PartitionedBlocks out{PacketBlock(codec.spec().first().n(), config.packet_size),
                            PacketBlock(codec.spec().second().n(), config.packet_size)};
      s = measure([&] { encode_partitioned_into(codec, source, out); }, config.iterations,
                  config.warmup);
    }
    points.push_back({k, mode, BenchPhase::encode, s.median_ms, s.mad_ms});
  }
  return points;
}

std::vector<BenchPoint> bench_decode(const BenchConfig& config, BenchMode mode) {
  config.validate();
  pin_to_current_cpu();
  std::vector<BenchPoint> points;
  for (const std::size_t k : config.k_values) {
    const PacketBlock source = bench_payload(k, config.packet_size, config.seed);
    const CodeSpec parent = parent_spec(k, config);
    std::mt19937_64 rng(config.seed + k);
    const std::size_t erasures = config.erasures();
    Summary s{};
    if (mode == BenchMode::plain) {
      const GeneratorMatrix gen = build_generator(parent);
      PacketBlock received = encode(gen, source);
      for (const std::size_t i : pick_erasures(k, erasures, rng)) received.erase(i);
      PacketBlock out(k, config.packet_size);
      s = measure([&] { decode_into(gen, received, out); }, config.iterations, config.warmup);
    } else {
      const PartitionedCodec codec(split(parent, 0));
      PartitionedBlocks received = encode_partitioned(codec, source);
      for (const std::size_t i :
           pick_erasures(codec.spec().first().k(), (erasures + 1) / 2, rng)) {
        received.first.erase(i);
      }
      for (const std::size_t i : pick_erasures(codec.spec().second().k(), erasures / 2, rng)) {
        received.second.erase(i);
      }
      PacketBlock out(k, config.packet_size);
      s = measure([&] { decode_partitioned_into(codec, received, out); }, config.iterations,
                  config.warmup);
    }
    points.push_back({k, mode, BenchPhase::decode, s.median_ms, s.mad_ms});
  }
  return points;
}

BenchPoint bench_invert(std::size_t k, std::size_t iterations, std::size_t parity,
                        InvertInput input, std::uint64_t seed, std::size_t warmup) {
  if (k == 0) throw std::invalid_argument("cannot invert an empty matrix");
  if (iterations < 10) throw std::invalid_argument("at least 10 iterations per point are required");
  pin_to_current_cpu();
  std::mt19937_64 rng(seed + k);

  gf::Matrix matrix;
  if (input == InvertInput::decoding_submatrix) {
    const CodeSpec spec(k + parity, k);  // CapacityError beyond the field bound
    const GeneratorMatrix gen = build_generator(spec);
    PacketBlock pattern(spec.n(), 1);
    for (std::size_t i = 0; i < spec.n(); ++i) pattern.emplace(i);
    for (const std::size_t i : pick_erasures(k, std::min(parity, k), rng)) pattern.erase(i);
    matrix = gen.matrix().select_rows(decoding_rows(spec, pattern));
  } else {
    if (k > kMaxCodeLength) throw CapacityError("matrix dimension beyond 255");
    for (;;) {
      matrix = gf::Matrix(k, k);
      for (std::size_t r = 0; r < k; ++r) {
        for (auto& cell : matrix.row(r)) cell = static_cast<gf::Symbol>(rng());
      }
      try {
        gf::invert(matrix);
        break;
      } catch (const SingularMatrixError&) {
      }
    }
  }

  const Summary s = measure([&] { gf::invert(matrix); }, iterations, warmup);
  return {k, BenchMode::plain, BenchPhase::invert, s.median_ms, s.mad_ms};
}

void write_bench_csv(std::ostream& out, const std::vector<BenchPoint>& points,
                     const BenchConfig& config) {
  out << kBenchCsvHeader << '\n';
  char line[256];
  for (const auto& p : points) {
    std::snprintf(line, sizeof line, "%zu,%s,%s,%.6g,%.6g,%zu,%zu,%zu\n", p.k,
                  std::string(to_string(p.mode)).c_str(), std::string(to_string(p.phase)).c_str(),
                  p.median_ms, p.mad_ms, config.iterations, config.packet_size, config.parity);
    out << line;
  }
}

bool pin_to_current_cpu() noexcept {
#ifdef __linux__
  const int cpu = sched_getcpu();
  if (cpu < 0) return false;
  cpu_set_t set;
  CPU_ZERO(&set);
  CPU_SET(cpu, &set);
  return sched_setaffinity(0, sizeof set, &set) == 0;
#else
  return false;
#endif
}

}  // namespace partfec
