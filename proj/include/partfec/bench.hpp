#pragma once

// Wall-clock timing of encode, decode and isolated matrix inversion, with
// and without code partitioning. Generators, payloads and output buffers are
// prepared outside the timed region; only the coding call is measured.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "partfec/codec.hpp"

namespace partfec {

enum class BenchMode { plain, partitioned };
enum class BenchPhase { encode, decode, invert };

// What bench_invert inverts: the k x k matrix a worst-case decode inverts
// (surviving identity rows plus parity rows), or a dense random matrix.
enum class InvertInput { decoding_submatrix, dense_random };

std::string_view to_string(BenchMode mode) noexcept;
std::string_view to_string(BenchPhase phase) noexcept;

struct BenchConfig {
  std::vector<std::size_t> k_values;
  std::size_t parity = 8;
  std::size_t packet_size = 1500;
  std::size_t iterations = 100;
  std::optional<std::size_t> erased;  // defaults to parity
  std::size_t warmup = 10;
  std::uint64_t seed = 1;

  std::size_t erasures() const noexcept { return erased.value_or(parity); }

  // Throws std::invalid_argument unless iterations >= 10, erased <= parity,
  // packet_size >= 1, and every k satisfies max(2, erased) <= k with
  // k + parity <= 255.
  void validate() const;
};

struct BenchPoint {
  std::size_t k = 0;
  BenchMode mode = BenchMode::plain;
  BenchPhase phase = BenchPhase::encode;
  double median_ms = 0.0;
  double mad_ms = 0.0;
};

std::vector<BenchPoint> bench_encode(const BenchConfig& config, BenchMode mode);

// Erases config.erasures() source packets (split ceil/floor across halves
// in partitioned mode), forcing reconstruction.
std::vector<BenchPoint> bench_decode(const BenchConfig& config, BenchMode mode);

// Inverts a k x k matrix. For decoding_submatrix the matrix comes from
// C(k + parity, k) with min(parity, k) source rows replaced by parity rows.
BenchPoint bench_invert(std::size_t k, std::size_t iterations, std::size_t parity = 8,
                        InvertInput input = InvertInput::decoding_submatrix,
                        std::uint64_t seed = 1, std::size_t warmup = 10);

// Deterministic payload used by the harness.
PacketBlock bench_payload(std::size_t k, std::size_t packet_size, std::uint64_t seed);

inline constexpr std::string_view kBenchCsvHeader =
    "k,mode,phase,median_ms,mad_ms,iterations,packet_size,parity";

void write_bench_csv(std::ostream& out, const std::vector<BenchPoint>& points,
                     const BenchConfig& config);

// Restricts the calling thread to the CPU it is running on. Returns false
// when the platform does not allow it.
bool pin_to_current_cpu() noexcept;

}  // namespace partfec
