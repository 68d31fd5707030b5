#pragma once

// Residual packet loss of plain and partitioned MDS codes on a binary
// erasure channel.
//
// I counts the source packets a C(n, k) code fails to deliver: none when at
// most n - k of the n packets are erased, otherwise exactly the erased source
// packets. PLR = E[I] / k. A partitioned code loses J = I1 + I2 out of
// k1 + k2 packets, with the halves independent.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "partfec/codec.hpp"
#include "partfec/partition.hpp"

namespace partfec {

class BecChannel {
 public:
  // Throws std::invalid_argument unless 0 <= erasure_probability <= 1.
  explicit BecChannel(double erasure_probability);

  double erasure_probability() const noexcept { return p_e_; }

 private:
  double p_e_;
};

// probabilities[i] = P(i source packets lost), i = 0..k.
struct LossPmf {
  std::vector<double> probabilities;

  double total() const noexcept;
  double mean() const noexcept;
};

enum class PlrMethod { analytic, brute_force, monte_carlo };

std::string_view to_string(PlrMethod method) noexcept;

struct PlrReport {
  double plr = 0.0;
  PlrMethod method = PlrMethod::analytic;
  std::uint64_t trials = 0;  // monte_carlo only
  double half_width = 0.0;   // 95% normal-approximation half-width, monte_carlo only
};

// C(n, e) p^e (1-p)^(n-e). Evaluated in log space for n > 60.
double binomial_pmf(std::size_t n, std::size_t e, const BecChannel& channel);

LossPmf loss_pmf(const CodeSpec& spec, const BecChannel& channel);
PlrReport plr_fec(const CodeSpec& spec, const BecChannel& channel);

// Convolution of the two half distributions over their exact supports.
LossPmf partitioned_loss_pmf(const PartitionSpec& spec, const BecChannel& channel);

// E[J] / k from the convolved distribution. Cross-checked against
// plr_fec_part_weighted; a disagreement beyond 1e-12 throws std::logic_error.
PlrReport plr_fec_part(const PartitionSpec& spec, const BecChannel& channel);

// (k1 * PLR1 + k2 * PLR2) / k.
double plr_fec_part_weighted(const PartitionSpec& spec, const BecChannel& channel);

inline constexpr std::size_t kBruteForceMaxPackets = 24;

// Exact expectation over all 2^n erasure patterns. Throws CapacityError when
// the total packet count exceeds kBruteForceMaxPackets.
PlrReport brute_force_plr(const CodeSpec& spec, const BecChannel& channel);
PlrReport brute_force_plr(const PartitionSpec& spec, const BecChannel& channel);

// Erases packets at random, runs the real decoder and counts undelivered
// source packets. Trial t draws from its own stream derived from (seed, t),
// so the result depends only on the arguments. Throws std::invalid_argument
// for trials == 0 and std::logic_error if a decode ever returns wrong data.
PlrReport monte_carlo_plr(const CodeSpec& spec, const BecChannel& channel, std::uint64_t trials,
                          std::uint64_t seed);
PlrReport monte_carlo_plr(const PartitionSpec& spec, const BecChannel& channel,
                          std::uint64_t trials, std::uint64_t seed);

}  // namespace partfec
