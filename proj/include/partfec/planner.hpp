#pragma once

// Choosing code dimensions for a loss target, and compensating code
// partitioning with excess parity packets.

#include <cstddef>
#include <optional>
#include <vector>

#include "partfec/analysis.hpp"
#include "partfec/codec.hpp"
#include "partfec/partition.hpp"

namespace partfec {

inline constexpr double kDefaultPlrTarget = 1e-5;
inline constexpr double kDefaultPartitionDelta = 1e-3;

struct PlanRequest {
  std::size_t k = 0;
  BecChannel channel{0.0};
  double plr_target = kDefaultPlrTarget;
  double delta = kDefaultPartitionDelta;
  bool partition = false;

  // Throws std::invalid_argument unless k >= 1, 0 < plr_target < 1 and
  // delta > 0.
  void validate() const;
};

struct PartitionPlan {
  PartitionSpec spec;
  double plr;
};

struct PlanResult {
  CodeSpec spec;
  double plr;
  std::optional<PartitionPlan> partition;
  double redundancy;  // (n - k) / k
};

// Smallest n > k whose analytic PLR is at most plr_target, found by scanning
// upward from k + 1. Throws CapacityError if no n <= 255 qualifies and
// std::invalid_argument for p_e == 1 or k == 0.
CodeSpec min_n_for_target(std::size_t k, const BecChannel& channel, double plr_target);

// Adds excess parity to split(parent, .) one packet at a time, alternating
// halves starting with the first, until PLR_part - PLR_plain <= delta.
// Throws CapacityError when a half would pass the field bound first.
PartitionSpec distribute_excess(const CodeSpec& parent, const BecChannel& channel, double delta);

PlanResult plan(const PlanRequest& request);

struct ExcessCell {
  double erasure_probability;
  std::size_t k;
  std::size_t excess;
};

// distribute_excess over C(k + parity, k) for every k in [k_lo, k_hi] and
// every listed p_e, ordered by p_e then k.
std::vector<ExcessCell> excess_sweep(std::size_t parity, double delta, std::size_t k_lo,
                                     std::size_t k_hi, const std::vector<double>& erasure_probs);

}  // namespace partfec
