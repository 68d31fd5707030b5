#include "partfec/planner.hpp"

#include <stdexcept>
#include <string>

#include "partfec/errors.hpp"

namespace partfec {

void PlanRequest::validate() const {
  if (k == 0) throw std::invalid_argument("block length k must be at least 1");
  if (!(plr_target > 0.0 && plr_target < 1.0)) {
    throw std::invalid_argument("PLR target must lie in (0, 1)");
  }
  if (!(delta > 0.0)) throw std::invalid_argument("partition tolerance delta must be positive");
}

CodeSpec min_n_for_target(std::size_t k, const BecChannel& channel, double plr_target) {
  if (k == 0) throw std::invalid_argument("block length k must be at least 1");
  if (channel.erasure_probability() >= 1.0) {
    throw std::invalid_argument("no code survives a channel that erases every packet");
  }
  for (std::size_t n = k + 1; n <= kMaxCodeLength; ++n) {
    const CodeSpec spec(n, k);
    if (plr_fec(spec, channel).plr <= plr_target) return spec;
  }
  throw CapacityError("no code with k=" + std::to_string(k) + " and n <= " +
                      std::to_string(kMaxCodeLength) + " reaches PLR " +
                      std::to_string(plr_target));
}

PartitionSpec distribute_excess(const CodeSpec& parent, const BecChannel& channel, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("partition tolerance delta must be positive");
  const double plain = plr_fec(parent, channel).plr;
  double previous = 2.0;
  // With a single parent parity packet the second half only gets parity
  // from the excess, so the search starts where both halves have some.
  const std::size_t first_excess = parent.parity() >= 2 ? 0 : 2;
  for (std::size_t excess = first_excess;; ++excess) {
    const PartitionSpec candidate = split(parent, excess);  // CapacityError past the bound
    const double partitioned = plr_fec_part(candidate, channel).plr;
    if (partitioned - plain <= delta) return candidate;
    if (!(partitioned < previous)) {
      throw std::logic_error("extra parity failed to lower the partitioned PLR");
    }
    previous = partitioned;
  }
}

PlanResult plan(const PlanRequest& request) {
  request.validate();
  const CodeSpec spec = min_n_for_target(request.k, request.channel, request.plr_target);
  PlanResult result{.spec = spec,
                    .plr = plr_fec(spec, request.channel).plr,
                    .partition = std::nullopt,
                    .redundancy = static_cast<double>(spec.parity()) /
                                  static_cast<double>(spec.k())};
  if (request.partition) {
    const PartitionSpec ps = distribute_excess(spec, request.channel, request.delta);
    result.partition = PartitionPlan{ps, plr_fec_part(ps, request.channel).plr};
  }

  if (result.plr > request.plr_target ||
      (result.partition && result.partition->plr - result.plr > request.delta)) {
    throw std::logic_error("plan violates its own targets");
  }
  return result;
}

std::vector<ExcessCell> excess_sweep(std::size_t parity, double delta, std::size_t k_lo,
                                     std::size_t k_hi, const std::vector<double>& erasure_probs) {
  std::vector<ExcessCell> cells;
  for (const double pe : erasure_probs) {
    const BecChannel channel(pe);
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
      const PartitionSpec ps = distribute_excess(CodeSpec(k + parity, k), channel, delta);
      cells.push_back({pe, k, ps.excess()});
    }
  }
  return cells;
}

}  // namespace partfec
