#include "partfec/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "partfec/errors.hpp"

namespace partfec {

namespace {

constexpr std::size_t kDirectEvaluationLimit = 60;
constexpr double kRouteTolerance = 1e-12;

double choose(std::size_t n, std::size_t r) {
  if (r > n) return 0.0;
  r = std::min(r, n - r);
  double result = 1.0;
  for (std::size_t i = 1; i <= r; ++i) {
    result = result * static_cast<double>(n - r + i) / static_cast<double>(i);
  }
  return result;
}

double log_choose(std::size_t n, std::size_t r) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(r) + 1.0) -
         std::lgamma(static_cast<double>(n - r) + 1.0);
}

// Probability that i of the e erased positions fall among the k source
// positions of an n-packet block.
double hypergeometric(std::size_t n, std::size_t k, std::size_t e, std::size_t i) {
  if (i > k || i > e || e - i > n - k) return 0.0;
  if (n <= kDirectEvaluationLimit) return choose(k, i) * choose(n - k, e - i) / choose(n, e);
  return std::exp(log_choose(k, i) + log_choose(n - k, e - i) - log_choose(n, e));
}

}  // namespace

BecChannel::BecChannel(double erasure_probability) : p_e_(erasure_probability) {
  if (!(erasure_probability >= 0.0 && erasure_probability <= 1.0)) {
    throw std::invalid_argument("erasure probability must lie in [0, 1]");
  }
}

double LossPmf::total() const noexcept {
  double sum = 0.0;
  for (const double p : probabilities) sum += p;
  return sum;
}

double LossPmf::mean() const noexcept {
  double sum = 0.0;
  for (std::size_t i = 1; i < probabilities.size(); ++i) {
    sum += static_cast<double>(i) * probabilities[i];
  }
  return sum;
}

std::string_view to_string(PlrMethod method) noexcept {
  switch (method) {
    case PlrMethod::analytic:
      return "analytic";
    case PlrMethod::brute_force:
      return "brute_force";
    case PlrMethod::monte_carlo:
      return "monte_carlo";
  }
  return "unknown";
}

double binomial_pmf(std::size_t n, std::size_t e, const BecChannel& channel) {
  if (e > n) return 0.0;
  const double p = channel.erasure_probability();
  if (p == 0.0) return e == 0 ? 1.0 : 0.0;
  if (p == 1.0) return e == n ? 1.0 : 0.0;
  const auto ed = static_cast<double>(e);
  const auto fd = static_cast<double>(n - e);
  if (n <= kDirectEvaluationLimit) return choose(n, e) * std::pow(p, ed) * std::pow(1.0 - p, fd);
  return std::exp(log_choose(n, e) + ed * std::log(p) + fd * std::log1p(-p));
}

LossPmf loss_pmf(const CodeSpec& spec, const BecChannel& channel) {
  const std::size_t n = spec.n();
  const std::size_t k = spec.k();
  const std::size_t p = spec.parity();

  std::vector<double> erasures(n + 1);
  for (std::size_t e = 0; e <= n; ++e) erasures[e] = binomial_pmf(n, e, channel);

  LossPmf pmf;
  pmf.probabilities.assign(k + 1, 0.0);
  for (std::size_t e = 0; e <= p; ++e) pmf.probabilities[0] += erasures[e];
  for (std::size_t i = 1; i <= k; ++i) {
    double sum = 0.0;
    for (std::size_t e = std::max(p + 1, i); e <= p + i; ++e) {
      sum += erasures[e] * hypergeometric(n, k, e, i);
    }
    pmf.probabilities[i] = sum;
  }
  return pmf;
}

PlrReport plr_fec(const CodeSpec& spec, const BecChannel& channel) {
  const LossPmf pmf = loss_pmf(spec, channel);
  return {.plr = std::clamp(pmf.mean() / static_cast<double>(spec.k()), 0.0, 1.0),
          .method = PlrMethod::analytic};
}

LossPmf partitioned_loss_pmf(const PartitionSpec& spec, const BecChannel& channel) {
  const auto first = loss_pmf(spec.first(), channel).probabilities;
  const auto second = loss_pmf(spec.second(), channel).probabilities;
  const std::size_t k1 = spec.first().k();
  const std::size_t k2 = spec.second().k();

  LossPmf pmf;
  pmf.probabilities.assign(k1 + k2 + 1, 0.0);
  for (std::size_t j = 0; j <= k1 + k2; ++j) {
    double sum = 0.0;
    const std::size_t lo = j > k2 ? j - k2 : 0;
    const std::size_t hi = std::min(k1, j);
    for (std::size_t e = lo; e <= hi; ++e) sum += first[e] * second[j - e];
    pmf.probabilities[j] = sum;
  }
  return pmf;
}

double plr_fec_part_weighted(const PartitionSpec& spec, const BecChannel& channel) {
  const auto k1 = static_cast<double>(spec.first().k());
  const auto k2 = static_cast<double>(spec.second().k());
  return (k1 * plr_fec(spec.first(), channel).plr + k2 * plr_fec(spec.second(), channel).plr) /
         static_cast<double>(spec.parent().k());
}

PlrReport plr_fec_part(const PartitionSpec& spec, const BecChannel& channel) {
  const LossPmf pmf = partitioned_loss_pmf(spec, channel);
  const double plr = pmf.mean() / static_cast<double>(spec.parent().k());
  const double weighted = plr_fec_part_weighted(spec, channel);
  if (std::abs(plr - weighted) > kRouteTolerance) {
    throw std::logic_error("partitioned PLR routes disagree: " + std::to_string(plr) + " vs " +
                           std::to_string(weighted));
  }
  return {.plr = std::clamp(plr, 0.0, 1.0), .method = PlrMethod::analytic};
}

namespace {

// weights[e] = p^e (1-p)^(n-e): the probability of one specific pattern
// with e erasures.
std::vector<double> pattern_weights(std::size_t n, double p) {
  std::vector<double> weights(n + 1);
  for (std::size_t e = 0; e <= n; ++e) {
    weights[e] = std::pow(p, static_cast<double>(e)) * std::pow(1.0 - p, static_cast<double>(n - e));
  }
  return weights;
}

// Source packets lost by one block given its erasure mask (bit i = packet i).
std::size_t block_losses(std::uint32_t mask, const CodeSpec& spec) {
  const auto erased = static_cast<std::size_t>(std::popcount(mask));
  if (erased <= spec.parity()) return 0;
  const std::uint32_t source_bits = (std::uint32_t{1} << spec.k()) - 1;
  return static_cast<std::size_t>(std::popcount(mask & source_bits));
}

void check_enumerable(std::size_t packets) {
  if (packets > kBruteForceMaxPackets) {
    throw CapacityError(std::to_string(packets) + " packets is beyond the enumeration bound of " +
                        std::to_string(kBruteForceMaxPackets));
  }
}

}  // namespace

PlrReport brute_force_plr(const CodeSpec& spec, const BecChannel& channel) {
  const std::size_t n = spec.n();
  check_enumerable(n);
  const auto weights = pattern_weights(n, channel.erasure_probability());
  double expected = 0.0;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    const std::size_t lost = block_losses(mask, spec);
    if (lost) expected += static_cast<double>(lost) * weights[std::popcount(mask)];
  }
  return {.plr = expected / static_cast<double>(spec.k()), .method = PlrMethod::brute_force};
}

PlrReport brute_force_plr(const PartitionSpec& spec, const BecChannel& channel) {
  const std::size_t n1 = spec.first().n();
  const std::size_t n = n1 + spec.second().n();
  check_enumerable(n);
  const auto weights = pattern_weights(n, channel.erasure_probability());
  const std::uint32_t first_bits = (std::uint32_t{1} << n1) - 1;
  double expected = 0.0;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    const std::size_t lost =
        block_losses(mask & first_bits, spec.first()) + block_losses(mask >> n1, spec.second());
    if (lost) expected += static_cast<double>(lost) * weights[std::popcount(mask)];
  }
  return {.plr = expected / static_cast<double>(spec.parent().k()),
          .method = PlrMethod::brute_force};
}

}  // namespace partfec
