// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fig2_golden.hpp"
#include "partfec/analysis.hpp"
#include "partfec/bench.hpp"
#include "partfec/cli.hpp"
#include "partfec/errors.hpp"
#include "partfec/partition.hpp"
#include "partfec/planner.hpp"

using namespace partfec;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

using Criterion = std::function<Verdict()>;

PacketBlock random_block(std::size_t slots, std::size_t packet_size, std::mt19937_64& rng) {
  PacketBlock block(slots, packet_size);
  for (std::size_t i = 0; i < slots; ++i) {
    for (auto& b : block.emplace(i)) b = static_cast<gf::Symbol>(rng());
  }
  return block;
}

PacketBlock with_erasures(const PacketBlock& encoded, std::uint64_t mask) {
  PacketBlock out = encoded;
  for (std::size_t i = 0; i < encoded.slots(); ++i) {
    if (mask >> i & 1u) out.erase(i);
  }
  return out;
}

Verdict table1() {
  std::ostringstream out, err;
  const int code = cli::run({"reproduce", "table1"}, out, err);
  const std::string expected =
      "k,0.01,0.03,0.05,0.07,0.09,0.1\n"
      "40,44,48,50,53,55,56\n"
      "80,86,91,95,98,102,104\n";
  if (code != 0) return {false, "exit code " + std::to_string(code) + ": " + err.str()};
  if (out.str() != expected) return {false, "got:\n" + out.str()};
  return {true, "12/12 code lengths match"};
}

Verdict formula_vs_enumeration() {
  double worst = 0.0;
  std::size_t plain_cases = 0;
  std::size_t part_cases = 0;
  const std::vector<double> pes{0.01, 0.1, 0.3, 0.5};
  for (std::size_t n = 2; n <= 12; ++n) {
    for (std::size_t k = 1; k < n; ++k) {
      for (const double pe : pes) {
        const CodeSpec spec(n, k);
        const BecChannel ch(pe);
        worst = std::max(worst, std::abs(plr_fec(spec, ch).plr - brute_force_plr(spec, ch).plr));
        ++plain_cases;
      }
    }
  }
  for (std::size_t k = 2; k <= 12; ++k) {
    const std::size_t k1 = (k + 1) / 2;
    const std::size_t k2 = k / 2;
    for (std::size_t p1 = 1; k1 + p1 + k2 + 1 <= 14; ++p1) {
      for (std::size_t p2 = 1; k1 + p1 + k2 + p2 <= 14; ++p2) {
        const PartitionSpec ps(CodeSpec(k + p1 + p2, k), CodeSpec(k1 + p1, k1),
                               CodeSpec(k2 + p2, k2));
        for (const double pe : pes) {
          const BecChannel ch(pe);
          worst = std::max(worst, std::abs(plr_fec_part(ps, ch).plr - brute_force_plr(ps, ch).plr));
          ++part_cases;
        }
      }
    }
  }
  char detail[160];
  std::snprintf(detail, sizeof detail, "%zu plain + %zu partitioned cases, max |diff| = %.3g",
                plain_cases, part_cases, worst);
  return {worst <= 1e-12, detail};
}

Verdict codec_round_trip() {
  std::mt19937_64 rng(1);
  std::size_t recovered = 0;
  std::size_t rejected = 0;
  for (std::size_t n = 2; n <= 12; ++n) {
    for (std::size_t k = 1; k < n; ++k) {
      const CodeSpec spec(n, k);
      const auto gen = build_generator(spec);
      const auto source = random_block(k, 4, rng);
      const auto encoded = encode(gen, source);
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        const auto received = with_erasures(encoded, mask);
        const bool enough = n - static_cast<std::size_t>(std::popcount(mask)) >= k;
        try {
          const bool same = decode(gen, received) == source;
          if (!enough) return {false, "decoded a block with too few survivors"};
          if (!same) return {false, "wrong data for C(" + std::to_string(n) + "," + std::to_string(k) + ")"};
          ++recovered;
        } catch (const UnrecoverableError&) {
          if (enough) return {false, "recoverable pattern rejected"};
          ++rejected;
        }
      }
    }
  }

  const CodeSpec big(120, 100);
  const auto gen = build_generator(big);
  const auto source = random_block(100, 64, rng);
  const auto encoded = encode(gen, source);
  std::vector<std::size_t> positions(120);
  for (std::size_t i = 0; i < 120; ++i) positions[i] = i;
  for (int t = 0; t < 1000; ++t) {
    std::shuffle(positions.begin(), positions.end(), rng);
    const std::size_t erasures = rng() % 21;
    PacketBlock received = encoded;
    for (std::size_t i = 0; i < erasures; ++i) received.erase(positions[i]);
    if (!(decode(gen, received) == source)) return {false, "C(120,100) pattern failed"};
  }
  return {true, std::to_string(recovered) + " recovered, " + std::to_string(rejected) +
                    " rejected exhaustively; 1000/1000 C(120,100) patterns"};
}

Verdict mds_property() {
  std::size_t checked = 0;
  for (std::size_t n = 2; n <= 12; ++n) {
    for (std::size_t k = 1; k < n; ++k) {
      const auto gen = build_generator(CodeSpec(n, k));
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != k) continue;
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < n; ++i) {
          if (mask >> i & 1u) rows.push_back(i);
        }
        try {
          gf::invert(gen.matrix().select_rows(rows));
        } catch (const SingularMatrixError&) {
          return {false, "singular submatrix in C(" + std::to_string(n) + "," + std::to_string(k) + ")"};
        }
        ++checked;
      }
    }
  }
  const auto gen = build_generator(CodeSpec(255, 200));
  std::mt19937_64 rng(4);
  std::vector<std::size_t> all(255);
  for (std::size_t i = 0; i < 255; ++i) all[i] = i;
  for (int t = 0; t < 1000; ++t) {
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<std::size_t> rows(all.begin(), all.begin() + 200);
    std::sort(rows.begin(), rows.end());
    const auto sub = gen.matrix().select_rows(rows);
    try {
      const auto inv = gf::invert(sub);
      if (t < 5 && !(gf::multiply(sub, inv) == gf::Matrix::identity(200))) {
        return {false, "inverse does not multiply back"};
      }
    } catch (const SingularMatrixError&) {
      return {false, "singular 200x200 submatrix of C(255,200)"};
    }
  }
  return {true, std::to_string(checked) + " exhaustive submatrices + 1000 random C(255,200)"};
}

Verdict monte_carlo() {
  const CodeSpec spec(44, 40);
  const BecChannel ch(0.1);
  const double analytic = plr_fec(spec, ch).plr;
  const auto mc = monte_carlo_plr(spec, ch, 1'000'000, 7);
  const double diff = std::abs(mc.plr - analytic);
  char detail[160];
  std::snprintf(detail, sizeof detail, "empirical %.6g, analytic %.6g, |diff| = %.3g <= 3 x %.3g",
                mc.plr, analytic, diff, mc.half_width);
  return {diff <= 3.0 * mc.half_width, detail};
}

struct TimingRun {
  double plain_encode, part_encode, plain_decode, part_decode, invert;
};

const TimingRun& timings() {
  static const TimingRun run = [] {
    BenchConfig c;
    c.k_values = {100};
    c.parity = 8;
    c.packet_size = 1500;
    c.iterations = 200;
    TimingRun r{};
    r.plain_encode = bench_encode(c, BenchMode::plain)[0].median_ms;
    r.part_encode = bench_encode(c, BenchMode::partitioned)[0].median_ms;
    r.plain_decode = bench_decode(c, BenchMode::plain)[0].median_ms;
    r.part_decode = bench_decode(c, BenchMode::partitioned)[0].median_ms;
    r.invert = bench_invert(100, c.iterations, c.parity).median_ms;
    return r;
  }();
  return run;
}

Verdict complexity_halving() {
  const auto& t = timings();
  const double enc = t.part_encode / t.plain_encode;
  const double dec = t.part_decode / t.plain_decode;
  char detail[200];
  std::snprintf(detail, sizeof detail,
                "encode %.4g/%.4g ms = %.3f, decode %.4g/%.4g ms = %.3f (limit 0.6)",
                t.part_encode, t.plain_encode, enc, t.part_decode, t.plain_decode, dec);
  return {enc <= 0.6 && dec <= 0.6, detail};
}

Verdict inversion_negligible() {
  const auto& t = timings();
  const double ratio = t.invert / t.plain_decode;
  char detail[160];
  std::snprintf(detail, sizeof detail, "invert %.4g ms / decode %.4g ms = %.3f (limit 0.1)",
                t.invert, t.plain_decode, ratio);
  return {ratio <= 0.1, detail};
}

Verdict fig2() {
  const auto cells = excess_sweep(5, 1e-3, golden::kFig2KLo, golden::kFig2KHi, {0.01, 0.05, 0.1});
  const std::array<const std::array<std::size_t, 101>*, 3> expected{
      &golden::kExcessPe001, &golden::kExcessPe005, &golden::kExcessPe010};
  std::size_t zeros = 0;
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    zeros += cells[i].excess == 0;
    mismatches += cells[i].excess != (*expected[i / 101])[i % 101];
  }
  const bool pass = cells.size() == 303 && zeros * 2 > cells.size() && mismatches == 0;
  return {pass, std::to_string(zeros) + "/" + std::to_string(cells.size()) +
                    " cells need no excess; " + std::to_string(mismatches) +
                    " deviations from golden data"};
}

Verdict mac_accounting() {
  std::mt19937_64 rng(9);
  std::size_t cases = 0;
  for (std::size_t k = 2; k <= 120; k += 3) {
    for (std::size_t p = 2; p <= 12; ++p) {
      const CodeSpec spec(k + p, k);
      const auto source = random_block(k, 2, rng);
      MacCounter plain;
      encode(build_generator(spec), source, &plain);
      if (plain.per_byte != p * k) return {false, "plain count off for C(" + std::to_string(k + p) + "," + std::to_string(k) + ")"};
      for (std::size_t excess = 0; excess <= 3; ++excess) {
        const auto ps = split(spec, excess);
        MacCounter part;
        encode_partitioned(PartitionedCodec(ps), source, &part);
        const std::size_t expected = ps.first().parity() * ps.first().k() +
                                     ps.second().parity() * ps.second().k();
        if (part.per_byte != expected) return {false, "partitioned count off"};
        ++cases;
      }
    }
  }
  return {true, std::to_string(cases) + " partitioned + plain configurations exact"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, Criterion>> criteria{
      {"1 table-1 reproduction", table1},
      {"2 formula vs exhaustive enumeration", formula_vs_enumeration},
      {"3 codec round trip", codec_round_trip},
      {"4 MDS property", mds_property},
      {"5 Monte-Carlo consistency", monte_carlo},
      {"6 complexity halving", complexity_halving},
      {"7 inversion negligibility", inversion_negligible},
      {"8 excess-packet distribution", fig2},
      {"9 multiply-accumulate accounting", mac_accounting},
  };

  int failures = 0;
  for (const auto& [name, criterion] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criterion();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %-36s %6.2fs  %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), seconds,
                v.detail.c_str());
    std::fflush(stdout);
    failures += !v.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
