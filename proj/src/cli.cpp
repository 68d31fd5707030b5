#include "partfec/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "partfec/analysis.hpp"
#include "partfec/bench.hpp"
#include "partfec/planner.hpp"

namespace partfec::cli {

namespace {

using Json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rounds to 6 significant digits so the JSON carries exactly that.
double sig6(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return std::strtod(buf, nullptr);
}

std::string format_g(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", value);
  return buf;
}

const std::vector<double> kTable1ErasureProbs{0.01, 0.03, 0.05, 0.07, 0.09, 0.1};
const std::vector<std::size_t> kTable1BlockLengths{40, 80};
const std::vector<double> kFig2ErasureProbs{0.01, 0.05, 0.1};
constexpr std::size_t kFig2KLo = 10;
constexpr std::size_t kFig2KHi = 110;

struct HalfOptions {
  bool partition = false;
  std::optional<std::size_t> n1, k1, n2, k2;

  void attach(CLI::App* app) {
    app->add_flag("--partition", partition, "Evaluate the partitioned code");
    app->add_option("--n1", n1, "First half code length");
    app->add_option("--k1", k1, "First half block length");
    app->add_option("--n2", n2, "Second half code length");
    app->add_option("--k2", k2, "Second half block length");
  }

  // The partition to evaluate: the explicit halves when all four are given,
  // otherwise the default even split.
  std::optional<PartitionSpec> resolve(const CodeSpec& parent) const {
    const int given = n1.has_value() + k1.has_value() + n2.has_value() + k2.has_value();
    if (given != 0 && !partition) throw UsageError("--n1/--k1/--n2/--k2 require --partition");
    if (!partition) return std::nullopt;
    if (given == 0) return split(parent, 0);
    if (given != 4) throw UsageError("--n1, --k1, --n2 and --k2 must be given together");
    return PartitionSpec(parent, CodeSpec(*n1, *k1), CodeSpec(*n2, *k2));
  }
};

Json halves_json(const PartitionSpec& ps) {
  return Json{{"n1", ps.first().n()},        {"k1", ps.first().k()}, {"p1", ps.first().parity()},
              {"n2", ps.second().n()},       {"k2", ps.second().k()},
              {"p2", ps.second().parity()}, {"excess", ps.excess()}};
}

struct PlanOptions {
  std::size_t k = 0;
  double pe = 0.0;
  double plr_target = kDefaultPlrTarget;
  double delta = kDefaultPartitionDelta;
  bool partition = false;
};

int run_plan(const PlanOptions& o, std::ostream& out) {
  PlanRequest request{.k = o.k,
                      .channel = BecChannel(o.pe),
                      .plr_target = o.plr_target,
                      .delta = o.delta,
                      .partition = o.partition};
  const PlanResult result = plan(request);
  Json j{{"n", result.spec.n()},   {"k", result.spec.k()},         {"p", result.spec.parity()},
         {"plr", sig6(result.plr)}, {"ri", sig6(result.redundancy)}};
  if (result.partition) {
    Json part = halves_json(result.partition->spec);
    part["plr_part"] = sig6(result.partition->plr);
    j["partition"] = std::move(part);
  }
  out << j.dump(2) << '\n';
  return kExitOk;
}

struct AnalyzeOptions {
  std::size_t n = 0;
  std::size_t k = 0;
  double pe = 0.0;
  HalfOptions halves;
};

int run_analyze(const AnalyzeOptions& o, std::ostream& out) {
  const CodeSpec spec(o.n, o.k);
  const BecChannel channel(o.pe);
  const auto partition = o.halves.resolve(spec);
  const double plain = plr_fec(spec, channel).plr;

  Json j{{"n", spec.n()}, {"k", spec.k()}, {"pe", o.pe}};
  if (!partition) {
    j["plr"] = sig6(plain);
  } else {
    j["plr"] = sig6(plr_fec_part(*partition, channel).plr);
    j["plr_plain"] = sig6(plain);
    Json part = halves_json(*partition);
    part["plr_first"] = sig6(plr_fec(partition->first(), channel).plr);
    part["plr_second"] = sig6(plr_fec(partition->second(), channel).plr);
    j["partition"] = std::move(part);
  }
  j["method"] = to_string(PlrMethod::analytic);
  out << j.dump(2) << '\n';
  return kExitOk;
}

struct SimulateOptions {
  std::size_t n = 0;
  std::size_t k = 0;
  double pe = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 1;
  HalfOptions halves;
};

int run_simulate(const SimulateOptions& o, std::ostream& out) {
  const CodeSpec spec(o.n, o.k);
  const BecChannel channel(o.pe);
  const auto partition = o.halves.resolve(spec);
  const PlrReport report = partition ? monte_carlo_plr(*partition, channel, o.trials, o.seed)
                                     : monte_carlo_plr(spec, channel, o.trials, o.seed);

  Json j{{"n", spec.n()}, {"k", spec.k()}, {"pe", o.pe}};
  if (partition) j["partition"] = halves_json(*partition);
  j["plr"] = sig6(report.plr);
  j["method"] = to_string(report.method);
  j["trials"] = report.trials;
  j["ci95"] = sig6(report.half_width);
  j["seed"] = o.seed;
  j["field_polynomial"] = "0x11d";
  out << j.dump(2) << '\n';
  return kExitOk;
}

struct ReproduceOptions {
  double plr_target = kDefaultPlrTarget;
  double delta = kDefaultPartitionDelta;
  std::size_t parity = 5;
};

int run_table1(const ReproduceOptions& o, std::ostream& out) {
  std::ostringstream csv;
  csv << "k";
  for (const double pe : kTable1ErasureProbs) csv << ',' << format_g(pe);
  csv << '\n';
  for (const std::size_t k : kTable1BlockLengths) {
    csv << k;
    for (const double pe : kTable1ErasureProbs) {
      csv << ',' << min_n_for_target(k, BecChannel(pe), o.plr_target).n();
    }
    csv << '\n';
  }
  out << csv.str();
  return kExitOk;
}

int run_fig2(const ReproduceOptions& o, std::ostream& out) {
  if (o.parity == 0) throw UsageError("--parity must be at least 1");
  const auto cells = excess_sweep(o.parity, o.delta, kFig2KLo, kFig2KHi, kFig2ErasureProbs);
  std::ostringstream csv;
  csv << "pe,k,excess\n";
  for (const auto& c : cells) csv << format_g(c.erasure_probability) << ',' << c.k << ',' << c.excess << '\n';
  out << csv.str();
  return kExitOk;
}

struct BenchOptions {
  std::string k_range = "10:120:10";
  std::size_t parity = 8;
  std::size_t packet_size = 1500;
  std::size_t iterations = 100;
  std::optional<std::size_t> erased;
  std::string mode = "both";
  std::string phase = "all";
  std::uint64_t seed = 1;
};

std::vector<std::size_t> parse_k_range(const std::string& text) {
  std::size_t lo = 0, hi = 0, step = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%zu:%zu:%zu%c", &lo, &hi, &step, &tail) != 3 || step == 0 ||
      lo == 0 || lo > hi) {
    throw UsageError("--k-range must be lo:hi:step with 0 < lo <= hi and step > 0, got '" + text +
                     "'");
  }
  std::vector<std::size_t> values;
  for (std::size_t k = lo; k <= hi; k += step) values.push_back(k);
  return values;
}

int run_bench(const BenchOptions& o, std::ostream& out) {
  BenchConfig config;
  config.k_values = parse_k_range(o.k_range);
  config.parity = o.parity;
  config.packet_size = o.packet_size;
  config.iterations = o.iterations;
  config.erased = o.erased;
  config.seed = o.seed;
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  std::vector<BenchMode> modes;
  if (o.mode != "partitioned") modes.push_back(BenchMode::plain);
  if (o.mode != "plain") modes.push_back(BenchMode::partitioned);
  const bool all = o.phase == "all";

  std::vector<BenchPoint> points;
  auto append = [&points](std::vector<BenchPoint> more) {
    points.insert(points.end(), more.begin(), more.end());
  };
  if (all || o.phase == "encode") {
    for (const auto mode : modes) append(bench_encode(config, mode));
  }
  if (all || o.phase == "decode") {
    for (const auto mode : modes) append(bench_decode(config, mode));
  }
  if (all || o.phase == "invert") {
    for (const std::size_t k : config.k_values) {
      points.push_back(bench_invert(k, config.iterations, config.parity,
                                    InvertInput::decoding_submatrix, config.seed, config.warmup));
    }
  }
  std::ostringstream csv;
  write_bench_csv(csv, points, config);
  out << csv.str();
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Packet-level MDS erasure coding with code partitioning", "partfec"};
  app.require_subcommand(1);

  PlanOptions plan_opts;
  auto* plan_cmd = app.add_subcommand("plan", "Smallest code meeting a PLR target");
  plan_cmd->add_option("--k", plan_opts.k, "Block length")->required()->check(CLI::Range(1, 254));
  plan_cmd->add_option("--pe", plan_opts.pe, "Erasure probability")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  plan_cmd->add_option("--plr-target", plan_opts.plr_target, "Target residual PLR")
      ->capture_default_str();
  plan_cmd->add_flag("--partition", plan_opts.partition, "Also plan a partitioned code");
  plan_cmd->add_option("--delta", plan_opts.delta, "Allowed PLR penalty of partitioning")
      ->capture_default_str();

  AnalyzeOptions analyze_opts;
  auto* analyze_cmd = app.add_subcommand("analyze", "Analytic residual PLR of a code");
  analyze_cmd->add_option("--n", analyze_opts.n, "Code length")->required();
  analyze_cmd->add_option("--k", analyze_opts.k, "Block length")->required();
  analyze_cmd->add_option("--pe", analyze_opts.pe, "Erasure probability")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  analyze_opts.halves.attach(analyze_cmd);

  SimulateOptions sim_opts;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo residual PLR through the codec");
  sim_cmd->add_option("--n", sim_opts.n, "Code length")->required();
  sim_cmd->add_option("--k", sim_opts.k, "Block length")->required();
  sim_cmd->add_option("--pe", sim_opts.pe, "Erasure probability")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  sim_cmd->add_option("--trials", sim_opts.trials, "Number of simulated blocks")
      ->required()
      ->check(CLI::Range(std::uint64_t{1}, std::numeric_limits<std::uint64_t>::max()));
  sim_cmd->add_option("--seed", sim_opts.seed, "Random seed")->capture_default_str();
  sim_opts.halves.attach(sim_cmd);

  ReproduceOptions repro_opts;
  auto* repro_cmd = app.add_subcommand("reproduce", "Regenerate the reference tables");
  repro_cmd->require_subcommand(1);
  auto* table1_cmd = repro_cmd->add_subcommand("table1", "Minimal n per (k, p_e)");
  table1_cmd->add_option("--plr-target", repro_opts.plr_target, "Target residual PLR")
      ->capture_default_str();
  auto* fig2_cmd = repro_cmd->add_subcommand("fig2", "Excess parity needed by partitioning");
  fig2_cmd->add_option("--delta", repro_opts.delta, "Allowed PLR penalty")->capture_default_str();
  fig2_cmd->add_option("--parity", repro_opts.parity, "Parent parity packets")
      ->capture_default_str();

  BenchOptions bench_opts;
  auto* bench_cmd = app.add_subcommand("bench", "Time encode, decode and inversion");
  bench_cmd->add_option("--k-range", bench_opts.k_range, "lo:hi:step")->capture_default_str();
  bench_cmd->add_option("--parity", bench_opts.parity, "Parity packets")->capture_default_str();
  bench_cmd->add_option("--packet-size", bench_opts.packet_size, "Bytes per packet")
      ->capture_default_str();
  bench_cmd->add_option("--iterations", bench_opts.iterations, "Samples per point")
      ->capture_default_str();
  bench_cmd->add_option("--erased", bench_opts.erased, "Source erasures for decode (default: parity)");
  bench_cmd->add_option("--mode", bench_opts.mode, "plain, partitioned or both")
      ->check(CLI::IsMember({"plain", "partitioned", "both"}))
      ->capture_default_str();
  bench_cmd->add_option("--phase", bench_opts.phase, "encode, decode, invert or all")
      ->check(CLI::IsMember({"encode", "decode", "invert", "all"}))
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench_opts.seed, "Payload seed")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsageError;
  }

  try {
    if (plan_cmd->parsed()) return run_plan(plan_opts, out);
    if (analyze_cmd->parsed()) return run_analyze(analyze_opts, out);
    if (sim_cmd->parsed()) return run_simulate(sim_opts, out);
    if (table1_cmd->parsed()) return run_table1(repro_opts, out);
    if (fig2_cmd->parsed()) return run_fig2(repro_opts, out);
    if (bench_cmd->parsed()) return run_bench(bench_opts, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  }
  err << app.help();
  return kExitUsageError;
}

}  // namespace partfec::cli
