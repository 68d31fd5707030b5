#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "partfec/analysis.hpp"
#include "partfec/cli.hpp"

using namespace partfec;
using Json = nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;

  Json json() const { return Json::parse(out); }

  std::vector<std::string> lines() const {
    std::vector<std::string> result;
    std::istringstream in(out);
    for (std::string line; std::getline(in, line);) result.push_back(line);
    return result;
  }
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("plan command") {
  SUBCASE("table value") {
    const auto r = run({"plan", "--k", "40", "--pe", "0.09", "--plr-target", "1e-5"});
    REQUIRE(r.code == 0);
    const auto j = r.json();
    CHECK(j["n"] == 55);
    CHECK(j["k"] == 40);
    CHECK(j["p"] == 15);
    CHECK(j["plr"].get<double>() <= 1e-5);
    CHECK(j["ri"].get<double>() == doctest::Approx(0.375));
    CHECK_FALSE(j.contains("partition"));
  }
  SUBCASE("lossless channel") {
    const auto j = run({"plan", "--k", "40", "--pe", "0", "--plr-target", "1e-5"}).json();
    CHECK(j["n"] == 41);
    CHECK(j["plr"] == 0.0);
  }
  SUBCASE("partitioned") {
    const auto r = run({"plan", "--k", "40", "--pe", "0.01", "--partition"});
    REQUIRE(r.code == 0);
    const auto part = r.json()["partition"];
    for (const char* key : {"n1", "k1", "p1", "n2", "k2", "p2", "excess", "plr_part"}) {
      CHECK(part.contains(key));
    }
    CHECK(part["excess"] == 0);
    CHECK(part["n1"] == 22);
  }
  SUBCASE("six significant digits") {
    const auto r = run({"plan", "--k", "40", "--pe", "0.01"});
    CHECK(r.out.find("\"plr\": 9.04058e-06") != std::string::npos);
  }
  SUBCASE("errors") {
    auto r = run({"plan", "--k", "200", "--pe", "0.5"});
    CHECK(r.code == 1);
    CHECK(r.out.empty());
    CHECK_FALSE(r.err.empty());
    CHECK(run({"plan", "--pe", "0.1"}).code == 2);
    CHECK(run({"plan", "--k", "40", "--pe", "abc"}).code == 2);
    CHECK(run({"plan", "--k", "40", "--pe", "1.5"}).code == 2);
    CHECK(run({"plan", "--k", "40", "--pe", "0.1", "--bogus"}).code == 2);
    CHECK(run({"plan", "--k", "40", "--pe", "0.1", "--plr-target", "2"}).code == 1);
  }
}

TEST_CASE("analyze command") {
  SUBCASE("table code") {
    const auto j = run({"analyze", "--n", "44", "--k", "40", "--pe", "0.01"}).json();
    CHECK(j["plr"].get<double>() <= 1e-5);
    CHECK(j["method"] == "analytic");
  }
  SUBCASE("lossless") {
    CHECK(run({"analyze", "--n", "44", "--k", "40", "--pe", "0"}).json()["plr"] == 0.0);
  }
  SUBCASE("matches enumeration") {
    const double expected = brute_force_plr(CodeSpec(6, 4), BecChannel(0.1)).plr;
    const auto j = run({"analyze", "--n", "6", "--k", "4", "--pe", "0.1"}).json();
    CHECK(j["plr"].get<double>() == doctest::Approx(expected).epsilon(1e-6));
  }
  SUBCASE("partitioned with explicit halves") {
    const auto r = run({"analyze", "--n", "12", "--k", "8", "--pe", "0.1", "--partition", "--n1",
                        "6", "--k1", "4", "--n2", "6", "--k2", "4"});
    REQUIRE(r.code == 0);
    const auto j = r.json();
    CHECK(j["partition"]["plr_first"] == j["partition"]["plr_second"]);
    CHECK(j["plr"].get<double>() >= j["plr_plain"].get<double>());
  }
  SUBCASE("partitioned default split") {
    const auto j = run({"analyze", "--n", "48", "--k", "40", "--pe", "0.03", "--partition"}).json();
    CHECK(j["partition"]["n1"] == 24);
  }
  SUBCASE("errors") {
    CHECK(run({"analyze", "--n", "12", "--k", "8", "--pe", "0.1", "--partition", "--n1", "7",
               "--k1", "5", "--n2", "5", "--k2", "3"})
              .code == 1);
    CHECK(run({"analyze", "--n", "12", "--k", "8", "--pe", "0.1", "--partition", "--n1", "7"})
              .code == 2);
    CHECK(run({"analyze", "--n", "4", "--k", "4", "--pe", "0.1"}).code == 1);
    CHECK(run({"analyze", "--n", "300", "--k", "4", "--pe", "0.1"}).code == 1);
  }
}

TEST_CASE("simulate command") {
  SUBCASE("lossless") {
    const auto j =
        run({"simulate", "--n", "12", "--k", "8", "--pe", "0", "--trials", "1000"}).json();
    CHECK(j["plr"] == 0.0);
    CHECK(j["method"] == "monte_carlo");
    CHECK(j["trials"] == 1000);
    CHECK(j.contains("ci95"));
  }
  SUBCASE("deterministic per seed") {
    const std::vector<std::string> args{"simulate", "--n",      "20", "--k",    "16", "--pe",
                                        "0.1",      "--trials", "3000", "--seed", "7"};
    CHECK(run(args).out == run(args).out);
  }
  SUBCASE("partitioned") {
    const auto r = run({"simulate", "--n", "16", "--k", "12", "--pe", "0.1", "--trials", "2000",
                        "--partition"});
    REQUIRE(r.code == 0);
    CHECK(r.json()["partition"]["k1"] == 6);
  }
  SUBCASE("trials must be positive") {
    CHECK(run({"simulate", "--n", "6", "--k", "4", "--pe", "0.1", "--trials", "0"}).code == 2);
  }
}

TEST_CASE("reproduce command") {
  SUBCASE("table1") {
    const auto r = run({"reproduce", "table1"});
    REQUIRE(r.code == 0);
    CHECK(r.out ==
          "k,0.01,0.03,0.05,0.07,0.09,0.1\n"
          "40,44,48,50,53,55,56\n"
          "80,86,91,95,98,102,104\n");
  }
  SUBCASE("fig2") {
    const auto r = run({"reproduce", "fig2"});
    REQUIRE(r.code == 0);
    const auto lines = r.lines();
    REQUIRE(lines.size() == 1 + 3 * 101);
    CHECK(lines[0] == "pe,k,excess");
    CHECK(lines[1] == "0.01,10,0");
    CHECK(lines[303] == "0.1,110,0");
    std::size_t zeros = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) zeros += lines[i].ends_with(",0");
    CHECK(zeros * 2 > 303);
  }
  SUBCASE("missing target") { CHECK(run({"reproduce"}).code == 2); }
}

TEST_CASE("bench command") {
  SUBCASE("grid size") {
    const auto r = run({"bench", "--k-range", "10:30:10", "--iterations", "10", "--phase",
                        "encode", "--mode", "both", "--packet-size", "100"});
    REQUIRE(r.code == 0);
    const auto lines = r.lines();
    REQUIRE(lines.size() == 7);
    CHECK(lines[0] == "k,mode,phase,median_ms,mad_ms,iterations,packet_size,parity");
  }
  SUBCASE("all phases") {
    const auto r = run({"bench", "--k-range", "10:20:10", "--iterations", "10", "--mode",
                        "partitioned", "--packet-size", "64"});
    REQUIRE(r.code == 0);
    CHECK(r.lines().size() == 1 + 2 + 2 + 2);
  }
  SUBCASE("usage errors") {
    CHECK(run({"bench", "--k-range", "30:10:10"}).code == 2);
    CHECK(run({"bench", "--k-range", "10:30"}).code == 2);
    CHECK(run({"bench", "--k-range", "10:30:0"}).code == 2);
    CHECK(run({"bench", "--iterations", "5"}).code == 2);
    CHECK(run({"bench", "--mode", "fast"}).code == 2);
    CHECK(run({"bench", "--erased", "9"}).code == 2);
  }
}

TEST_CASE("top level") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  const auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("plan") != std::string::npos);
}
