#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nlohmann/json.hpp"
#include "zslab/cli.hpp"
#include "zslab/errors.hpp"

using namespace zslab;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// Sets an environment variable for the lifetime of the guard.
class EnvGuard {
 public:
  EnvGuard(const char* name, const char* value) : name_(name) { ::setenv(name, value, 1); }
  ~EnvGuard() { ::unsetenv(name_); }

 private:
  const char* name_;
};

}  // namespace

TEST_CASE("durations") {
  using namespace std::chrono_literals;
  CHECK(cli::parse_duration("250ms") == 250ms);
  CHECK(cli::parse_duration("30s") == 30s);
  CHECK(cli::parse_duration("5m") == 5min);
  CHECK(cli::parse_duration("2h") == 2h);
  CHECK(cli::parse_duration("3") == 3s);
  CHECK_THROWS(cli::parse_duration("fast"));
  CHECK_THROWS(cli::parse_duration("5 parsecs"));
}

TEST_CASE("invariants") {
  const Run d = run({"davenport", "C3xC3"});
  REQUIRE(d.code == cli::ok);
  const json j = json::parse(d.out);
  CHECK(j["value"] == 5);
  CHECK(j["closed_form"] == 5);
  CHECK(j["orbits_per_length"].size() == 5);
  CHECK_FALSE(j["witness"].get<std::string>().empty());

  const json e = json::parse(run({"eta", "C2xC2"}).out);
  CHECK(e["value"] == 4);

  const Run text = run({"davenport", "C2xC2", "--output", "text"});
  CHECK(text.out.find("value: 3") != std::string::npos);
}

TEST_CASE("enumeration output") {
  const Run r = run({"enumerate", "C2xC2", "--length", "3", "--constraint", "minimal",
                     "--up-to-aut", "--output", "csv"});
  CHECK(r.code == cli::ok);
  CHECK(r.out == "representative,orbit_size\n\"(0,1) (1,0) (1,1)\",1\n");
  const json all = json::parse(
      run({"enumerate", "C3xC3", "--length", "5", "--constraint", "minimal"}).out);
  CHECK(all["total_sequences"] == all["items"].size());
}

TEST_CASE("classification output") {
  const Run r = run({"classify", "C2xC4", "(1,0) (1,1) (0,1)^3"});
  REQUIRE(r.code == cli::ok);
  const json j = json::parse(r.out);
  CHECK(j["minimal_zero_sum"] == true);
  CHECK(j["length"] == 5);
  CHECK_FALSE(j.contains("upsilon"));
  bool form_i = false, form_ii = false;
  for (const auto& f : j["forms"]) {
    form_i |= f["form"] == "I";
    form_ii |= f["form"] == "II";
  }
  CHECK(form_i);
  CHECK(form_ii);
  const json sq = json::parse(run({"classify", "C3xC3", "(1,0)^2 (0,1)^2 (1,1)"}).out);
  CHECK(sq["upsilon"] == "nu");
  CHECK(run({"classify", "C3xC3", "(1,0)^2 (0,7)"}).code == cli::usage_error);
}

TEST_CASE("check commands") {
  const Run egz = run({"check", "egz", "--n", "3", "--part", "1"});
  REQUIRE(egz.code == cli::ok);
  const json j = json::parse(egz.out);
  CHECK(j["verdict"] == "holds");
  CHECK(j["cases_examined"] == 21);
  CHECK(j["counterexamples_total"] == 0);

  CHECK(run({"check", "property-b", "--n", "3"}).code == cli::ok);
  CHECK(run({"check", "property-c", "--n", "3"}).code == cli::ok);
  CHECK(run({"check", "lemma-2-3", "--n", "3"}).code == cli::ok);
  CHECK(run({"check", "lemma-2-5", "--m", "2", "--n", "2"}).code == cli::ok);
  CHECK(run({"check", "prop-4-2", "--m", "2", "--n", "2"}).code == cli::ok);
  CHECK(run({"check", "corollary", "--group", "C2xC4"}).code == cli::ok);
  CHECK(run({"check", "hamidoune", "--group", "C2xC2", "--size-cap", "7"}).code == cli::ok);
  CHECK(run({"check", "exchange", "--group", "C5", "--max-length", "3"}).code == cli::ok);
  CHECK(run({"check", "perturbation", "--m", "4", "--lemma", "3.3"}).code == cli::ok);

  const Run csv = run({"check", "exchange", "--group", "C5", "--max-length", "3", "--output", "csv"});
  CHECK(csv.out.rfind("check,verdict,cases_examined,counterexamples_total,counterexample\n", 0) == 0);
  CHECK(csv.out.find("exchange,holds,") != std::string::npos);

  const Run text = run({"check", "egz", "--n", "3", "--part", "2", "--output", "text", "--stable"});
  CHECK(text.out.rfind("egz: holds (", 0) == 0);
  CHECK(text.out.find("extremal_sequences = 3") != std::string::npos);

  const json rnd = json::parse(
      run({"check", "hamidoune", "--group", "C2xC4", "--samples", "50", "--seed", "9"}).out);
  CHECK(rnd["params"]["randomized"] == true);
  CHECK(rnd["params"]["seed"] == 9);
}

TEST_CASE("usage errors exit with 2") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{}, {"bogus"}, {"davenport"}, {"davenport", "C3xC4"},
        {"davenport", "D3"}, {"check", "egz", "--n", "3", "--part", "5"},
        {"check", "perturbation", "--m", "3", "--lemma", "3.1"},
        {"check", "perturbation", "--m", "4", "--lemma", "9"},
        {"davenport", "C2", "--output", "xml"}, {"davenport", "C2", "--time-cap", "soon"}}) {
    const Run r = run(args);
    CHECK(r.code == cli::usage_error);
    CHECK(r.out.empty());
    CHECK_FALSE(r.err.empty());
  }
  CHECK(run({"--help"}).code == cli::ok);
}

TEST_CASE("caps exit with 3 and emit partial results") {
  const Run r = run({"enumerate", "C4xC4", "--length", "7", "--constraint", "minimal",
                     "--node-cap", "5"});
  CHECK(r.code == cli::cap_exceeded);
  const json j = json::parse(r.out);
  CHECK(j["verdict"] == "cap_exceeded");
  CHECK(j["nodes_visited"].get<std::uint64_t>() > 5);
  CHECK(j.contains("partial_results"));
  CHECK(run({"check", "egz", "--n", "6", "--part", "1", "--node-cap", "10"}).code ==
        cli::cap_exceeded);
}

TEST_CASE("environment and config file overrides") {
  {
    EnvGuard env("ZSLAB_OUTPUT", "csv");
    CHECK(run({"check", "egz", "--n", "2", "--part", "1"}).out.rfind("check,verdict", 0) == 0);
    // The command line wins over the environment.
    CHECK(run({"check", "egz", "--n", "2", "--part", "1", "--output", "json"}).out.front() == '{');
  }
  {
    EnvGuard env("ZSLAB_NODE_CAP", "5");
    CHECK(run({"enumerate", "C4xC4", "--length", "7", "--constraint", "minimal"}).code ==
          cli::cap_exceeded);
  }
  {
    EnvGuard env("ZSLAB_THREADS", "zero");
    CHECK(run({"davenport", "C2"}).code == cli::usage_error);
  }
  const auto path = std::filesystem::temp_directory_path() / "zslab_cli_test.toml";
  {
    std::ofstream cfg(path);
    cfg << "output = \"text\"\nstable = true\n";
  }
  const Run r = run({"check", "egz", "--n", "2", "--part", "1", "--config", path.string()});
  CHECK(r.code == cli::ok);
  CHECK(r.out.rfind("egz: holds (", 0) == 0);
  CHECK(r.out.find(" ms)") == std::string::npos);
  {
    // The environment ranks above the config file.
    EnvGuard env("ZSLAB_OUTPUT", "csv");
    CHECK(run({"check", "egz", "--n", "2", "--part", "1", "--config", path.string()})
              .out.rfind("check,verdict", 0) == 0);
  }
  std::filesystem::remove(path);
}

TEST_CASE("stable output is byte-identical") {
  const std::vector<std::string> args{"check", "exchange", "--group", "C5", "--max-length", "4",
                                      "--stable"};
  const Run a = run(args), b = run(args);
  CHECK(a.out == b.out);
  CHECK_FALSE(json::parse(a.out).contains("elapsed_ms"));
  const std::vector<std::string> threaded{"check", "perturbation", "--m", "4", "--lemma", "unique",
                                          "--stable", "--threads", "2"};
  CHECK(run(threaded).out ==
        run({"check", "perturbation", "--m", "4", "--lemma", "unique", "--stable"}).out);
}

TEST_CASE("witnesses are printed in canonical form") {
  const json a = json::parse(run({"davenport", "C2xC4"}).out);
  const json b = json::parse(run({"davenport", "C2xC4", "--mode", "fast"}).out);
  CHECK(a["witness"] == b["witness"]);
  const json c = json::parse(run({"classify", "C2xC4", a["witness"].get<std::string>()}).out);
  CHECK(c["canonical"] == a["witness"]);
}
