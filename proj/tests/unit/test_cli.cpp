#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "roughnum_cli/config.hpp"
#include "roughnum_cli/output.hpp"
#include "roughnum_cli/run.hpp"

using namespace roughnum::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "roughnum");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream s;
  s << is.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "roughnum_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string data_section(const std::string& csv) {
  std::istringstream is(csv);
  std::string line, out;
  while (std::getline(is, line)) {
    if (!line.empty() && line[0] != '#') out += line + "\n";
  }
  return out;
}

}  // namespace

TEST_CASE("minimal document parses") {
  const auto c = parse_config_text(
      R"({"subcommand": "nalpha", "model": "brownian", "p": 2.5, "alpha": 1, "grid": 512, "trials": 100, "seed": 7})");
  CHECK(c.subcommand == "nalpha");
  CHECK(c.p == 2.5);
  CHECK(c.grid == 512);
  CHECK(c.seed == 7);
}

TEST_CASE("invalid documents name the field") {
  auto field_of = [](const std::string& text) {
    try {
      (void)parse_config_text(text);
    } catch (const ConfigError& e) {
      return e.field() + " | " + e.what();
    }
    return std::string("accepted");
  };
  const auto p = field_of(R"({"subcommand": "pvar", "seed": 1, "p": 3.5})");
  CHECK(p.rfind("p |", 0) == 0);
  CHECK(p.find("(2,3)") != std::string::npos);
  CHECK(field_of(R"({"subcommand": "pvar", "seed": 1, "colour": 3})").rfind("colour |", 0) == 0);
  CHECK(field_of(R"({"subcommand": "pvar"})").rfind("seed |", 0) == 0);
  CHECK(field_of(R"({"subcommand": "pvar", "seed": -4})").rfind("seed |", 0) == 0);
  CHECK(field_of(R"({"subcommand": "fly", "seed": 1})").rfind("subcommand |", 0) == 0);
  CHECK(field_of(R"({"subcommand": "she", "seed": 1, "epsilons": [0, "x"]})").rfind("epsilons[1] |", 0) == 0);
  CHECK(field_of(R"({"subcommand": "pvar", "seed": 1, "grid": 2.5})").rfind("grid |", 0) == 0);
  CHECK(field_of("{not json").rfind("$ |", 0) == 0);
}

TEST_CASE("serialization round trip over the fixture corpus") {
  std::size_t seen = 0;
  for (const auto& entry : fs::directory_iterator(ROUGHNUM_FIXTURE_DIR "/configs")) {
    const auto first = parse_config_text(slurp(entry.path()));
    const std::string canonical = canonical_json(first);
    const auto second = parse_config_text(canonical);
    CHECK(canonical_json(second) == canonical);
    CHECK(config_hash(second) == config_hash(first));
    ++seen;
  }
  CHECK(seen >= 4);
}

TEST_CASE("flags override the document and bad flags exit 2") {
  const fs::path cfg = scratch("override.json");
  std::ofstream(cfg) << R"({"subcommand": "nalpha", "seed": 3, "grid": 32, "trials": 2})";
  const auto r = run({"nalpha", "--config", cfg.string(), "--trials", "4", "--grid", "16"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"trials\":4") != std::string::npos);
  CHECK(r.out.find("\"grid\":16") != std::string::npos);
  const auto bad = run({"nalpha", "--seed", "3", "--p", "3.5"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("(2,3)") != std::string::npos);
  CHECK(run({"nalpha"}).code == 2);
  CHECK(run({"nalpha", "--seed", "x"}).code == 2);
  CHECK(run({"nalpha", "--seed", "1", "--bogus", "2"}).code == 2);
}

TEST_CASE("outputs carry a verifiable header and a sidecar") {
  const fs::path out = scratch("sample.csv");
  const auto r = run({"sample", "--seed", "9", "--trials", "2", "--grid", "8", "--out", out.string()});
  REQUIRE(r.code == 0);
  const std::string csv = slurp(out);
  std::istringstream is(csv);
  std::string line, hash, echo;
  while (std::getline(is, line) && line[0] == '#') {
    if (line.rfind("# config_hash: ", 0) == 0) hash = line.substr(15);
    if (line.rfind("# config: ", 0) == 0) echo = line.substr(10);
  }
  CHECK(line == "trial,t,x_1,x_2");
  CHECK(hash == hex64(fnv1a64(echo)));
  CHECK(canonical_json(parse_config_text(echo)) == echo);
  const auto sidecar = nlohmann::json::parse(slurp(out.string() + ".json"));
  CHECK(sidecar["config_hash"] == hash);
  CHECK(sidecar["config"]["trials"] == 2);

  const fs::path again = scratch("sample_again.csv");
  REQUIRE(run({"sample", "--seed", "9", "--trials", "2", "--grid", "8", "--out", again.string()}).code == 0);
  CHECK(slurp(again) == csv);

  const auto json_run = run({"sample", "--seed", "9", "--trials", "1", "--grid", "4", "--format", "json"});
  const auto doc = nlohmann::json::parse(json_run.out);
  CHECK(doc["rows"].size() == 5);
  CHECK(doc["meta"]["seed"] == 9);
}

TEST_CASE("path files feed the path subcommands") {
  const fs::path path = scratch("driver.csv");
  REQUIRE(run({"sample", "--seed", "4", "--trials", "2", "--grid", "32", "--out", path.string()}).code == 0);
  for (const char* sub : {"pvar", "nalpha", "rde", "linrde", "jacobian"}) {
    const auto r = run({sub, "--seed", "4", "--input", path.string(), "--first-trial", "1"});
    CHECK_MESSAGE(r.code == 0, sub, r.err);
  }
  const auto sampled = run({"pvar", "--seed", "4", "--grid", "32", "--first-trial", "1"});
  const auto read = run({"pvar", "--seed", "4", "--input", path.string(), "--first-trial", "1"});
  CHECK(data_section(sampled.out) == data_section(read.out));
  const auto jac = run({"jacobian", "--seed", "4", "--grid", "16"});
  CHECK(jac.out.find("t,J_11,J_12,J_21,J_22") != std::string::npos);
  CHECK(run({"rde", "--seed", "4", "--dimension", "3", "--grid", "8"}).code == 2);
  CHECK(run({"pvar", "--seed", "4", "--input", scratch("missing.csv").string()}).code == 2);
}

TEST_CASE("failed runs leave no partial output") {
  const fs::path out = scratch("failed.csv");
  fs::remove(out);
  // integer counts on a coarse grid never give ten distinct tail points
  const auto r = run({"tailfit", "--seed", "2", "--statistic", "nalpha_x", "--grid", "32", "--trials", "200", "--out",
                      out.string()});
  CHECK(r.code == 1);
  CHECK_FALSE(fs::exists(out));
  CHECK_FALSE(fs::exists(out.string() + ".json"));
  CHECK_FALSE(fs::exists(out.string() + ".partial"));
}

TEST_CASE("selftest and she") {
  const auto st = run({"selftest", "--seed", "1"});
  CHECK(st.code == 0);
  CHECK(st.out.find(",false,") == std::string::npos);
  const auto she = run({"she", "--seed", "1", "--she-grid", "32", "--she-coarse-grid", "16", "--truncation", "2000"});
  CHECK(she.code == 0);
  CHECK(she.out.find("uniformity,") != std::string::npos);
}
