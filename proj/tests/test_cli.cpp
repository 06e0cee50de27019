#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "commands.hpp"
#include "phaselab/io.hpp"

using namespace phaselab;
using io::json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string data(const std::string& rel) { return std::string(PHASELAB_DATA_DIR) + "/" + rel; }

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  io::write_file(path.string(), text);
  return path;
}

}  // namespace

TEST_CASE("help exits cleanly") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({}).code == cli::kExitInput);
  CHECK(run({"frobnicate"}).code == cli::kExitInput);
}

TEST_CASE("invariant at the default config") {
  const Run r = run({"invariant", "--no-timestamp"});
  REQUIRE(r.code == 0);
  const json j = r.report();
  CHECK(std::abs(j["degree"].get<int>()) == 1);
  CHECK(j["degree"] == j["bloch_degree"]);
  CHECK(j["agreement"] == true);
  CHECK(j["y_overlap_min"].get<double>() >= 0.99);
  CHECK(j["config"]["grid"] == json::array({32, 64}));
  CHECK(j["config"]["n_dimers"] == 2);
  CHECK(j["config"]["epsilon"] == 0.25);
  CHECK_FALSE(j.contains("timestamp"));
  CHECK(run({"invariant"}).report().contains("timestamp"));
}

TEST_CASE("invariant reports are byte-identical") {
  const Run a = run({"invariant", "--no-timestamp", "--grid", "8x16"});
  const Run b = run({"invariant", "--no-timestamp", "--grid", "8x16"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("invariant debug and conjugate modes") {
  const json constant = run({"invariant", "--no-timestamp", "--grid", "8x16", "--constant-field"}).report();
  CHECK(constant["degree"] == 0);
  const json conj = run({"invariant", "--no-timestamp", "--grid", "8x16", "--conjugate"}).report();
  CHECK(conj["degree"] == -conj["bloch_degree"].get<int>());
  CHECK(conj["agreement"] == true);
}

TEST_CASE("coarse grids fail the flux gate") {
  const Run r = run({"invariant", "--no-timestamp", "--grid", "1x3"});
  CHECK(r.code == cli::kExitGate);
  CHECK(r.report()["error"]["kind"] == "gate");
  CHECK(r.err.find("flux") != std::string::npos);
  // 4x8 is still fine enough: its largest plaquette flux is far below the gate.
  const Run fine = run({"invariant", "--no-timestamp", "--grid", "4x8"});
  CHECK(fine.code == 0);
  CHECK(fine.report()["max_flux"].get<double>() < 1.0);
}

TEST_CASE("invariant input errors") {
  CHECK(run({"invariant", "--grid", "32by64"}).code == cli::kExitInput);
  CHECK(run({"invariant", "--epsilon", "2"}).code == cli::kExitInput);
  CHECK(run({"invariant", "--n-dimers", "1"}).code == cli::kExitInput);
  CHECK(run({"invariant", "--config", "/nonexistent.json"}).code == cli::kExitInput);
  const auto bad = temp_file("phaselab_bad_config.json", "{\"epsilon\": 0.2, \"colour\": 3}");
  const Run r = run({"invariant", "--config", bad.string()});
  CHECK(r.code == cli::kExitInput);
  CHECK(r.report()["error"]["message"].get<std::string>().find("colour") != std::string::npos);
  std::filesystem::remove(bad);
}

TEST_CASE("config file with command-line overrides") {
  const auto cfg = temp_file("phaselab_config.json", "{\"epsilon\": 0.3, \"n_dimers\": 2, \"grid\": [6, 12]}");
  const json j = run({"invariant", "--no-timestamp", "--config", cfg.string(), "--grid", "8x16"}).report();
  CHECK(j["config"]["epsilon"] == 0.3);
  CHECK(j["config"]["grid"] == json::array({8, 16}));
  std::filesystem::remove(cfg);
}

TEST_CASE("tolerance scale from the environment") {
  setenv("PHASELAB_TOL_SCALE", "abc", 1);
  CHECK(run({"invariant", "--grid", "8x16"}).code == cli::kExitInput);
  setenv("PHASELAB_TOL_SCALE", "2", 1);
  CHECK(run({"invariant", "--no-timestamp", "--grid", "8x16"}).report()["config"]["tol_scale"] == 2.0);
  unsetenv("PHASELAB_TOL_SCALE");
}

TEST_CASE("contract-loop on the bundled loop") {
  const auto out = std::filesystem::temp_directory_path() / "phaselab_sheet.json";
  const Run r = run({"contract-loop", "--loop", data("loops/loop_n2.json"), "--out", out.string(), "--no-timestamp"});
  REQUIRE(r.code == 0);
  const json j = r.report();
  CHECK(j["verifier"]["pass"] == true);
  CHECK(j["verifier"]["violations"].empty());
  CHECK(j["config"]["n"] == 2);
  const json doc = json::parse(io::read_file(out.string()));
  CHECK(doc["pass"] == true);
  const HomotopySheet sheet = io::sheet_from_json(doc["sheet"]);
  CHECK(sheet.rows.size() == j["verifier"]["rows"].get<std::size_t>());
  std::filesystem::remove(out);
}

TEST_CASE("contract-loop rejects a corrupted trace with a line number") {
  const auto path = temp_file("phaselab_bad_loop.json",
                              "{\n"
                              "  \"n\": 2,\n"
                              "  \"samples\": [\n"
                              "    [[[1,0],[0,0]], [[0,0],[0,0]]],\n"
                              "    [[[1,0],[0,0]], [[0,0],[0.5,0]]],\n"
                              "    [[[1,0],[0,0]], [[0,0],[0,0]]]\n"
                              "  ]\n"
                              "}\n");
  const Run r = run({"contract-loop", "--loop", path.string()});
  CHECK(r.code == cli::kExitInput);
  CHECK(r.err.find(path.string() + ":5: sample 1") != std::string::npos);
  std::filesystem::remove(path);
  CHECK(run({"contract-loop"}).code == cli::kExitInput);
}

TEST_CASE("contract-loop on a constant loop") {
  std::string text = "{\"n\": 3, \"samples\": [";
  for (int i = 0; i < 5; ++i) text += std::string(i ? "," : "") + "[[[1,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]]]";
  text += "]}";
  const auto path = temp_file("phaselab_constant_loop.json", text);
  const Run r = run({"contract-loop", "--loop", path.string(), "--no-timestamp"});
  CHECK(r.code == 0);
  CHECK(r.report()["verifier"]["max_step"] == 0.0);
  std::filesystem::remove(path);
}

TEST_CASE("selfcheck passes across seeds") {
  for (const char* seed : {"1", "2", "3", "4", "5"}) {
    const Run r = run({"selfcheck", "--seed", seed, "--no-timestamp"});
    CHECK_MESSAGE(r.code == 0, r.out);
  }
}

TEST_CASE("selfcheck fault injection fails only the targeted suite") {
  for (const char* suite : {"metric", "partial_trace", "gns", "cocycle", "supernatural"}) {
    const Run r = run({"selfcheck", "--inject-fault", suite, "--no-timestamp"});
    CHECK(r.code == cli::kExitGate);
    const json j = r.report();
    for (const auto& [name, result] : j["suites"].items()) CHECK_MESSAGE(result["pass"] == (name != suite), name);
  }
  CHECK(run({"selfcheck", "--inject-fault", "nothing"}).code == cli::kExitInput);
}

TEST_CASE("selfcheck reports are deterministic") {
  CHECK(run({"selfcheck", "--seed", "7", "--no-timestamp"}).out == run({"selfcheck", "--seed", "7", "--no-timestamp"}).out);
}

TEST_CASE("supernatural command") {
  const json j = run({"supernatural", "--type", "2,6,12", "--tail", "2", "--rational", "5/12", "--compare", "2^inf",
                      "--k-max", "3", "--no-timestamp"})
                     .report();
  CHECK(j["a"] == "2^inf*3");
  CHECK(j["table"].size() == 3);
  CHECK(j["table"][0]["isotropy"] == "Z x Q(a)");
  CHECK(j["table"][1]["unitary"] == "0");
  CHECK(j["contains"]["member"] == true);
  CHECK(j["iso"]["equivalent"] == true);
  CHECK(j["iso"]["c"] == 1);
  CHECK(j["iso"]["d"] == 3);

  CHECK(run({"supernatural", "--type", "2,5"}).code == cli::kExitInput);
  CHECK(run({"supernatural"}).code == cli::kExitInput);
  CHECK(run({"supernatural", "--a", "6"}).code == cli::kExitInput);
}
