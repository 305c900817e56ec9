#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "qsurr/cli.hpp"
#include "qsurr/spectrum.hpp"
#include "qsurr/surrogate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = qsurr::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::path(QSURR_TEST_TMP) / ::testing::UnitTest::GetInstance()->current_test_info()->name();
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  std::string at(const std::string& name) const { return (dir / name).string(); }
  json load(const std::string& name) const { return qsurr::cli::read_json(dir / name); }
  fs::path dir;
};

}  // namespace

TEST_F(Cli, EstimateThirteenQubits) {
  const auto r = run({"--out-dir", dir.string(), "estimate", "--qubits", "13", "--layers", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = load("estimate.json");
  EXPECT_EQ(j.at("grid_size"), "1220703125");
  EXPECT_EQ(j.at("lattice_size"), "1220703125");
  EXPECT_EQ(j.at("feasible_on"), "infeasible");
  EXPECT_TRUE(j.contains("table_discrepancy"));
  const auto m = load("run_manifest.json");
  EXPECT_EQ(m.at("command"), "estimate");
  EXPECT_EQ(m.at("artifacts"), json::array({"estimate.json"}));
}

TEST_F(Cli, ExactSurrogateOfCosineCircuit) {
  const json circuit = {{"config", qsurr::qsim::CircuitConfig::make(1, 1)},
                        {"params", qsurr::qsim::ParameterSet::zeros(qsurr::qsim::CircuitConfig::make(1, 1))}};
  qsurr::cli::write_text(dir / "c.json", circuit.dump());
  const auto r = run({"--out-dir", dir.string(), "surrogate", "exact", "--circuit", at("c.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = load("surrogate.json").get<qsurr::surrogate::SurrogateModel>();
  ASSERT_EQ(m.n_terms(), 1u);
  EXPECT_NEAR(m.a(0), 1.0, 1e-10);
  EXPECT_NEAR(m.b(0), 0.0, 1e-10);
}

TEST_F(Cli, BoundsDomainTooSmall) {
  const auto r = run({"--out-dir", dir.string(), "bounds", "--omega-max", "1", "--epsilon", "100"});
  EXPECT_EQ(r.code, 4);
  const auto e = json::parse(r.err);
  EXPECT_EQ(e.at("error"), "DomainTooSmall");
  EXPECT_EQ(e.at("exit_code"), 4);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run({"estimate", "--qubits"}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  const auto io = run({"--out-dir", dir.string(), "eval", "--data", at("missing.json"), "--surrogate",
                       at("missing.json")});
  EXPECT_EQ(io.code, 1);  // CLI11 existence check is a usage error
  qsurr::cli::write_text(dir / "bad.json", "{not json");
  const auto parse = run({"--out-dir", dir.string(), "eval", "--data", at("bad.json"), "--surrogate", at("bad.json")});
  EXPECT_EQ(parse.code, 2);
  EXPECT_EQ(json::parse(parse.err).at("kind"), "io");
  const json circuit = {{"config", qsurr::qsim::CircuitConfig::make(13, 2)},
                        {"params", qsurr::qsim::ParameterSet::zeros(qsurr::qsim::CircuitConfig::make(13, 2))}};
  qsurr::cli::write_text(dir / "big.json", circuit.dump());
  const auto cap = run({"--out-dir", dir.string(), "surrogate", "exact", "--circuit", at("big.json")});
  EXPECT_EQ(cap.code, 3);
  EXPECT_EQ(json::parse(cap.err).at("error"), "CapExceeded");
}

TEST_F(Cli, PipelineAndReplayAreByteIdentical) {
  const auto base = std::vector<std::string>{"--seed", "4", "--out-dir", dir.string()};
  auto with = [&](std::vector<std::string> rest) {
    auto v = base;
    v.insert(v.end(), rest.begin(), rest.end());
    return v;
  };
  ASSERT_EQ(run(with({"datagen", "--features", "2", "--size", "80"})).code, 0);
  ASSERT_EQ(run(with({"preprocess", "--input", at("dataset.json"), "--split", "0.75", "--dbscan-eps", "0.3"})).code, 0);
  ASSERT_EQ(run(with({"train", "--data", at("processed_train.json"), "--iters", "3", "--lr", "0.5"})).code, 0);
  ASSERT_EQ(run(with({"surrogate", "rff", "--circuit", at("circuit.json"), "--data",
                      at("processed_train.json"), "-D", "4"})).code, 0);
  const auto ev = run(with({"eval", "--surrogate", at("surrogate.json"), "--circuit", at("circuit.json"),
                            "--data", at("processed_test.json")}));
  ASSERT_EQ(ev.code, 0) << ev.err;
  const auto e = load("eval.json");
  EXPECT_TRUE(e.contains("surrogate_mse"));
  EXPECT_TRUE(e.contains("quantum_mse"));

  // Re-run the surrogate step and replay its manifest: artifacts must match byte for byte.
  ASSERT_EQ(run(with({"surrogate", "rff", "--circuit", at("circuit.json"), "--data",
                      at("processed_train.json"), "-D", "4"})).code, 0);
  const auto first = qsurr::cli::read_text(dir / "surrogate.json");
  const auto r = run({"--out-dir", (dir / "rep").string(), "replay", at("run_manifest.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(qsurr::cli::read_text(dir / "rep" / "replay" / "surrogate.json"), first);
  EXPECT_TRUE(qsurr::cli::read_json(dir / "rep" / "replay_report.json").at("identical").get<bool>());
}

TEST_F(Cli, ManifestListsEveryFile) {
  ASSERT_EQ(run({"--out-dir", dir.string(), "datagen", "--size", "10", "--csv"}).code, 0);
  ASSERT_EQ(run({"--out-dir", (dir / "p").string(), "preprocess", "--csv", at("dataset.csv"),
                 "--pca", "2", "--split", "0.5"}).code, 0);
  const auto m = qsurr::cli::read_json(dir / "p" / "run_manifest.json");
  std::set<std::string> listed;
  for (const auto& a : m.at("artifacts")) listed.insert(a.get<std::string>());
  for (const auto& entry : fs::directory_iterator(dir / "p")) {
    const auto name = entry.path().filename().string();
    if (name != qsurr::cli::kManifestName) EXPECT_TRUE(listed.count(name)) << name;
  }
  EXPECT_EQ(listed.size(), 3u);
}

TEST_F(Cli, IdenticalRunsGiveIdenticalBytes) {
  for (const char* sub : {"a", "b"})
    ASSERT_EQ(run({"--seed", "9", "--out-dir", (dir / sub).string(), "bounds", "--qubits", "2",
                   "--layers", "1", "--epsilon", "0.5"}).code, 0);
  EXPECT_EQ(qsurr::cli::read_text(dir / "a" / "bounds.json"), qsurr::cli::read_text(dir / "b" / "bounds.json"));
}

TEST_F(Cli, HelpExitsZero) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("showcase"), std::string::npos);
}
