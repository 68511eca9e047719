#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <sstream>

#include "yeast/cli.hpp"

namespace {

const std::string kData = YEAST_TEST_DATA_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "yeast");
  std::ostringstream out;
  std::ostringstream err;
  const int code = yeast::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("yeast_cli_test_" + name)).string();
}

}  // namespace

TEST(Cli, BoundaryExample) {
  const auto r = run({"boundary", "--alpha", "0.05", "--sided", "one", "--n", "500", "--var", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["thresholds"][0].get<double>(), 61.979, 1e-3);
  EXPECT_EQ(r.out, slurp(kData + "/golden/boundary_one_500_2.json"));
}

TEST(Cli, BoundaryErrors) {
  const auto missing = run({"boundary", "--alpha", "0.05", "--n", "500"});
  EXPECT_EQ(missing.code, 1);
  EXPECT_NE(missing.err.find("--var"), std::string::npos);
  EXPECT_EQ(run({"boundary", "--alpha", "1.5", "--n", "500", "--var", "2"}).code, 2);
  EXPECT_EQ(run({"boundary", "--sided", "three", "--n", "500", "--var", "2"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, StaircasePlans) {
  const auto single = run({"staircase", "--plan", kData + "/plan_single.json"});
  ASSERT_EQ(single.code, 0) << single.err;
  const auto boundary = run({"boundary", "--n", "500", "--var", "2"});
  EXPECT_EQ(nlohmann::json::parse(single.out)["thresholds"], nlohmann::json::parse(boundary.out)["thresholds"]);

  const auto seven = run({"staircase", "--plan", kData + "/plan_equal7.json"});
  ASSERT_EQ(seven.code, 0);
  EXPECT_LE(nlohmann::json::parse(seven.out)["achieved_fdr_bound"].get<double>(), 0.05);
  EXPECT_EQ(seven.out, slurp(kData + "/golden/staircase_equal7.json"));

  EXPECT_EQ(run({"staircase", "--plan", kData + "/plan_explicit.json"}).code, 0);
  EXPECT_EQ(run({"staircase", "--plan", kData + "/plan_malformed.json"}).code, 2);
  EXPECT_EQ(run({"staircase", "--plan", kData + "/does_not_exist.json"}).code, 2);
}

TEST(Cli, StaircaseNonConvergenceIsNumerical) {
  const auto path = temp_path("tiny_eps.json");
  std::ofstream(path) << R"({"horizon": 500, "periods": 2, "variance_per_event": 2, "epsilon": 1e-9})";
  const auto r = run({"staircase", "--plan", path});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("inflation"), std::string::npos);
}

TEST(Cli, MonitorTableOne) {
  const auto huge = run({"monitor", "--input", kData + "/table1.csv", "--threshold", "1e12"});
  ASSERT_EQ(huge.code, 0) << huge.err;
  const auto j = nlohmann::json::parse(huge.out);
  EXPECT_TRUE(j["detected_at"].is_null());
  EXPECT_EQ(j["final_s"].get<double>(), 219.5);
  EXPECT_EQ(j["n_processed"], 4);

  const auto hit = run({"monitor", "--input", kData + "/table1.csv", "--threshold", "100"});
  EXPECT_EQ(hit.out, slurp(kData + "/golden/monitor_table1_b100.json"));
  const auto nd = run({"monitor", "--input", kData + "/table1.ndjson", "--threshold", "100"});
  EXPECT_EQ(nd.out, hit.out);
}

TEST(Cli, MonitorTrajectory) {
  const auto path = temp_path("traj.csv");
  const auto r = run({"monitor", "--input", kData + "/table1.csv", "--threshold", "150", "--emit-trajectory", path});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(path),
            "n,s,threshold,flag\n1,175.0,150.0,1\n2,139.5,150.0,1\n3,119.5,150.0,1\n4,219.5,150.0,1\n");
}

TEST(Cli, MonitorEdgeCases) {
  const auto empty = run({"monitor", "--input", kData + "/empty.csv", "--threshold", "10"});
  ASSERT_EQ(empty.code, 0) << empty.err;
  EXPECT_EQ(nlohmann::json::parse(empty.out)["n_processed"], 0);
  EXPECT_EQ(run({"monitor", "--input", kData + "/header_only.csv", "--threshold", "10"}).code, 0);

  const auto bad = run({"monitor", "--input", kData + "/bad_group.csv", "--threshold", "10"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("line 3"), std::string::npos);

  EXPECT_EQ(run({"monitor", "--input", kData + "/out_of_order.csv", "--threshold", "10"}).code, 2);
  const auto lenient = run({"monitor", "--input", kData + "/out_of_order.csv", "--threshold", "10", "--lenient"});
  EXPECT_EQ(lenient.code, 0);
  EXPECT_EQ(nlohmann::json::parse(lenient.out)["warnings"].size(), 1U);

  EXPECT_EQ(run({"monitor", "--input", kData + "/table1.csv"}).code, 1);
  EXPECT_EQ(run({"monitor", "--input", kData + "/table1.csv", "--threshold", "10", "--n", "2"}).code, 1);
  const auto computed = run({"monitor", "--input", kData + "/table1.csv", "--var", "10000", "--n", "10"});
  EXPECT_EQ(computed.code, 0) << computed.err;
}

TEST(Cli, MonitorWithBoundaryFile) {
  const auto path = temp_path("boundary.json");
  std::ofstream(path) << run({"staircase", "--plan", kData + "/plan_equal7.json"}).out;
  const auto r = run({"monitor", "--input", kData + "/table1.csv", "--boundary", path});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["detected_at"], 1);
}

TEST(Cli, SimulateDeterministic) {
  const auto out1 = temp_path("sim1.csv");
  const auto out2 = temp_path("sim2.csv");
  const auto a = run({"simulate", "--config", kData + "/sim_small.conf", "--seed", "8163", "--output", out1});
  ASSERT_EQ(a.code, 0) << a.err;
  const auto b = run({"simulate", "--config", kData + "/sim_small.conf", "--seed", "8163", "--output", out2,
                      "--threads", "2"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(slurp(out1), slurp(out2));
  const auto manifest = nlohmann::json::parse(slurp(out1 + ".manifest.json"));
  EXPECT_EQ(manifest["replications"], 500);
  EXPECT_EQ(manifest["seed"], 8163);
  const auto text = slurp(out1);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 7);
}

TEST(Cli, SimulateModesAndErrors) {
  const auto d = run({"simulate", "--seed", "1", "--reps", "200", "--methods", "YEAST", "--mode", "discrete",
                      "--checks", "14,28", "--format", "json", "--manifest", temp_path("m.json")});
  ASSERT_EQ(d.code, 0) << d.err;
  const auto rows = nlohmann::json::parse(d.out);
  EXPECT_EQ(rows.size(), 10U);
  EXPECT_EQ(rows[0]["check_count"], 14);

  const auto unknown = run({"simulate", "--seed", "1", "--reps", "10", "--methods", "SPRT"});
  EXPECT_EQ(unknown.code, 1);
  EXPECT_NE(unknown.err.find("pYEAST"), std::string::npos);
  EXPECT_EQ(run({"simulate", "--reps", "10"}).code, 1);
  EXPECT_EQ(run({"simulate", "--seed", "1", "--config", kData + "/sim_bad_key.conf"}).code, 2);
  EXPECT_EQ(run({"simulate", "--seed", "1", "--reps", "10", "--mode", "discrete", "--checks", "501"}).code, 1);
}

TEST(Cli, ValidateSynth) {
  const auto r = run({"validate", "--synth", "--subjects", "300", "--seed", "5", "--reps", "200", "--variance", "iid",
                      "--cap-percentile", "0.999"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["replications"], 200);
  EXPECT_EQ(j["variance"]["method"], "iid");
  EXPECT_FALSE(j["cap"].is_null());
  EXPECT_EQ(run({"validate", "--synth", "--reps", "10"}).code, 1);
  EXPECT_EQ(run({"validate", "--seed", "1"}).code, 1);
  EXPECT_EQ(run({"validate", "--synth", "--seed", "1", "--variance", "bootstrap"}).code, 2);
}

TEST(Cli, ValidateFiles) {
  const auto r = run({"validate", "--history", kData + "/table1.csv", "--input", kData + "/table1.ndjson", "--seed",
                      "3", "--reps", "50"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["horizon"], 4);
}

TEST(Cli, LevyCheck) {
  const auto r = run({"levy-check", "--n", "6"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["violations"], 0);
  EXPECT_EQ(j["cases"], 42);
  EXPECT_EQ(run({"levy-check", "--n", "21"}).code, 2);
}
