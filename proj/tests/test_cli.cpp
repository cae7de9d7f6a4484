#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sigdet/cli.hpp"
#include "sigdet/report.hpp"

using namespace sigdet;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  std::filesystem::path dir_;

  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("sigdet_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& body) {
    const auto p = dir_ / name;
    std::ofstream(p) << body;
    return p.string();
  }
};

Json json_of(const Run& r) { return Json::parse(r.out); }

}  // namespace

TEST_F(CliTest, SimulateZeroSignal) {
  const auto r = run({"simulate", "--n", "4000", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json_of(r);
  const auto t1 = j["result"]["type1"]["count"].get<std::size_t>();
  const auto t2 = j["result"]["type2"]["count"].get<std::size_t>();
  EXPECT_EQ(t1 + t2, 4000u);
  EXPECT_EQ(j["config"]["n"], 4000);
  EXPECT_TRUE(j.contains("constants"));
}

TEST_F(CliTest, SmallConstantExitsThree) {
  const auto cfg = write("c.json", R"({"schema_version":1,"beta":0.1,"calibration":{"mode":"explicit","c1":1,"c2":10}})");
  const auto r = run({"simulate", "--config", cfg});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("C_min precondition"), std::string::npos);
}

TEST_F(CliTest, MalformedJsonExitsTwo) {
  EXPECT_EQ(run({"simulate", "--config", write("bad.json", "{\"schema_version\": 1,")}).code, 2);
  EXPECT_EQ(run({"simulate", "--config", (dir_ / "missing.json").string()}).code, 2);
  EXPECT_EQ(run({"simulate", "--n", "ten"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"verify", "prop63"}).code, 2);
}

TEST_F(CliTest, CalibrateExamples) {
  auto r = run({"calibrate", "--format", "json", "--config",
                write("a.json", R"({"schema_version":1,"beta":0.5,"calibration":{"mode":"explicit","c1":2,"c2":2}})")});
  EXPECT_EQ(json_of(r)["constants"]["cmax"], 12.0);

  r = run({"calibrate", "--format", "json", "--config",
           write("b.json", R"({"schema_version":1,"beta":0.1,"calibration":{"mode":"explicit","c1":10,"c2":10}})")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json_of(r)["constants"]["cmin"].get<double>(), 1.5894, 5e-4);

  r = run({"calibrate", "--format", "json", "--config", write("c.json", R"({"schema_version":1,"alpha":0.08})")});
  ASSERT_EQ(r.code, 0);
  EXPECT_DOUBLE_EQ(json_of(r)["constants"]["c1"].get<double>(), 5.0);
  EXPECT_DOUBLE_EQ(json_of(r)["constants"]["c2"].get<double>(), 5.0);
}

TEST_F(CliTest, VerifyProp61Defaults) {
  const auto r = run({"verify", "prop61", "--n", "20000"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("finite ranges"), std::string::npos);
}

TEST_F(CliTest, MaxisetZeroSignalAdmissible) {
  const auto cfg = write("m.json", R"({"schema_version":1,"design":{"family":"constant","D":1},
                                       "rate":{"family":"power_law","c":10,"e":0.5}})");
  const auto r = run({"maxiset", "--config", cfg, "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json_of(r);
  EXPECT_TRUE(j["result"]["admissible"].get<bool>());
  EXPECT_TRUE(j["result"]["member"].get<bool>());
}

TEST_F(CliTest, EmbeddingViolationAtOne) {
  const auto cfg = write("e.json", R"({"schema_version":1,"k_max":1000,"constants_override":{"cmin":1,"cmax_p":2}})");
  const auto r = run({"verify", "embedding", "--config", cfg, "--format", "json"});
  EXPECT_NE(r.code, 0);
  EXPECT_EQ(json_of(r)["result"]["first_violation"]["k"], 1);
}

TEST_F(CliTest, PowerCsv) {
  const auto cfg = write("p.json", R"({"schema_version":1,"signal":{"family":"finite_support","values":[1]},
                                       "rho":[0, 0.5, 1]})");
  const auto r = run({"power", "--config", cfg, "--format", "csv", "--n", "1000", "--seed", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("rho,p_reject,se,n,seed\r\n", 0), 0u);
  EXPECT_NE(r.out.find(",1000,5\r\n"), std::string::npos);
}

TEST_F(CliTest, ByteIdenticalPayloads) {
  const auto cfg = write("s.json", R"({"schema_version":1,"signal":{"family":"power_decay","c":0.5,"a":1},
                                       "n":3000})");
  for (const char* fmt : {"json", "csv", "text"}) {
    const auto a = run({"verify", "sandwich", "--config", cfg, "--format", fmt});
    const auto b = run({"verify", "sandwich", "--config", cfg, "--format", fmt});
    EXPECT_EQ(a.out, b.out) << fmt;
  }
}

TEST_F(CliTest, OutFileAndSummary) {
  const auto out = (dir_ / "besov.json").string();
  const auto cfg = write("b.json", R"({"schema_version":1,"signal":{"family":"dyadic_block","s":0.5,"gamma":1},
                                       "s":0.5,"t":0.5,"spectrum":{"family":"mildly_ill_posed","t":0.5}})");
  const auto r = run({"verify", "besov", "--config", cfg, "--format", "json", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("finite ranges"), std::string::npos);
  std::ifstream in(out);
  const auto j = Json::parse(in);
  EXPECT_EQ(j["result"]["weighted"]["rows"].size(), 21u);
  EXPECT_EQ(j["config"]["schema_version"], 1);
}

TEST_F(CliTest, CompareRuns) {
  const auto cfg = write("c.json", R"({"schema_version":1,"spectrum":{"family":"mildly_ill_posed","t":1},
                                       "s":0.5,"t":1,"n":1000,"grid":{"kind":"geometric","start":0.5,"ratio":0.7,"count":12}})");
  const auto r = run({"compare", "--config", cfg, "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("candidate,epsilon,D,ip_power,dp_power\r\n", 0), 0u);
}

TEST_F(CliTest, Help) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("simulate"), std::string::npos);
}
