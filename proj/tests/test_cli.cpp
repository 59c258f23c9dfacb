#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "smk/cli.hpp"
#include "smk/io.hpp"
#include "support.hpp"

namespace smk {
namespace {

using testing::data_path;
using nlohmann::json;

struct RunResult {
  int code = 0;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

RunResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  RunResult r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

TEST(Cli, CertifyTwoCliqueExample) {
  const auto r = run({"certify", "--input", data_path("two_clique_moments.json")});
  ASSERT_EQ(r.code, cli::kExitOk) << r.out << r.err;
  const auto j = r.report();
  EXPECT_EQ(j["command"], "certify");
  EXPECT_EQ(j["seed"], 42);
  EXPECT_EQ(j["exit_code"], 0);
  EXPECT_TRUE(j["verdict"].get<bool>());
  EXPECT_EQ(j["cliques"][0]["full"]["rank"], 2);
  EXPECT_EQ(j["cliques"][1]["full"]["rank"], 2);
  EXPECT_EQ(j["overlaps"][0]["full"]["rank"], 1);
}

TEST(Cli, RipOnTriangleHasNoOrder) {
  const auto r = run({"rip", "--input", data_path("triangle_moments.json")});
  EXPECT_EQ(r.code, cli::kExitVerdictFalse);
  EXPECT_EQ(r.report()["status"], "NoOrderExists");
}

TEST(Cli, RipWithExplicitBadOrder) {
  const auto r = run({"rip", "--input", data_path("chain_pop.json"), "--order", "1,3,2"});
  EXPECT_EQ(r.code, cli::kExitVerdictFalse);
  EXPECT_EQ(r.report()["status"], "OrderFails");
}

TEST(Cli, PipelineWithChainSolution) {
  const auto r = run({"pipeline", "--pop", data_path("chain_pop.json"), "--omega", "3",
                      "--solution", data_path("chain_solution.json"), "--round", "4"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.out << r.err;
  const auto j = r.report();
  EXPECT_EQ(j["round"], 4);
  EXPECT_EQ(j["minimizers"].size(), 8u);
  for (double w : j["measure"]["weights"]) EXPECT_NEAR(w, 0.125, 1e-10);
}

TEST(Cli, PipelineAcceptsPrimalVectorSolutions) {
  const auto dir = std::filesystem::temp_directory_path() / "smk_cli_primal";
  std::filesystem::create_directories(dir);
  const auto pop = testing::chain_pop();
  const auto inst = build_relaxation(pop, 3);
  const Eigen::VectorXd v = inst.to_vector(testing::chain_moments_from_printed());
  std::ostringstream text;
  for (Eigen::Index k = 1; k < v.size(); ++k) text << format_double(v(k)) << "\n";
  io::write_text_file(dir / "x.txt", text.str());
  const auto r = run({"pipeline", "--pop", data_path("chain_pop.json"), "--omega", "3",
                      "--solution", (dir / "x.txt").string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.out << r.err;
  EXPECT_EQ(r.report()["minimizers"].size(), 8u);
}

TEST(Cli, ExtractAssembleAndAltMeasure) {
  const auto ea = run({"extract-assemble", "--input", data_path("two_clique_moments.json")});
  ASSERT_EQ(ea.code, cli::kExitOk) << ea.out << ea.err;
  EXPECT_EQ(ea.report()["measure"]["atoms"].size(), 4u);
  const auto alt = run({"altmeasure", "--input", data_path("two_clique_moments.json"),
                        "--cost", "random:20"});
  ASSERT_EQ(alt.code, cli::kExitOk) << alt.out << alt.err;
  EXPECT_EQ(alt.report()["weights"].size(), 2u);
  const auto fixed = run({"altmeasure", "--input", data_path("two_clique_moments.json"),
                          "--cost", "1,0,0,0"});
  ASSERT_EQ(fixed.code, cli::kExitOk);
  const std::vector<double> w = fixed.report()["weights"][0];
  EXPECT_NEAR(w[1], 0.5, 1e-8);
  EXPECT_NEAR(w[0], 0.0, 1e-8);
}

TEST(Cli, RelaxReportsStructure) {
  const auto r = run({"relax", "--pop", data_path("chain_pop.json"), "--omega", "3"});
  ASSERT_EQ(r.code, cli::kExitOk);
  const auto j = r.report();
  EXPECT_EQ(j["num_variables"], 70);
  EXPECT_EQ(j["block_sizes"], (std::vector<int>{10, 10, 10, 6, 6, 6}));
  EXPECT_NE(j["sdpa"].get<std::string>().find("69 = mDIM"), std::string::npos);
}

TEST(Cli, DumpMatricesWritesCsv) {
  const auto dir = std::filesystem::temp_directory_path() / "smk_cli_dump";
  std::filesystem::remove_all(dir);
  const auto r = run({"certify", "--input", data_path("chain_solution.json"), "--constraints",
                      data_path("chain_pop.json"), "--dump-matrices", dir.string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.out << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "clique1_moment.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "clique3_localizing1.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "overlap2_1.csv"));
}

TEST(Cli, ReportsAreDeterministic) {
  const std::vector<std::string> args = {"pipeline", "--pop", data_path("chain_pop.json"),
                                         "--omega", "3", "--seed", "9", "--max-iters", "2000"};
  EXPECT_EQ(run(args).out, run(args).out);
  const std::vector<std::string> alt = {"altmeasure", "--input",
                                        data_path("chain_solution.json"), "--cost", "random:10"};
  EXPECT_EQ(run(alt).out, run(alt).out);
}

TEST(Cli, UsageErrorsExit64) {
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"certify"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"certify", "--input", "x", "--bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"rip", "--input", "x", "--round", "99"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"nonsense"}).code, cli::kExitUsage);
}

TEST(Cli, HelpExitsZero) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_NE(r.out.find("certify"), std::string::npos);
}

TEST(Cli, MissingFileIsAnErrorWithReport) {
  const auto r = run({"certify", "--input", "/nonexistent/file.json"});
  EXPECT_EQ(r.code, cli::kExitError);
  const auto j = r.report();
  EXPECT_EQ(j["exit_code"], 1);
  EXPECT_EQ(j["status"], "error");
}

TEST(Cli, OutputFlagWritesTheReport) {
  const auto path = std::filesystem::temp_directory_path() / "smk_cli_report.json";
  const auto r = run({"rip", "--input", data_path("chain_pop.json"), "--output", path.string()});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(json::parse(io::read_text_file(path))["status"], "ok");
}

}  // namespace
}  // namespace smk
