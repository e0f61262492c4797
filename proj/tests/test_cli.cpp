#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixpave/cli.hpp"

using namespace fixpave;
using namespace fixpave::cli;

namespace {

std::string read_problem(const std::string& name) {
  std::ifstream in(std::string(FIXPAVE_PROBLEMS) + "/" + name, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Json result_of(const Outcome& o) { return Json::parse(o.payload); }

std::string error_path(std::string_view spec) {
  const Outcome o = solve(spec, {});
  EXPECT_EQ(o.exit_code, kInvalidSpec) << spec;
  return o.diagnostics.substr(0, o.diagnostics.find(':'));
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(FIXPAVE_BINARY) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, BundledProblemsSolve) {
  for (const auto& entry : std::filesystem::directory_iterator(FIXPAVE_PROBLEMS)) {
    const Outcome o = solve(read_problem(entry.path().filename().string()), {});
    EXPECT_EQ(o.exit_code, kOk) << entry.path() << ": " << o.diagnostics;
    EXPECT_FALSE(o.payload.empty());
  }
}

TEST(Cli, ProblemResults) {
  const Json seg = result_of(solve(read_problem("segment_example.json"), {}));
  EXPECT_EQ(seg["kind"], "pave");
  EXPECT_EQ(seg["paving"]["level"], 12);
  EXPECT_FALSE(seg["paving"]["candidates"].empty());

  const Json partial = result_of(solve(read_problem("partial_halving.json"), {}));
  EXPECT_EQ(partial["status"], "EmptyCertified");
  EXPECT_GE(partial["paving"]["delta"].get<double>(), 0x1p-8);

  const Json cosine = result_of(solve(read_problem("cosine_iteration.json"), {}));
  EXPECT_NEAR(cosine["limit"][0].get<double>(), 0.7390851332, 1e-5);

  const Json reach = result_of(solve(read_problem("reachability.json"), {}));
  EXPECT_EQ(reach["lfp"], "{1,2,3}");

  const Json none = result_of(solve(read_problem("saddle_none.json"), {}));
  EXPECT_EQ(none["status"], "EmptyCertified");

  const Json mm = result_of(solve(read_problem("minimax_uv.json"), {}));
  EXPECT_NEAR(mm["maxmin"].get<double>(), 0.0, 1e-3);
  EXPECT_NEAR(mm["minmax"].get<double>(), 0.25, 1e-3);
}

TEST(Cli, MalformedJsonReportsByteOffset) {
  const Outcome o = solve("{\"kind\": \"pave\",, }", {});
  EXPECT_EQ(o.exit_code, kInvalidSpec);
  EXPECT_NE(o.diagnostics.find("byte"), std::string::npos) << o.diagnostics;
  EXPECT_TRUE(o.payload.empty());
}

TEST(Cli, SchemaErrorsNamePointer) {
  EXPECT_EQ(error_path(R"({"kind": "teleport"})"), "/kind");
  EXPECT_EQ(error_path(R"({"kind": "pave", "map": {"name": "segment_example"}, "config": {"delta_min": -1}})"),
            "/config/delta_min");
  EXPECT_EQ(error_path(R"({"kind": "pave", "map": {"name": "segment_example"}, "config": {"threads": 0}})"),
            "/config/threads");
  EXPECT_EQ(error_path(R"({"kind": "pave", "map": {"name": "segment_example"}, "output": {"format": "xml"}})"),
            "/output/format");
  EXPECT_EQ(error_path(R"({"kind": "pave", "map": {"name": "pointmap", "domain": [[0, 1]], "components": ["y"]}})")
                .rfind("/map", 0),
            0u);
  EXPECT_EQ(error_path(R"({"kind": "nash", "game": {"mode": "saddle", "players": [{"name": "u", "box": [[0, 1]]},
              {"name": "v", "box": [[0, 1]]}], "payoff": "u"}})"),
            "/game/mode");
  EXPECT_EQ(error_path(R"({"kind": "pave", "map": {"name": "segment_example"}, "domain": [[1, 0]]})"), "/domain/0");
}

TEST(Cli, BudgetExceededKeepsPartialResult) {
  Overrides flags;
  flags.max_boxes = 4;
  const Outcome o = solve(read_problem("segment_example.json"), flags);
  EXPECT_EQ(o.exit_code, kBudgetExceeded);
  const Json j = result_of(o);
  EXPECT_EQ(j["paving"]["complete"], false);
  EXPECT_FALSE(j["paving"]["candidates"].empty());
}

TEST(Cli, OverridePrecedence) {
  const std::string spec = R"({"kind": "pave", "map": {"name": "segment_example"},
    "config": {"delta_min": 0.01, "max_boxes": 500, "threads": 2, "tol": 0.5},
    "output": {"format": "csv", "path": "spec.csv"}})";

  const EffectiveConfig base = effective_config(spec, {});
  EXPECT_EQ(base.pave.delta_min, 0.01);
  EXPECT_EQ(base.pave.max_boxes, 500u);
  EXPECT_EQ(base.pave.threads, 2u);
  EXPECT_EQ(base.tol, 0.5);
  EXPECT_EQ(base.format, "csv");
  EXPECT_EQ(base.path, "spec.csv");

  EXPECT_EQ(effective_config(spec, {}, "6").pave.threads, 6u);
  Overrides flags;
  flags.threads = 3;
  flags.delta_min = 0.001;
  flags.max_boxes = 9;
  flags.tol = 0.25;
  flags.format = "json";
  flags.output = "flag.json";
  const EffectiveConfig over = effective_config(spec, flags, "6");
  EXPECT_EQ(over.pave.threads, 3u);
  EXPECT_EQ(over.pave.delta_min, 0.001);
  EXPECT_EQ(over.pave.max_boxes, 9u);
  EXPECT_EQ(over.tol, 0.25);
  EXPECT_EQ(over.format, "json");
  EXPECT_EQ(over.path, "flag.json");

  const EffectiveConfig defaults = effective_config(R"({"kind": "pave", "map": {"name": "segment_example"}})", {});
  EXPECT_EQ(defaults.pave.threads, PaveConfig{}.threads);
  EXPECT_EQ(defaults.pave.delta_min, PaveConfig{}.delta_min);
  EXPECT_FALSE(defaults.tol.has_value());
  EXPECT_EQ(defaults.format, "json");

  EXPECT_THROW(effective_config(spec, {}, "zero"), SchemaError);
}

TEST(Cli, CsvOutput) {
  Overrides flags;
  flags.format = "csv";
  const Outcome o = solve(read_problem("segment_example.json"), flags);
  ASSERT_EQ(o.exit_code, kOk);
  EXPECT_EQ(o.payload.rfind("level,lo,hi\n12,", 0), 0u) << o.payload.substr(0, 40);

  const Outcome two = solve(read_problem("nash_pursuit.json"), flags);
  ASSERT_EQ(two.exit_code, kOk);
  EXPECT_EQ(two.payload.rfind("level,lo0,hi0,lo1,hi1\n", 0), 0u);

  EXPECT_EQ(solve(read_problem("cosine_iteration.json"), flags).exit_code, kInvalidSpec);
}

TEST(Cli, ThreadCountDoesNotChangeOutput) {
  for (const char* name : {"segment_example.json", "saddle_uv.json", "nash_pursuit.json"}) {
    Overrides one, many;
    one.threads = 1;
    many.threads = 8;
    const Outcome a = solve(read_problem(name), one);
    const Outcome b = solve(read_problem(name), many);
    EXPECT_EQ(a.exit_code, b.exit_code);
    EXPECT_EQ(a.payload, b.payload) << name;
  }
}

TEST(Cli, RunWritesOutputFile) {
  const auto dir = std::filesystem::temp_directory_path() / "fixpave_cli_test";
  std::filesystem::create_directories(dir);
  Overrides flags;
  flags.output = (dir / "out.json").string();
  std::ostringstream out, err;
  EXPECT_EQ(run(std::string(FIXPAVE_PROBLEMS) + "/chain.json", flags, out, err), kOk);
  EXPECT_TRUE(out.str().empty());
  std::ifstream in(*flags.output);
  EXPECT_EQ(Json::parse(in)["lfp"], "a");

  EXPECT_EQ(run((dir / "missing.json").string(), {}, out, err), kInvalidSpec);
  std::filesystem::remove_all(dir);
}

TEST(CliBinary, ExitCodes) {
  const std::string problems = FIXPAVE_PROBLEMS;
  EXPECT_EQ(run_binary(problems + "/chain.json"), 0);
  EXPECT_EQ(run_binary(problems + "/segment_example.json --max-boxes 4"), 3);
  EXPECT_EQ(run_binary(problems + "/does_not_exist.json"), 2);
  EXPECT_EQ(run_binary(problems + "/chain.json --threads 0"), 2);
  EXPECT_EQ(run_binary(problems + "/chain.json --format yaml"), 2);

  const auto bad = std::filesystem::temp_directory_path() / "fixpave_bad_spec.json";
  std::ofstream(bad) << "{ not json";
  EXPECT_EQ(run_binary(bad.string()), 2);
  std::filesystem::remove(bad);
}
