#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "ceerlab/cli.hpp"

using namespace ceerlab;
using io::Json;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::SchemaError;
}

std::string data(const std::string& name) { return std::string(CEERLAB_DATA_DIR) + "/" + name; }

struct CliRun {
  int status;
  std::string out, err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int status = cli::execute(args, out, err);
  return {status, out.str(), err.str()};
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("ceerlab_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Nat fail_lines(const std::string& report) {
  std::istringstream in(report);
  Nat n = 0;
  for (std::string line; std::getline(in, line);) n += line.rfind("FAIL", 0) == 0;
  return n;
}

}  // namespace

TEST(JsonRoundTrip, OracleAndBases) {
  const OracleTable t = OracleTable::from_members(20, {2, 3, 5, 7, 11, 13, 17, 19}, "primes");
  const Json j = io::to_json(t);
  EXPECT_EQ(io::oracle_from_json(io::parse(io::dump(j))), t);
  const std::vector<OracleTable> bases{t, OracleTable::from_members(8, {4, 6}, "b1")};
  EXPECT_EQ(io::bases_from_json(io::bases_to_json(bases)), bases);

  Json wrong = j;
  wrong["bound"] = 5;
  EXPECT_EQ(kind_of([&] { io::oracle_from_json(wrong); }), ErrorKind::SchemaError);
  EXPECT_EQ(kind_of([] { io::bases_from_json(Json{{"tables", Json::array()}}); }), ErrorKind::SchemaError);
}

TEST(JsonRoundTrip, MalformedOracleFile) {
  EXPECT_EQ(kind_of([] { io::oracle_from_json(io::read_file(data("malformed_oracle.json"))); }),
            ErrorKind::SchemaError);
  EXPECT_EQ(kind_of([] { io::parse("{\"bits\": "); }), ErrorKind::SchemaError);
}

TEST(JsonRoundTrip, FrozenCeer) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    std::vector<Nat> labels(1 + rng() % 20);
    for (auto& l : labels) l = rng() % 6;
    const FrozenCeer r = FrozenCeer::from_labels(labels);
    EXPECT_EQ(io::frozen_from_json(io::parse(io::dump(io::to_json(r)))), r);
  }
  EXPECT_EQ(kind_of([] { io::frozen_from_json(Json{{"classes", Json::array()}}); }), ErrorKind::SchemaError);
  EXPECT_EQ(kind_of([] { io::frozen_from_json(Json{{"support", -1}, {"classes", Json::array()}}); }),
            ErrorKind::SchemaError);
}

TEST(JsonRoundTrip, StagedCeerKeepsItsTrace) {
  StagedCeer r(9);
  r.next_stage();
  r.collapse(0, 4);
  r.next_stage();
  r.collapse(4, 8);
  r.collapse(2, 3);
  r.next_stage();
  const Json j = io::to_json(r);
  const StagedCeer back = io::staged_from_json(io::parse(io::dump(j)));
  EXPECT_EQ(back.stage(), r.stage());
  EXPECT_EQ(back.trace(), r.trace());
  EXPECT_EQ(io::to_json(back), j);
  EXPECT_EQ(io::frozen_from_json(j), FrozenCeer(r.current()));

  Json tampered = j;
  tampered["classes"] = Json::array({Json::array({0, 4})});
  EXPECT_EQ(kind_of([&] { io::frozen_from_json(tampered); }), ErrorKind::SchemaError);
}

TEST(JsonRoundTrip, StoredStagedSnapshot) {
  const Json j = io::read_file(data("ceer_staged.json"));
  const StagedCeer r = io::staged_from_json(j);
  EXPECT_EQ(r.stage(), 3u);
  EXPECT_TRUE(r.related(0, 4));
  EXPECT_FALSE(r.related(0, 1));
  EXPECT_EQ(io::frozen_from_json(j), io::frozen_from_json(io::read_file(data("ceer_small.json"))));
}

TEST(JsonRoundTrip, Reductions) {
  for (const ReductionCandidate& f : {ReductionCandidate::table({0, 2, 0, 3}),
                                      ReductionCandidate::builtin("principal", {1, 4, 9}),
                                      ReductionCandidate::program(7, 100, 12)}) {
    EXPECT_EQ(io::reduction_from_json(io::parse(io::dump(io::to_json(f)))), f);
  }
  EXPECT_EQ(kind_of([] { io::reduction_from_json(Json{{"kind", "table"}, {"values", Json::array()}}); }),
            ErrorKind::SchemaError);
  EXPECT_EQ(kind_of([] { io::reduction_from_json(Json{{"kind", "magic"}, {"values", {1}}}); }),
            ErrorKind::SchemaError);
}

TEST(JsonRoundTrip, Family) {
  std::vector<FamilyLevel> levels(2);
  levels[0] = {0, 0, {{0, 2}}};
  levels[1] = {1, 2, {{3, 5, 9}, {4, 5, 11}}};
  const auto back = io::family_from_json(io::parse(io::dump(io::to_json(levels))));
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_EQ(back[k].n, levels[k].n);
    EXPECT_EQ(back[k].index_cut, levels[k].index_cut);
    EXPECT_EQ(back[k].members, levels[k].members);
  }
}

TEST(JsonRoundTrip, DarkTrace) {
  const DarkConstruction d = dark_run(96, 1500, 10);
  const Json j = io::to_json(d);
  const DarkConstruction back = io::dark_from_json(io::parse(io::dump(j)));
  EXPECT_EQ(back.trace(), d.trace());
  EXPECT_EQ(io::dump(io::to_json(back)), io::dump(j));

  Json bad = j;
  bad["records"][0]["action"] = "explode";
  EXPECT_EQ(kind_of([&] { io::dark_from_json(bad); }), ErrorKind::SchemaError);
}

TEST(Cli, TreeOnIdentityHasEightNodes) {
  const CliRun r = run({"tree", "--ceer", data("id.json"), "--depth", "3", "--format", "json"});
  ASSERT_EQ(r.status, cli::kPass) << r.err;
  const Json j = io::parse(r.out);
  EXPECT_EQ(j.at("nodes").size(), 8u);
  EXPECT_EQ(j.at("leftmost"), "000");
}

TEST(Cli, TreeDotAndStagedInput) {
  const CliRun dot = run({"tree", "--ceer", data("ceer_small.json"), "--depth", "4", "--format", "dot"});
  ASSERT_EQ(dot.status, cli::kPass) << dot.err;
  EXPECT_EQ(dot.out.rfind("digraph", 0), 0u);
  const CliRun staged = run({"tree", "--ceer", data("ceer_staged.json"), "--depth", "5", "--format", "json"});
  ASSERT_EQ(staged.status, cli::kPass) << staged.err;
  const CliRun frozen = run({"tree", "--ceer", data("ceer_small.json"), "--depth", "5", "--format", "json"});
  EXPECT_EQ(staged.out, frozen.out);
}

TEST(Cli, MalformedInputIsAnInputError) {
  const CliRun r = run({"encode-x", "--bases", data("malformed_oracle.json")});
  EXPECT_EQ(r.status, cli::kInputError);
  const Json e = io::parse(r.err);
  EXPECT_EQ(e.at("error"), "schema-error");
  EXPECT_TRUE(r.out.empty());

  const CliRun missing = run({"tree", "--ceer", data("no_such_file.json")});
  EXPECT_EQ(missing.status, cli::kInputError);
  EXPECT_TRUE(io::parse(missing.err).contains("error"));

  const CliRun usage = run({"tree"});
  EXPECT_EQ(usage.status, cli::kInputError);
  EXPECT_EQ(io::parse(usage.err).at("error"), "usage-error");
}

TEST(Cli, VerifyPassesWithoutFailLines) {
  const auto dir = fresh_dir("verify_ok");
  const CliRun r = run({"--out", dir.string(), "verify", "--source", data("ceer_small.json"), "--target",
                     data("ceer_target.json"), "--reduction", data("reduction_small.json")});
  ASSERT_EQ(r.status, cli::kPass) << r.out << r.err;
  const std::string report = slurp(dir / "report.txt");
  EXPECT_EQ(fail_lines(report), 0u);
  EXPECT_EQ(report, r.out);
  const Json verdict = io::read_file((dir / "verdict.json").string());
  EXPECT_EQ(verdict.at("verdict"), "certified-pass");
}

TEST(Cli, VerifyReportsTheWitness) {
  const CliRun r = run({"verify", "--source", data("ceer_small.json"), "--target", data("ceer_target.json"),
                     "--reduction", data("reduction_bad.json")});
  EXPECT_EQ(r.status, cli::kCheckFailure);
  EXPECT_GE(fail_lines(r.out), 1u);
}

TEST(Cli, CorruptedTraceReplayNamesCheckAndStage) {
  const auto dir = fresh_dir("dark_corrupt");
  ASSERT_EQ(run({"--out", dir.string(), "dark-run", "--support", "64", "--stages", "40"}).status, cli::kPass);
  Json trace = io::read_file((dir / "dark_trace.json").string());
  const Nat stage = pair(5, 50);
  trace["records"].push_back({{"stage", stage},
                              {"e", 5},
                              {"n", 50},
                              {"action", "collapse"},
                              {"pair", Json::array({14, 15})}});
  trace["stages"] = stage;
  const auto bad = dir / "bad_trace.json";
  io::write_file(bad.string(), io::dump(trace));
  const CliRun r = run({"dark-run", "--replay", bad.string()});
  EXPECT_EQ(r.status, cli::kCheckFailure);
  EXPECT_NE(r.out.find("FAIL witness-min-class at stage " + std::to_string(stage)), std::string::npos) << r.out;
}

TEST(Cli, RepeatedRunsAreIdentical) {
  const std::vector<std::vector<std::string>> commands{
      {"dark-run", "--support", "64", "--stages", "500"},
      {"encode-x", "--bases", data("bases.json")},
      {"nobasis-build", "--b", data("oracle_B.json"), "--support", "120", "--stages", "30", "--k-cut", "3"},
  };
  int k = 0;
  for (const auto& command : commands) {
    std::vector<std::string> names;
    std::vector<std::string> outputs;
    for (int rep = 0; rep < 2; ++rep) {
      const auto dir = fresh_dir("repeat_" + std::to_string(k) + "_" + std::to_string(rep));
      std::vector<std::string> args{"--out", dir.string()};
      args.insert(args.end(), command.begin(), command.end());
      const CliRun r = run(args);
      ASSERT_NE(r.status, cli::kInputError) << r.err;
      std::string all = r.out;
      std::vector<std::filesystem::path> files;
      for (const auto& entry : std::filesystem::directory_iterator(dir)) files.push_back(entry.path());
      std::sort(files.begin(), files.end());
      for (const auto& p : files) all += p.filename().string() + "\n" + slurp(p);
      outputs.push_back(all);
    }
    EXPECT_EQ(outputs[0], outputs[1]) << command[0];
    ++k;
  }
}
