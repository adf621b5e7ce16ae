#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <sstream>

#include "pipeline.hpp"
#include "scholimetric/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = scholimetric::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

bool single_error_line(const std::string& err) {
  return err.rfind("error: ", 0) == 0 && err.find('\n') == err.size() - 1;
}

const std::vector<std::string> kDesk = {"--fixture", "forestry-desk", "--window", "2005:2010:2011"};

std::vector<std::string> desk(std::vector<std::string> head) {
  head.insert(head.end(), kDesk.begin(), kDesk.end());
  return head;
}

}  // namespace

TEST_CASE("help and usage errors") {
  const Result help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("rec-table") != std::string::npos);

  const Result none = run({});
  CHECK(none.code == 2);
  CHECK(single_error_line(none.err));

  const Result unknown = run({"benchmark", "--no-such-flag"});
  CHECK(unknown.code == 2);
  CHECK(single_error_line(unknown.err));
}

TEST_CASE("validation failures exit 2 with one error line") {
  const std::vector<std::vector<std::string>> cases = {
      {"benchmark", "--fixture", "forestry-desk", "--field", "0705", "--window", "2010:2005:2011"},
      {"benchmark", "--fixture", "forestry-desk", "--field", "0705"},
      {"benchmark", "--fixture", "forestry-desk", "--field", "07x5", "--window", "2005:2010:2011"},
      {"benchmark", "--fixture", "no-such-fixture", "--field", "0705", "--window", "2005:2010:2011"},
      {"benchmark", "--pubs", "/nonexistent.jsonl", "--cites", "/nonexistent.jsonl", "--field", "0705", "--window",
       "2005:2010:2011"},
      desk({"rec-table", "--field", "0705", "--institution", "nobody"}),
      desk({"metrics", "--eligibility", "loose"}),
      {"confusion", "--ratings", std::string(SCHOLIMETRIC_FIXTURE_DIR) + "/dentistry_ratings.csv", "--bands", "4;5;6-7"},
      {"confusion", "--ratings", std::string(SCHOLIMETRIC_FIXTURE_DIR) + "/dentistry_ratings.csv", "--bands", "4;5+"},
      {"synth", "--out", (fs::temp_directory_path() / "scholimetric-noseed").string()},
  };
  for (const auto& args : cases) {
    INFO(args.front() << " " << args[1]);
    const Result r = run(args);
    CHECK(r.code == 2);
    CHECK(single_error_line(r.err));
  }
}

TEST_CASE("synth without a seed is refused") {
  const Result r = run({"synth", "--out", (fs::temp_directory_path() / "scholimetric-noseed").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("--seed") != std::string::npos);
}

TEST_CASE("metrics on an empty selection") {
  const Result r = run({"metrics", "--fixture", "forestry-desk", "--window", "1990:1995:2011"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\"publications\": 0") != std::string::npos);
  CHECK(r.out.find("\"h\": 0") != std::string::npos);
  CHECK(r.out.find("\"h2\": 0") != std::string::npos);
}

TEST_CASE("game names the pool size when min-size is too large") {
  const Result r = run(desk({"game", "--field", "0705", "--institution", "scu", "--min-size", "500"}));
  CHECK(r.code == 2);
  CHECK(single_error_line(r.err));
  CHECK(r.err.find("66") != std::string::npos);
}

TEST_CASE("fixture directory can be overridden from the environment") {
  const fs::path root = pipeline::fresh_dir("fixture-env");
  fs::copy(fs::path(SCHOLIMETRIC_FIXTURE_DIR) / "forestry-desk", root / "renamed");
  ::setenv("SCHOLIMETRIC_FIXTURES", root.c_str(), 1);
  const Result moved = run({"benchmark", "--fixture", "renamed", "--field", "0705", "--window", "2005:2010:2011"});
  const Result original = run(desk({"benchmark", "--field", "0705"}));
  ::unsetenv("SCHOLIMETRIC_FIXTURES");
  CHECK(moved.code == 0);
  CHECK(original.code == 2);  // the bundled name is not under the override
  CHECK(run(desk({"benchmark", "--field", "0705"})).code == 0);
}

TEST_CASE("stdout output matches the written files") {
  const fs::path dir = pipeline::fresh_dir("stdout-vs-file");
  const Result to_stdout = run(desk({"rec-table", "--field", "0705", "--institution", "scu"}));
  const Result to_dir = run(desk({"rec-table", "--field", "0705", "--institution", "scu", "--out", dir.string()}));
  REQUIRE(to_stdout.code == 0);
  REQUIRE(to_dir.code == 0);
  CHECK(pipeline::read_tree(dir).at("rec_table.txt") == to_stdout.out);
}

TEST_CASE("desk pipeline reproduces the golden directory") {
  const fs::path golden = SCHOLIMETRIC_GOLDEN_DIR;
  const fs::path out = pipeline::fresh_dir("golden-run");
  const fs::path fixtures = SCHOLIMETRIC_FIXTURE_DIR;
  const auto inputs_before = pipeline::read_tree(fixtures);

  for (const auto& step : pipeline::run_desk_pipeline(out)) {
    INFO(step.args.front() << ": " << step.err);
    REQUIRE(step.exit_code == 0);
  }
  CHECK(pipeline::read_tree(fixtures) == inputs_before);

  const auto produced = pipeline::read_tree(out);
  if (std::getenv("SCHOLIMETRIC_UPDATE_GOLDEN") != nullptr) {
    fs::remove_all(golden);
    fs::create_directories(golden);
    fs::copy(out, golden, fs::copy_options::recursive);
    WARN("golden directory regenerated at " << golden);
  }
  const auto expected = pipeline::read_tree(golden);
  REQUIRE(expected.size() == produced.size());
  for (const auto& [name, bytes] : expected) {
    INFO(name);
    REQUIRE(produced.count(name) == 1);
    CHECK(produced.at(name) == bytes);
  }
}

TEST_CASE("repeated runs are byte-identical") {
  const fs::path a = pipeline::fresh_dir("determinism-a");
  const fs::path b = pipeline::fresh_dir("determinism-b");
  for (const auto& step : pipeline::run_desk_pipeline(a)) REQUIRE(step.exit_code == 0);
  for (const auto& step : pipeline::run_desk_pipeline(b)) REQUIRE(step.exit_code == 0);
  CHECK(pipeline::read_tree(a) == pipeline::read_tree(b));
}
