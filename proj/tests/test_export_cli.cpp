#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "fmab/export.hpp"
#include "fmab/harness.hpp"

using namespace fmab;
namespace fs = std::filesystem;

namespace {

const fs::path kWorkDir = fs::temp_directory_path() / "fmab_cli_test";

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FMAB_CLI_PATH) + " " + args + " >" +
                          (kWorkDir / "stdout.txt").string() + " 2>" + (kWorkDir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string cli_stdout() { return read_text_file((kWorkDir / "stdout.txt").string()); }

}  // namespace

TEST_CASE("table csv and json round trips") {
  fs::create_directories(kWorkDir);
  Table table({"name", "value", "count"});
  table.add_row({std::string("pi"), 3.14159265358979312, static_cast<long long>(1)});
  table.add_row({std::string("tiny"), 1.2345678901234567e-12, static_cast<long long>(-4)});

  const std::string csv_path = (kWorkDir / "table.csv").string();
  export_table(table, csv_path, ExportFormat::Csv);
  const Table back = import_csv(csv_path);
  CHECK(back.columns() == table.columns());
  REQUIRE(back.row_count() == table.row_count());
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    for (std::size_t c = 0; c < table.columns().size(); ++c) {
      CHECK(Table::format_cell(back.rows()[r][c]) == Table::format_cell(table.rows()[r][c]));
    }
  }
  // 17 significant digits reproduce doubles exactly.
  CHECK(std::stod(Table::format_cell(back.rows()[0][1])) == 3.14159265358979312);

  Table empty({"a", "b"});
  CHECK(empty.to_csv() == "a,b\n");

  const std::string json_path = (kWorkDir / "table.json").string();
  export_table(table, json_path, ExportFormat::Json);
  CHECK(read_text_file(json_path).find("3.14159265358979") != std::string::npos);
}

TEST_CASE("aggregate export round trip preserves values") {
  RewardModel rewards({0.9, 0.5, 0.5}, RewardKind::Bernoulli);
  RunConfig config(ErHomProcessSpec{3, 0.6}, rewards, 120, PolicyConfig(40, NavigationMode::LazyWalk), 77);
  const MonteCarloResult mc = run_monte_carlo(config, 8, 2);
  const Table table = mc.aggregate_table("series");
  const std::string path = (kWorkDir / "aggregate.csv").string();
  export_table(table, path, ExportFormat::Csv);
  const Table back = import_csv(path);
  REQUIRE(back.row_count() == table.row_count());
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    CHECK(std::stod(Table::format_cell(back.rows()[r][2])) == mc.mean_rate[r]);
  }
}

TEST_CASE("cli help and exit codes") {
  fs::create_directories(kWorkDir);
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("bounds --help") == 0);
  CHECK(run_cli("definitely-not-a-command") == 1);
  CHECK(run_cli("simulate --config /nonexistent.json") == 2);
  CHECK(run_cli("diag-kernel --n 5 --p 0") == 1);  // p = 0 rejected by the closed form
}

TEST_CASE("cli diag-kernel prints the closed-form values") {
  CHECK(run_cli("diag-kernel --n 5 --p 0.3") == 0);
  const std::string out = cli_stdout();
  CHECK(out.find("diagonal 0.554620") != std::string::npos);
  CHECK(out.find("lambda2 0.443275") != std::string::npos);
  CHECK(out.find("gamma 0.556725") != std::string::npos);
}

TEST_CASE("cli bounds emits the equal-gap identification bound") {
  CHECK(run_cli("bounds --n 10 --gap 0.2 --delta 0.1") == 0);
  const std::string out = cli_stdout();
  CHECK(out.find("identification_time_lower_bound,37.078") != std::string::npos);
  CHECK(out.find("traversal_floor,9") != std::string::npos);
}

TEST_CASE("cli simulate is reproducible byte for byte") {
  fs::create_directories(kWorkDir);
  const std::string config_path = (kWorkDir / "config.json").string();
  RewardModel rewards({0.9, 0.5, 0.5, 0.5}, RewardKind::Bernoulli);
  RunConfig config(ErHomProcessSpec{4, 0.5}, rewards, 200, PolicyConfig(60, NavigationMode::LazyWalk), 11);
  config.record_trace = true;
  write_text_file(config_path, run_config_to_json(config));

  const fs::path out_a = kWorkDir / "run_a";
  const fs::path out_b = kWorkDir / "run_b";
  fs::remove_all(out_a);
  fs::remove_all(out_b);
  CHECK(run_cli("simulate --config " + config_path + " --runs 4 --out " + out_a.string()) == 0);
  CHECK(run_cli("simulate --config " + config_path + " --runs 4 --jobs 2 --out " + out_b.string()) == 0);
  for (const char* name : {"trace.csv", "aggregate.csv", "summary.json"}) {
    CHECK(read_text_file((out_a / name).string()) == read_text_file((out_b / name).string()));
  }

  // The manifest records the resolved config and output hashes.
  const std::string manifest = read_text_file((out_a / "manifest.json").string());
  CHECK(manifest.find("\"command\": \"simulate\"") != std::string::npos);
  CHECK(manifest.find("trace.csv") != std::string::npos);

  // Trace has exactly horizon rows (plus header).
  const Table trace = import_csv((out_a / "trace.csv").string());
  CHECK(trace.row_count() == 200);

  // A different seed changes the trace.
  const fs::path out_c = kWorkDir / "run_c";
  fs::remove_all(out_c);
  CHECK(run_cli("simulate --config " + config_path + " --runs 4 --seed 12 --out " + out_c.string()) == 0);
  CHECK(read_text_file((out_a / "trace.csv").string()) != read_text_file((out_c / "trace.csv").string()));
}

TEST_CASE("cli rejects malformed config with exit 1") {
  fs::create_directories(kWorkDir);
  const std::string bad_path = (kWorkDir / "bad.json").string();
  write_text_file(bad_path, "{\"graph_process\": {\"kind\": \"er_hom\", \"n\": 4}}");
  CHECK(run_cli("simulate --config " + bad_path) == 1);
}
