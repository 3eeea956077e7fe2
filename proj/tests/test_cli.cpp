// Integration tests that drive the installed CLI binary end to end. The
// binary path arrives via the TCMESH_CLI environment variable, set by ctest.

#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "tcmesh/util.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

const char* cli_path() {
  const char* path = std::getenv("TCMESH_CLI");
  REQUIRE_MESSAGE(path != nullptr, "TCMESH_CLI must point at the tcmesh binary");
  return path;
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "tcmesh_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  static int counter = 0;
  const fs::path out_file = scratch_dir() / ("stdout_" + std::to_string(counter));
  const fs::path err_file = scratch_dir() / ("stderr_" + std::to_string(counter));
  ++counter;
  const std::string command = env_prefix + " \"" + std::string(cli_path()) + "\" " + args +
                              " > " + out_file.string() + " 2> " + err_file.string();
  const int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = tcmesh::read_file(out_file);
  result.err = tcmesh::read_file(err_file);
  return result;
}

std::string generate_dataset(const std::string& name, const std::string& extra = "") {
  const fs::path dir = scratch_dir() / name;
  const auto result =
      run_cli("generate --out " + dir.string() + " --suppliers 200 --seed 42 " + extra);
  REQUIRE(result.exit_code == 0);
  return dir.string();
}

}  // namespace

TEST_CASE("generate writes the three dataset files") {
  const auto dir = generate_dataset("gen_basic");
  CHECK(fs::exists(fs::path(dir) / "balance.csv"));
  CHECK(fs::exists(fs::path(dir) / "invoices.csv"));
  CHECK(fs::exists(fs::path(dir) / "truth.json"));
}

TEST_CASE("generate is reproducible byte for byte") {
  const auto dir_a = generate_dataset("gen_a");
  const auto dir_b = generate_dataset("gen_b");
  for (const char* name : {"balance.csv", "invoices.csv", "truth.json"}) {
    CAPTURE(name);
    CHECK(tcmesh::read_file(fs::path(dir_a) / name) ==
          tcmesh::read_file(fs::path(dir_b) / name));
  }
  const auto dir_c = generate_dataset("gen_c", "--beta 0.5");
  CHECK(tcmesh::read_file(fs::path(dir_a) / "balance.csv") !=
        tcmesh::read_file(fs::path(dir_c) / "balance.csv"));
}

TEST_CASE("report succeeds and is byte-identical across thread settings") {
  const auto data = generate_dataset("rep_data", "--boom-bust");
  const fs::path out_1 = scratch_dir() / "rep_out1";
  const fs::path out_8 = scratch_dir() / "rep_out8";
  const std::string base = "report --balance " + data + "/balance.csv --invoices " + data +
                           "/invoices.csv --matching 0.8:1.2 --out ";

  const auto first = run_cli(base + out_1.string(), "TCMESH_THREADS=1");
  REQUIRE(first.exit_code == 0);
  const auto second = run_cli(base + out_8.string(), "TCMESH_THREADS=8");
  REQUIRE(second.exit_code == 0);

  CHECK(first.out == second.out);
  for (const auto& entry : fs::directory_iterator(out_1)) {
    const auto name = entry.path().filename();
    CAPTURE(name.string());
    CHECK(tcmesh::read_file(entry.path()) == tcmesh::read_file(out_8 / name));
  }

  // stdout carries the same document that landed in report.json.
  const auto doc = nlohmann::json::parse(first.out);
  CHECK(doc["matching"]["retained"] == 200);
}

TEST_CASE("report exits 2 on unreadable input") {
  const auto result = run_cli("report --balance /nonexistent.csv --invoices /nonexistent.csv"
                              " --out " + (scratch_dir() / "never").string());
  CHECK(result.exit_code == 2);
  CHECK(!result.err.empty());
}

TEST_CASE("report exits 3 when no supplier passes the filter") {
  const auto data = generate_dataset("rep_narrow");
  const auto result = run_cli("report --balance " + data + "/balance.csv --invoices " + data +
                              "/invoices.csv --matching 0.0001:0.0002 --out " +
                              (scratch_dir() / "narrow_out").string());
  CHECK(result.exit_code == 3);
  CHECK(result.err.find("no suppliers pass filter") != std::string::npos);
}

TEST_CASE("summary prints network and filtered statistics") {
  const auto data = generate_dataset("sum_data");
  const auto result = run_cli("summary --balance " + data + "/balance.csv --invoices " + data +
                              "/invoices.csv");
  REQUIRE(result.exit_code == 0);
  const auto doc = nlohmann::json::parse(result.out);
  CHECK(doc["network"]["n_suppliers"] == 200);
  CHECK(doc["retained_suppliers"] == 200);
}

TEST_CASE("matching subcommand emits the completeness table") {
  const auto data = generate_dataset("match_data");
  const auto result = run_cli("matching --balance " + data + "/balance.csv --invoices " + data +
                              "/invoices.csv");
  REQUIRE(result.exit_code == 0);
  CHECK(result.out.rfind("supplier_id,incoming_total_eur,sales_2007_eur,ratio,in_range\n", 0) ==
        0);
  // Header plus one row per supplier.
  CHECK(std::count(result.out.begin(), result.out.end(), '\n') == 201);
}

TEST_CASE("degrees subcommand prints the in-degree histogram") {
  const auto data = generate_dataset("deg_data");
  const auto result = run_cli("degrees --balance " + data + "/balance.csv --invoices " + data +
                              "/invoices.csv");
  REQUIRE(result.exit_code == 0);
  CHECK(result.out.rfind("degree,count\n", 0) == 0);

  const fs::path out = scratch_dir() / "deg_out";
  const auto filtered = run_cli("degrees --filtered --balance " + data + "/balance.csv" +
                                " --invoices " + data + "/invoices.csv --out " + out.string());
  REQUIRE(filtered.exit_code == 0);
  for (const char* name : {"in_degree_hist.csv", "out_degree_hist.csv", "in_degree_ccdf.csv"}) {
    CAPTURE(name);
    CHECK(fs::exists(out / name));
  }
}

TEST_CASE("--version prints the tool version and exits cleanly") {
  const auto result = run_cli("--version");
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("0.1.0") != std::string::npos);
}

TEST_CASE("growth subcommand emits both periods by default") {
  const auto data = generate_dataset("growth_data");
  const auto result = run_cli("growth --balance " + data + "/balance.csv --invoices " + data +
                              "/invoices.csv");
  REQUIRE(result.exit_code == 0);
  CHECK(result.out.rfind("supplier_id,period,predicted,actual,usable_weight_fraction\n", 0) == 0);
  CHECK(result.out.find("2006-2007") != std::string::npos);
  CHECK(result.out.find("2007-2008") != std::string::npos);
  // One row per supplier per period, plus the header.
  CHECK(std::count(result.out.begin(), result.out.end(), '\n') == 401);
}

TEST_CASE("cagr and correlations subcommands agree on the point count") {
  const auto data = generate_dataset("cagr_data");
  const auto cagr = run_cli("cagr --balance " + data + "/balance.csv --invoices " + data +
                            "/invoices.csv");
  REQUIRE(cagr.exit_code == 0);
  CHECK(std::count(cagr.out.begin(), cagr.out.end(), '\n') == 201);

  const auto corr = run_cli("correlations --balance " + data + "/balance.csv --invoices " +
                            data + "/invoices.csv --group rating");
  REQUIRE(corr.exit_code == 0);
  const auto doc = nlohmann::json::parse(corr.out);
  std::size_t total = 0;
  for (const auto& row : doc["rating"]) total += row["n"].get<std::size_t>();
  CHECK(total == 200);
}

TEST_CASE("strict mode turns malformed rows into a failure") {
  const auto data = generate_dataset("strict_data");
  // Corrupt one row.
  auto bytes = tcmesh::read_file(fs::path(data) / "balance.csv");
  bytes += "BROKEN,ROW\n";
  tcmesh::write_file(fs::path(data) / "balance_bad.csv", bytes);

  const auto lenient = run_cli("summary --balance " + data + "/balance_bad.csv --invoices " +
                               data + "/invoices.csv");
  CHECK(lenient.exit_code == 0);
  CHECK(lenient.err.find("missing column") != std::string::npos);

  const auto strict = run_cli("summary --strict --balance " + data + "/balance_bad.csv" +
                              " --invoices " + data + "/invoices.csv");
  CHECK(strict.exit_code == 2);
}

TEST_CASE("unknown flags exit with the input-error code") {
  const auto result = run_cli("report --no-such-flag");
  CHECK(result.exit_code == 2);
}
