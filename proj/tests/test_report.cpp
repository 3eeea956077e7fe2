#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "tcmesh/growth.hpp"
#include "tcmesh/report.hpp"
#include "tcmesh/synth.hpp"
#include "tcmesh/util.hpp"

using namespace tcmesh;
using namespace tcmesh::test;

namespace {

struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& name)
      : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

// Boom-bust synthetic inputs on disk, reused across the report tests.
struct ReportFixture {
  TempDir dir;
  ReportOptions options;

  ReportFixture() : dir("tcmesh_test_report") {
    SynthConfig config;
    config.n_suppliers = 250;
    config.set_beta(0.9);
    config.sigma_supplier = 0.02;
    config.sigma_customer = 0.08;
    config.seed = 42;
    write_generated(scenario_boom_bust(config), dir.path / "data");
    options.balance_path = dir.path / "data" / "balance.csv";
    options.invoices_path = dir.path / "data" / "invoices.csv";
    options.out_dir = dir.path / "out";
    options.svg = true;
  }
};

}  // namespace

TEST_CASE("run_report produces the full document and side outputs") {
  ReportFixture fixture;
  const auto result = run_report(fixture.options);
  REQUIRE(result.exit_code == kExitOk);
  const auto& doc = result.document;

  CHECK(doc["schema_version"] == 1);
  CHECK(doc["matching"]["retained"] == 250);
  CHECK(doc["growth"]["2006-2007"]["scatter_stats"]["centroid_quadrant"] == 1);
  CHECK(doc["growth"]["2007-2008"]["scatter_stats"]["centroid_quadrant"] == 3);
  CHECK(doc["cagr"]["n_points"] == 250);
  CHECK(doc["correlations"].contains("rating"));
  CHECK(doc["correlations"].contains("rating_size"));
  CHECK(doc["correlations"].contains("sector"));

  for (const char* name :
       {"report.json", "matching.csv", "in_degree_ccdf.csv", "in_degree_hist.csv",
        "out_degree_hist.csv", "growth_2006-2007.csv", "growth_2007-2008.csv", "cagr.csv",
        "correlations_rating.csv", "growth_2006-2007.svg", "cagr.svg"}) {
    CAPTURE(name);
    CHECK(std::filesystem::exists(fixture.options.out_dir / name));
  }

  // The file on disk is exactly the returned document.
  CHECK(read_file(fixture.options.out_dir / "report.json") == doc.dump(2) + "\n");
}

TEST_CASE("report quantities reproduce the underlying operations") {
  ReportFixture fixture;
  const auto result = run_report(fixture.options);
  REQUIRE(result.exit_code == kExitOk);

  const auto balance = parse_balance_file(fixture.options.balance_path);
  const auto invoices = parse_invoices_file(fixture.options.invoices_path);
  const auto dataset = Dataset::assemble(balance.records, invoices.records);
  const auto net = build_network(dataset);

  CHECK(result.document["network"] == to_json(network_summary(net)));

  const auto filter = filter_by_matching(net, 0.8, 1.2);
  CHECK(result.document["matching"]["retained"] == filter.retained.size());

  const auto scatter = build_scatter(filter.subnetwork, filter.retained, Period::second());
  CHECK(result.document["growth"]["2007-2008"]["n_points"] == scatter.points.size());
  CHECK(result.document["growth"]["2007-2008"]["scatter_stats"] ==
        to_json(scatter_stats(scatter.points)));

  const auto cagr = cagr_points(filter.subnetwork, filter.retained);
  const auto samples = to_correlation_samples(cagr.points);
  CHECK(result.document["correlations"]["rating"] ==
        to_json(grouped_correlations(samples, Grouping::rating)));
}

TEST_CASE("report bytes are identical across runs and thread counts") {
  ReportFixture fixture;
  fixture.options.threads = 1;
  const auto first = run_report(fixture.options);
  const auto bytes_1 = read_file(fixture.options.out_dir / "report.json");

  fixture.options.threads = 8;
  const auto second = run_report(fixture.options);
  const auto bytes_8 = read_file(fixture.options.out_dir / "report.json");

  REQUIRE(first.exit_code == kExitOk);
  REQUIRE(second.exit_code == kExitOk);
  CHECK(first.document == second.document);
  CHECK(bytes_1 == bytes_8);
}

TEST_CASE("empty matching filter exits with the empty-result code") {
  TempDir dir("tcmesh_test_report_empty");
  // One supplier at ratio 0.5: outside (0.8, 1.2).
  std::vector<BalanceRecord> balances;
  add_flat_firm(balances, "S", 1000, 0);
  add_flat_firm(balances, "C1", 800, 400);
  std::ofstream balance_out(dir.path / "balance.csv");
  write_balance_csv(balance_out, balances);
  balance_out.close();
  std::vector<InvoiceRecord> invoices{inv("S", "C1", 500)};
  std::ofstream invoices_out(dir.path / "invoices.csv");
  write_invoices_csv(invoices_out, invoices);
  invoices_out.close();

  ReportOptions options;
  options.balance_path = dir.path / "balance.csv";
  options.invoices_path = dir.path / "invoices.csv";
  options.out_dir = dir.path / "out";
  const auto result = run_report(options);
  CHECK(result.exit_code == kExitEmptyResult);
  REQUIRE(!result.messages.empty());
  CHECK(result.messages.back() == "no suppliers pass filter");
}

TEST_CASE("unparseable input exits with the input-error code") {
  TempDir dir("tcmesh_test_report_bad");
  write_file(dir.path / "balance.csv", "not,a,valid,header\n");
  write_file(dir.path / "invoices.csv", std::string(kInvoiceHeader) + "\n");

  ReportOptions options;
  options.balance_path = dir.path / "balance.csv";
  options.invoices_path = dir.path / "invoices.csv";
  options.out_dir = dir.path / "out";
  CHECK(run_report(options).exit_code == kExitInputError);

  options.balance_path = dir.path / "missing.csv";
  CHECK(run_report(options).exit_code == kExitInputError);
}
