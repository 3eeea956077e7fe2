#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tcmesh/growth.hpp"
#include "tcmesh/network.hpp"
#include "tcmesh/stats.hpp"

namespace tcmesh {

// Process exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitEmptyResult = 3;
inline constexpr int kExitInternalError = 4;

struct ReportOptions {
  std::filesystem::path balance_path;
  std::filesystem::path invoices_path;
  std::filesystem::path out_dir;
  double matching_lo = 0.8;
  double matching_hi = 1.2;
  std::vector<Grouping> groupings{Grouping::rating, Grouping::rating_size, Grouping::sector};
  double degree_cutoff = 150.0;  // size-vs-degree regression exclusion
  std::uint32_t ccdf_k_min = 1;
  std::uint32_t ccdf_k_max = 0;  // 0 = largest observed degree
  MissingPolicy missing_policy = MissingPolicy::drop_renormalize;
  ShareDenominator key_customer_denominator = ShareDenominator::balance_sales;
  bool svg = false;
  std::size_t threads = 0;  // 0 = hardware concurrency
};

struct ReportResult {
  int exit_code = kExitOk;
  nlohmann::ordered_json document;        // empty on failure
  std::vector<std::string> messages;      // diagnostics for stderr
};

// End-to-end pipeline: parse, join, build network, filter, and compute every
// analysis section; writes report.json plus the CSV (and optional SVG) side
// outputs into out_dir. The document is deterministic for fixed inputs and
// flags, independent of the thread count.
ReportResult run_report(const ReportOptions& options);

// CSV side-output writers shared by the single-purpose subcommands.
void write_matching_csv(std::ostream& out, std::span<const MatchingRow> rows);
void write_growth_csv(std::ostream& out, std::span<const GrowthPoint> points);
void write_cagr_csv(std::ostream& out, std::span<const CagrPoint> points);
void write_ccdf_csv(std::ostream& out, std::span<const CcdfPoint> points);
void write_degree_hist_csv(std::ostream& out, std::span<const std::uint32_t> degrees);
void write_correlations_csv(std::ostream& out, const CorrelationTable& table);

// JSON fragments reused by subcommands and tests.
nlohmann::ordered_json to_json(const NetworkSummary& summary);
nlohmann::ordered_json to_json(const ScatterStats& stats);
nlohmann::ordered_json to_json(const CcdfFit& fit);
nlohmann::ordered_json to_json(const RegressionResult& regression);
nlohmann::ordered_json to_json(const CorrelationTable& table);

}  // namespace tcmesh
