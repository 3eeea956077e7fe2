// tcmesh command-line front end: generate synthetic datasets, run the
// individual analyses, or produce the all-in-one report.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tcmesh/csv.hpp"
#include "tcmesh/error.hpp"
#include "tcmesh/growth.hpp"
#include "tcmesh/network.hpp"
#include "tcmesh/report.hpp"
#include "tcmesh/stats.hpp"
#include "tcmesh/synth.hpp"
#include "tcmesh/util.hpp"
#include "tcmesh/version.hpp"

namespace {

using namespace tcmesh;

std::size_t threads_from_env() {
  const char* raw = std::getenv("TCMESH_THREADS");
  if (raw == nullptr) return 0;
  const auto parsed = csv::parse_int(raw);
  if (!parsed || *parsed < 1) return 0;
  return static_cast<std::size_t>(*parsed);
}

std::pair<double, double> parse_matching(const std::string& text) {
  const auto pos = text.find(':');
  if (pos == std::string::npos) {
    throw Error(ErrorCode::invalid_argument, "--matching expects lo:hi, e.g. 0.8:1.2");
  }
  const auto lo = csv::parse_double(text.substr(0, pos));
  const auto hi = csv::parse_double(text.substr(pos + 1));
  if (!lo || !hi || !(*lo >= 0.0) || !(*lo < *hi)) {
    throw Error(ErrorCode::invalid_argument, "--matching expects 0 <= lo < hi");
  }
  return {*lo, *hi};
}

std::vector<Grouping> parse_groupings(const std::string& text) {
  std::vector<Grouping> groupings;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    const auto grouping = grouping_from_string(token);
    if (!grouping) {
      throw Error(ErrorCode::invalid_argument, "unknown grouping '" + token +
                                                   "' (expected rating, size, or sector)");
    }
    groupings.push_back(*grouping);
  }
  if (groupings.empty()) {
    throw Error(ErrorCode::invalid_argument, "--group list is empty");
  }
  return groupings;
}

struct LoadedInputs {
  Dataset dataset;
  TradeNetwork net;
};

// Parses both files, echoes the rejection log to stderr, and joins. Throws
// Error{parse_error/io_error} on unusable input.
LoadedInputs load_inputs(const std::string& balance_path, const std::string& invoices_path,
                         bool strict) {
  auto balance = parse_balance_file(balance_path, strict);
  auto invoices = parse_invoices_file(invoices_path, strict);
  if (!balance.rejections.empty()) {
    std::cerr << "# rejected rows in " << balance_path << ":\n"
              << rejection_log(balance.rejections);
  }
  if (!invoices.rejections.empty()) {
    std::cerr << "# rejected rows in " << invoices_path << ":\n"
              << rejection_log(invoices.rejections);
  }
  if (balance.records.empty() || invoices.records.empty()) {
    throw Error(ErrorCode::parse_error, "no usable records after parsing");
  }
  LoadedInputs loaded{
      Dataset::assemble(std::move(balance.records), std::move(invoices.records)), {}};
  loaded.net = build_network(loaded.dataset);
  return loaded;
}

// Retained suppliers after the matching filter; exits with the empty-result
// code when nothing passes.
MatchingFilter filter_or_fail(const TradeNetwork& net, double lo, double hi) {
  auto filter = filter_by_matching(net, lo, hi);
  if (filter.retained.empty()) {
    throw Error(ErrorCode::empty_input, "no suppliers pass filter");
  }
  return filter;
}

void write_or_print(const std::optional<std::string>& out_dir, const std::string& filename,
                    const std::string& content) {
  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    write_file(std::filesystem::path(*out_dir) / filename, content);
    std::cout << (std::filesystem::path(*out_dir) / filename).string() << '\n';
  } else {
    std::cout << content;
  }
}

int exit_code_for(const Error& error) {
  switch (error.code()) {
    case ErrorCode::parse_error:
    case ErrorCode::io_error:
    case ErrorCode::invalid_argument:
      return kExitInputError;
    case ErrorCode::empty_input:
    case ErrorCode::insufficient_data:
    case ErrorCode::no_usable_customers:
      return kExitEmptyResult;
    default:
      return kExitInternalError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trade-credit network growth-contagion toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  // Common analysis options, reused by most subcommands.
  struct CommonOpts {
    std::string balance;
    std::string invoices;
    std::string matching = "0.8:1.2";
    std::optional<std::string> out_dir;
    bool strict = false;
  };
  const auto add_common = [](CLI::App* cmd, CommonOpts& opts, bool need_out = false) {
    cmd->add_option("--balance", opts.balance, "balance.csv path")->required();
    cmd->add_option("--invoices", opts.invoices, "invoices.csv path")->required();
    cmd->add_option("--matching", opts.matching, "matching range lo:hi (default 0.8:1.2)");
    auto* out = cmd->add_option("--out", opts.out_dir, "output directory");
    if (need_out) out->required();
    cmd->add_flag("--strict", opts.strict, "abort on the first malformed input row");
  };

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "write a synthetic dataset with known ground truth");
  std::string gen_out;
  SynthConfig config;
  double beta_scalar = 1.0;
  bool beta_scalar_set = false;
  std::string gen_matching;
  bool boom_bust = false;
  gen_cmd->add_option("--out", gen_out, "output directory")->required();
  gen_cmd->add_option("--suppliers", config.n_suppliers, "number of suppliers");
  gen_cmd->add_option("--seed", config.seed, "generator seed");
  gen_cmd->add_option("--degree-exponent", config.degree_exponent, "in-degree density exponent");
  gen_cmd->add_option("--weight-tail", config.weight_tail_exponent, "edge weight tail exponent");
  gen_cmd->add_option("--matching", gen_matching, "matching range lo:hi");
  gen_cmd->add_option("--coverage-min", config.coverage_min, "minimum customer coverage factor");
  gen_cmd->add_option("--beta", beta_scalar, "contagion coefficient (all rating classes)")
      ->each([&](const std::string&) { beta_scalar_set = true; });
  gen_cmd->add_option("--beta-a", config.beta_by_class[0], "beta for rating class A");
  gen_cmd->add_option("--beta-b", config.beta_by_class[1], "beta for rating class B");
  gen_cmd->add_option("--beta-c", config.beta_by_class[2], "beta for rating class C");
  gen_cmd->add_option("--mu1", config.mu_first, "macro log drift 2006->2007");
  gen_cmd->add_option("--mu2", config.mu_second, "macro log drift 2007->2008");
  gen_cmd->add_option("--sigma-supplier", config.sigma_supplier, "supplier noise sigma");
  gen_cmd->add_option("--sigma-customer", config.sigma_customer, "customer growth sigma");
  gen_cmd->add_flag("--boom-bust", boom_bust,
                    "boom-bust scenario (mu defaults +0.05/-0.05 unless --mu1/--mu2 given)");

  // summary
  auto* summary_cmd = app.add_subcommand("summary", "network summary statistics");
  CommonOpts summary_opts;
  add_common(summary_cmd, summary_opts);

  // matching
  auto* matching_cmd = app.add_subcommand("matching", "per-supplier completeness ratios");
  CommonOpts matching_opts;
  add_common(matching_cmd, matching_opts);

  // degrees
  auto* degrees_cmd = app.add_subcommand("degrees", "degree histograms and in-degree CCDF");
  CommonOpts degrees_opts;
  bool degrees_filtered = false;
  add_common(degrees_cmd, degrees_opts);
  degrees_cmd->add_flag("--filtered", degrees_filtered,
                        "use the matching-filtered subnetwork instead of the full network");

  // growth
  auto* growth_cmd = app.add_subcommand("growth", "predicted vs actual growth points");
  CommonOpts growth_opts;
  std::string growth_period = "both";
  add_common(growth_cmd, growth_opts);
  growth_cmd->add_option("--period", growth_period, "2006-2007, 2007-2008, or both");

  // cagr
  auto* cagr_cmd = app.add_subcommand("cagr", "compound annual growth points");
  CommonOpts cagr_opts;
  add_common(cagr_cmd, cagr_opts);

  // correlations
  auto* corr_cmd = app.add_subcommand("correlations", "stratified CAGR correlation tables");
  CommonOpts corr_opts;
  std::string corr_groups = "rating,size,sector";
  add_common(corr_cmd, corr_opts);
  corr_cmd->add_option("--group", corr_groups, "comma list of rating,size,sector");

  // report
  auto* report_cmd = app.add_subcommand("report", "full analysis report with side outputs");
  CommonOpts report_opts;
  std::string report_groups = "rating,size,sector";
  double report_cutoff = 150.0;
  bool report_svg = false;
  add_common(report_cmd, report_opts, /*need_out=*/true);
  report_cmd->add_option("--group", report_groups, "comma list of rating,size,sector");
  report_cmd->add_option("--degree-cutoff", report_cutoff,
                         "degree cutoff for the size regression");
  report_cmd->add_flag("--svg", report_svg, "also emit scatter SVGs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInputError;
  }

  const std::size_t threads = threads_from_env();

  try {
    if (gen_cmd->parsed()) {
      if (beta_scalar_set) config.set_beta(beta_scalar);
      if (!gen_matching.empty()) {
        std::tie(config.matching_lo, config.matching_hi) = parse_matching(gen_matching);
      }
      Generated generated;
      if (boom_bust) {
        const double mu1 = gen_cmd->count("--mu1") > 0 ? config.mu_first : 0.05;
        const double mu2 = gen_cmd->count("--mu2") > 0 ? config.mu_second : -0.05;
        generated = scenario_boom_bust(config, mu1, mu2);
      } else {
        generated = generate(config);
      }
      write_generated(generated, gen_out);
      std::cout << "wrote " << generated.balances.size() << " balance rows, "
                << generated.invoices.size() << " invoices to " << gen_out << '\n';
      return kExitOk;
    }

    if (summary_cmd->parsed()) {
      const auto [lo, hi] = parse_matching(summary_opts.matching);
      const auto loaded = load_inputs(summary_opts.balance, summary_opts.invoices,
                                      summary_opts.strict);
      const auto filter = filter_or_fail(loaded.net, lo, hi);
      nlohmann::ordered_json doc;
      doc["network"] = to_json(network_summary(loaded.net));
      doc["filtered_network"] = to_json(network_summary(filter.subnetwork));
      doc["retained_suppliers"] = filter.retained.size();
      const auto components = weak_components(filter.subnetwork);
      doc["filtered_components"] = {{"count", components.size()},
                                    {"largest", components.empty() ? 0 : components.front()}};
      std::cout << doc.dump(2) << '\n';
      return kExitOk;
    }

    if (matching_cmd->parsed()) {
      const auto [lo, hi] = parse_matching(matching_opts.matching);
      const auto loaded = load_inputs(matching_opts.balance, matching_opts.invoices,
                                      matching_opts.strict);
      const auto report = matching_report(loaded.net, lo, hi);
      std::ostringstream out;
      write_matching_csv(out, report.rows);
      write_or_print(matching_opts.out_dir, "matching.csv", out.str());
      return kExitOk;
    }

    if (degrees_cmd->parsed()) {
      const auto [lo, hi] = parse_matching(degrees_opts.matching);
      const auto loaded = load_inputs(degrees_opts.balance, degrees_opts.invoices,
                                      degrees_opts.strict);
      const TradeNetwork* net = &loaded.net;
      MatchingFilter filter;
      if (degrees_filtered) {
        filter = filter_or_fail(loaded.net, lo, hi);
        net = &filter.subnetwork;
      }
      const auto degrees = degree_sequences(*net);
      if (degrees.in_degrees.empty()) {
        throw Error(ErrorCode::empty_input, "network has no suppliers");
      }
      std::ostringstream in_hist;
      write_degree_hist_csv(in_hist, degrees.in_degrees);
      if (degrees_opts.out_dir) {
        std::ostringstream out_hist;
        write_degree_hist_csv(out_hist, degrees.out_degrees);
        std::ostringstream ccdf_csv;
        write_ccdf_csv(ccdf_csv, ccdf_points(degrees.in_degrees));
        write_or_print(degrees_opts.out_dir, "in_degree_hist.csv", in_hist.str());
        write_or_print(degrees_opts.out_dir, "out_degree_hist.csv", out_hist.str());
        write_or_print(degrees_opts.out_dir, "in_degree_ccdf.csv", ccdf_csv.str());
      } else {
        std::cout << in_hist.str();
      }
      return kExitOk;
    }

    if (growth_cmd->parsed()) {
      const auto [lo, hi] = parse_matching(growth_opts.matching);
      const auto loaded = load_inputs(growth_opts.balance, growth_opts.invoices,
                                      growth_opts.strict);
      const auto filter = filter_or_fail(loaded.net, lo, hi);
      std::vector<Period> periods;
      if (growth_period == "both") {
        periods = {Period::first(), Period::second()};
      } else if (growth_period == Period::first().label()) {
        periods = {Period::first()};
      } else if (growth_period == Period::second().label()) {
        periods = {Period::second()};
      } else {
        throw Error(ErrorCode::invalid_argument, "unknown period '" + growth_period + "'");
      }
      std::vector<GrowthPoint> points;
      for (const Period period : periods) {
        auto scatter = build_scatter(filter.subnetwork, filter.retained, period,
                                     MissingPolicy::drop_renormalize, threads);
        points.insert(points.end(), scatter.points.begin(), scatter.points.end());
      }
      if (points.empty()) throw Error(ErrorCode::empty_input, "no computable growth points");
      std::ostringstream out;
      write_growth_csv(out, points);
      write_or_print(growth_opts.out_dir, "growth.csv", out.str());
      return kExitOk;
    }

    if (cagr_cmd->parsed()) {
      const auto [lo, hi] = parse_matching(cagr_opts.matching);
      const auto loaded = load_inputs(cagr_opts.balance, cagr_opts.invoices, cagr_opts.strict);
      const auto filter = filter_or_fail(loaded.net, lo, hi);
      const auto result = cagr_points(filter.subnetwork, filter.retained,
                                      MissingPolicy::drop_renormalize, threads);
      if (result.points.empty()) throw Error(ErrorCode::empty_input, "no computable CAGR points");
      std::ostringstream out;
      write_cagr_csv(out, result.points);
      write_or_print(cagr_opts.out_dir, "cagr.csv", out.str());
      return kExitOk;
    }

    if (corr_cmd->parsed()) {
      const auto [lo, hi] = parse_matching(corr_opts.matching);
      const auto groupings = parse_groupings(corr_groups);
      const auto loaded = load_inputs(corr_opts.balance, corr_opts.invoices, corr_opts.strict);
      const auto filter = filter_or_fail(loaded.net, lo, hi);
      const auto result = cagr_points(filter.subnetwork, filter.retained,
                                      MissingPolicy::drop_renormalize, threads);
      if (result.points.empty()) throw Error(ErrorCode::empty_input, "no computable CAGR points");
      const auto samples = to_correlation_samples(result.points);
      nlohmann::ordered_json doc;
      for (const Grouping grouping : groupings) {
        doc[std::string(to_string(grouping))] = to_json(grouped_correlations(samples, grouping));
      }
      std::cout << doc.dump(2) << '\n';
      return kExitOk;
    }

    if (report_cmd->parsed()) {
      ReportOptions options;
      options.balance_path = report_opts.balance;
      options.invoices_path = report_opts.invoices;
      options.out_dir = *report_opts.out_dir;
      std::tie(options.matching_lo, options.matching_hi) = parse_matching(report_opts.matching);
      options.groupings = parse_groupings(report_groups);
      options.degree_cutoff = report_cutoff;
      options.svg = report_svg;
      options.threads = threads;
      const auto result = run_report(options);
      for (const auto& message : result.messages) std::cerr << message << '\n';
      if (result.exit_code == kExitOk) std::cout << result.document.dump(2) << '\n';
      return result.exit_code;
    }
  } catch (const Error& error) {
    std::cerr << "error: " << error.what() << '\n';
    return exit_code_for(error);
  } catch (const std::exception& error) {
    std::cerr << "internal error: " << error.what() << '\n';
    return kExitInternalError;
  }
  return kExitOk;
}
