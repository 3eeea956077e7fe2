#include "tcmesh/report.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "tcmesh/csv.hpp"
#include "tcmesh/error.hpp"
#include "tcmesh/parallel.hpp"
#include "tcmesh/svg.hpp"
#include "tcmesh/util.hpp"
#include "tcmesh/version.hpp"

namespace tcmesh {

namespace {

using nlohmann::ordered_json;

ordered_json json_or_null(const std::optional<double>& value) {
  if (!value) return nullptr;
  return *value;
}

std::vector<std::pair<double, double>> to_xy(std::span<const GrowthPoint> points) {
  std::vector<std::pair<double, double>> xy;
  xy.reserve(points.size());
  for (const auto& point : points) xy.emplace_back(point.predicted, point.actual);
  return xy;
}

std::vector<std::pair<double, double>> to_xy(std::span<const CagrPoint> points) {
  std::vector<std::pair<double, double>> xy;
  xy.reserve(points.size());
  for (const auto& point : points) xy.emplace_back(point.predicted_cagr, point.actual_cagr);
  return xy;
}

}  // namespace

nlohmann::ordered_json to_json(const NetworkSummary& summary) {
  ordered_json json;
  json["n_suppliers"] = summary.n_suppliers;
  json["n_customers"] = summary.n_customers;
  json["n_links"] = summary.n_links;
  json["n_reciprocal_pairs"] = summary.n_reciprocal_pairs;
  json["avg_in_neighbors"] = summary.avg_in_neighbors;
  json["avg_out_neighbors"] = summary.avg_out_neighbors;
  return json;
}

nlohmann::ordered_json to_json(const ScatterStats& stats) {
  ordered_json json;
  json["n"] = stats.n;
  json["median_x"] = stats.median_x;
  json["median_y"] = stats.median_y;
  json["mean_x"] = stats.mean_x;
  json["mean_y"] = stats.mean_y;
  json["q1_x"] = stats.q1_x;
  json["q3_x"] = stats.q3_x;
  json["q1_y"] = stats.q1_y;
  json["q3_y"] = stats.q3_y;
  json["quadrant_counts"] = stats.quadrant_counts;
  json["centroid_quadrant"] = stats.centroid_quadrant;
  return json;
}

nlohmann::ordered_json to_json(const CcdfFit& fit) {
  ordered_json json;
  json["slope"] = fit.slope;
  json["intercept"] = fit.intercept;
  json["k_min"] = fit.k_min;
  json["k_max"] = fit.k_max;
  json["n_points"] = fit.n_points;
  json["r_squared"] = fit.r_squared;
  return json;
}

nlohmann::ordered_json to_json(const RegressionResult& regression) {
  ordered_json json;
  json["slope"] = regression.slope;
  json["intercept"] = regression.intercept;
  json["pearson_r"] = json_or_null(regression.pearson_r);
  json["n"] = regression.n;
  json["degree_cutoff"] = regression.cutoff_applied;
  auto& bins = json["bins"] = ordered_json::array();
  for (const auto& bin : regression.bins) {
    ordered_json row;
    row["bin"] = bin.bin;
    row["n"] = bin.n;
    row["median_log_sales"] = bin.median_log_sales;
    row["q1_log_sales"] = bin.q1_log_sales;
    row["q3_log_sales"] = bin.q3_log_sales;
    bins.push_back(std::move(row));
  }
  return json;
}

nlohmann::ordered_json to_json(const CorrelationTable& table) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : table) {
    ordered_json entry;
    entry["group"] = row.group;
    entry["n"] = row.n;
    if (row.r) {
      entry["r"] = *row.r;
    } else {
      entry["r"] = nullptr;
      entry["note"] = "insufficient";
    }
    rows.push_back(std::move(entry));
  }
  return rows;
}

void write_matching_csv(std::ostream& out, std::span<const MatchingRow> rows) {
  out << "supplier_id,incoming_total_eur,sales_2007_eur,ratio,in_range\n";
  for (const auto& row : rows) {
    out << row.supplier << ',' << csv::format_double(row.incoming_total_eur) << ','
        << csv::format_double(row.sales_2007_eur) << ',' << csv::format_double(row.ratio) << ','
        << (row.in_range ? 1 : 0) << '\n';
  }
}

void write_growth_csv(std::ostream& out, std::span<const GrowthPoint> points) {
  out << "supplier_id,period,predicted,actual,usable_weight_fraction\n";
  for (const auto& point : points) {
    out << point.supplier << ',' << point.period.label() << ','
        << csv::format_double(point.predicted) << ',' << csv::format_double(point.actual) << ','
        << csv::format_double(point.usable_weight_fraction) << '\n';
  }
}

void write_cagr_csv(std::ostream& out, std::span<const CagrPoint> points) {
  out << "supplier_id,predicted_cagr,actual_cagr,rating_class,size_class,sector\n";
  for (const auto& point : points) {
    out << point.supplier << ',' << csv::format_double(point.predicted_cagr) << ','
        << csv::format_double(point.actual_cagr) << ',' << rating_class_letter(point.rating)
        << ',' << (point.large_firm ? "large" : "small") << ',' << point.sector_letter << '\n';
  }
}

void write_ccdf_csv(std::ostream& out, std::span<const CcdfPoint> points) {
  out << "k,ccdf\n";
  for (const auto& point : points) {
    out << point.k << ',' << csv::format_double(point.fraction) << '\n';
  }
}

void write_degree_hist_csv(std::ostream& out, std::span<const std::uint32_t> degrees) {
  std::map<std::uint32_t, std::size_t> hist;
  for (std::uint32_t degree : degrees) ++hist[degree];
  out << "degree,count\n";
  for (const auto& [degree, count] : hist) out << degree << ',' << count << '\n';
}

void write_correlations_csv(std::ostream& out, const CorrelationTable& table) {
  out << "group,n,r\n";
  for (const auto& row : table) {
    out << row.group << ',' << row.n << ','
        << (row.r ? csv::format_double(*row.r) : std::string("insufficient")) << '\n';
  }
}

ReportResult run_report(const ReportOptions& options) {
  ReportResult result;
  const std::size_t threads = resolve_thread_count(options.threads);

  // Ingest.
  BalanceParse balance_parse;
  InvoiceParse invoice_parse;
  std::string balance_bytes;
  std::string invoice_bytes;
  try {
    balance_bytes = read_file(options.balance_path);
    invoice_bytes = read_file(options.invoices_path);
    std::istringstream balance_in(balance_bytes);
    std::istringstream invoice_in(invoice_bytes);
    balance_parse = parse_balance(balance_in);
    invoice_parse = parse_invoices(invoice_in);
  } catch (const Error& error) {
    result.exit_code = kExitInputError;
    result.messages.push_back(error.what());
    return result;
  }
  for (const auto& rejection : balance_parse.rejections) {
    result.messages.push_back("balance.csv:" + std::to_string(rejection.line_no) + "\t" +
                              rejection.reason);
  }
  for (const auto& rejection : invoice_parse.rejections) {
    result.messages.push_back("invoices.csv:" + std::to_string(rejection.line_no) + "\t" +
                              rejection.reason);
  }
  if (balance_parse.records.empty() || invoice_parse.records.empty()) {
    result.exit_code = kExitInputError;
    result.messages.push_back("no usable records after parsing");
    return result;
  }

  const Dataset dataset = Dataset::assemble(std::move(balance_parse.records),
                                            std::move(invoice_parse.records));
  const TradeNetwork net = build_network(dataset);
  const NetworkSummary full_summary = network_summary(net);

  // Matching filter.
  const auto matching = matching_report(net, options.matching_lo, options.matching_hi);
  const auto filter = filter_by_matching(net, options.matching_lo, options.matching_hi);
  if (filter.retained.empty()) {
    result.exit_code = kExitEmptyResult;
    result.messages.push_back("no suppliers pass filter");
    return result;
  }
  const TradeNetwork& subnet = filter.subnetwork;

  ordered_json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  doc["inputs"] = {
      {"balance", {{"path", options.balance_path.string()},
                   {"fnv1a64", to_hex(fnv1a64(balance_bytes))}}},
      {"invoices", {{"path", options.invoices_path.string()},
                    {"fnv1a64", to_hex(fnv1a64(invoice_bytes))}}},
  };
  doc["parameters"] = {
      {"matching_lo", options.matching_lo},
      {"matching_hi", options.matching_hi},
      {"degree_cutoff", options.degree_cutoff},
      {"missing_policy",
       options.missing_policy == MissingPolicy::drop_renormalize ? "drop-renormalize" : "fail"},
  };
  doc["ingest"] = {
      {"balance_rows", balance_parse.total_rows},
      {"balance_rejected", balance_parse.rejections.size()},
      {"invoice_rows", invoice_parse.total_rows},
      {"invoice_rejected", invoice_parse.rejections.size()},
      {"invoices_flagged_missing_customer", dataset.report().flags.size()},
  };
  doc["network"] = to_json(full_summary);
  doc["matching"] = {
      {"total_suppliers", net.suppliers().size()},
      {"with_2007_balance", matching.rows.size()},
      {"missing_2007_balance", matching.missing_balance.size()},
      {"retained", filter.retained.size()},
  };
  doc["filtered_network"] = to_json(network_summary(subnet));

  // Components of the filtered network, largest first.
  const auto components = weak_components(subnet);
  doc["filtered_components"] = {
      {"count", components.size()},
      {"largest", components.empty() ? 0 : components.front()},
  };

  // Degree structure of the filtered network.
  const auto degrees = degree_sequences(subnet);
  const auto ccdf = ccdf_points(degrees.in_degrees);
  const std::uint32_t k_max =
      options.ccdf_k_max > 0 ? options.ccdf_k_max : ccdf.back().k;
  try {
    doc["in_degree_ccdf_fit"] = to_json(fit_ccdf_slope(ccdf, options.ccdf_k_min, k_max));
  } catch (const Error& error) {
    doc["in_degree_ccdf_fit"] = nullptr;
    result.messages.push_back(std::string("ccdf fit skipped: ") + error.what());
  }
  try {
    doc["size_degree_regression"] =
        to_json(size_degree_regression(subnet, filter.retained, options.degree_cutoff));
  } catch (const Error& error) {
    doc["size_degree_regression"] = nullptr;
    result.messages.push_back(std::string("size regression skipped: ") + error.what());
  }

  // Key customers over the retained suppliers.
  std::size_t with_key = 0;
  for (const auto& supplier : filter.retained) {
    if (key_customer(subnet, supplier, options.key_customer_denominator).has_key_customer) {
      ++with_key;
    }
  }
  doc["key_customers"] = {
      {"with", with_key},
      {"without", filter.retained.size() - with_key},
  };

  // Growth scatters per period.
  std::map<std::string, Scatter> scatters;
  doc["growth"] = ordered_json::object();
  for (const Period period : Period::all()) {
    auto scatter =
        build_scatter(subnet, filter.retained, period, options.missing_policy, threads);
    ordered_json section;
    section["n_points"] = scatter.points.size();
    section["n_excluded"] = scatter.exclusions.size();
    if (!scatter.points.empty()) {
      section["scatter_stats"] = to_json(scatter_stats(scatter.points));
      try {
        std::vector<double> xs;
        std::vector<double> ys;
        for (const auto& point : scatter.points) {
          xs.push_back(point.predicted);
          ys.push_back(point.actual);
        }
        const auto fit = ols(xs, ys);
        section["ols"] = {{"slope", fit.slope}, {"intercept", fit.intercept}};
        section["pearson_r"] = pearson(xs, ys);
      } catch (const Error&) {
        section["ols"] = nullptr;
        section["pearson_r"] = nullptr;
      }
    } else {
      section["scatter_stats"] = nullptr;
    }
    doc["growth"][period.label()] = std::move(section);
    scatters.emplace(period.label(), std::move(scatter));
  }

  // CAGR cloud and stratified correlations.
  const auto cagr = cagr_points(subnet, filter.retained, options.missing_policy, threads);
  doc["cagr"] = {
      {"n_points", cagr.points.size()},
      {"n_excluded", cagr.exclusions.size()},
  };
  const auto samples = to_correlation_samples(cagr.points);
  doc["correlations"] = ordered_json::object();
  std::map<std::string, CorrelationTable> tables;
  for (const Grouping grouping : options.groupings) {
    auto table = grouped_correlations(samples, grouping);
    doc["correlations"][std::string(to_string(grouping))] = to_json(table);
    tables.emplace(std::string(to_string(grouping)), std::move(table));
  }

  // Side outputs.
  try {
    std::filesystem::create_directories(options.out_dir);
    {
      std::ostringstream out;
      write_matching_csv(out, matching.rows);
      write_file(options.out_dir / "matching.csv", out.str());
    }
    {
      std::ostringstream out;
      write_ccdf_csv(out, ccdf);
      write_file(options.out_dir / "in_degree_ccdf.csv", out.str());
    }
    {
      std::ostringstream out;
      write_degree_hist_csv(out, degrees.in_degrees);
      write_file(options.out_dir / "in_degree_hist.csv", out.str());
    }
    {
      std::ostringstream out;
      write_degree_hist_csv(out, degrees.out_degrees);
      write_file(options.out_dir / "out_degree_hist.csv", out.str());
    }
    for (const auto& [label, scatter] : scatters) {
      std::ostringstream out;
      write_growth_csv(out, scatter.points);
      write_file(options.out_dir / ("growth_" + label + ".csv"), out.str());
      if (options.svg) {
        PlotSpec spec;
        spec.title = "Supplier growth " + label;
        spec.x_label = "predicted log growth";
        spec.y_label = "actual log growth";
        spec.reference_line = true;
        emit_svg_scatter(to_xy(scatter.points), spec,
                         options.out_dir / ("growth_" + label + ".svg"));
      }
    }
    {
      std::ostringstream out;
      write_cagr_csv(out, cagr.points);
      write_file(options.out_dir / "cagr.csv", out.str());
      if (options.svg) {
        PlotSpec spec;
        spec.title = "Compound annual growth";
        spec.x_label = "predicted CAGR";
        spec.y_label = "actual CAGR";
        spec.reference_line = true;
        emit_svg_scatter(to_xy(cagr.points), spec, options.out_dir / "cagr.svg");
      }
    }
    for (const auto& [name, table] : tables) {
      std::ostringstream out;
      write_correlations_csv(out, table);
      write_file(options.out_dir / ("correlations_" + name + ".csv"), out.str());
    }
    write_file(options.out_dir / "report.json", doc.dump(2) + "\n");
  } catch (const Error& error) {
    result.exit_code = kExitInputError;
    result.messages.push_back(error.what());
    return result;
  }

  result.document = std::move(doc);
  return result;
}

}  // namespace tcmesh
