#include "tcmesh/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "tcmesh/error.hpp"

namespace tcmesh {

RatingClass rating_class(int rating) {
  if (rating < 1 || rating > 9) {
    throw Error(ErrorCode::invalid_argument, "rating " + std::to_string(rating) + " out of 1..9");
  }
  if (rating <= 3) return RatingClass::A;
  if (rating <= 6) return RatingClass::B;
  return RatingClass::C;
}

char rating_class_letter(RatingClass cls) {
  switch (cls) {
    case RatingClass::A: return 'A';
    case RatingClass::B: return 'B';
    case RatingClass::C: return 'C';
  }
  return '?';
}

namespace {

struct CenteredSums {
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  double mean_x = 0.0;
  double mean_y = 0.0;
};

CenteredSums centered_sums(std::span<const double> xs, std::span<const double> ys) {
  CenteredSums sums;
  const auto n = static_cast<double>(xs.size());
  for (double x : xs) sums.mean_x += x;
  for (double y : ys) sums.mean_y += y;
  sums.mean_x /= n;
  sums.mean_y /= n;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - sums.mean_x;
    const double dy = ys[i] - sums.mean_y;
    sums.sxx += dx * dx;
    sums.syy += dy * dy;
    sums.sxy += dx * dy;
  }
  return sums;
}

}  // namespace

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw Error(ErrorCode::invalid_argument, "pearson: length mismatch");
  }
  if (xs.size() < 2) {
    throw Error(ErrorCode::invalid_argument, "pearson: need at least 2 points");
  }
  const auto sums = centered_sums(xs, ys);
  if (sums.sxx == 0.0 || sums.syy == 0.0) {
    throw Error(ErrorCode::degenerate_variance, "pearson: constant axis");
  }
  const double r = sums.sxy / std::sqrt(sums.sxx * sums.syy);
  return std::clamp(r, -1.0, 1.0);
}

LinearFit ols(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw Error(ErrorCode::insufficient_data, "ols: need at least 2 equally sized points");
  }
  const auto sums = centered_sums(xs, ys);
  if (sums.sxx == 0.0) {
    throw Error(ErrorCode::degenerate_variance, "ols: constant x axis");
  }
  LinearFit fit;
  fit.slope = sums.sxy / sums.sxx;
  fit.intercept = sums.mean_y - fit.slope * sums.mean_x;
  return fit;
}

std::vector<CcdfPoint> ccdf_points(std::span<const std::uint32_t> degrees) {
  if (degrees.empty()) {
    throw Error(ErrorCode::empty_input, "ccdf_points: empty degree sequence");
  }
  std::map<std::uint32_t, std::size_t> counts;
  for (std::uint32_t k : degrees) {
    if (k == 0) throw Error(ErrorCode::invalid_argument, "ccdf_points: zero degree");
    ++counts[k];
  }
  const auto n = static_cast<double>(degrees.size());
  std::vector<CcdfPoint> points;
  points.reserve(counts.size());
  // P(K >= k) at each distinct k, descending tail sums accumulated upward.
  std::size_t at_least = degrees.size();
  for (const auto& [k, count] : counts) {
    points.push_back({k, static_cast<double>(at_least) / n});
    at_least -= count;
  }
  return points;
}

CcdfFit fit_ccdf_slope(std::span<const CcdfPoint> ccdf, std::uint32_t k_min, std::uint32_t k_max) {
  if (k_min < 1) throw Error(ErrorCode::invalid_argument, "fit_ccdf_slope: k_min must be >= 1");
  std::vector<double> log_k;
  std::vector<double> log_f;
  for (const auto& point : ccdf) {
    if (point.k < k_min || point.k > k_max || point.fraction <= 0.0) continue;
    log_k.push_back(std::log(static_cast<double>(point.k)));
    log_f.push_back(std::log(point.fraction));
  }
  if (log_k.size() < 3) {
    throw Error(ErrorCode::insufficient_data,
                "fit_ccdf_slope: fewer than 3 distinct degrees in window");
  }
  const auto fit = ols(log_k, log_f);

  CcdfFit result;
  result.slope = fit.slope;
  result.intercept = fit.intercept;
  result.k_min = k_min;
  result.k_max = k_max;
  result.n_points = log_k.size();

  double ss_res = 0.0;
  double ss_tot = 0.0;
  double mean_f = 0.0;
  for (double f : log_f) mean_f += f;
  mean_f /= static_cast<double>(log_f.size());
  for (std::size_t i = 0; i < log_k.size(); ++i) {
    const double resid = log_f[i] - (fit.intercept + fit.slope * log_k[i]);
    ss_res += resid * resid;
    ss_tot += (log_f[i] - mean_f) * (log_f[i] - mean_f);
  }
  result.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return result;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error(ErrorCode::empty_input, "quantile of empty sample");
  if (sorted.size() == 1) return sorted[0];
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

RegressionResult size_degree_regression(const TradeNetwork& net,
                                        std::span<const FirmId> suppliers,
                                        double degree_cutoff) {
  std::vector<double> log_degree;
  std::vector<double> log_sales;
  for (const auto& supplier : suppliers) {
    const auto idx = net.supplier_index(supplier);
    if (!idx) continue;
    const auto k = static_cast<double>(net.incoming(*idx).size());
    if (k < 1.0 || k > degree_cutoff) continue;
    const BalanceRecord* balance = net.dataset().balance(supplier, kAnchorYear);
    if (balance == nullptr) continue;
    log_degree.push_back(std::log(k));
    log_sales.push_back(std::log(balance->sales_eur));
  }
  if (log_degree.size() < 3) {
    throw Error(ErrorCode::insufficient_data,
                "size_degree_regression: fewer than 3 usable suppliers");
  }

  RegressionResult result;
  result.n = log_degree.size();
  result.cutoff_applied = degree_cutoff;
  const auto fit = ols(log_degree, log_sales);
  result.slope = fit.slope;
  result.intercept = fit.intercept;
  try {
    result.pearson_r = pearson(log_degree, log_sales);
  } catch (const Error& error) {
    if (error.code() != ErrorCode::degenerate_variance) throw;
    result.pearson_r = std::nullopt;
  }

  // Unit-width bins in ln(K_in), one box per log bin.
  std::map<int, std::vector<double>> binned;
  for (std::size_t i = 0; i < log_degree.size(); ++i) {
    binned[static_cast<int>(std::floor(log_degree[i]))].push_back(log_sales[i]);
  }
  for (auto& [bin, values] : binned) {
    std::sort(values.begin(), values.end());
    result.bins.push_back({bin, values.size(), quantile_sorted(values, 0.5),
                           quantile_sorted(values, 0.25), quantile_sorted(values, 0.75)});
  }
  return result;
}

std::string_view to_string(Grouping grouping) {
  switch (grouping) {
    case Grouping::rating: return "rating";
    case Grouping::rating_size: return "rating_size";
    case Grouping::sector: return "sector";
  }
  return "unknown";
}

std::optional<Grouping> grouping_from_string(std::string_view name) {
  if (name == "rating") return Grouping::rating;
  if (name == "rating_size" || name == "size") return Grouping::rating_size;
  if (name == "sector") return Grouping::sector;
  return std::nullopt;
}

CorrelationTable grouped_correlations(std::span<const CorrelationSample> samples,
                                      Grouping grouping) {
  // Canonical group order keeps tables and reports byte-deterministic.
  std::vector<std::string> groups;
  const auto group_of = [&](const CorrelationSample& sample) -> std::string {
    switch (grouping) {
      case Grouping::rating:
        return std::string(1, rating_class_letter(sample.rating));
      case Grouping::rating_size:
        return std::string(1, rating_class_letter(sample.rating)) +
               (sample.large_firm ? "/large" : "/small");
      case Grouping::sector:
        return std::string(1, sample.sector_letter);
    }
    return "?";
  };
  switch (grouping) {
    case Grouping::rating:
      groups = {"A", "B", "C"};
      break;
    case Grouping::rating_size:
      for (const char* cls : {"A", "B", "C"}) {
        groups.push_back(std::string(cls) + "/large");
        groups.push_back(std::string(cls) + "/small");
      }
      break;
    case Grouping::sector:
      for (char letter : kSectorLetters) groups.emplace_back(1, letter);
      break;
  }

  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_group;
  for (const auto& sample : samples) {
    auto& [xs, ys] = by_group[group_of(sample)];
    xs.push_back(sample.predicted);
    ys.push_back(sample.actual);
  }

  CorrelationTable table;
  table.reserve(groups.size());
  for (const auto& group : groups) {
    CorrelationRow row;
    row.group = group;
    const auto it = by_group.find(group);
    if (it != by_group.end()) {
      row.n = it->second.first.size();
      if (row.n >= 2) {
        try {
          row.r = pearson(it->second.first, it->second.second);
        } catch (const Error& error) {
          if (error.code() != ErrorCode::degenerate_variance) throw;
        }
      }
    }
    table.push_back(std::move(row));
  }
  return table;
}

}  // namespace tcmesh
