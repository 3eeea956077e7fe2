#include "tcmesh/growth.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

#include "tcmesh/error.hpp"
#include "tcmesh/parallel.hpp"

namespace tcmesh {

double actual_log_growth(const Dataset& dataset, const FirmId& supplier, Period period) {
  const BalanceRecord* base = dataset.balance(supplier, period.base_year);
  const BalanceRecord* next = dataset.balance(supplier, period.next_year);
  if (base == nullptr || next == nullptr) {
    throw Error(ErrorCode::balance_missing,
                supplier + " lacks a balance row for period " + period.label());
  }
  return std::log(next->sales_eur / base->sales_eur);
}

PredictedGrowth predicted_log_growth(const TradeNetwork& net, const FirmId& supplier,
                                     Period period, MissingPolicy policy) {
  const auto idx = net.supplier_index(supplier);
  if (!idx || net.incoming(*idx).empty()) {
    throw Error(ErrorCode::no_usable_customers, supplier + " has no incoming edges");
  }
  const Dataset& dataset = net.dataset();

  double numerator = 0.0;
  double denominator = 0.0;
  double usable_weight = 0.0;
  double total_weight = 0.0;
  for (const auto& edge : net.incoming(*idx)) {
    total_weight += edge.weight;
    const FirmId& customer = net.customers()[edge.customer];
    const BalanceRecord* base = dataset.balance(customer, period.base_year);
    const BalanceRecord* next = dataset.balance(customer, period.next_year);
    // The anchor year is always one of base/next, so these two rows carry
    // every purchases figure the ratio needs.
    const bool usable =
        base != nullptr && next != nullptr && base->purchases_eur > 0.0 && next->purchases_eur > 0.0;
    if (!usable) {
      if (policy == MissingPolicy::fail) {
        throw Error(ErrorCode::balance_missing,
                    "customer " + customer + " lacks purchases for period " + period.label());
      }
      continue;
    }
    const double anchor =
        period.base_year == kAnchorYear ? base->purchases_eur : next->purchases_eur;
    numerator += next->purchases_eur / anchor * edge.weight;
    denominator += base->purchases_eur / anchor * edge.weight;
    usable_weight += edge.weight;
  }

  if (usable_weight == 0.0) {
    throw Error(ErrorCode::no_usable_customers,
                supplier + " has no customer with usable purchases for " + period.label());
  }
  if (denominator <= 0.0) {
    throw Error(ErrorCode::degenerate_denominator,
                supplier + ": reweighted base-year sum is not positive");
  }
  return {std::log(numerator / denominator), usable_weight / total_weight};
}

namespace {

std::vector<FirmId> sorted_ids(std::span<const FirmId> suppliers) {
  std::vector<FirmId> ids(suppliers.begin(), suppliers.end());
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::string reason_of(const Error& error) { return error.what(); }

}  // namespace

Scatter build_scatter(const TradeNetwork& net, std::span<const FirmId> suppliers, Period period,
                      MissingPolicy policy, std::size_t threads) {
  const auto ids = sorted_ids(suppliers);
  std::vector<std::variant<std::monostate, GrowthPoint, Exclusion>> slots(ids.size());

  parallel_for(ids.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const FirmId& supplier = ids[i];
      try {
        const double actual = actual_log_growth(net.dataset(), supplier, period);
        const auto predicted = predicted_log_growth(net, supplier, period, policy);
        slots[i] = GrowthPoint{supplier, predicted.value, actual, period,
                               predicted.usable_weight_fraction};
      } catch (const Error& error) {
        slots[i] = Exclusion{supplier, reason_of(error)};
      }
    }
  });

  Scatter scatter;
  scatter.points.reserve(ids.size());
  for (auto& slot : slots) {
    if (auto* point = std::get_if<GrowthPoint>(&slot)) {
      scatter.points.push_back(std::move(*point));
    } else if (auto* exclusion = std::get_if<Exclusion>(&slot)) {
      scatter.exclusions.push_back(std::move(*exclusion));
    }
  }
  return scatter;
}

CagrResult cagr_points(const TradeNetwork& net, std::span<const FirmId> suppliers,
                       MissingPolicy policy, std::size_t threads) {
  const auto ids = sorted_ids(suppliers);
  std::vector<std::variant<std::monostate, CagrPoint, Exclusion>> slots(ids.size());

  parallel_for(ids.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const FirmId& supplier = ids[i];
      try {
        double actual_sum = 0.0;
        double predicted_sum = 0.0;
        for (const Period period : Period::all()) {
          actual_sum += actual_log_growth(net.dataset(), supplier, period);
          predicted_sum += predicted_log_growth(net, supplier, period, policy).value;
        }
        const BalanceRecord* anchor = net.dataset().balance(supplier, kAnchorYear);
        if (anchor == nullptr) {
          throw Error(ErrorCode::balance_missing, supplier + " lacks a 2007 balance row");
        }
        slots[i] = CagrPoint{supplier,
                             predicted_sum / 2.0,
                             actual_sum / 2.0,
                             rating_class(anchor->rating),
                             anchor->sales_eur > kLargeFirmSalesEur,
                             anchor->sector.letter};
      } catch (const Error& error) {
        slots[i] = Exclusion{supplier, reason_of(error)};
      }
    }
  });

  CagrResult result;
  result.points.reserve(ids.size());
  for (auto& slot : slots) {
    if (auto* point = std::get_if<CagrPoint>(&slot)) {
      result.points.push_back(std::move(*point));
    } else if (auto* exclusion = std::get_if<Exclusion>(&slot)) {
      result.exclusions.push_back(std::move(*exclusion));
    }
  }
  return result;
}

std::vector<CorrelationSample> to_correlation_samples(std::span<const CagrPoint> points) {
  std::vector<CorrelationSample> samples;
  samples.reserve(points.size());
  for (const auto& point : points) {
    samples.push_back({point.predicted_cagr, point.actual_cagr, point.rating, point.large_firm,
                       point.sector_letter});
  }
  return samples;
}

int quadrant_of(double x, double y) {
  if (x >= 0.0) return y >= 0.0 ? 1 : 4;
  return y >= 0.0 ? 2 : 3;
}

ScatterStats scatter_stats(std::span<const double> xs, std::span<const double> ys) {
  if (xs.empty() || xs.size() != ys.size()) {
    throw Error(ErrorCode::empty_input, "scatter_stats needs a non-empty, equal-length cloud");
  }
  ScatterStats stats;
  stats.n = xs.size();

  std::vector<double> sorted_x(xs.begin(), xs.end());
  std::vector<double> sorted_y(ys.begin(), ys.end());
  std::sort(sorted_x.begin(), sorted_x.end());
  std::sort(sorted_y.begin(), sorted_y.end());
  stats.median_x = quantile_sorted(sorted_x, 0.5);
  stats.median_y = quantile_sorted(sorted_y, 0.5);
  stats.q1_x = quantile_sorted(sorted_x, 0.25);
  stats.q3_x = quantile_sorted(sorted_x, 0.75);
  stats.q1_y = quantile_sorted(sorted_y, 0.25);
  stats.q3_y = quantile_sorted(sorted_y, 0.75);

  double sum_x = 0.0;
  double sum_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sum_x += xs[i];
    sum_y += ys[i];
    ++stats.quadrant_counts[static_cast<std::size_t>(quadrant_of(xs[i], ys[i]) - 1)];
  }
  stats.mean_x = sum_x / static_cast<double>(xs.size());
  stats.mean_y = sum_y / static_cast<double>(ys.size());
  stats.centroid_quadrant = quadrant_of(stats.median_x, stats.median_y);
  return stats;
}

ScatterStats scatter_stats(std::span<const GrowthPoint> points) {
  std::vector<double> xs;
  std::vector<double> ys;
  xs.reserve(points.size());
  ys.reserve(points.size());
  for (const auto& point : points) {
    xs.push_back(point.predicted);
    ys.push_back(point.actual);
  }
  return scatter_stats(xs, ys);
}

}  // namespace tcmesh
