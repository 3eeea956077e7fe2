#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tcmesh/network.hpp"

namespace tcmesh {

// Coarse access-to-bank-credit classes derived from the 1..9 rating score.
enum class RatingClass { A, B, C };

RatingClass rating_class(int rating);  // 1-3 -> A, 4-6 -> B, 7-9 -> C
char rating_class_letter(RatingClass cls);

// Product-moment correlation. Throws Error{invalid_argument} on length
// mismatch or n < 2, Error{degenerate_variance} if either axis is constant.
double pearson(std::span<const double> xs, std::span<const double> ys);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Ordinary least squares of y on x. Throws Error{insufficient_data} for
// n < 2 and Error{degenerate_variance} for constant x.
LinearFit ols(std::span<const double> xs, std::span<const double> ys);

struct CcdfPoint {
  std::uint32_t k = 0;     // degree value
  double fraction = 0.0;   // share of nodes with degree >= k
};

// Complementary cumulative distribution of a positive degree sequence, one
// point per distinct degree, ascending. Non-increasing, starts at 1.
std::vector<CcdfPoint> ccdf_points(std::span<const std::uint32_t> degrees);

struct CcdfFit {
  double slope = 0.0;      // cumulative (CCDF) exponent; density exponent is slope - 1
  double intercept = 0.0;
  std::uint32_t k_min = 1;
  std::uint32_t k_max = 0;
  std::size_t n_points = 0;
  double r_squared = 0.0;
};

// Least-squares line through (ln k, ln CCDF(k)) for k_min <= k <= k_max.
// Needs at least 3 distinct degrees inside the window.
CcdfFit fit_ccdf_slope(std::span<const CcdfPoint> ccdf, std::uint32_t k_min, std::uint32_t k_max);

struct DegreeBin {
  int bin = 0;             // unit-width bin in ln(K_in): bin <= ln k < bin+1
  std::size_t n = 0;
  double median_log_sales = 0.0;
  double q1_log_sales = 0.0;
  double q3_log_sales = 0.0;
};

struct RegressionResult {
  double slope = 0.0;
  double intercept = 0.0;
  std::optional<double> pearson_r;  // nullopt when an axis is degenerate
  std::size_t n = 0;
  double cutoff_applied = 0.0;
  std::vector<DegreeBin> bins;
};

// OLS of ln(sales_2007) on ln(K_in) over the given suppliers, excluding
// degrees above the cutoff, plus per-log-bin quartiles of ln(sales).
// Throws Error{insufficient_data} with fewer than 3 usable suppliers.
RegressionResult size_degree_regression(const TradeNetwork& net,
                                        std::span<const FirmId> suppliers,
                                        double degree_cutoff);

// Strict size boundary used throughout: sales_2007 > 1e6 EUR.
inline constexpr double kLargeFirmSalesEur = 1e6;

// One (predicted, actual) compound-growth pair with the attributes the
// stratified tables group by.
struct CorrelationSample {
  double predicted = 0.0;
  double actual = 0.0;
  RatingClass rating = RatingClass::A;
  bool large_firm = false;
  char sector_letter = 'D';
};

enum class Grouping { rating, rating_size, sector };

std::string_view to_string(Grouping grouping);
std::optional<Grouping> grouping_from_string(std::string_view name);

struct CorrelationRow {
  std::string group;          // "A", "B/large", "G", ...
  std::optional<double> r;    // nullopt marks an insufficient group
  std::size_t n = 0;
};

using CorrelationTable = std::vector<CorrelationRow>;

// Per-group Pearson r of (predicted, actual). Every group of the grouping is
// emitted in a fixed canonical order; groups with n < 2 or a constant axis
// carry no r value.
CorrelationTable grouped_correlations(std::span<const CorrelationSample> samples,
                                      Grouping grouping);

// Quantile by linear interpolation between order statistics (the plotting
// convention: h = (n-1)p). `sorted` must be ascending and non-empty.
double quantile_sorted(std::span<const double> sorted, double p);

}  // namespace tcmesh
