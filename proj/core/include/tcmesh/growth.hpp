#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tcmesh/network.hpp"
#include "tcmesh/stats.hpp"
#include "tcmesh/types.hpp"

namespace tcmesh {

// How to treat customers whose balance rows are incomplete for a period:
// drop_renormalize omits them from both sums of the predicted-growth ratio,
// fail raises instead.
enum class MissingPolicy { drop_renormalize, fail };

// ln(sales_{y1} / sales_{y0}) of one supplier. Throws Error{balance_missing}
// if either year is absent.
double actual_log_growth(const Dataset& dataset, const FirmId& supplier, Period period);

struct PredictedGrowth {
  double value = 0.0;                  // nats
  double usable_weight_fraction = 1.0; // retained incoming weight / total
};

// Aggregated demand growth of a supplier's customers:
//
//   ln( sum_j (P_{j,y1}/P_{j,2007}) R_ji  /  sum_j (P_{j,y0}/P_{j,2007}) R_ji )
//
// One of y0/y1 is always the anchor year, so for 2007->2008 this is the
// forward estimate sum(P08/P07 * R)/sum(R) and for 2006->2007 the backward
// estimate sum(R)/sum(P06/P07 * R); the ratio form covers both. A customer
// contributes only if its purchases are positive in every year the period
// touches; others follow the missing policy.
PredictedGrowth predicted_log_growth(const TradeNetwork& net, const FirmId& supplier,
                                     Period period,
                                     MissingPolicy policy = MissingPolicy::drop_renormalize);

// One supplier's point in the predicted-vs-actual growth plane.
struct GrowthPoint {
  FirmId supplier;
  double predicted = 0.0;  // X axis
  double actual = 0.0;     // Y axis
  Period period;
  double usable_weight_fraction = 1.0;
};

struct Exclusion {
  FirmId supplier;
  std::string reason;
};

struct Scatter {
  std::vector<GrowthPoint> points;      // sorted by supplier id
  std::vector<Exclusion> exclusions;
};

// Computes one GrowthPoint per supplier for which both coordinates exist;
// the rest land in the exclusion log. Per-supplier work is parallelized over
// `threads` (0 = hardware) and merged in sorted id order.
Scatter build_scatter(const TradeNetwork& net, std::span<const FirmId> suppliers,
                      Period period, MissingPolicy policy = MissingPolicy::drop_renormalize,
                      std::size_t threads = 1);

// Mean log growth over the two consecutive periods, with the attributes the
// stratified correlation tables need.
struct CagrPoint {
  FirmId supplier;
  double predicted_cagr = 0.0;  // nats/year
  double actual_cagr = 0.0;
  RatingClass rating = RatingClass::A;
  bool large_firm = false;      // sales_2007 > 1e6 EUR
  char sector_letter = 'D';
};

struct CagrResult {
  std::vector<CagrPoint> points;  // sorted by supplier id
  std::vector<Exclusion> exclusions;
};

CagrResult cagr_points(const TradeNetwork& net, std::span<const FirmId> suppliers,
                       MissingPolicy policy = MissingPolicy::drop_renormalize,
                       std::size_t threads = 1);

std::vector<CorrelationSample> to_correlation_samples(std::span<const CagrPoint> points);

// Quadrants follow the usual numbering (I: +x +y, II: -x +y, III: -x -y,
// IV: +x -y); exact zeros count as positive so the partition is total.
int quadrant_of(double x, double y);

struct ScatterStats {
  std::size_t n = 0;
  double median_x = 0.0, median_y = 0.0;
  double mean_x = 0.0, mean_y = 0.0;
  double q1_x = 0.0, q3_x = 0.0;
  double q1_y = 0.0, q3_y = 0.0;
  std::array<std::size_t, 4> quadrant_counts{};  // I..IV
  int centroid_quadrant = 1;                     // quadrant of (median_x, median_y)
};

// Throws Error{empty_input} on an empty cloud.
ScatterStats scatter_stats(std::span<const double> xs, std::span<const double> ys);
ScatterStats scatter_stats(std::span<const GrowthPoint> points);

}  // namespace tcmesh
