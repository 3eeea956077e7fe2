#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include "tcmesh/ingest.hpp"
#include "tcmesh/rng.hpp"
#include "tcmesh/stats.hpp"
#include "tcmesh/types.hpp"

namespace tcmesh {

// Generator parameters. The planted relation is, per period,
//
//   actual log growth of supplier i = beta_i * x_i + eps_i + (drift via x)
//
// where x_i is the aggregated customer purchase growth computed with the
// exact formula the pipeline uses, so the coefficients are recoverable
// ground truth.
struct SynthConfig {
  std::size_t n_suppliers = 1000;
  double degree_exponent = 2.3;       // density exponent of the K_in power law
  double weight_tail_exponent = 2.0;  // Pareto tail of edge weights
  double matching_lo = 0.8;
  double matching_hi = 1.2;
  double coverage_min = 1.2;     // customer purchases >= coverage_min * in-network spend
  std::array<double, 3> beta_by_class{1.0, 1.0, 1.0};  // indexed by RatingClass
  // Optional per-sector override of beta, keyed by sector letter.
  std::vector<std::pair<char, double>> sector_beta_override;
  double mu_first = 0.0;   // macro log drift, 2006->2007
  double mu_second = 0.0;  // macro log drift, 2007->2008
  double sigma_supplier = 0.0;  // idiosyncratic noise on supplier growth
  double sigma_customer = 0.1;  // dispersion of customer purchase growth
  std::array<double, 9> rating_mix{1.0 / 9, 1.0 / 9, 1.0 / 9, 1.0 / 9, 1.0 / 9,
                                   1.0 / 9, 1.0 / 9, 1.0 / 9, 1.0 / 9};
  std::vector<std::pair<char, double>> sector_mix{
      {'D', 0.5}, {'F', 0.1}, {'G', 0.15}, {'I', 0.1}, {'K', 0.15}};
  std::uint64_t seed = 1;
  // Customer pool = factor * n_suppliers; most customers end up with
  // out-degree 1.
  std::size_t customer_pool_factor = 16;

  void set_beta(double beta) { beta_by_class = {beta, beta, beta}; }
  void validate() const;  // throws Error{invalid_argument}
};

struct PlantedSupplier {
  FirmId supplier;
  double x_first = 0.0;    // true aggregated customer growth, 2006->2007
  double x_second = 0.0;   // 2007->2008
  double eps_first = 0.0;  // idiosyncratic noise actually drawn
  double eps_second = 0.0;
  RatingClass rating = RatingClass::A;
  double beta = 1.0;
};

struct PlantedTruth {
  double mu_first = 0.0;
  double mu_second = 0.0;
  std::vector<PlantedSupplier> suppliers;  // ordered by supplier id
};

struct Generated {
  std::vector<BalanceRecord> balances;
  std::vector<InvoiceRecord> invoices;
  PlantedTruth truth;
};

// Deterministic generation: same (config, seed) gives bit-identical records.
// Every supplier lands strictly inside the matching range by construction.
Generated generate(const SynthConfig& config);

// Boom then bust: positive first-period drift, negative second-period drift.
Generated scenario_boom_bust(SynthConfig config, double mu_first = 0.05,
                             double mu_second = -0.05);

// In-degree sampling primitive: discrete power law p(k) ~ k^-exponent on
// 1..k_cap via inverse CDF.
std::vector<std::uint32_t> sample_in_degrees(std::size_t n, double density_exponent,
                                             std::uint32_t k_cap, Xoshiro256StarStar& rng);

Dataset to_dataset(const Generated& generated,
                   CoveragePolicy policy = CoveragePolicy::keep);

// Writes balance.csv, invoices.csv and truth.json into `dir`.
void write_generated(const Generated& generated, const std::filesystem::path& dir);

}  // namespace tcmesh
