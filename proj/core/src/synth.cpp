#include "tcmesh/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <span>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "tcmesh/csv.hpp"
#include "tcmesh/error.hpp"
#include "tcmesh/util.hpp"

namespace tcmesh {

namespace {

constexpr double kWeightFloorEur = 20000.0;
// Cap on a single edge weight so that even extreme tail draws stay well
// inside the parseable amount range (2^53 EUR).
constexpr double kWeightCapEur = 1e12;
constexpr std::size_t kIdDigits = 8;

FirmId make_id(char prefix, std::size_t index) {
  char buffer[24];
  std::snprintf(buffer, sizeof(buffer), "%c%0*zu", prefix, static_cast<int>(kIdDigits),
                index + 1);
  return FirmId(buffer);
}

double check_prob_mix(std::span<const double> probs) {
  double total = 0.0;
  for (double p : probs) {
    if (p < 0.0) throw Error(ErrorCode::invalid_argument, "mix probabilities must be >= 0");
    total += p;
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    throw Error(ErrorCode::invalid_argument, "mix probabilities must sum to 1");
  }
  return total;
}

std::size_t draw_categorical(Xoshiro256StarStar& rng, std::span<const double> probs,
                             double total) {
  const double u = rng.uniform() * total;
  double cum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    cum += probs[i];
    if (u < cum) return i;
  }
  return probs.size() - 1;
}

// Pareto with density exponent `a` (pdf ~ w^-a for w >= floor), via inverse
// CCDF; capped to keep generated files parseable.
double draw_weight(Xoshiro256StarStar& rng, double tail_exponent) {
  const double u = rng.uniform_pos();
  const double w = kWeightFloorEur * std::pow(u, -1.0 / (tail_exponent - 1.0));
  return std::min(w, kWeightCapEur);
}

// Floyd's sampling of `k` distinct values from [0, pool); returned sorted.
std::vector<std::uint32_t> draw_distinct(Xoshiro256StarStar& rng, std::uint32_t pool,
                                         std::uint32_t k) {
  std::unordered_set<std::uint32_t> chosen;
  chosen.reserve(k);
  for (std::uint32_t i = pool - k; i < pool; ++i) {
    const auto candidate = static_cast<std::uint32_t>(rng.bounded(i + 1));
    if (!chosen.insert(candidate).second) chosen.insert(i);
  }
  std::vector<std::uint32_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

void SynthConfig::validate() const {
  if (n_suppliers == 0) throw Error(ErrorCode::invalid_argument, "n_suppliers must be > 0");
  if (customer_pool_factor == 0) {
    throw Error(ErrorCode::invalid_argument, "customer_pool_factor must be > 0");
  }
  const std::size_t pool = n_suppliers * customer_pool_factor;
  if (pool > 99'999'999) {
    throw Error(ErrorCode::invalid_argument, "customer pool exceeds the representable id space");
  }
  if (!(degree_exponent > 1.0)) {
    throw Error(ErrorCode::invalid_argument, "degree_exponent must be > 1");
  }
  if (!(weight_tail_exponent > 1.0)) {
    throw Error(ErrorCode::invalid_argument, "weight_tail_exponent must be > 1");
  }
  if (!(matching_lo > 0.0 && matching_lo < matching_hi)) {
    throw Error(ErrorCode::invalid_argument, "matching range must satisfy 0 < lo < hi");
  }
  if (!(coverage_min >= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "coverage_min must be >= 1");
  }
  if (sigma_supplier < 0.0 || sigma_customer < 0.0) {
    throw Error(ErrorCode::invalid_argument, "sigmas must be >= 0");
  }
  check_prob_mix(rating_mix);
  if (sector_mix.empty()) throw Error(ErrorCode::invalid_argument, "sector_mix is empty");
  std::vector<double> sector_probs;
  for (const auto& [letter, p] : sector_mix) {
    if (kSectorLetters.find(letter) == std::string_view::npos) {
      throw Error(ErrorCode::invalid_argument, std::string("unknown sector letter ") + letter);
    }
    sector_probs.push_back(p);
  }
  check_prob_mix(sector_probs);
}

std::vector<std::uint32_t> sample_in_degrees(std::size_t n, double density_exponent,
                                             std::uint32_t k_cap, Xoshiro256StarStar& rng) {
  if (k_cap == 0 || !(density_exponent > 1.0)) {
    throw Error(ErrorCode::invalid_argument, "sample_in_degrees: bad exponent or cap");
  }
  // Truncated zeta inverse-CDF table: cdf[k-1] = sum_{j<=k} j^-a.
  std::vector<double> cdf(k_cap);
  double cum = 0.0;
  for (std::uint32_t k = 1; k <= k_cap; ++k) {
    cum += std::pow(static_cast<double>(k), -density_exponent);
    cdf[k - 1] = cum;
  }
  std::vector<std::uint32_t> degrees(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform() * cum;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    degrees[i] = static_cast<std::uint32_t>(it - cdf.begin()) + 1;
  }
  return degrees;
}

Generated generate(const SynthConfig& config) {
  config.validate();
  const std::size_t n = config.n_suppliers;
  const auto pool = static_cast<std::uint32_t>(n * config.customer_pool_factor);
  Xoshiro256StarStar rng(config.seed);

  // Draw phases run in a fixed order, each a single ascending-index loop, so
  // the entire dataset is a pure function of (config, seed).

  // A: in-degrees.
  const auto degrees = sample_in_degrees(n, config.degree_exponent, pool, rng);

  // B: customer picks and edge weights.
  std::vector<std::vector<std::uint32_t>> customers_of(n);
  std::vector<std::vector<double>> weights_of(n);
  for (std::size_t s = 0; s < n; ++s) {
    customers_of[s] = draw_distinct(rng, pool, degrees[s]);
    auto& weights = weights_of[s];
    weights.reserve(customers_of[s].size());
    for (std::size_t e = 0; e < customers_of[s].size(); ++e) {
      weights.push_back(draw_weight(rng, config.weight_tail_exponent));
    }
  }

  // C: anchor-year sales via a matching ratio drawn strictly inside the
  // range; the margin keeps downstream rounding from touching a boundary.
  std::vector<double> supplier_sales07(n);
  std::vector<double> incoming_total(n);
  const double margin = 1e-9 * (config.matching_hi - config.matching_lo);
  for (std::size_t s = 0; s < n; ++s) {
    double total = 0.0;
    for (double w : weights_of[s]) total += w;
    incoming_total[s] = total;
    double m = 0.0;
    do {
      m = rng.uniform_in(config.matching_lo, config.matching_hi);
    } while (m - config.matching_lo < margin || config.matching_hi - m < margin);
    supplier_sales07[s] = total / m;
  }

  // Active customers and their in-network spend.
  std::vector<double> spend(pool, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t e = 0; e < customers_of[s].size(); ++e) {
      spend[customers_of[s][e]] += weights_of[s][e];
    }
  }
  std::vector<std::uint32_t> active;
  for (std::uint32_t c = 0; c < pool; ++c) {
    if (spend[c] > 0.0) active.push_back(c);
  }

  // D: customer purchases, all three years.
  std::vector<double> p06(pool, 0.0), p07(pool, 0.0), p08(pool, 0.0);
  for (const std::uint32_t c : active) {
    const double coverage = rng.uniform_in(config.coverage_min, 2.0 * config.coverage_min);
    const double g1 = rng.normal(config.mu_first, config.sigma_customer);
    const double g2 = rng.normal(config.mu_second, config.sigma_customer);
    p07[c] = coverage * spend[c];
    p06[c] = p07[c] * std::exp(-g1);
    p08[c] = p07[c] * std::exp(g2);
  }

  // E: supplier attributes, planted growth relation, remaining sales years.
  std::vector<double> rating_probs(config.rating_mix.begin(), config.rating_mix.end());
  std::vector<double> sector_probs;
  for (const auto& [_, p] : config.sector_mix) sector_probs.push_back(p);

  Generated out;
  out.truth.mu_first = config.mu_first;
  out.truth.mu_second = config.mu_second;
  out.truth.suppliers.reserve(n);

  std::vector<double> supplier_sales06(n), supplier_sales08(n);
  std::vector<int> supplier_rating(n);
  std::vector<SectorCode> supplier_sector(n);
  for (std::size_t s = 0; s < n; ++s) {
    const auto rating = static_cast<int>(draw_categorical(rng, rating_probs, 1.0)) + 1;
    const std::size_t sector_pick = draw_categorical(rng, sector_probs, 1.0);
    SectorCode sector{config.sector_mix[sector_pick].first, std::nullopt};
    if (sector.letter == 'D') {
      sector.sub_code = 1500 + static_cast<int>(rng.bounded(2300));  // 15xx..37xx
    }
    const double eps1 = rng.normal(0.0, config.sigma_supplier);
    const double eps2 = rng.normal(0.0, config.sigma_supplier);

    // Exact aggregated customer growth, same arithmetic the pipeline uses.
    double sum_r = 0.0, sum_back = 0.0, sum_fwd = 0.0;
    for (std::size_t e = 0; e < customers_of[s].size(); ++e) {
      const std::uint32_t c = customers_of[s][e];
      const double w = weights_of[s][e];
      sum_r += w;
      sum_back += p06[c] / p07[c] * w;
      sum_fwd += p08[c] / p07[c] * w;
    }
    const double x1 = std::log(sum_r / sum_back);
    const double x2 = std::log(sum_fwd / sum_r);

    const RatingClass cls = rating_class(rating);
    double beta = config.beta_by_class[static_cast<std::size_t>(cls)];
    for (const auto& [letter, override_beta] : config.sector_beta_override) {
      if (letter == sector.letter) beta = override_beta;
    }

    supplier_rating[s] = rating;
    supplier_sector[s] = sector;
    supplier_sales06[s] = supplier_sales07[s] * std::exp(-(beta * x1 + eps1));
    supplier_sales08[s] = supplier_sales07[s] * std::exp(beta * x2 + eps2);

    out.truth.suppliers.push_back({make_id('S', s), x1, x2, eps1, eps2, cls, beta});
  }

  // F: supplier purchases as a stable fraction of sales (unused by the
  // analyses, present for schema completeness).
  std::vector<double> supplier_purchase_factor(n);
  for (std::size_t s = 0; s < n; ++s) {
    supplier_purchase_factor[s] = rng.uniform_in(0.5, 0.9);
  }

  // G: customer-side attributes and sales rows.
  out.balances.reserve(3 * (n + active.size()));
  for (std::size_t s = 0; s < n; ++s) {
    const FirmId id = make_id('S', s);
    const double f = supplier_purchase_factor[s];
    const std::array<double, 3> sales{supplier_sales06[s], supplier_sales07[s],
                                      supplier_sales08[s]};
    for (int y = kFirstYear; y <= kLastYear; ++y) {
      const double sale = sales[static_cast<std::size_t>(y - kFirstYear)];
      out.balances.push_back(
          {id, y, sale, f * sale, supplier_rating[s], supplier_sector[s]});
    }
  }
  for (const std::uint32_t c : active) {
    const double gamma = rng.uniform_in(0.4, 0.8);
    const auto rating = static_cast<int>(draw_categorical(rng, rating_probs, 1.0)) + 1;
    const std::size_t sector_pick = draw_categorical(rng, sector_probs, 1.0);
    SectorCode sector{config.sector_mix[sector_pick].first, std::nullopt};
    if (sector.letter == 'D') {
      sector.sub_code = 1500 + static_cast<int>(rng.bounded(2300));
    }
    const FirmId id = make_id('C', c);
    const std::array<double, 3> purchases{p06[c], p07[c], p08[c]};
    for (int y = kFirstYear; y <= kLastYear; ++y) {
      const double purchase = purchases[static_cast<std::size_t>(y - kFirstYear)];
      out.balances.push_back({id, y, purchase / gamma, purchase, rating, sector});
    }
  }

  out.invoices.reserve(std::accumulate(degrees.begin(), degrees.end(), std::size_t{0},
                                       [](std::size_t acc, std::uint32_t d) { return acc + d; }));
  for (std::size_t s = 0; s < n; ++s) {
    const FirmId supplier = make_id('S', s);
    for (std::size_t e = 0; e < customers_of[s].size(); ++e) {
      out.invoices.push_back(
          {supplier, make_id('C', customers_of[s][e]), kAnchorYear, weights_of[s][e]});
    }
  }
  return out;
}

Generated scenario_boom_bust(SynthConfig config, double mu_first, double mu_second) {
  if (!(mu_first > 0.0) || !(mu_second < 0.0)) {
    throw Error(ErrorCode::invalid_argument,
                "boom-bust needs mu_first > 0 and mu_second < 0");
  }
  config.mu_first = mu_first;
  config.mu_second = mu_second;
  return generate(config);
}

Dataset to_dataset(const Generated& generated, CoveragePolicy policy) {
  return Dataset::assemble(generated.balances, generated.invoices, policy);
}

void write_generated(const Generated& generated, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ostringstream out;
    write_balance_csv(out, generated.balances);
    write_file(dir / "balance.csv", out.str());
  }
  {
    std::ostringstream out;
    write_invoices_csv(out, generated.invoices);
    write_file(dir / "invoices.csv", out.str());
  }

  nlohmann::ordered_json truth;
  truth["schema"] = "tcmesh-truth/1";
  truth["mu"] = {{Period::first().label(), generated.truth.mu_first},
                 {Period::second().label(), generated.truth.mu_second}};
  auto& suppliers = truth["suppliers"] = nlohmann::ordered_json::array();
  for (const auto& planted : generated.truth.suppliers) {
    nlohmann::ordered_json row;
    row["id"] = planted.supplier;
    row["rating_class"] = std::string(1, rating_class_letter(planted.rating));
    row["beta"] = planted.beta;
    row["x"] = {{Period::first().label(), planted.x_first},
                {Period::second().label(), planted.x_second}};
    row["eps"] = {{Period::first().label(), planted.eps_first},
                  {Period::second().label(), planted.eps_second}};
    suppliers.push_back(std::move(row));
  }
  write_file(dir / "truth.json", truth.dump(2) + "\n");
}

}  // namespace tcmesh
