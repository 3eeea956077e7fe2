#pragma once

#include <string>
#include <vector>

#include "tcmesh/ingest.hpp"
#include "tcmesh/network.hpp"
#include "tcmesh/rng.hpp"
#include "tcmesh/types.hpp"

namespace tcmesh::test {

inline BalanceRecord bal(FirmId firm, int year, double sales, double purchases,
                         int rating = 5, char sector = 'D') {
  return {std::move(firm), year, sales, purchases, rating, SectorCode{sector, std::nullopt}};
}

inline InvoiceRecord inv(FirmId supplier, FirmId customer, double amount) {
  return {std::move(supplier), std::move(customer), kAnchorYear, amount};
}

// Balance rows for all three years with flat sales/purchases.
inline void add_flat_firm(std::vector<BalanceRecord>& out, const FirmId& firm, double sales,
                          double purchases, int rating = 5, char sector = 'D') {
  for (int year = kFirstYear; year <= kLastYear; ++year) {
    out.push_back(bal(firm, year, sales, purchases, rating, sector));
  }
}

struct RandomNet {
  std::vector<BalanceRecord> balances;
  std::vector<InvoiceRecord> invoices;
};

// Small random network with complete balance coverage: n_suppliers suppliers
// "S#", n_customers customers "C#", each supplier getting 1..max_degree
// distinct customers with uniform weights. Purchases vary year over year.
inline RandomNet random_net(Xoshiro256StarStar& rng, std::size_t n_suppliers,
                            std::size_t n_customers, std::size_t max_degree) {
  RandomNet net;
  const auto customer_id = [](std::size_t c) { return "C" + std::to_string(100 + c); };
  const auto supplier_id = [](std::size_t s) { return "S" + std::to_string(100 + s); };

  for (std::size_t c = 0; c < n_customers; ++c) {
    const double p07 = rng.uniform_in(1e4, 1e6);
    net.balances.push_back(bal(customer_id(c), 2006, p07 * rng.uniform_in(1.0, 2.0),
                               p07 * rng.uniform_in(0.7, 1.3)));
    net.balances.push_back(bal(customer_id(c), 2007, p07 * rng.uniform_in(1.0, 2.0), p07));
    net.balances.push_back(bal(customer_id(c), 2008, p07 * rng.uniform_in(1.0, 2.0),
                               p07 * rng.uniform_in(0.7, 1.3)));
  }
  for (std::size_t s = 0; s < n_suppliers; ++s) {
    const double sales = rng.uniform_in(1e5, 1e7);
    add_flat_firm(net.balances, supplier_id(s), sales, 0.6 * sales,
                  1 + static_cast<int>(rng.bounded(9)));
    const auto degree = 1 + rng.bounded(max_degree);
    std::vector<std::size_t> picks;
    for (std::uint64_t d = 0; d < degree; ++d) {
      picks.push_back(rng.bounded(n_customers));
    }
    std::sort(picks.begin(), picks.end());
    picks.erase(std::unique(picks.begin(), picks.end()), picks.end());
    for (const std::size_t c : picks) {
      net.invoices.push_back(inv(supplier_id(s), customer_id(c), rng.uniform_in(1e3, 1e5)));
    }
  }
  return net;
}

}  // namespace tcmesh::test
