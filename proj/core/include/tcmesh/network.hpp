#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tcmesh/ingest.hpp"
#include "tcmesh/types.hpp"

namespace tcmesh {

// One aggregated incoming edge of a supplier: total invoices received from
// one customer.
struct InEdge {
  std::uint32_t customer = 0;  // index into TradeNetwork::customers
  double weight = 0.0;         // EUR, > 0
};

// Weighted directed trade-credit network, customers -> suppliers. Immutable
// after build_network; node lists are sorted by FirmId and edge lists by
// customer index, so every traversal order is deterministic.
class TradeNetwork {
 public:
  TradeNetwork() = default;
  TradeNetwork(std::vector<FirmId> suppliers, std::vector<FirmId> customers,
               std::vector<std::vector<InEdge>> in_edges, const Dataset* dataset);

  const std::vector<FirmId>& suppliers() const { return suppliers_; }
  const std::vector<FirmId>& customers() const { return customers_; }
  std::span<const InEdge> incoming(std::size_t supplier_idx) const { return in_edges_[supplier_idx]; }

  // Total incoming weight of a supplier: sum over customers of the
  // aggregated invoice flows into it.
  double incoming_total(std::size_t supplier_idx) const { return incoming_total_[supplier_idx]; }
  std::uint32_t out_degree(std::size_t customer_idx) const { return out_degree_[customer_idx]; }

  std::optional<std::size_t> supplier_index(const FirmId& id) const;
  std::optional<std::size_t> customer_index(const FirmId& id) const;

  std::size_t n_links() const { return n_links_; }
  const Dataset& dataset() const;

 private:
  std::vector<FirmId> suppliers_;
  std::vector<FirmId> customers_;
  std::vector<std::vector<InEdge>> in_edges_;  // parallel to suppliers_
  std::vector<double> incoming_total_;
  std::vector<std::uint32_t> out_degree_;      // parallel to customers_
  std::unordered_map<FirmId, std::size_t> supplier_idx_;
  std::unordered_map<FirmId, std::size_t> customer_idx_;
  std::size_t n_links_ = 0;
  const Dataset* dataset_ = nullptr;
};

// Sums invoices per (customer, supplier) pair into the simple weighted
// digraph. An empty dataset yields an empty network.
TradeNetwork build_network(const Dataset& dataset);

struct NetworkSummary {
  std::size_t n_suppliers = 0;
  std::size_t n_customers = 0;
  std::size_t n_links = 0;
  std::size_t n_reciprocal_pairs = 0;  // unordered node pairs linked both ways
  double avg_in_neighbors = 0.0;       // n_links / n_suppliers
  double avg_out_neighbors = 0.0;      // n_links / n_customers
};

NetworkSummary network_summary(const TradeNetwork& net);

struct MatchingRow {
  FirmId supplier;
  double incoming_total_eur = 0.0;  // sum of aggregated incoming flows
  double sales_2007_eur = 0.0;
  double ratio = 0.0;  // incoming_total / sales
  bool in_range = false;
};

// Completeness ratio of one supplier: bank-recorded incoming invoices over
// balance-sheet annual sales. Throws Error{balance_missing} without a 2007
// balance row; a firm absent from the network has ratio 0.
double matching_ratio(const TradeNetwork& net, const FirmId& supplier);

// Per-supplier matching rows for every supplier with a 2007 balance, sorted
// by FirmId; suppliers lacking the balance are returned separately.
struct MatchingReport {
  std::vector<MatchingRow> rows;
  std::vector<FirmId> missing_balance;
};
MatchingReport matching_report(const TradeNetwork& net, double lo, double hi);

struct MatchingFilter {
  std::vector<FirmId> retained;                // lo < ratio < hi, sorted
  std::vector<FirmId> excluded_missing_balance;
  TradeNetwork subnetwork;                     // only edges into retained suppliers
};

// Strict-inequality completeness filter; boundary ratios are excluded.
MatchingFilter filter_by_matching(const TradeNetwork& net, double lo, double hi);

// Which denominator defines the key-customer share. The default is
// balance-sheet annual sales; incoming_total is the in-network alternative
// (the two differ by exactly the matching ratio).
enum class ShareDenominator { balance_sales, incoming_total };

struct KeyCustomerFlag {
  FirmId supplier;
  bool has_key_customer = false;        // share >= 0.5
  std::optional<FirmId> key_customer;   // largest payer; ties broken by id
  double share = 0.0;                   // max_j R_ji / denominator
};

KeyCustomerFlag key_customer(const TradeNetwork& net, const FirmId& supplier,
                             ShareDenominator denom = ShareDenominator::balance_sales);

// Weakly connected component sizes, descending.
std::vector<std::size_t> weak_components(const TradeNetwork& net);

struct DegreeSequences {
  std::vector<std::uint32_t> in_degrees;   // aligned with net.suppliers()
  std::vector<std::uint32_t> out_degrees;  // aligned with net.customers()
};

// K_in(i) = distinct customers of supplier i; K_out(j) = distinct suppliers
// of customer j.
DegreeSequences degree_sequences(const TradeNetwork& net);

}  // namespace tcmesh
