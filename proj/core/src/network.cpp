#include "tcmesh/network.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <utility>

#include "tcmesh/error.hpp"

namespace tcmesh {

TradeNetwork::TradeNetwork(std::vector<FirmId> suppliers, std::vector<FirmId> customers,
                           std::vector<std::vector<InEdge>> in_edges, const Dataset* dataset)
    : suppliers_(std::move(suppliers)),
      customers_(std::move(customers)),
      in_edges_(std::move(in_edges)),
      dataset_(dataset) {
  incoming_total_.resize(suppliers_.size(), 0.0);
  out_degree_.resize(customers_.size(), 0);
  for (std::size_t s = 0; s < suppliers_.size(); ++s) {
    double total = 0.0;
    for (const auto& edge : in_edges_[s]) {
      total += edge.weight;
      ++out_degree_[edge.customer];
      ++n_links_;
    }
    incoming_total_[s] = total;
  }
  supplier_idx_.reserve(suppliers_.size());
  for (std::size_t s = 0; s < suppliers_.size(); ++s) supplier_idx_[suppliers_[s]] = s;
  customer_idx_.reserve(customers_.size());
  for (std::size_t c = 0; c < customers_.size(); ++c) customer_idx_[customers_[c]] = c;
}

std::optional<std::size_t> TradeNetwork::supplier_index(const FirmId& id) const {
  const auto it = supplier_idx_.find(id);
  if (it == supplier_idx_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> TradeNetwork::customer_index(const FirmId& id) const {
  const auto it = customer_idx_.find(id);
  if (it == customer_idx_.end()) return std::nullopt;
  return it->second;
}

const Dataset& TradeNetwork::dataset() const {
  if (dataset_ == nullptr) throw Error(ErrorCode::internal, "network has no dataset attached");
  return *dataset_;
}

TradeNetwork build_network(const Dataset& dataset) {
  // Ordered map keyed (supplier, customer) so node and edge lists come out
  // sorted without a separate pass.
  std::map<std::pair<FirmId, FirmId>, double> aggregated;
  for (const auto& invoice : dataset.invoices()) {
    aggregated[{invoice.supplier, invoice.customer}] += invoice.amount_eur;
  }

  std::vector<FirmId> suppliers;
  std::vector<FirmId> customers;
  for (const auto& [pair, _] : aggregated) {
    if (suppliers.empty() || suppliers.back() != pair.first) suppliers.push_back(pair.first);
    customers.push_back(pair.second);
  }
  std::sort(customers.begin(), customers.end());
  customers.erase(std::unique(customers.begin(), customers.end()), customers.end());

  std::unordered_map<FirmId, std::uint32_t> customer_index;
  customer_index.reserve(customers.size());
  for (std::uint32_t c = 0; c < customers.size(); ++c) customer_index[customers[c]] = c;

  std::vector<std::vector<InEdge>> in_edges(suppliers.size());
  std::size_t supplier_pos = 0;
  for (const auto& [pair, weight] : aggregated) {
    while (suppliers[supplier_pos] != pair.first) ++supplier_pos;
    in_edges[supplier_pos].push_back({customer_index.at(pair.second), weight});
  }
  for (auto& edges : in_edges) {
    std::sort(edges.begin(), edges.end(),
              [](const InEdge& a, const InEdge& b) { return a.customer < b.customer; });
  }
  return TradeNetwork(std::move(suppliers), std::move(customers), std::move(in_edges), &dataset);
}

NetworkSummary network_summary(const TradeNetwork& net) {
  NetworkSummary summary;
  summary.n_suppliers = net.suppliers().size();
  summary.n_customers = net.customers().size();
  summary.n_links = net.n_links();

  // Reciprocal pairs: unordered node pairs {a, b} with a->b and b->a.
  std::size_t reciprocal = 0;
  for (std::size_t s = 0; s < net.suppliers().size(); ++s) {
    const FirmId& supplier = net.suppliers()[s];
    for (const auto& edge : net.incoming(s)) {
      const FirmId& customer = net.customers()[edge.customer];
      if (!(supplier < customer)) continue;  // count each unordered pair once
      // supplier receives from customer; reciprocal if customer also
      // receives from supplier.
      const auto rev_supplier = net.supplier_index(customer);
      if (!rev_supplier) continue;
      const auto rev_customer = net.customer_index(supplier);
      if (!rev_customer) continue;
      const auto& rev_edges = net.incoming(*rev_supplier);
      const auto it = std::lower_bound(
          rev_edges.begin(), rev_edges.end(), static_cast<std::uint32_t>(*rev_customer),
          [](const InEdge& e, std::uint32_t c) { return e.customer < c; });
      if (it != rev_edges.end() && it->customer == *rev_customer) ++reciprocal;
    }
  }
  summary.n_reciprocal_pairs = reciprocal;

  if (summary.n_suppliers > 0) {
    summary.avg_in_neighbors =
        static_cast<double>(summary.n_links) / static_cast<double>(summary.n_suppliers);
  }
  if (summary.n_customers > 0) {
    summary.avg_out_neighbors =
        static_cast<double>(summary.n_links) / static_cast<double>(summary.n_customers);
  }
  return summary;
}

double matching_ratio(const TradeNetwork& net, const FirmId& supplier) {
  const BalanceRecord* balance = net.dataset().balance(supplier, kAnchorYear);
  if (balance == nullptr) {
    throw Error(ErrorCode::balance_missing, "no 2007 balance for supplier " + supplier);
  }
  const auto idx = net.supplier_index(supplier);
  const double incoming = idx ? net.incoming_total(*idx) : 0.0;
  return incoming / balance->sales_eur;
}

MatchingReport matching_report(const TradeNetwork& net, double lo, double hi) {
  MatchingReport report;
  report.rows.reserve(net.suppliers().size());
  for (std::size_t s = 0; s < net.suppliers().size(); ++s) {
    const FirmId& supplier = net.suppliers()[s];
    const BalanceRecord* balance = net.dataset().balance(supplier, kAnchorYear);
    if (balance == nullptr) {
      report.missing_balance.push_back(supplier);
      continue;
    }
    const double incoming = net.incoming_total(s);
    const double ratio = incoming / balance->sales_eur;
    report.rows.push_back(
        {supplier, incoming, balance->sales_eur, ratio, lo < ratio && ratio < hi});
  }
  return report;
}

MatchingFilter filter_by_matching(const TradeNetwork& net, double lo, double hi) {
  if (!(lo >= 0.0) || !(lo < hi)) {
    throw Error(ErrorCode::invalid_argument, "matching range must satisfy 0 <= lo < hi");
  }
  MatchingFilter filter;
  const auto report = matching_report(net, lo, hi);
  filter.excluded_missing_balance = report.missing_balance;
  for (const auto& row : report.rows) {
    if (row.in_range) filter.retained.push_back(row.supplier);
  }

  // Induced subnetwork: keep exactly the edges that end at retained
  // suppliers; customer set shrinks to those still lending.
  std::vector<std::vector<InEdge>> kept_edges;
  kept_edges.reserve(filter.retained.size());
  std::vector<FirmId> sub_customers;
  for (const auto& supplier : filter.retained) {
    const std::size_t s = *net.supplier_index(supplier);
    for (const auto& edge : net.incoming(s)) sub_customers.push_back(net.customers()[edge.customer]);
  }
  std::sort(sub_customers.begin(), sub_customers.end());
  sub_customers.erase(std::unique(sub_customers.begin(), sub_customers.end()),
                      sub_customers.end());
  std::unordered_map<FirmId, std::uint32_t> customer_index;
  customer_index.reserve(sub_customers.size());
  for (std::uint32_t c = 0; c < sub_customers.size(); ++c) customer_index[sub_customers[c]] = c;

  for (const auto& supplier : filter.retained) {
    const std::size_t s = *net.supplier_index(supplier);
    std::vector<InEdge> edges;
    edges.reserve(net.incoming(s).size());
    for (const auto& edge : net.incoming(s)) {
      edges.push_back({customer_index.at(net.customers()[edge.customer]), edge.weight});
    }
    kept_edges.push_back(std::move(edges));
  }
  filter.subnetwork = TradeNetwork(filter.retained, std::move(sub_customers),
                                   std::move(kept_edges), &net.dataset());
  return filter;
}

KeyCustomerFlag key_customer(const TradeNetwork& net, const FirmId& supplier,
                             ShareDenominator denom) {
  const auto idx = net.supplier_index(supplier);
  if (!idx) throw Error(ErrorCode::invalid_argument, "not a supplier: " + supplier);

  double denominator = 0.0;
  if (denom == ShareDenominator::balance_sales) {
    const BalanceRecord* balance = net.dataset().balance(supplier, kAnchorYear);
    if (balance == nullptr) {
      throw Error(ErrorCode::balance_missing, "no 2007 balance for supplier " + supplier);
    }
    denominator = balance->sales_eur;
  } else {
    denominator = net.incoming_total(*idx);
  }

  KeyCustomerFlag flag;
  flag.supplier = supplier;
  double max_weight = 0.0;
  const FirmId* best = nullptr;
  for (const auto& edge : net.incoming(*idx)) {
    const FirmId& customer = net.customers()[edge.customer];
    if (edge.weight > max_weight ||
        (edge.weight == max_weight && best != nullptr && customer < *best)) {
      max_weight = edge.weight;
      best = &customer;
    }
  }
  if (best != nullptr && denominator > 0.0) {
    flag.share = max_weight / denominator;
    flag.has_key_customer = flag.share >= 0.5;
    if (flag.has_key_customer) flag.key_customer = *best;
  }
  return flag;
}

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

  std::size_t component_size(std::size_t root) const { return size_[root]; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

}  // namespace

std::vector<std::size_t> weak_components(const TradeNetwork& net) {
  // Node universe: suppliers then customers, with firms on both sides mapped
  // to one slot.
  std::unordered_map<FirmId, std::size_t> node_index;
  std::vector<const FirmId*> nodes;
  const auto intern = [&](const FirmId& id) {
    const auto [it, inserted] = node_index.try_emplace(id, nodes.size());
    if (inserted) nodes.push_back(&id);
    return it->second;
  };
  for (const auto& supplier : net.suppliers()) intern(supplier);
  for (const auto& customer : net.customers()) intern(customer);

  UnionFind uf(nodes.size());
  for (std::size_t s = 0; s < net.suppliers().size(); ++s) {
    const std::size_t supplier_node = node_index.at(net.suppliers()[s]);
    for (const auto& edge : net.incoming(s)) {
      uf.unite(supplier_node, node_index.at(net.customers()[edge.customer]));
    }
  }

  std::unordered_map<std::size_t, std::size_t> roots;
  for (std::size_t n = 0; n < nodes.size(); ++n) roots.try_emplace(uf.find(n), 0);
  for (auto& [root, size] : roots) size = uf.component_size(root);

  std::vector<std::size_t> sizes;
  sizes.reserve(roots.size());
  for (const auto& [_, size] : roots) sizes.push_back(size);
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  return sizes;
}

DegreeSequences degree_sequences(const TradeNetwork& net) {
  DegreeSequences seq;
  seq.in_degrees.reserve(net.suppliers().size());
  for (std::size_t s = 0; s < net.suppliers().size(); ++s) {
    seq.in_degrees.push_back(static_cast<std::uint32_t>(net.incoming(s).size()));
  }
  seq.out_degrees.resize(net.customers().size());
  for (std::size_t c = 0; c < net.customers().size(); ++c) {
    seq.out_degrees[c] = net.out_degree(c);
  }
  return seq;
}

}  // namespace tcmesh
