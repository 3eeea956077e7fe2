#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tcmesh/types.hpp"

namespace tcmesh {

// One rejected input row. line_no is the physical 1-based line number in the
// file (the header is line 1).
struct Rejection {
  std::size_t line_no = 0;
  std::string reason;
};

template <typename Record>
struct ParseResult {
  std::vector<Record> records;
  std::vector<Rejection> rejections;
  std::size_t total_rows = 0;  // data rows seen, excluding the header
};

using BalanceParse = ParseResult<BalanceRecord>;
using InvoiceParse = ParseResult<InvoiceRecord>;

// Expected headers of the two interchange files.
inline constexpr std::string_view kBalanceHeader =
    "firm_id,year,sales_eur,purchases_eur,rating,sector";
inline constexpr std::string_view kInvoiceHeader =
    "supplier_id,customer_id,year,amount_eur";

// Parses `balance.csv` content. In strict mode the first malformed row throws
// Error{parse_error}; otherwise malformed rows land in `rejections`.
// Duplicate (firm, year) keys are rejections, not merges.
BalanceParse parse_balance(std::istream& in, bool strict = false);
BalanceParse parse_balance_file(const std::filesystem::path& path, bool strict = false);

// Parses `invoices.csv` content. Self-loops and non-positive amounts are
// rejected. Repeated (supplier, customer) pairs are kept as separate records;
// aggregation happens when the network is built.
InvoiceParse parse_invoices(std::istream& in, bool strict = false);
InvoiceParse parse_invoices_file(const std::filesystem::path& path, bool strict = false);

// Serialization back to the interchange formats; amounts round-trip
// bit-exactly through format_double/parse_double.
void write_balance_csv(std::ostream& out, std::span<const BalanceRecord> records);
void write_invoices_csv(std::ostream& out, std::span<const InvoiceRecord> records);

// One `line_no<TAB>reason` line per rejection.
std::string rejection_log(std::span<const Rejection> rejections);

// What to do with invoices whose customer has no balance record for the
// anchor year (the year every downstream analysis needs): `drop` removes them
// during assembly, `keep` retains them and only flags them.
enum class CoveragePolicy { drop, keep };

struct InvoiceFlag {
  std::size_t invoice_index = 0;  // index into the assembled invoice list
  std::string reason;
};

struct IngestReport {
  std::size_t balance_records = 0;
  std::size_t invoice_records = 0;
  std::size_t duplicate_balance_keys = 0;       // duplicates across input lists
  std::size_t invoices_dropped_missing_customer = 0;
  std::vector<InvoiceFlag> flags;
};

// Joined, immutable view of both inputs; safe to share read-only.
class Dataset {
 public:
  static Dataset assemble(std::vector<BalanceRecord> balances,
                          std::vector<InvoiceRecord> invoices,
                          CoveragePolicy policy = CoveragePolicy::keep);

  const BalanceRecord* balance(const FirmId& firm, int year) const;
  bool has_balance(const FirmId& firm, int year) const { return balance(firm, year) != nullptr; }

  const std::vector<InvoiceRecord>& invoices() const { return invoices_; }
  const IngestReport& report() const { return report_; }

  std::size_t n_balance_records() const { return report_.balance_records; }
  std::vector<FirmId> firms_sorted() const;

 private:
  // Years are dense (2006..2008), so one slot per year per firm.
  std::unordered_map<FirmId, std::array<std::optional<BalanceRecord>, 3>> balances_;
  std::vector<InvoiceRecord> invoices_;
  IngestReport report_;
};

}  // namespace tcmesh
