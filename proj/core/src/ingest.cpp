#include "tcmesh/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "tcmesh/csv.hpp"
#include "tcmesh/error.hpp"

namespace tcmesh {

namespace {

// Balance-sheet magnitudes must stay exactly representable; anything past
// 2^53 EUR would silently lose cents.
constexpr double kMaxAmountEur = 9007199254740992.0;

struct LineReader {
  std::istream& in;
  std::size_t line_no = 0;

  bool next(std::string& line) {
    if (!std::getline(in, line)) return false;
    ++line_no;
    return true;
  }
};

[[noreturn]] void throw_parse(std::size_t line_no, const std::string& reason) {
  throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": " + reason);
}

void expect_header(LineReader& reader, std::string_view expected, const char* what) {
  std::string line;
  if (!reader.next(line)) {
    throw Error(ErrorCode::parse_error, std::string(what) + ": empty input, header expected");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected) {
    throw Error(ErrorCode::parse_error,
                std::string(what) + ": bad header, expected '" + std::string(expected) + "'");
  }
}

// Shared reject-or-throw handling for the two parsers.
template <typename Result>
void reject(Result& result, bool strict, std::size_t line_no, std::string reason) {
  if (strict) throw_parse(line_no, reason);
  result.rejections.push_back({line_no, std::move(reason)});
}

std::optional<double> parse_amount(std::string_view text) {
  auto value = csv::parse_double(text);
  if (!value || std::fabs(*value) > kMaxAmountEur) return std::nullopt;
  return value;
}

}  // namespace

BalanceParse parse_balance(std::istream& in, bool strict) {
  BalanceParse result;
  LineReader reader{in};
  expect_header(reader, kBalanceHeader, "balance");

  std::set<std::pair<FirmId, int>> seen;
  std::string line;
  while (reader.next(line)) {
    if (line.empty() || line == "\r") continue;
    ++result.total_rows;
    const auto fields = csv::split_fields(line);
    if (fields.size() != 6) {
      reject(result, strict, reader.line_no, "missing column");
      continue;
    }
    const std::string_view firm = fields[0];
    if (!valid_firm_id(firm)) {
      reject(result, strict, reader.line_no, "invalid firm id");
      continue;
    }
    const auto year = csv::parse_int(fields[1]);
    if (!year || *year < kFirstYear || *year > kLastYear) {
      reject(result, strict, reader.line_no, "year out of range");
      continue;
    }
    const auto sales = parse_amount(fields[2]);
    if (!sales || *sales <= 0.0) {
      reject(result, strict, reader.line_no, "non-numeric or non-positive sales");
      continue;
    }
    const auto purchases = parse_amount(fields[3]);
    if (!purchases || *purchases < 0.0) {
      reject(result, strict, reader.line_no, "non-numeric or negative purchases");
      continue;
    }
    const auto rating = csv::parse_int(fields[4]);
    if (!rating || *rating < 1 || *rating > 9) {
      reject(result, strict, reader.line_no, "rating out of range");
      continue;
    }
    const auto sector = SectorCode::parse(fields[5]);
    if (!sector) {
      reject(result, strict, reader.line_no, "unknown sector code");
      continue;
    }
    if (!seen.emplace(FirmId(firm), static_cast<int>(*year)).second) {
      reject(result, strict, reader.line_no, "duplicate (firm, year) key");
      continue;
    }
    result.records.push_back({FirmId(firm), static_cast<int>(*year), *sales, *purchases,
                              static_cast<int>(*rating), *sector});
  }
  return result;
}

InvoiceParse parse_invoices(std::istream& in, bool strict) {
  InvoiceParse result;
  LineReader reader{in};
  expect_header(reader, kInvoiceHeader, "invoices");

  std::string line;
  while (reader.next(line)) {
    if (line.empty() || line == "\r") continue;
    ++result.total_rows;
    const auto fields = csv::split_fields(line);
    if (fields.size() != 4) {
      reject(result, strict, reader.line_no, "missing field");
      continue;
    }
    const std::string_view supplier = fields[0];
    const std::string_view customer = fields[1];
    if (!valid_firm_id(supplier) || !valid_firm_id(customer)) {
      reject(result, strict, reader.line_no, "invalid firm id");
      continue;
    }
    if (supplier == customer) {
      reject(result, strict, reader.line_no, "self-loop");
      continue;
    }
    const auto year = csv::parse_int(fields[2]);
    if (!year || *year != kAnchorYear) {
      reject(result, strict, reader.line_no, "year not 2007");
      continue;
    }
    const auto amount = parse_amount(fields[3]);
    if (!amount || *amount <= 0.0) {
      reject(result, strict, reader.line_no, "non-positive amount");
      continue;
    }
    result.records.push_back(
        {FirmId(supplier), FirmId(customer), static_cast<int>(*year), *amount});
  }
  return result;
}

namespace {

template <typename Result, typename Parser>
Result parse_file(const std::filesystem::path& path, bool strict, Parser parser) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  return parser(in, strict);
}

}  // namespace

BalanceParse parse_balance_file(const std::filesystem::path& path, bool strict) {
  return parse_file<BalanceParse>(path, strict,
                                  [](std::istream& in, bool s) { return parse_balance(in, s); });
}

InvoiceParse parse_invoices_file(const std::filesystem::path& path, bool strict) {
  return parse_file<InvoiceParse>(path, strict,
                                  [](std::istream& in, bool s) { return parse_invoices(in, s); });
}

void write_balance_csv(std::ostream& out, std::span<const BalanceRecord> records) {
  out << kBalanceHeader << '\n';
  for (const auto& rec : records) {
    out << rec.firm << ',' << rec.year << ',' << csv::format_double(rec.sales_eur) << ','
        << csv::format_double(rec.purchases_eur) << ',' << rec.rating << ','
        << rec.sector.to_string() << '\n';
  }
}

void write_invoices_csv(std::ostream& out, std::span<const InvoiceRecord> records) {
  out << kInvoiceHeader << '\n';
  for (const auto& rec : records) {
    out << rec.supplier << ',' << rec.customer << ',' << rec.year << ','
        << csv::format_double(rec.amount_eur) << '\n';
  }
}

std::string rejection_log(std::span<const Rejection> rejections) {
  std::ostringstream out;
  for (const auto& rejection : rejections) {
    out << rejection.line_no << '\t' << rejection.reason << '\n';
  }
  return std::move(out).str();
}

Dataset Dataset::assemble(std::vector<BalanceRecord> balances,
                          std::vector<InvoiceRecord> invoices, CoveragePolicy policy) {
  Dataset dataset;
  for (auto& rec : balances) {
    auto& slots = dataset.balances_[rec.firm];
    auto& slot = slots[static_cast<std::size_t>(rec.year - kFirstYear)];
    if (slot.has_value()) {
      // Duplicates within one parse are already rejected there; this catches
      // collisions across merged input lists.
      ++dataset.report_.duplicate_balance_keys;
      continue;
    }
    slot = std::move(rec);
    ++dataset.report_.balance_records;
  }

  dataset.invoices_.reserve(invoices.size());
  for (auto& invoice : invoices) {
    const bool covered = dataset.has_balance(invoice.customer, kAnchorYear);
    if (!covered && policy == CoveragePolicy::drop) {
      ++dataset.report_.invoices_dropped_missing_customer;
      continue;
    }
    if (!covered) {
      dataset.report_.flags.push_back({dataset.invoices_.size(), "customer-balance-missing"});
    }
    dataset.invoices_.push_back(std::move(invoice));
  }
  dataset.report_.invoice_records = dataset.invoices_.size();
  return dataset;
}

const BalanceRecord* Dataset::balance(const FirmId& firm, int year) const {
  if (year < kFirstYear || year > kLastYear) return nullptr;
  const auto it = balances_.find(firm);
  if (it == balances_.end()) return nullptr;
  const auto& slot = it->second[static_cast<std::size_t>(year - kFirstYear)];
  return slot.has_value() ? &*slot : nullptr;
}

std::vector<FirmId> Dataset::firms_sorted() const {
  std::vector<FirmId> firms;
  firms.reserve(balances_.size());
  for (const auto& [firm, _] : balances_) firms.push_back(firm);
  std::sort(firms.begin(), firms.end());
  return firms;
}

}  // namespace tcmesh
