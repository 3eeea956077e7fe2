#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace tcmesh {

// Anonymized firm identifier: any non-empty token without whitespace.
using FirmId = std::string;

bool valid_firm_id(std::string_view id);

inline constexpr int kFirstYear = 2006;
inline constexpr int kAnchorYear = 2007;  // the year the invoice network covers
inline constexpr int kLastYear = 2008;

inline constexpr std::string_view kSectorLetters = "CDEFGHIKO";

// One-letter industrial class, optionally refined by a 4-digit sub-sector
// code ("D" or "D2810").
struct SectorCode {
  char letter = 'D';
  std::optional<int> sub_code;  // 4 decimal digits when present

  static std::optional<SectorCode> parse(std::string_view text);
  std::string to_string() const;

  bool operator==(const SectorCode&) const = default;
};

// One firm-year row of balance-sheet data.
struct BalanceRecord {
  FirmId firm;
  int year = 0;
  double sales_eur = 0.0;      // > 0
  double purchases_eur = 0.0;  // >= 0
  int rating = 0;              // 1..9, increasing default risk
  SectorCode sector;

  bool operator==(const BalanceRecord&) const = default;
};

// One delayed-payment invoice, customer -> supplier, before aggregation.
struct InvoiceRecord {
  FirmId supplier;
  FirmId customer;
  int year = kAnchorYear;
  double amount_eur = 0.0;  // > 0

  bool operator==(const InvoiceRecord&) const = default;
};

// A consecutive-year growth window; only 2006->2007 and 2007->2008 exist
// within the data frame.
struct Period {
  int base_year = kFirstYear;
  int next_year = kAnchorYear;

  static Period first() { return {kFirstYear, kAnchorYear}; }    // 2006 -> 2007
  static Period second() { return {kAnchorYear, kLastYear}; }    // 2007 -> 2008
  static std::array<Period, 2> all() { return {first(), second()}; }
  static std::optional<Period> of_base(int base_year);

  std::string label() const;  // "2006-2007"

  bool operator==(const Period&) const = default;
};

}  // namespace tcmesh
