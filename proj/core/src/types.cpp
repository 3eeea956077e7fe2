#include "tcmesh/types.hpp"

#include <cctype>

namespace tcmesh {

bool valid_firm_id(std::string_view id) {
  if (id.empty()) return false;
  for (unsigned char c : id) {
    if (std::isspace(c)) return false;
  }
  return true;
}

std::optional<SectorCode> SectorCode::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  const char letter = text.front();
  if (kSectorLetters.find(letter) == std::string_view::npos) return std::nullopt;
  SectorCode code;
  code.letter = letter;
  const std::string_view rest = text.substr(1);
  if (rest.empty()) return code;
  if (rest.size() != 4) return std::nullopt;
  int sub = 0;
  for (char c : rest) {
    if (c < '0' || c > '9') return std::nullopt;
    sub = sub * 10 + (c - '0');
  }
  code.sub_code = sub;
  return code;
}

std::string SectorCode::to_string() const {
  std::string out(1, letter);
  if (sub_code) {
    const int sub = *sub_code;
    out.push_back(static_cast<char>('0' + sub / 1000 % 10));
    out.push_back(static_cast<char>('0' + sub / 100 % 10));
    out.push_back(static_cast<char>('0' + sub / 10 % 10));
    out.push_back(static_cast<char>('0' + sub % 10));
  }
  return out;
}

std::optional<Period> Period::of_base(int base_year) {
  if (base_year == kFirstYear) return first();
  if (base_year == kAnchorYear) return second();
  return std::nullopt;
}

std::string Period::label() const {
  return std::to_string(base_year) + "-" + std::to_string(next_year);
}

}  // namespace tcmesh
