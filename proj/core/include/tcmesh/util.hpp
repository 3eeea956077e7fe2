#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace tcmesh {

// FNV-1a over raw bytes; used for input digests in the report document.
std::uint64_t fnv1a64(std::string_view bytes);
std::string to_hex(std::uint64_t value);

std::string read_file(const std::filesystem::path& path);            // throws io_error
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace tcmesh
