#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace depocheck {

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over `path`, so readers
// observe either the old content or the complete new content.
void atomic_write_file(const std::filesystem::path& path, std::string_view content);

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t value);

}  // namespace depocheck
