#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace detbench {

/// Writes `content` to a sibling temporary file and renames it over `path`,
/// so readers never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Whole file as a string; throws DataError when it cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace detbench
