#pragma once

#include <filesystem>
#include <string>

#include "dualmark/watermark.hpp"

namespace dualmark::watermark {

/// Line-oriented text encoding of SideInfo; the grammar is documented in
/// docs/sideinfo.md. Numbers are written with 17 significant digits so a
/// write/read cycle reproduces every double exactly.
std::string format_side_info(const SideInfo& info);

/// Throws FormatError on syntax errors and std::invalid_argument when the
/// decoded record fails validate().
SideInfo parse_side_info(const std::string& text);

SideInfo read_side_info(const std::filesystem::path& path);
void write_side_info(const SideInfo& info, const std::filesystem::path& path);

}  // namespace dualmark::watermark
