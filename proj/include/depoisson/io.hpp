#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "depoisson/simulate.hpp"

namespace depoisson::io {

// Canonical bin file: {"h": <seconds>, "counts": [<ints>]}.
BinSeries parse_bins_json(std::string_view text);
std::string format_bins_json(const BinSeries& bins);

// Whitespace-separated nonnegative integers; h comes from the caller.
BinSeries parse_bins_text(std::string_view text, double h);

BinSeries read_bins(const std::filesystem::path& path);
BinSeries read_bins_text(const std::filesystem::path& path, double h);
void write_bins(const std::filesystem::path& path, const BinSeries& bins);

// Nine significant digits, as used in every CSV table.
std::string fmt(double v);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view text);

}  // namespace depoisson::io
