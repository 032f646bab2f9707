#include "depoisson/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "depoisson/error.hpp"

namespace depoisson::io {

namespace {

std::string line_context(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

BinSeries parse_bins_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("malformed bin file at " + line_context(text, e.byte > 0 ? e.byte - 1 : 0) + ": " + e.what());
  }
  if (!doc.is_object()) throw FormatError("bin file must be a JSON object at line 1");
  if (!doc.contains("h")) throw FormatError("bin file is missing \"h\"");
  if (!doc.contains("counts")) throw FormatError("bin file is missing \"counts\"");
  const auto& h = doc["h"];
  if (!h.is_number()) throw FormatError("\"h\" must be a number");
  const auto& counts = doc["counts"];
  if (!counts.is_array()) throw FormatError("\"counts\" must be an array");

  BinSeries out;
  out.h = h.get<double>();
  if (!(out.h > 0.0) || !std::isfinite(out.h)) throw FormatError("\"h\" must be positive and finite");
  out.counts.reserve(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const auto& c = counts[i];
    if (!c.is_number_integer()) throw FormatError("count " + std::to_string(i + 1) + " is not an integer");
    const auto v = c.get<std::int64_t>();
    if (v < 0) throw FormatError("count " + std::to_string(i + 1) + " is negative");
    out.counts.push_back(v);
  }
  if (out.counts.empty()) throw FormatError("\"counts\" must not be empty");
  return out;
}

std::string format_bins_json(const BinSeries& bins) {
  bins.validate();
  nlohmann::ordered_json doc;
  doc["h"] = bins.h;
  doc["counts"] = bins.counts;
  return doc.dump() + "\n";
}

BinSeries parse_bins_text(std::string_view text, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw FormatError("raw text input needs a positive --h");
  BinSeries out{h, {}};
  std::size_t line = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    const char ch = text[i];
    if (ch == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    const std::string token(text.substr(i, j - i));
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) throw FormatError("line " + std::to_string(line) + ": '" + token + "' is not an integer");
    if (v < 0) throw FormatError("line " + std::to_string(line) + ": negative count " + token);
    out.counts.push_back(v);
    i = j;
  }
  if (out.counts.empty()) throw FormatError("raw text input contains no counts");
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
  if (!out) throw FormatError("write failed for " + path.string());
}

BinSeries read_bins(const std::filesystem::path& path) { return parse_bins_json(read_file(path)); }

BinSeries read_bins_text(const std::filesystem::path& path, double h) { return parse_bins_text(read_file(path), h); }

void write_bins(const std::filesystem::path& path, const BinSeries& bins) { write_file(path, format_bins_json(bins)); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace depoisson::io
