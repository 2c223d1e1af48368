#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace jto::csv {

// A parsed comma-separated file. Rows are numbered from 1, header excluded.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column, if present.
  std::optional<std::size_t> column(std::string_view name) const;
};

// RFC 4180 style: fields may be double-quoted, quotes doubled inside quotes.
std::vector<std::string> split_line(std::string_view line);

// Throws DataError when the file cannot be opened or has no header line.
Table read_file(const std::filesystem::path& path);

std::string escape(std::string_view field);
std::string join(std::span<const std::string> fields);

// Fixed decimal formatting used by every CSV writer ("-0.000000" folds to "0.000000").
std::string fixed(double value, int decimals = 6);

std::string trim(std::string_view s);

// Atomically replaces `path` with `content` (write to sibling temp file, then rename).
void write_text(const std::filesystem::path& path, std::string_view content);
std::string read_text(const std::filesystem::path& path);

}  // namespace jto::csv
