#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "jto/geo.hpp"
#include "jto/types.hpp"

namespace jto::ingest {

struct Rejection {
  std::size_t row = 0;  // 1-based data row, header excluded
  std::string reason;
};

template <class Record>
struct ParseResult {
  std::vector<Record> records;
  std::vector<Rejection> rejections;
  std::size_t row_count = 0;
};

// Malformed rows become rejections; a missing mandatory column throws DataError.
// When a gazetteer is supplied, address-only locations it knows are resolved.
ParseResult<OverdoseCase> parse_overdose_cases(const std::filesystem::path& path,
                                               const geo::Gazetteer* gazetteer = nullptr);
ParseResult<CoEventRecord> parse_co_events(const std::filesystem::path& path);
ParseResult<PersonRecord> parse_persons(const std::filesystem::path& path);

struct GazetteerResult {
  geo::Gazetteer gazetteer;
  std::vector<Rejection> rejections;
  std::size_t row_count = 0;
};
GazetteerResult parse_gazetteer(const std::filesystem::path& path);

// Writers emit the same schemas the parsers read. Coordinates and derived
// distances use shortest round-trip formatting, so a write/parse cycle is exact.
void write_overdose_cases(const std::filesystem::path& path, std::span<const OverdoseCase> cases);
void write_co_events(const std::filesystem::path& path, std::span<const CoEventRecord> events);
void write_persons(const std::filesystem::path& path, std::span<const PersonRecord> persons);
void write_gazetteer(const std::filesystem::path& path, const geo::Gazetteer& gazetteer);

// "row <n>: <reason>" per line.
std::string format_rejections(std::span<const Rejection> rejections);

std::string format_double(double value);

}  // namespace jto::ingest
