#include "jto/ingest.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <optional>
#include <set>
#include <sstream>

#include "jto/csv.hpp"
#include "jto/error.hpp"

namespace jto::ingest {

namespace {

// Thrown inside a row parser; becomes a rejection entry.
struct RowReject {
  std::string reason;
};

std::optional<long long> parse_int(std::string_view s) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<double> parse_real(std::string_view s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

bool parse_flag(std::string_view s, const char* name) {
  if (s == "1") return true;
  if (s == "0") return false;
  throw RowReject{std::string("invalid ") + name};
}

bool valid_iso_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  auto y = parse_int(s.substr(0, 4));
  auto m = parse_int(s.substr(5, 2));
  auto d = parse_int(s.substr(8, 2));
  if (!y || !m || !d) return false;
  std::chrono::year_month_day ymd{std::chrono::year(static_cast<int>(*y)),
                                  std::chrono::month(static_cast<unsigned>(*m)),
                                  std::chrono::day(static_cast<unsigned>(*d))};
  return ymd.ok();
}

// Resolves mandatory column indices or throws a whole-file DataError.
template <std::size_t N>
std::array<std::size_t, N> require_columns(const csv::Table& table, const std::filesystem::path& path,
                                           const std::array<const char*, N>& names) {
  std::array<std::size_t, N> idx{};
  for (std::size_t i = 0; i < N; ++i) {
    auto c = table.column(names[i]);
    if (!c) throw DataError(path.string() + ": missing column " + names[i]);
    idx[i] = *c;
  }
  return idx;
}

std::optional<GeoPoint> parse_coordinates(std::string_view lat_s, std::string_view lon_s,
                                          const std::string& field) {
  if (lat_s.empty() && lon_s.empty()) return std::nullopt;
  if (lat_s.empty() || lon_s.empty()) throw RowReject{field + " coordinates incomplete"};
  auto lat = parse_real(lat_s);
  auto lon = parse_real(lon_s);
  if (!lat || !lon) throw RowReject{"invalid " + field + " coordinates"};
  GeoPoint p{*lat, *lon};
  if (!is_valid(p)) throw RowReject{field + " coordinates out of range"};
  return p;
}

std::optional<double> parse_distance(const csv::Table& table, const std::vector<std::string>& row,
                                     const char* name) {
  auto c = table.column(name);
  if (!c) return std::nullopt;
  std::string s = csv::trim(row[*c]);
  if (s.empty()) return std::nullopt;
  auto v = parse_real(s);
  if (!v || !std::isfinite(*v)) throw RowReject{std::string("invalid ") + name};
  if (*v < 0) throw RowReject{std::string(name) + " negative"};
  return v;
}

template <class Record, class RowFn>
ParseResult<Record> parse_rows(const csv::Table& table, RowFn&& fn) {
  ParseResult<Record> result;
  result.row_count = table.rows.size();
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    if (row.size() != table.header.size()) {
      result.rejections.push_back({i + 1, "expected " + std::to_string(table.header.size()) +
                                              " fields, found " + std::to_string(row.size())});
      continue;
    }
    try {
      result.records.push_back(fn(row));
    } catch (const RowReject& r) {
      result.rejections.push_back({i + 1, r.reason});
    }
  }
  return result;
}

std::string point_field(const Location& loc, bool lat) {
  if (auto* p = resolved(loc)) return format_double(lat ? p->lat : p->lon);
  return {};
}

std::string optional_field(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, ptr);
}

ParseResult<OverdoseCase> parse_overdose_cases(const std::filesystem::path& path,
                                               const geo::Gazetteer* gazetteer) {
  const auto table = csv::read_file(path);
  const auto col = require_columns<12>(
      table, path,
      {"case_id", "sex", "race", "age", "marital", "education", "residence_address", "residence_lat",
       "residence_lon", "death_address", "death_lat", "death_lon"});
  std::set<std::string> seen;

  auto location = [&](const std::vector<std::string>& row, std::size_t addr, std::size_t lat,
                      std::size_t lon, const std::string& field) -> Location {
    if (auto p = parse_coordinates(csv::trim(row[lat]), csv::trim(row[lon]), field)) return *p;
    std::string text = csv::trim(row[addr]);
    if (text.empty()) throw RowReject{"missing " + field + " location"};
    if (gazetteer)
      if (auto p = gazetteer->find(text)) return *p;
    return text;
  };

  auto result = parse_rows<OverdoseCase>(table, [&](const std::vector<std::string>& row) {
    OverdoseCase c;
    c.case_id = csv::trim(row[col[0]]);
    if (c.case_id.empty()) throw RowReject{"missing case_id"};

    const std::string sex = csv::trim(row[col[1]]);
    if (sex == "M") c.sex = Sex::male;
    else if (sex == "F") c.sex = Sex::female;
    else throw RowReject{"invalid sex"};

    const std::string race = csv::trim(row[col[2]]);
    if (race == "B") c.race = Race::black;
    else if (race == "W") c.race = Race::white;
    else if (race == "O") c.race = Race::other;
    else throw RowReject{"invalid race"};

    auto age = parse_int(csv::trim(row[col[3]]));
    if (!age) throw RowReject{"invalid age"};
    if (*age < 0 || *age > 150) throw RowReject{"age out of range"};
    c.age = static_cast<int>(*age);

    c.marital = parse_flag(csv::trim(row[col[4]]), "marital") ? Marital::married : Marital::not_married;

    const std::string edu = csv::trim(row[col[5]]);
    if (!edu.empty()) {
      auto e = parse_int(edu);
      if (!e) throw RowReject{"invalid education"};
      if (*e < 1 || *e > 7) throw RowReject{"education out of range"};
      c.education = static_cast<int>(*e);
    }

    c.residence = location(row, col[6], col[7], col[8], "residence");
    c.death_location = location(row, col[9], col[10], col[11], "death");
    c.journey_miles = parse_distance(table, row, "journey_miles");
    c.sales_distance_miles = parse_distance(table, row, "sales_distance_miles");
    // Checked last so a rejected row does not reserve its id.
    if (!seen.insert(c.case_id).second) throw RowReject{"duplicate case_id"};
    return c;
  });
  return result;
}

ParseResult<CoEventRecord> parse_co_events(const std::filesystem::path& path) {
  const auto table = csv::read_file(path);
  const auto col = require_columns<7>(
      table, path, {"event_id", "event_type", "date", "participants", "drug_related", "lat", "lon"});
  std::set<std::string> seen;
  return parse_rows<CoEventRecord>(table, [&](const std::vector<std::string>& row) {
    CoEventRecord e;
    e.event_id = csv::trim(row[col[0]]);
    if (e.event_id.empty()) throw RowReject{"missing event_id"};

    const std::string type = csv::trim(row[col[1]]);
    if (type == "ARREST") e.type = EventType::arrest;
    else if (type == "FIR") e.type = EventType::field_interview;
    else throw RowReject{"unknown event_type " + type};

    e.date = csv::trim(row[col[2]]);
    if (!valid_iso_date(e.date)) throw RowReject{"invalid date"};

    const std::string list = csv::trim(row[col[3]]);
    if (list.empty()) throw RowReject{"empty participants"};
    std::set<std::string> ids;
    std::stringstream ss(list);
    std::string token;
    while (std::getline(ss, token, ';')) {
      token = csv::trim(token);
      if (token.empty()) throw RowReject{"empty participant id"};
      if (!ids.insert(token).second) throw RowReject{"duplicate participant " + token};
      e.participants.push_back(token);
    }
    if (list.back() == ';') throw RowReject{"empty participant id"};

    e.drug_related = parse_flag(csv::trim(row[col[4]]), "drug_related");
    e.location = parse_coordinates(csv::trim(row[col[5]]), csv::trim(row[col[6]]), "event");
    if (!seen.insert(e.event_id).second) throw RowReject{"duplicate event_id"};
    return e;
  });
}

ParseResult<PersonRecord> parse_persons(const std::filesystem::path& path) {
  const auto table = csv::read_file(path);
  const auto col = require_columns<3>(table, path, {"person_id", "gang_member", "violent_prior_count"});
  std::set<std::string> seen;
  return parse_rows<PersonRecord>(table, [&](const std::vector<std::string>& row) {
    PersonRecord p;
    p.person_id = csv::trim(row[col[0]]);
    if (p.person_id.empty()) throw RowReject{"missing person_id"};
    p.gang_member = parse_flag(csv::trim(row[col[1]]), "gang_member");
    auto v = parse_int(csv::trim(row[col[2]]));
    if (!v || *v < 0) throw RowReject{"invalid violent_prior_count"};
    p.violent_prior_count = static_cast<int>(*v);
    if (!seen.insert(p.person_id).second) throw RowReject{"duplicate person_id"};
    return p;
  });
}

GazetteerResult parse_gazetteer(const std::filesystem::path& path) {
  const auto table = csv::read_file(path);
  const auto col = require_columns<3>(table, path, {"normalized_address", "lat", "lon"});
  GazetteerResult out;
  auto rows = parse_rows<std::pair<std::string, GeoPoint>>(table, [&](const std::vector<std::string>& row) {
    std::string addr = csv::trim(row[col[0]]);
    if (addr.empty()) throw RowReject{"missing normalized_address"};
    auto p = parse_coordinates(csv::trim(row[col[1]]), csv::trim(row[col[2]]), "gazetteer");
    if (!p) throw RowReject{"missing gazetteer coordinates"};
    return std::pair{addr, *p};
  });
  for (auto& [addr, p] : rows.records) out.gazetteer.add(addr, p);
  out.rejections = std::move(rows.rejections);
  out.row_count = rows.row_count;
  return out;
}

void write_overdose_cases(const std::filesystem::path& path, std::span<const OverdoseCase> cases) {
  std::string out =
      "case_id,sex,race,age,marital,education,residence_address,residence_lat,residence_lon,"
      "death_address,death_lat,death_lon,journey_miles,sales_distance_miles\n";
  for (const auto& c : cases) {
    auto text = [](const Location& loc) {
      auto* s = std::get_if<std::string>(&loc);
      return s ? *s : std::string();
    };
    const char* race = c.race == Race::black ? "B" : c.race == Race::white ? "W" : "O";
    std::vector<std::string> fields{c.case_id,
                                    c.sex == Sex::male ? "M" : "F",
                                    race,
                                    std::to_string(c.age),
                                    c.marital == Marital::married ? "1" : "0",
                                    c.education ? std::to_string(*c.education) : std::string(),
                                    text(c.residence),
                                    point_field(c.residence, true),
                                    point_field(c.residence, false),
                                    text(c.death_location),
                                    point_field(c.death_location, true),
                                    point_field(c.death_location, false),
                                    optional_field(c.journey_miles),
                                    optional_field(c.sales_distance_miles)};
    out += csv::join(fields);
    out.push_back('\n');
  }
  csv::write_text(path, out);
}

void write_co_events(const std::filesystem::path& path, std::span<const CoEventRecord> events) {
  std::string out = "event_id,event_type,date,participants,drug_related,lat,lon\n";
  for (const auto& e : events) {
    std::string list;
    for (std::size_t i = 0; i < e.participants.size(); ++i) {
      if (i) list.push_back(';');
      list += e.participants[i];
    }
    std::vector<std::string> fields{e.event_id,
                                    e.type == EventType::arrest ? "ARREST" : "FIR",
                                    e.date,
                                    list,
                                    e.drug_related ? "1" : "0",
                                    e.location ? format_double(e.location->lat) : std::string(),
                                    e.location ? format_double(e.location->lon) : std::string()};
    out += csv::join(fields);
    out.push_back('\n');
  }
  csv::write_text(path, out);
}

void write_persons(const std::filesystem::path& path, std::span<const PersonRecord> persons) {
  std::string out = "person_id,gang_member,violent_prior_count\n";
  for (const auto& p : persons) {
    std::vector<std::string> fields{p.person_id, p.gang_member ? "1" : "0",
                                    std::to_string(p.violent_prior_count)};
    out += csv::join(fields);
    out.push_back('\n');
  }
  csv::write_text(path, out);
}

void write_gazetteer(const std::filesystem::path& path, const geo::Gazetteer& gazetteer) {
  std::string out = "normalized_address,lat,lon\n";
  for (const auto& [addr, p] : gazetteer.entries()) {
    std::vector<std::string> fields{addr, format_double(p.lat), format_double(p.lon)};
    out += csv::join(fields);
    out.push_back('\n');
  }
  csv::write_text(path, out);
}

std::string format_rejections(std::span<const Rejection> rejections) {
  std::string out;
  for (const auto& r : rejections) out += "row " + std::to_string(r.row) + ": " + r.reason + "\n";
  return out;
}

}  // namespace jto::ingest
