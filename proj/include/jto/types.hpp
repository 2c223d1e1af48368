#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace jto {

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
  friend auto operator<=>(const GeoPoint&, const GeoPoint&) = default;
};

inline bool is_valid(GeoPoint p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 && p.lat <= 90.0 &&
         p.lon >= -180.0 && p.lon <= 180.0;
}

enum class Sex { male, female };
enum class Race { black, white, other };
enum class Marital { married, not_married };

// A location is either resolved coordinates or the raw address text awaiting geocoding.
using Location = std::variant<GeoPoint, std::string>;

inline const GeoPoint* resolved(const Location& loc) { return std::get_if<GeoPoint>(&loc); }

struct OverdoseCase {
  std::string case_id;
  Sex sex = Sex::female;
  Race race = Race::white;
  int age = 0;
  Marital marital = Marital::not_married;
  std::optional<int> education;  // 1..7; blank in the source excludes the row from regression
  Location residence;
  Location death_location;
  std::optional<double> journey_miles;
  std::optional<double> sales_distance_miles;

  friend bool operator==(const OverdoseCase&, const OverdoseCase&) = default;
};

enum class EventType { arrest, field_interview };

struct CoEventRecord {
  std::string event_id;
  EventType type = EventType::arrest;
  std::string date;  // ISO-8601 calendar date, validated on parse
  std::vector<std::string> participants;
  bool drug_related = false;
  std::optional<GeoPoint> location;

  friend bool operator==(const CoEventRecord&, const CoEventRecord&) = default;
};

struct PersonRecord {
  std::string person_id;
  bool gang_member = false;
  int violent_prior_count = 0;

  friend bool operator==(const PersonRecord&, const PersonRecord&) = default;
};

}  // namespace jto
