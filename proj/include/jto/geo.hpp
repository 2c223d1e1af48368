#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "jto/types.hpp"

namespace jto::geo {

inline constexpr double kEarthRadiusMiles = 3958.865;

double haversine_miles(GeoPoint a, GeoPoint b);

// Point reached by travelling `miles` along the great circle leaving `start` at
// `bearing_rad` (clockwise from north).
GeoPoint destination_point(GeoPoint start, double bearing_rad, double miles);

// Distance seam: journey and sales distances go through this so that a routing
// backend could stand in for great-circle distance.
using DistanceFn = std::function<double(GeoPoint, GeoPoint)>;

// Trim, collapse internal whitespace, uppercase.
std::string normalize_address(std::string_view address);

class Gazetteer {
 public:
  void add(std::string_view address, GeoPoint point);
  std::optional<GeoPoint> find(std::string_view address) const;
  std::size_t size() const { return entries_.size(); }
  // Keyed by normalized address, so iteration order is sorted and stable.
  const std::map<std::string, GeoPoint>& entries() const { return entries_; }

 private:
  std::map<std::string, GeoPoint> entries_;
};

// Throws DataError("unresolved address: <normalized key>") on a miss.
GeoPoint geocode(std::string_view address, const Gazetteer& gazetteer);

// Replaces address text in both location fields with gazetteer coordinates.
// Throws DataError naming the case when an address is missing.
void resolve_locations(OverdoseCase& c, const Gazetteer& gazetteer);

// Sets and returns c.journey_miles. Throws DataError naming the case when a
// location is still unresolved.
double journey_distance(OverdoseCase& c, const DistanceFn& distance = haversine_miles);

// Throws DataError when sales_points is empty.
double nearest_sales_distance(GeoPoint point, std::span<const GeoPoint> sales_points,
                              const DistanceFn& distance = haversine_miles);

// Exact-coordinate deduplication preserving first-seen order.
std::vector<GeoPoint> dedupe_points(std::span<const GeoPoint> points);

// Local equirectangular projection in miles about a fixed center.
class LocalProjection {
 public:
  explicit LocalProjection(GeoPoint center);
  GeoPoint center() const { return center_; }
  // x east, y north, miles.
  std::pair<double, double> forward(GeoPoint p) const;
  GeoPoint inverse(double x, double y) const;

 private:
  GeoPoint center_;
  double miles_per_deg_lat_;
  double miles_per_deg_lon_;
};

struct DensityGrid {
  GeoPoint origin;             // southwest corner
  GeoPoint projection_center;  // centroid the planar grid is laid out about
  double cell_size_miles = 0.0;
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  double x0 = 0.0;  // planar southwest corner, miles
  double y0 = 0.0;
  std::vector<double> values;  // row-major, row 0 southmost; density per square mile

  double at(std::size_t row, std::size_t col) const { return values[row * n_cols + col]; }
  GeoPoint cell_center(std::size_t row, std::size_t col) const;
  double cell_area() const { return cell_size_miles * cell_size_miles; }
};

struct KdeParams {
  double bandwidth_miles = 0.5;
  double cell_size_miles = 0.1;
  double padding_miles = 3.0;
};

// Gaussian kernel density over the padded bounding box of `points`.
// Throws DataError for empty input, ConfigError for nonpositive parameters.
DensityGrid kde_surface(std::span<const GeoPoint> points, const KdeParams& params);

nlohmann::json kde_geojson(const DensityGrid& grid);
nlohmann::json journeys_geojson(std::span<const OverdoseCase> cases);
nlohmann::json points_geojson(std::span<const GeoPoint> points);

}  // namespace jto::geo
