#include "jto/geo.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <set>

#include "jto/error.hpp"

namespace jto::geo {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double wrap_longitude(double lon) {
  lon = std::fmod(lon + 180.0, 360.0);
  if (lon < 0) lon += 360.0;
  return lon - 180.0;
}

nlohmann::json point_coords(GeoPoint p) { return nlohmann::json::array({p.lon, p.lat}); }

}  // namespace

double haversine_miles(GeoPoint a, GeoPoint b) {
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double dphi = (b.lat - a.lat) * kDegToRad;
  const double dlambda = (b.lon - a.lon) * kDegToRad;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusMiles * std::asin(std::sqrt(h));
}

GeoPoint destination_point(GeoPoint start, double bearing_rad, double miles) {
  const double delta = miles / kEarthRadiusMiles;
  const double phi1 = start.lat * kDegToRad;
  const double lambda1 = start.lon * kDegToRad;
  const double sin_phi2 =
      std::sin(phi1) * std::cos(delta) + std::cos(phi1) * std::sin(delta) * std::cos(bearing_rad);
  const double phi2 = std::asin(std::clamp(sin_phi2, -1.0, 1.0));
  const double lambda2 =
      lambda1 + std::atan2(std::sin(bearing_rad) * std::sin(delta) * std::cos(phi1),
                           std::cos(delta) - std::sin(phi1) * sin_phi2);
  return {phi2 / kDegToRad, wrap_longitude(lambda2 / kDegToRad)};
}

std::string normalize_address(std::string_view address) {
  std::string out;
  out.reserve(address.size());
  bool pending_space = false;
  for (unsigned char c : address) {
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::toupper(c)));
  }
  return out;
}

void Gazetteer::add(std::string_view address, GeoPoint point) {
  entries_[normalize_address(address)] = point;
}

std::optional<GeoPoint> Gazetteer::find(std::string_view address) const {
  auto it = entries_.find(normalize_address(address));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

GeoPoint geocode(std::string_view address, const Gazetteer& gazetteer) {
  if (auto p = gazetteer.find(address)) return *p;
  throw DataError("unresolved address: " + normalize_address(address));
}

void resolve_locations(OverdoseCase& c, const Gazetteer& gazetteer) {
  auto resolve = [&](Location& loc, const char* field) {
    if (auto* text = std::get_if<std::string>(&loc)) {
      try {
        loc = geocode(*text, gazetteer);
      } catch (const DataError& e) {
        throw DataError("case " + c.case_id + " " + field + ": " + e.what());
      }
    }
  };
  resolve(c.residence, "residence");
  resolve(c.death_location, "death_location");
}

double journey_distance(OverdoseCase& c, const DistanceFn& distance) {
  const GeoPoint* home = resolved(c.residence);
  const GeoPoint* death = resolved(c.death_location);
  if (!home || !death) throw DataError("case " + c.case_id + ": location unresolved");
  const double d = distance(*home, *death);
  c.journey_miles = d;
  return d;
}

double nearest_sales_distance(GeoPoint point, std::span<const GeoPoint> sales_points,
                              const DistanceFn& distance) {
  if (sales_points.empty()) throw DataError("no drug sales locations");
  double best = distance(point, sales_points.front());
  for (auto p : sales_points.subspan(1)) best = std::min(best, distance(point, p));
  return best;
}

std::vector<GeoPoint> dedupe_points(std::span<const GeoPoint> points) {
  std::vector<GeoPoint> out;
  std::set<GeoPoint> seen;
  for (auto p : points)
    if (seen.insert(p).second) out.push_back(p);
  return out;
}

LocalProjection::LocalProjection(GeoPoint center)
    : center_(center),
      miles_per_deg_lat_(kEarthRadiusMiles * kDegToRad),
      miles_per_deg_lon_(kEarthRadiusMiles * kDegToRad * std::cos(center.lat * kDegToRad)) {}

std::pair<double, double> LocalProjection::forward(GeoPoint p) const {
  return {(p.lon - center_.lon) * miles_per_deg_lon_, (p.lat - center_.lat) * miles_per_deg_lat_};
}

GeoPoint LocalProjection::inverse(double x, double y) const {
  return {center_.lat + y / miles_per_deg_lat_, center_.lon + x / miles_per_deg_lon_};
}

GeoPoint DensityGrid::cell_center(std::size_t row, std::size_t col) const {
  LocalProjection proj(projection_center);
  return proj.inverse(x0 + (static_cast<double>(col) + 0.5) * cell_size_miles,
                      y0 + (static_cast<double>(row) + 0.5) * cell_size_miles);
}

DensityGrid kde_surface(std::span<const GeoPoint> points, const KdeParams& params) {
  if (points.empty()) throw DataError("kernel density needs at least one point");
  if (!(params.bandwidth_miles > 0) || !(params.cell_size_miles > 0) || !(params.padding_miles > 0))
    throw ConfigError("kernel density bandwidth, cell size and padding must be positive");

  GeoPoint centroid{0.0, 0.0};
  for (auto p : points) {
    centroid.lat += p.lat;
    centroid.lon += p.lon;
  }
  centroid.lat /= static_cast<double>(points.size());
  centroid.lon /= static_cast<double>(points.size());
  LocalProjection proj(centroid);

  // Coincident points collapse to one kernel with a multiplicity weight.
  std::vector<double> xs, ys, weight;
  std::map<GeoPoint, std::size_t> slot;
  for (auto p : points) {
    auto [it, fresh] = slot.try_emplace(p, xs.size());
    if (!fresh) {
      weight[it->second] += 1.0;
      continue;
    }
    auto [x, y] = proj.forward(p);
    xs.push_back(x);
    ys.push_back(y);
    weight.push_back(1.0);
  }
  const auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
  const auto [ymin, ymax] = std::minmax_element(ys.begin(), ys.end());

  DensityGrid grid;
  grid.projection_center = centroid;
  grid.cell_size_miles = params.cell_size_miles;
  // Cell centers sit on a lattice through the padded bounding-box corner, so a
  // lone point lands on a cell center rather than a cell edge.
  const double half = 0.5 * params.cell_size_miles;
  grid.x0 = *xmin - params.padding_miles - half;
  grid.y0 = *ymin - params.padding_miles - half;
  const double width = *xmax - *xmin + 2.0 * params.padding_miles;
  const double height = *ymax - *ymin + 2.0 * params.padding_miles;
  // The small slack keeps floating-point noise from dropping the last lattice line.
  grid.n_cols = 1 + static_cast<std::size_t>(std::ceil(width / params.cell_size_miles - 1e-9));
  grid.n_rows = 1 + static_cast<std::size_t>(std::ceil(height / params.cell_size_miles - 1e-9));
  grid.origin = proj.inverse(grid.x0, grid.y0);
  grid.values.assign(grid.n_rows * grid.n_cols, 0.0);

  const double h2 = params.bandwidth_miles * params.bandwidth_miles;
  const double norm = 1.0 / (2.0 * std::numbers::pi * h2);
  const double inv_two_h2 = 1.0 / (2.0 * h2);
  for (std::size_t r = 0; r < grid.n_rows; ++r) {
    const double cy = grid.y0 + (static_cast<double>(r) + 0.5) * grid.cell_size_miles;
    for (std::size_t c = 0; c < grid.n_cols; ++c) {
      const double cx = grid.x0 + (static_cast<double>(c) + 0.5) * grid.cell_size_miles;
      double sum = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = cx - xs[i];
        const double dy = cy - ys[i];
        sum += weight[i] * std::exp(-(dx * dx + dy * dy) * inv_two_h2);
      }
      grid.values[r * grid.n_cols + c] = norm * sum;
    }
  }
  return grid;
}

nlohmann::json kde_geojson(const DensityGrid& grid) {
  nlohmann::json features = nlohmann::json::array();
  for (std::size_t r = 0; r < grid.n_rows; ++r) {
    for (std::size_t c = 0; c < grid.n_cols; ++c) {
      features.push_back({{"type", "Feature"},
                          {"geometry", {{"type", "Point"}, {"coordinates", point_coords(grid.cell_center(r, c))}}},
                          {"properties", {{"density", grid.at(r, c)}}}});
    }
  }
  return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

nlohmann::json journeys_geojson(std::span<const OverdoseCase> cases) {
  nlohmann::json features = nlohmann::json::array();
  for (const auto& c : cases) {
    const GeoPoint* home = resolved(c.residence);
    const GeoPoint* death = resolved(c.death_location);
    if (!home || !death || !c.journey_miles)
      throw DataError("case " + c.case_id + ": journey not computed");
    nlohmann::json geometry;
    if (*home == *death || *c.journey_miles == 0.0) {
      geometry = {{"type", "Point"}, {"coordinates", point_coords(*home)}};
    } else {
      geometry = {{"type", "LineString"},
                  {"coordinates", nlohmann::json::array({point_coords(*home), point_coords(*death)})}};
    }
    features.push_back({{"type", "Feature"},
                        {"geometry", std::move(geometry)},
                        {"properties", {{"case_id", c.case_id}, {"journey_miles", *c.journey_miles}}}});
  }
  return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

nlohmann::json points_geojson(std::span<const GeoPoint> points) {
  nlohmann::json features = nlohmann::json::array();
  for (auto p : points) {
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "Point"}, {"coordinates", point_coords(p)}}},
                        {"properties", nlohmann::json::object()}});
  }
  return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

}  // namespace jto::geo
