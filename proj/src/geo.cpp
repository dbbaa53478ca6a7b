#include "collabnet/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace collabnet {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

double haversine_km(const Location& a, const Location& b) {
  const double phi1 = a.latitude * kDegToRad;
  const double phi2 = b.latitude * kDegToRad;
  const double dphi = (b.latitude - a.latitude) * kDegToRad;
  const double dlambda = (b.longitude - a.longitude) * kDegToRad;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  const double h = std::clamp(s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2, 0.0, 1.0);
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

std::optional<double> haversine_km(const std::optional<Location>& a,
                                   const std::optional<Location>& b) {
  if (!a || !b) return std::nullopt;
  return haversine_km(*a, *b);
}

Location destination(const Location& origin, double bearing_rad, double distance_km) {
  const double delta = distance_km / kEarthRadiusKm;
  const double phi1 = origin.latitude * kDegToRad;
  const double lambda1 = origin.longitude * kDegToRad;
  const double phi2 = std::asin(std::clamp(
      std::sin(phi1) * std::cos(delta) + std::cos(phi1) * std::sin(delta) * std::cos(bearing_rad),
      -1.0, 1.0));
  const double lambda2 =
      lambda1 + std::atan2(std::sin(bearing_rad) * std::sin(delta) * std::cos(phi1),
                           std::cos(delta) - std::sin(phi1) * std::sin(phi2));
  double lon = std::remainder(lambda2 / kDegToRad, 360.0);
  if (lon < -180.0) lon += 360.0;
  if (lon > 180.0) lon -= 360.0;
  return Location{std::clamp(phi2 / kDegToRad, -90.0, 90.0), lon};
}

}  // namespace collabnet
