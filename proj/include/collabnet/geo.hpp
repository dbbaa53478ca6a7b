#pragma once

#include <optional>

#include "collabnet/model.hpp"

namespace collabnet {

inline constexpr double kEarthRadiusKm = 6371.0;

// Great-circle distance on a sphere of radius kEarthRadiusKm.
double haversine_km(const Location& a, const Location& b);

// nullopt when either location is missing.
std::optional<double> haversine_km(const std::optional<Location>& a,
                                   const std::optional<Location>& b);

// Point reached by travelling distance_km from origin along an initial
// bearing (radians, clockwise from north).
Location destination(const Location& origin, double bearing_rad, double distance_km);

}  // namespace collabnet
