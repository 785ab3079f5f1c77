#pragma once

#include <span>
#include <vector>

#include "gw/core/types.hpp"

namespace gw {

inline constexpr double kMinObjectArea = 500.0;
inline constexpr std::size_t kMinObjectsPerImage = 3;
inline constexpr std::size_t kMaxObjectsPerImage = 20;

// Normalized box descriptor with the image center as origin and both axes
// spanning [-1, 1]. Throws InvalidGeometry for a degenerate box.
SpatialVec8 spatial_features(const BBox& bbox, const ImageMeta& image);

// Axis-aligned hull of a polygon (at least 3 vertices, non-zero extent).
BBox enclosing_bbox(std::span<const Point> polygon);

bool is_eligible_object(const ObjectRef& obj);

// Expects objects already filtered by is_eligible_object.
bool is_eligible_image(std::span<const ObjectRef> objects);

std::vector<ObjectRef> eligible_objects(std::span<const ObjectRef> objects);

}  // namespace gw
