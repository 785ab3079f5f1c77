#include "gw/core/geometry.hpp"

#include <algorithm>

#include "gw/core/error.hpp"

namespace gw {

SpatialVec8 spatial_features(const BBox& bbox, const ImageMeta& image) {
  if (!(bbox.w > 0) || !(bbox.h > 0)) {
    throw InvalidGeometry("degenerate bbox (w and h must be positive)");
  }
  if (image.width <= 0 || image.height <= 0) {
    throw InvalidGeometry("image has non-positive size");
  }
  const double width = image.width;
  const double height = image.height;
  const double x_min = 2.0 * bbox.x / width - 1.0;
  const double x_max = 2.0 * (bbox.x + bbox.w) / width - 1.0;
  const double y_min = 2.0 * bbox.y / height - 1.0;
  const double y_max = 2.0 * (bbox.y + bbox.h) / height - 1.0;
  return {x_min,
          y_min,
          x_max,
          y_max,
          (x_min + x_max) / 2.0,
          (y_min + y_max) / 2.0,
          x_max - x_min,
          y_max - y_min};
}

BBox enclosing_bbox(std::span<const Point> polygon) {
  if (polygon.size() < 3) {
    throw InvalidGeometry("polygon needs at least 3 vertices");
  }
  auto [min_x, max_x] = std::minmax_element(
      polygon.begin(), polygon.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
  auto [min_y, max_y] = std::minmax_element(
      polygon.begin(), polygon.end(), [](const Point& a, const Point& b) { return a.y < b.y; });
  BBox box{min_x->x, min_y->y, max_x->x - min_x->x, max_y->y - min_y->y};
  if (box.w <= 0 || box.h <= 0) {
    throw InvalidGeometry("polygon hull has zero width or height");
  }
  return box;
}

bool is_eligible_object(const ObjectRef& obj) { return obj.area >= kMinObjectArea; }

bool is_eligible_image(std::span<const ObjectRef> objects) {
  return objects.size() >= kMinObjectsPerImage && objects.size() <= kMaxObjectsPerImage;
}

std::vector<ObjectRef> eligible_objects(std::span<const ObjectRef> objects) {
  std::vector<ObjectRef> out;
  std::copy_if(objects.begin(), objects.end(), std::back_inserter(out), is_eligible_object);
  return out;
}

}  // namespace gw
