#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gw/core/types.hpp"

namespace gw::testing {

inline ObjectRef object(ObjectId id, CategoryId cat, BBox box, std::string name = "thing") {
  ObjectRef o;
  o.object_id = id;
  o.category_id = cat;
  o.category_name = std::move(name);
  o.bbox = box;
  o.area = box.w * box.h;
  return o;
}

inline ImageMeta image(ImageId id, int w = 200, int h = 100) {
  ImageMeta m;
  m.image_id = id;
  m.width = w;
  m.height = h;
  return m;
}

// Three objects on a 200x100 image, target is object 1.
inline GameRecord game(GameId id, ImageId image_id, GameStatus status,
                       std::vector<std::pair<std::string, Answer>> qas = {}) {
  GameRecord g;
  g.game_id = id;
  g.image = image(image_id);
  g.objects = {object(1, 1, {0, 0, 50, 50}, "person"), object(2, 2, {60, 10, 40, 40}, "car"),
               object(3, 3, {120, 20, 60, 60}, "dog")};
  g.target_id = 1;
  for (auto& [q, a] : qas) g.qas.push_back({q, a});
  g.status = status;
  if (status == GameStatus::Success) g.guess_id = 1;
  if (status == GameStatus::Failure) g.guess_id = 2;
  return g;
}

}  // namespace gw::testing
