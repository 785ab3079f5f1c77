#include "gw/data/official.hpp"

#include "gw/core/error.hpp"
#include "gw/data/records.hpp"

namespace gw::data {

using nlohmann::json;

GameRecord game_from_official_json(const json& j) {
  GameRecord g;
  g.game_id = j.at("id").get<GameId>();
  g.status = parse_status(j.at("status").get<std::string>());
  const json& image = j.at("image");
  g.image.image_id = image.at("id").get<ImageId>();
  g.image.width = image.at("width").get<int>();
  g.image.height = image.at("height").get<int>();
  if (auto it = image.find("file_name"); it != image.end() && it->is_string()) {
    g.image.file_name = it->get<std::string>();
  }
  for (const json& o : j.at("objects")) {
    ObjectRef obj;
    obj.object_id = o.at("id").get<ObjectId>();
    obj.category_id = o.at("category_id").get<CategoryId>();
    obj.category_name = o.value("category", std::string{});
    const auto bbox = o.at("bbox").get<std::vector<double>>();
    if (bbox.size() != 4) throw ValidationError("objects.bbox", "expected [x, y, w, h]");
    obj.bbox = {bbox[0], bbox[1], bbox[2], bbox[3]};
    obj.area = o.at("area").get<double>();
    // Polygon parts are flattened into one vertex list; RLE masks are dropped.
    if (auto it = o.find("segment"); it != o.end() && it->is_array()) {
      Polygon poly;
      for (const json& part : *it) {
        if (!part.is_array()) continue;
        for (std::size_t k = 0; k + 1 < part.size(); k += 2) {
          poly.push_back({part[k].get<double>(), part[k + 1].get<double>()});
        }
      }
      if (poly.size() >= 3) obj.segment = std::move(poly);
    }
    g.objects.push_back(std::move(obj));
  }
  g.target_id = j.at("object_id").get<ObjectId>();
  for (const json& qa : j.at("qas")) {
    g.qas.push_back({qa.at("question").get<std::string>(),
                     parse_answer(qa.at("answer").get<std::string>())});
  }
  if (g.status == GameStatus::Success) g.guess_id = g.target_id;
  return g;
}

ValidationOptions official_validation() {
  ValidationOptions opts;
  opts.require_guess_for_finished = false;
  // COCO boxes are float annotations that may overhang the frame by a pixel
  // fraction and need not equal the polygon hull.
  opts.check_geometry = false;
  return opts;
}

std::vector<GameRecord> load_official_games(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  const auto opts = official_validation();
  std::vector<GameRecord> games;
  games.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    try {
      games.push_back(game_from_official_json(json::parse(lines[i])));
    } catch (const json::exception& e) {
      throw ParseError(i + 1, e.what());
    }
    validate(games.back(), opts);
  }
  return games;
}

}  // namespace gw::data
