#include "gw/data/records.hpp"

#include <fstream>
#include <sstream>

#include <zlib.h>

#include "gw/core/error.hpp"

namespace gw::data {

using nlohmann::json;

json to_json(const GameRecord& game) {
  json image = {{"image_id", game.image.image_id},
                {"width", game.image.width},
                {"height", game.image.height}};
  if (game.image.file_name) image["file_name"] = *game.image.file_name;

  json objects = json::array();
  for (const auto& o : game.objects) {
    json obj = {{"object_id", o.object_id},
                {"category_id", o.category_id},
                {"category", o.category_name},
                {"bbox", {o.bbox.x, o.bbox.y, o.bbox.w, o.bbox.h}},
                {"area", o.area}};
    if (o.segment) {
      json seg = json::array();
      for (const auto& p : *o.segment) seg.push_back({p.x, p.y});
      obj["segment"] = std::move(seg);
    }
    objects.push_back(std::move(obj));
  }

  json qas = json::array();
  for (const auto& qa : game.qas) {
    qas.push_back({{"question", qa.question}, {"answer", to_string(qa.answer)}});
  }

  json j = {{"game_id", game.game_id},
            {"status", to_string(game.status)},
            {"image", std::move(image)},
            {"objects", std::move(objects)},
            {"target_id", game.target_id},
            {"qas", std::move(qas)}};
  if (game.guess_id) j["guess_id"] = *game.guess_id;
  return j;
}

namespace {

template <class T>
T field(const json& j, const char* name, const std::string& path) {
  auto it = j.find(name);
  if (it == j.end()) throw ValidationError(path + name, "missing");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ValidationError(path + name, "wrong type");
  }
}

}  // namespace

GameRecord game_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("record", "expected an object");
  GameRecord g;
  g.game_id = field<GameId>(j, "game_id", "");
  g.status = parse_status(field<std::string>(j, "status", ""));

  const json image = field<json>(j, "image", "");
  g.image.image_id = field<ImageId>(image, "image_id", "image.");
  g.image.width = field<int>(image, "width", "image.");
  g.image.height = field<int>(image, "height", "image.");
  if (auto it = image.find("file_name"); it != image.end() && !it->is_null()) {
    g.image.file_name = it->get<std::string>();
  }

  for (const json& o : field<json>(j, "objects", "")) {
    ObjectRef obj;
    obj.object_id = field<ObjectId>(o, "object_id", "objects.");
    obj.category_id = field<CategoryId>(o, "category_id", "objects.");
    obj.category_name = field<std::string>(o, "category", "objects.");
    auto bbox = field<std::vector<double>>(o, "bbox", "objects.");
    if (bbox.size() != 4) throw ValidationError("objects.bbox", "expected [x, y, w, h]");
    obj.bbox = {bbox[0], bbox[1], bbox[2], bbox[3]};
    obj.area = field<double>(o, "area", "objects.");
    if (auto it = o.find("segment"); it != o.end() && !it->is_null()) {
      Polygon poly;
      for (const json& p : *it) {
        if (!p.is_array() || p.size() != 2) {
          throw ValidationError("objects.segment", "vertices must be [x, y]");
        }
        poly.push_back({p[0].get<double>(), p[1].get<double>()});
      }
      obj.segment = std::move(poly);
    }
    g.objects.push_back(std::move(obj));
  }

  g.target_id = field<ObjectId>(j, "target_id", "");
  for (const json& qa : field<json>(j, "qas", "")) {
    g.qas.push_back({field<std::string>(qa, "question", "qas."),
                     parse_answer(field<std::string>(qa, "answer", "qas."))});
  }
  if (auto it = j.find("guess_id"); it != j.end() && !it->is_null()) {
    g.guess_id = it->get<ObjectId>();
  }
  return g;
}

GameRecord parse_game_line(std::string_view line, std::size_t line_no,
                           const ValidationOptions& opts) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(line_no, e.what());
  }
  GameRecord g;
  try {
    g = game_from_json(j);
  } catch (const json::exception& e) {
    throw ParseError(line_no, e.what());
  }
  validate(g, opts);
  return g;
}

std::vector<GameRecord> parse_games(std::istream& in, const ValidationOptions& opts) {
  std::vector<GameRecord> games;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    games.push_back(parse_game_line(line, line_no, opts));
  }
  return games;
}

std::size_t write_games(std::span<const GameRecord> games, std::ostream& out) {
  for (const auto& g : games) {
    out << to_json(g).dump() << '\n';
    if (!out) throw IoError("failed writing record " + std::to_string(g.game_id));
  }
  out.flush();
  if (!out) throw IoError("failed flushing record stream");
  return games.size();
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  gzFile file = gzopen(path.c_str(), "rb");
  if (!file) throw IoError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string current;
  char buf[1 << 16];
  int n;
  while ((n = gzread(file, buf, sizeof(buf))) > 0) {
    for (int i = 0; i < n; ++i) {
      if (buf[i] == '\n') {
        lines.push_back(std::move(current));
        current.clear();
      } else {
        current.push_back(buf[i]);
      }
    }
  }
  const bool failed = n < 0;
  gzclose(file);
  if (failed) throw IoError("read error in " + path.string());
  if (!current.empty()) lines.push_back(std::move(current));
  return lines;
}

std::vector<GameRecord> load_games(const std::filesystem::path& path,
                                   const ValidationOptions& opts) {
  const auto lines = read_lines(path);
  std::vector<GameRecord> games;
  games.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].find_first_not_of(" \t\r") == std::string::npos) continue;
    games.push_back(parse_game_line(lines[i], i + 1, opts));
  }
  return games;
}

std::size_t save_games(std::span<const GameRecord> games, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return write_games(games, out);
}

}  // namespace gw::data
