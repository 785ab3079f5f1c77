#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gw {

using ImageId = std::int64_t;
using ObjectId = std::int64_t;
using GameId = std::int64_t;
using CategoryId = std::int32_t;

inline constexpr std::size_t kDefaultImageFeatureDim = 1000;

// Pixel rectangle, top-left origin, y grows downward.
struct BBox {
  double x = 0;
  double y = 0;
  double w = 0;
  double h = 0;

  friend bool operator==(const BBox&, const BBox&) = default;
};

struct Point {
  double x = 0;
  double y = 0;

  friend bool operator==(const Point&, const Point&) = default;
};

using Polygon = std::vector<Point>;

struct ImageMeta {
  ImageId image_id = 0;
  int width = 0;
  int height = 0;
  std::optional<std::string> file_name;
  std::optional<std::vector<float>> features;

  friend bool operator==(const ImageMeta&, const ImageMeta&) = default;
};

struct ObjectRef {
  ObjectId object_id = 0;
  CategoryId category_id = 0;
  std::string category_name;
  BBox bbox;
  double area = 0;
  std::optional<Polygon> segment;
  std::optional<std::vector<float>> crop_features;

  friend bool operator==(const ObjectRef&, const ObjectRef&) = default;
};

// [x_min, y_min, x_max, y_max, x_center, y_center, w_box, h_box]
using SpatialVec8 = std::array<double, 8>;

enum class Answer : std::uint8_t { Yes = 0, No = 1, NA = 2 };
inline constexpr std::size_t kAnswerCount = 3;

std::string_view to_string(Answer a);
Answer parse_answer(std::string_view s);

struct QAPair {
  std::string question;
  Answer answer = Answer::No;

  friend bool operator==(const QAPair&, const QAPair&) = default;
};

enum class GameStatus : std::uint8_t { Success, Failure, Incomplete };

std::string_view to_string(GameStatus s);
GameStatus parse_status(std::string_view s);

struct GameRecord {
  GameId game_id = 0;
  ImageMeta image;
  std::vector<ObjectRef> objects;
  ObjectId target_id = 0;
  std::vector<QAPair> qas;
  GameStatus status = GameStatus::Incomplete;
  std::optional<ObjectId> guess_id;

  // Index of the target inside objects; throws ValidationError when missing.
  std::size_t target_index() const;
  const ObjectRef& target() const { return objects[target_index()]; }
  std::optional<std::size_t> index_of(ObjectId id) const;

  friend bool operator==(const GameRecord&, const GameRecord&) = default;
};

struct ValidationOptions {
  // Imported corpora record failures without the questioner's pick.
  bool require_guess_for_finished = true;
  bool check_geometry = true;
  std::optional<std::size_t> feature_dim;
};

// Throws ValidationError naming the offending field.
void validate(const ImageMeta& image, const ValidationOptions& opts = {});
void validate(const ObjectRef& object, const ImageMeta& image, const ValidationOptions& opts = {});
void validate(const GameRecord& game, const ValidationOptions& opts = {});

}  // namespace gw
