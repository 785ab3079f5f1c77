#include "gw/core/types.hpp"

#include "gw/core/error.hpp"
#include "gw/core/geometry.hpp"

namespace gw {

std::string_view to_string(Answer a) {
  switch (a) {
    case Answer::Yes:
      return "Yes";
    case Answer::No:
      return "No";
    case Answer::NA:
      return "N/A";
  }
  return "N/A";
}

Answer parse_answer(std::string_view s) {
  if (s == "Yes" || s == "yes") return Answer::Yes;
  if (s == "No" || s == "no") return Answer::No;
  if (s == "N/A" || s == "NA" || s == "n/a" || s == "na") return Answer::NA;
  throw ValidationError("answer", "unknown answer '" + std::string(s) + "'");
}

std::string_view to_string(GameStatus s) {
  switch (s) {
    case GameStatus::Success:
      return "success";
    case GameStatus::Failure:
      return "failure";
    case GameStatus::Incomplete:
      return "incomplete";
  }
  return "incomplete";
}

GameStatus parse_status(std::string_view s) {
  if (s == "success") return GameStatus::Success;
  if (s == "failure") return GameStatus::Failure;
  if (s == "incomplete") return GameStatus::Incomplete;
  throw ValidationError("status", "unknown status '" + std::string(s) + "'");
}

std::optional<std::size_t> GameRecord::index_of(ObjectId id) const {
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (objects[i].object_id == id) return i;
  }
  return std::nullopt;
}

std::size_t GameRecord::target_index() const {
  auto idx = index_of(target_id);
  if (!idx) throw ValidationError("target_id", "not among the game's objects");
  return *idx;
}

void validate(const ImageMeta& image, const ValidationOptions& opts) {
  if (image.width <= 0) throw ValidationError("image.width", "must be positive");
  if (image.height <= 0) throw ValidationError("image.height", "must be positive");
  if (image.features && opts.feature_dim && image.features->size() != *opts.feature_dim) {
    throw ValidationError("image.features", "length differs from the configured dimension");
  }
}

void validate(const ObjectRef& object, const ImageMeta& image, const ValidationOptions& opts) {
  const std::string prefix = "objects[" + std::to_string(object.object_id) + "].";
  if (!(object.area > 0)) throw ValidationError(prefix + "area", "must be positive");
  if (opts.feature_dim && object.crop_features &&
      object.crop_features->size() != *opts.feature_dim) {
    throw ValidationError(prefix + "crop_features", "length differs from the configured dimension");
  }
  if (!opts.check_geometry) return;
  const BBox& b = object.bbox;
  if (b.x < 0) throw ValidationError(prefix + "bbox", "x must be >= 0");
  if (b.y < 0) throw ValidationError(prefix + "bbox", "y must be >= 0");
  if (!(b.w > 0)) throw ValidationError(prefix + "bbox", "w must be > 0");
  if (!(b.h > 0)) throw ValidationError(prefix + "bbox", "h must be > 0");
  if (b.x + b.w > image.width) throw ValidationError(prefix + "bbox", "exceeds image width");
  if (b.y + b.h > image.height) throw ValidationError(prefix + "bbox", "exceeds image height");
  if (object.segment) {
    BBox hull;
    try {
      hull = enclosing_bbox(*object.segment);
    } catch (const InvalidGeometry& e) {
      throw ValidationError(prefix + "segment", e.what());
    }
    if (!(hull == b)) throw ValidationError(prefix + "bbox", "differs from the segment's hull");
  }
}

void validate(const GameRecord& game, const ValidationOptions& opts) {
  validate(game.image, opts);
  for (std::size_t i = 0; i < game.objects.size(); ++i) {
    validate(game.objects[i], game.image, opts);
    for (std::size_t j = 0; j < i; ++j) {
      if (game.objects[j].object_id == game.objects[i].object_id) {
        throw ValidationError("objects", "duplicate object_id " +
                                             std::to_string(game.objects[i].object_id));
      }
    }
  }
  if (!game.index_of(game.target_id)) {
    throw ValidationError("target_id", "not among the game's objects");
  }
  if (game.guess_id && !game.index_of(*game.guess_id)) {
    throw ValidationError("guess_id", "not among the game's objects");
  }
  const bool finished = game.status != GameStatus::Incomplete;
  if (finished && !game.guess_id && opts.require_guess_for_finished) {
    throw ValidationError("guess_id", "required for finished games");
  }
  if (game.guess_id) {
    if (game.status == GameStatus::Success && *game.guess_id != game.target_id) {
      throw ValidationError("guess_id", "success requires guess_id == target_id");
    }
    if (game.status == GameStatus::Failure && *game.guess_id == game.target_id) {
      throw ValidationError("guess_id", "failure requires guess_id != target_id");
    }
  }
}

}  // namespace gw
