#include "gw/data/split.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gw/core/error.hpp"
#include "gw/core/rng.hpp"

namespace gw::data {

std::string_view to_string(Split s) {
  switch (s) {
    case Split::Train:
      return "train";
    case Split::Valid:
      return "valid";
    case Split::Test:
      return "test";
  }
  return "train";
}

Split parse_split(std::string_view s) {
  if (s == "train") return Split::Train;
  if (s == "valid") return Split::Valid;
  if (s == "test") return Split::Test;
  throw ValidationError("split", "unknown split '" + std::string(s) + "'");
}

Split SplitAssignment::of(ImageId id) const {
  auto it = by_image.find(id);
  if (it == by_image.end()) throw NotFound("image " + std::to_string(id) + " has no split");
  return it->second;
}

std::array<std::size_t, 3> SplitAssignment::counts() const {
  std::array<std::size_t, 3> c{};
  for (const auto& [id, s] : by_image) ++c[static_cast<std::size_t>(s)];
  return c;
}

std::vector<GameRecord> SplitAssignment::select(std::span<const GameRecord> games,
                                                Split which) const {
  std::vector<GameRecord> out;
  for (const auto& g : games) {
    if (of(g.image.image_id) == which) out.push_back(g);
  }
  return out;
}

SplitAssignment split_by_image(std::span<const GameRecord> games, const SplitRatios& ratios,
                               std::uint64_t seed) {
  if (ratios.train < 0 || ratios.valid < 0 || ratios.test < 0 ||
      std::abs(ratios.train + ratios.valid + ratios.test - 1.0) > 1e-9) {
    throw ConfigError("split ratios must be non-negative and sum to 1");
  }
  std::set<ImageId> unique;
  for (const auto& g : games) unique.insert(g.image.image_id);
  if (unique.size() < 3) {
    throw InsufficientData("need at least 3 images to split, got " +
                           std::to_string(unique.size()));
  }
  std::vector<ImageId> ids(unique.begin(), unique.end());
  Rng rng(seed);
  rng.shuffle(std::span<ImageId>(ids));

  // The epsilon keeps exact products such as 0.7 * 10 from flooring to 6.
  const double n = static_cast<double>(ids.size());
  const auto train_end = static_cast<std::size_t>(std::floor(n * ratios.train + 1e-9));
  const auto valid_end =
      std::max(train_end, static_cast<std::size_t>(std::floor(n * (ratios.train + ratios.valid) + 1e-9)));

  SplitAssignment out;
  out.seed = seed;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    Split s = i < train_end ? Split::Train : (i < valid_end ? Split::Valid : Split::Test);
    out.by_image.emplace(ids[i], s);
  }
  return out;
}

}  // namespace gw::data
