#include "gw/toy/toy_world.hpp"

#include <set>
#include <utility>

#include "gw/core/geometry.hpp"
#include "gw/core/rng.hpp"

namespace gw::toy {

namespace {

constexpr double kSize = 200.0;

ObjectRef random_object(Rng& rng, ObjectId id, CategoryId cat, std::optional<bool> left) {
  ObjectRef o;
  o.object_id = id;
  o.category_id = cat;
  o.category_name = category_names()[static_cast<std::size_t>(cat - 1)];
  const double w = rng.uniform(30.0, 80.0);
  const double h = rng.uniform(30.0, 80.0);
  double x = rng.uniform(0.0, kSize - w);
  if (left) {
    // Keep the centre strictly inside the requested half.
    x = *left ? rng.uniform(0.0, kSize / 2 - w / 2 - 1.0) : rng.uniform(kSize / 2 - w / 2 + 1.0, kSize - w);
  }
  const double y = rng.uniform(0.0, kSize - h);
  o.bbox = {x, y, w, h};
  o.area = w * h;
  return o;
}

ImageMeta image(ImageId id) {
  ImageMeta m;
  m.image_id = id;
  m.width = static_cast<int>(kSize);
  m.height = static_cast<int>(kSize);
  return m;
}

GameRecord base_game(std::size_t i, std::uint64_t seed_base) {
  GameRecord g;
  g.game_id = static_cast<GameId>(i + 1);
  g.image = image(static_cast<ImageId>(seed_base % 1000 * 100000 + i + 1));
  g.status = GameStatus::Success;
  return g;
}

void finish(GameRecord& g) { g.guess_id = g.target_id; }

bool center_left(const ObjectRef& o, const ImageMeta& im) {
  return spatial_features(o.bbox, im)[4] < 0;
}

bool center_top(const ObjectRef& o, const ImageMeta& im) {
  return spatial_features(o.bbox, im)[5] < 0;
}

Answer yes_if(bool b) { return b ? Answer::Yes : Answer::No; }

}  // namespace

const std::vector<std::string>& category_names() {
  static const std::vector<std::string> names{"cat",   "dog",  "car",   "bus",
                                              "pizza", "cake", "chair", "lamp"};
  return names;
}

std::vector<GameRecord> oracle_corpus(std::size_t n_games, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<GameRecord> out;
  const auto& names = category_names();
  for (std::size_t i = 0; i < n_games; ++i) {
    GameRecord g = base_game(i, seed);
    const std::size_t k = 3 + rng.below(3);
    for (std::size_t j = 0; j < k; ++j) {
      const auto cat = static_cast<CategoryId>(1 + rng.below(names.size()));
      g.objects.push_back(random_object(rng, static_cast<ObjectId>(j + 1), cat, std::nullopt));
    }
    g.target_id = g.objects[rng.below(k)].object_id;
    const bool even = g.target().category_id % 2 == 0;
    for (int q = 0; q < 2; ++q) {
      g.qas.push_back({"is it a " + names[rng.below(names.size())] + " ?", yes_if(even)});
    }
    finish(g);
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<GameRecord> guesser_corpus(std::size_t n_games, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<GameRecord> out;
  const std::size_t n_cats = 6;
  for (std::size_t i = 0; i < n_games; ++i) {
    GameRecord g = base_game(i, seed);
    const std::size_t k = 3 + rng.below(4);
    std::vector<std::pair<CategoryId, bool>> combos;
    for (std::size_t c = 1; c <= n_cats; ++c) {
      combos.emplace_back(static_cast<CategoryId>(c), true);
      combos.emplace_back(static_cast<CategoryId>(c), false);
    }
    rng.shuffle(std::span(combos));
    for (std::size_t j = 0; j < k; ++j) {
      g.objects.push_back(
          random_object(rng, static_cast<ObjectId>(j + 1), combos[j].first, combos[j].second));
    }
    const std::size_t t = rng.below(k);
    g.target_id = g.objects[t].object_id;
    g.qas.push_back({g.objects[t].category_name + (combos[t].second ? " left" : " right"), Answer::Yes});
    finish(g);
    out.push_back(std::move(g));
  }
  return out;
}

const std::vector<std::string>& self_play_script() {
  static const std::vector<std::string> script{"is it on the left ?", "is it at the top ?",
                                               "is it an animal ?", "is it a vehicle ?",
                                               "is it food ?"};
  return script;
}

std::vector<GameRecord> self_play_corpus(std::size_t n_games, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<GameRecord> out;
  const auto& names = category_names();
  const auto& script = self_play_script();
  for (std::size_t i = 0; i < n_games; ++i) {
    GameRecord g = base_game(i, seed);
    const std::size_t k = 3 + rng.below(3);
    for (std::size_t j = 0; j < k; ++j) {
      const auto cat = static_cast<CategoryId>(1 + rng.below(names.size()));
      g.objects.push_back(random_object(rng, static_cast<ObjectId>(j + 1), cat, std::nullopt));
    }
    g.target_id = g.objects[rng.below(k)].object_id;
    const ObjectRef& t = g.target();
    const int c = t.category_id;
    const bool facts[] = {center_left(t, g.image), center_top(t, g.image), c == 1 || c == 2,
                          c == 3 || c == 4, c == 5 || c == 6};
    for (std::size_t q = 0; q < script.size(); ++q) g.qas.push_back({script[q], yes_if(facts[q])});
    finish(g);
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace gw::toy
