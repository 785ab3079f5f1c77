#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gw/core/types.hpp"

// Small synthetic corpora with known answer rules, used to check that the
// models can learn and that self-play beats chance.
namespace gw::toy {

// Categories 1..8: cat dog car bus pizza cake chair lamp.
const std::vector<std::string>& category_names();

// Two questions per game naming a random category. Answer is Yes iff the
// target's category id is even.
std::vector<GameRecord> oracle_corpus(std::size_t n_games, std::uint64_t seed);

// 3..6 objects with distinct (category, side) pairs; one question
// "<category> <left|right>" naming the target, answered Yes.
std::vector<GameRecord> guesser_corpus(std::size_t n_games, std::uint64_t seed);

// The five questions of self_play_script() with answers true to the target:
// left half, top half, animal (1-2), vehicle (3-4), food (5-6).
std::vector<GameRecord> self_play_corpus(std::size_t n_games, std::uint64_t seed);
const std::vector<std::string>& self_play_script();

}  // namespace gw::toy
