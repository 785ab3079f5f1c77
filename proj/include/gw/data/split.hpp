#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "gw/core/types.hpp"

namespace gw::data {

enum class Split : std::uint8_t { Train, Valid, Test };

std::string_view to_string(Split s);
Split parse_split(std::string_view s);

struct SplitRatios {
  double train = 0.70;
  double valid = 0.15;
  double test = 0.15;
};

struct SplitAssignment {
  std::map<ImageId, Split> by_image;
  std::uint64_t seed = 0;

  Split of(ImageId id) const;
  std::array<std::size_t, 3> counts() const;
  std::vector<GameRecord> select(std::span<const GameRecord> games, Split which) const;
};

// Shuffles the sorted unique image ids with the seeded generator and cuts
// the sequence at floor(n * train) and floor(n * (train + valid)).
SplitAssignment split_by_image(std::span<const GameRecord> games, const SplitRatios& ratios,
                               std::uint64_t seed);

}  // namespace gw::data
