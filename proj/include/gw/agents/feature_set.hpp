#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gw::agents {

enum class Feature : std::uint8_t {
  Question = 1,
  Category = 2,
  Spatial = 4,
  Crop = 8,
  Image = 16,
};

inline constexpr Feature kAllFeatures[] = {Feature::Question, Feature::Category, Feature::Spatial,
                                           Feature::Crop, Feature::Image};

std::string_view to_string(Feature f);

// Subset of the five oracle inputs.
class FeatureSet {
 public:
  FeatureSet() = default;
  explicit FeatureSet(std::uint8_t bits) : bits_(bits & 31u) {}
  FeatureSet(std::initializer_list<Feature> fs) {
    for (Feature f : fs) add(f);
  }

  // Accepts "question,category,spatial", "Question + Category + Spatial" and
  // the '+' separated lowercase form. Throws ConfigError on unknown names or
  // an empty set.
  static FeatureSet parse(std::string_view text);

  // Every non-empty subset, ordered by bit pattern.
  static std::vector<FeatureSet> all_combinations();

  bool has(Feature f) const { return (bits_ & static_cast<std::uint8_t>(f)) != 0; }
  void add(Feature f) { bits_ |= static_cast<std::uint8_t>(f); }
  bool empty() const { return bits_ == 0; }
  std::uint8_t bits() const { return bits_; }

  std::string to_string() const;  // "question,category,spatial"
  std::string label() const;      // "Question + Category + Spatial"

  friend bool operator==(FeatureSet, FeatureSet) = default;

 private:
  std::uint8_t bits_ = 0;
};

}  // namespace gw::agents
