#include "gw/agents/feature_set.hpp"

#include <cctype>

#include "gw/core/error.hpp"

namespace gw::agents {

namespace {

constexpr std::string_view kLabels[] = {"Question", "Category", "Spatial", "Crop", "Image"};

std::string lower_trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  std::string out;
  for (char c : s.substr(b, e - b)) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::string_view to_string(Feature f) {
  switch (f) {
    case Feature::Question: return "question";
    case Feature::Category: return "category";
    case Feature::Spatial: return "spatial";
    case Feature::Crop: return "crop";
    case Feature::Image: return "image";
  }
  return "?";
}

FeatureSet FeatureSet::parse(std::string_view text) {
  FeatureSet fs;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find_first_of(",+", pos);
    if (next == std::string_view::npos) next = text.size();
    const std::string name = lower_trim(text.substr(pos, next - pos));
    if (!name.empty()) {
      bool known = false;
      for (Feature f : kAllFeatures) {
        if (name == agents::to_string(f)) {
          fs.add(f);
          known = true;
        }
      }
      if (!known) throw ConfigError("unknown oracle feature '" + name + "'");
    }
    pos = next + 1;
  }
  if (fs.empty()) throw ConfigError("oracle feature set is empty");
  return fs;
}

std::vector<FeatureSet> FeatureSet::all_combinations() {
  std::vector<FeatureSet> out;
  for (unsigned b = 1; b < 32; ++b) out.emplace_back(static_cast<std::uint8_t>(b));
  return out;
}

std::string FeatureSet::to_string() const {
  std::string out;
  for (Feature f : kAllFeatures) {
    if (!has(f)) continue;
    if (!out.empty()) out += ',';
    out += agents::to_string(f);
  }
  return out;
}

std::string FeatureSet::label() const {
  std::string out;
  for (std::size_t i = 0; i < 5; ++i) {
    if (!has(kAllFeatures[i])) continue;
    if (!out.empty()) out += " + ";
    out += kLabels[i];
  }
  return out;
}

}  // namespace gw::agents
