#include "gw/data/features.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <string_view>

#include "gw/core/error.hpp"

namespace gw::data {
namespace {

constexpr std::string_view kMagic = "GWFEAT1";

static_assert(std::endian::native == std::endian::little,
              "feature sidecars are read as little-endian");

}  // namespace

FeatureTable read_feature_file(const std::filesystem::path& path, std::size_t dim) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[7];
  if (!in.read(magic, sizeof magic) || std::string_view(magic, sizeof magic) != kMagic) {
    throw ParseError(0, path.string() + ": bad feature-file magic");
  }
  FeatureTable table;
  std::size_t record = 0;
  while (true) {
    std::int64_t id;
    if (!in.read(reinterpret_cast<char*>(&id), sizeof id)) break;
    std::vector<float> values(dim);
    if (!in.read(reinterpret_cast<char*>(values.data()),
                 static_cast<std::streamsize>(dim * sizeof(float)))) {
      throw ParseError(record + 1, path.string() + ": truncated feature record");
    }
    table[id] = std::move(values);
    ++record;
  }
  if (!in.eof()) throw IoError("read error in " + path.string());
  return table;
}

void write_feature_file(const FeatureTable& table, std::size_t dim,
                        const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(kMagic.data(), static_cast<std::streamsize>(kMagic.size()));
  for (const auto& [id, values] : table) {
    if (values.size() != dim) {
      throw ValidationError("features", "vector for id " + std::to_string(id) +
                                            " has the wrong length");
    }
    out.write(reinterpret_cast<const char*>(&id), sizeof id);
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(dim * sizeof(float)));
  }
  if (!out) throw IoError("failed writing " + path.string());
}

void attach_features(std::span<GameRecord> games, const FeatureTable* image_features,
                     const FeatureTable* crop_features) {
  for (auto& g : games) {
    if (image_features) {
      if (auto it = image_features->find(g.image.image_id); it != image_features->end()) {
        g.image.features = it->second;
      }
    }
    if (crop_features) {
      for (auto& o : g.objects) {
        if (auto it = crop_features->find(o.object_id); it != crop_features->end()) {
          o.crop_features = it->second;
        }
      }
    }
  }
}

}  // namespace gw::data
