#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <vector>

#include "gw/core/types.hpp"

namespace gw::data {

// Sidecar layout: the 7 magic bytes "GWFEAT1", then repeated records of a
// little-endian int64 id followed by dim little-endian float32 values. Image
// features and crop features live in separate files keyed by image_id and
// object_id respectively.
using FeatureTable = std::map<std::int64_t, std::vector<float>>;

FeatureTable read_feature_file(const std::filesystem::path& path, std::size_t dim);
void write_feature_file(const FeatureTable& table, std::size_t dim,
                        const std::filesystem::path& path);

// Copies matching vectors into ImageMeta::features / ObjectRef::crop_features.
void attach_features(std::span<GameRecord> games, const FeatureTable* image_features,
                     const FeatureTable* crop_features);

}  // namespace gw::data
