#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gw/core/types.hpp"

namespace gw::data {

// Maps one line of the public download (guesswhat.{train,valid,test}.jsonl.gz)
// onto GameRecord. The public files name the target "object_id", carry COCO
// style flat polygon lists and never store the questioner's pick, so
// failures come back without guess_id.
GameRecord game_from_official_json(const nlohmann::json& j);

ValidationOptions official_validation();

std::vector<GameRecord> load_official_games(const std::filesystem::path& path);

}  // namespace gw::data
