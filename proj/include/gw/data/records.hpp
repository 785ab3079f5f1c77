#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gw/core/types.hpp"

namespace gw::data {

// One game per line:
// {"game_id", "status", "image": {"image_id", "width", "height", "file_name"?},
//  "objects": [{"object_id", "category_id", "category", "bbox": [x,y,w,h],
//               "area", "segment"?}],
//  "target_id", "qas": [{"question", "answer"}], "guess_id"?}
nlohmann::json to_json(const GameRecord& game);
GameRecord game_from_json(const nlohmann::json& j);

// Throws ParseError (malformed line) or ValidationError (invariant violation).
GameRecord parse_game_line(std::string_view line, std::size_t line_no,
                           const ValidationOptions& opts = {});

// Blank lines are skipped; line numbers are 1-based.
std::vector<GameRecord> parse_games(std::istream& in, const ValidationOptions& opts = {});

std::size_t write_games(std::span<const GameRecord> games, std::ostream& out);

// Reads plain or gzip-compressed line files.
std::vector<std::string> read_lines(const std::filesystem::path& path);
std::vector<GameRecord> load_games(const std::filesystem::path& path,
                                   const ValidationOptions& opts = {});
std::size_t save_games(std::span<const GameRecord> games, const std::filesystem::path& path);

}  // namespace gw::data
