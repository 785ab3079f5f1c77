#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gw/core/types.hpp"

namespace gw::stats {

enum class Subset { Full, Finished, Success };

std::string_view to_string(Subset s);
Subset parse_subset(std::string_view s);
bool in_subset(const GameRecord& g, Subset s);

// Whether answers contribute one word each to the word count.
enum class WordCount { QuestionsOnly, QuestionsAndAnswers };

struct AnswerFractions {
  double yes = 0;
  double no = 0;
  double na = 0;
};

struct StatsReport {
  std::size_t n_dialogues = 0;
  std::size_t n_questions = 0;
  std::size_t n_words = 0;
  std::size_t vocab_size = 0;
  std::size_t vocab_size_min3 = 0;
  std::size_t n_images = 0;
  std::size_t n_objects = 0;  // distinct target objects
  // Absent for an empty subset.
  std::optional<AnswerFractions> answer_fractions;
  std::optional<double> avg_questions_per_dialogue;
  std::optional<double> success_rate;
};

StatsReport corpus_stats(std::span<const GameRecord> games, Subset subset,
                         WordCount mode = WordCount::QuestionsOnly);

std::optional<AnswerFractions> answer_distribution(std::span<const GameRecord> games,
                                                   Subset subset);

std::map<std::size_t, std::size_t> questions_histogram(std::span<const GameRecord> games,
                                                        Subset subset);

// Mean dialogue length keyed by object count K.
std::map<std::size_t, double> questions_vs_object_count(std::span<const GameRecord> games,
                                                         Subset subset);

struct AreaBin {
  double lo = 0;  // inclusive
  double hi = 0;  // exclusive, +inf for the last bin
  double rate = 0;
  std::size_t games = 0;
};

struct SuccessBreakdowns {
  std::map<std::size_t, double> by_object_count;
  std::vector<AreaBin> by_area;  // populated bins only
  std::map<std::string, double> by_category;
  std::size_t grid = 5;
  // Row-major grid x grid cells over normalized target centers (row = y).
  std::vector<std::optional<double>> by_center_cell;
  std::map<std::size_t, double> by_dialogue_length;
};

// Only Success/Failure games contribute. Area bins are equal-population
// quantiles of every eligible object's area in the corpus.
SuccessBreakdowns success_breakdowns(std::span<const GameRecord> games, std::size_t grid = 5,
                                     std::size_t area_bins = 10);

// Keyed by dialogue length; entry i holds the answer mix at question index i.
std::map<std::size_t, std::vector<AnswerFractions>> answer_evolution(
    std::span<const GameRecord> games, Subset subset);

struct WordStats {
  std::vector<std::string> tokens;   // top-n by descending count, then byte order
  std::vector<std::size_t> counts;   // occurrences of tokens[i]
  // Row-L1-normalized counts of questions in which both tokens occur
  // (diagonal included).
  std::vector<std::vector<double>> cooccurrence;

  std::size_t frequency(std::string_view token) const;
};

WordStats word_stats(std::span<const GameRecord> games, Subset subset, std::size_t top_n);

// Token frequencies at each question index, restricted to the top-n tokens.
std::vector<std::map<std::string, std::size_t>> word_evolution(
    std::span<const GameRecord> games, Subset subset, std::size_t top_n);

// Report emitters.
nlohmann::json to_json(const StatsReport& r);
nlohmann::json to_json(const SuccessBreakdowns& b);
nlohmann::json to_json(const WordStats& w);
std::string table1_tsv(std::span<const GameRecord> games, WordCount mode);
nlohmann::json table1_json(std::span<const GameRecord> games, WordCount mode);

}  // namespace gw::stats
