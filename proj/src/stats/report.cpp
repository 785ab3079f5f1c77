#include <cmath>
#include <sstream>

#include "gw/stats/stats.hpp"

namespace gw::stats {

using nlohmann::json;

json to_json(const StatsReport& r) {
  json j = {{"n_dialogues", r.n_dialogues}, {"n_questions", r.n_questions},
            {"n_words", r.n_words},         {"vocab_size", r.vocab_size},
            {"vocab_size_min3", r.vocab_size_min3}, {"n_images", r.n_images},
            {"n_objects", r.n_objects}};
  if (r.answer_fractions) {
    j["answer_fractions"] = {{"yes", r.answer_fractions->yes},
                             {"no", r.answer_fractions->no},
                             {"na", r.answer_fractions->na}};
  } else {
    j["answer_fractions"] = nullptr;
  }
  j["avg_questions_per_dialogue"] =
      r.avg_questions_per_dialogue ? json(*r.avg_questions_per_dialogue) : json(nullptr);
  j["success_rate"] = r.success_rate ? json(*r.success_rate) : json(nullptr);
  return j;
}

json to_json(const SuccessBreakdowns& b) {
  json j;
  for (const auto& [k, v] : b.by_object_count) j["by_object_count"][std::to_string(k)] = v;
  for (const auto& [k, v] : b.by_dialogue_length) j["by_dialogue_length"][std::to_string(k)] = v;
  for (const auto& [k, v] : b.by_category) j["by_category"][k] = v;
  j["by_area"] = json::array();
  for (const auto& bin : b.by_area) {
    j["by_area"].push_back({{"lo", bin.lo},
                            {"hi", std::isinf(bin.hi) ? json(nullptr) : json(bin.hi)},
                            {"games", bin.games},
                            {"rate", bin.rate}});
  }
  j["grid"] = b.grid;
  j["by_center_cell"] = json::array();
  for (const auto& c : b.by_center_cell) j["by_center_cell"].push_back(c ? json(*c) : json(nullptr));
  return j;
}

json to_json(const WordStats& w) {
  json j = {{"tokens", w.tokens}, {"counts", w.counts}, {"cooccurrence", w.cooccurrence}};
  return j;
}

std::string table1_tsv(std::span<const GameRecord> games, WordCount mode) {
  const StatsReport full = corpus_stats(games, Subset::Full, mode);
  const StatsReport fin = corpus_stats(games, Subset::Finished, mode);
  const StatsReport suc = corpus_stats(games, Subset::Success, mode);
  std::ostringstream out;
  out << "metric\tfull\tfinished\tsuccess\n";
  auto row = [&](const char* name, auto member) {
    out << name << '\t' << full.*member << '\t' << fin.*member << '\t' << suc.*member << '\n';
  };
  row("dialogues", &StatsReport::n_dialogues);
  row("questions", &StatsReport::n_questions);
  row("words", &StatsReport::n_words);
  row("vocab_size", &StatsReport::vocab_size);
  row("vocab_size_min3", &StatsReport::vocab_size_min3);
  row("images", &StatsReport::n_images);
  row("objects", &StatsReport::n_objects);
  return out.str();
}

json table1_json(std::span<const GameRecord> games, WordCount mode) {
  return {{"full", to_json(corpus_stats(games, Subset::Full, mode))},
          {"finished", to_json(corpus_stats(games, Subset::Finished, mode))},
          {"success", to_json(corpus_stats(games, Subset::Success, mode))}};
}

}  // namespace gw::stats
