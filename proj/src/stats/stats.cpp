#include "gw/stats/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "gw/core/error.hpp"
#include "gw/core/geometry.hpp"
#include "gw/data/tokenizer.hpp"

namespace gw::stats {

std::string_view to_string(Subset s) {
  switch (s) {
    case Subset::Full:
      return "full";
    case Subset::Finished:
      return "finished";
    case Subset::Success:
      return "success";
  }
  return "full";
}

Subset parse_subset(std::string_view s) {
  if (s == "full") return Subset::Full;
  if (s == "finished") return Subset::Finished;
  if (s == "success" || s == "successful") return Subset::Success;
  throw ConfigError("unknown subset '" + std::string(s) + "'");
}

bool in_subset(const GameRecord& g, Subset s) {
  switch (s) {
    case Subset::Full:
      return true;
    case Subset::Finished:
      return g.status != GameStatus::Incomplete;
    case Subset::Success:
      return g.status == GameStatus::Success;
  }
  return false;
}

namespace {

struct AnswerCounts {
  std::size_t yes = 0, no = 0, na = 0;

  void add(Answer a) {
    switch (a) {
      case Answer::Yes:
        ++yes;
        break;
      case Answer::No:
        ++no;
        break;
      case Answer::NA:
        ++na;
        break;
    }
  }
  std::size_t total() const { return yes + no + na; }
  std::optional<AnswerFractions> fractions() const {
    const std::size_t n = total();
    if (n == 0) return std::nullopt;
    const double d = static_cast<double>(n);
    return AnswerFractions{yes / d, no / d, na / d};
  }
};

double rate(std::size_t wins, std::size_t total) {
  return static_cast<double>(wins) / static_cast<double>(total);
}

struct Tally {
  std::size_t wins = 0, total = 0;
  void add(bool win) {
    wins += win ? 1 : 0;
    ++total;
  }
};

template <class Key>
std::map<Key, double> to_rates(const std::map<Key, Tally>& tallies) {
  std::map<Key, double> out;
  for (const auto& [k, t] : tallies) {
    if (t.total > 0) out[k] = rate(t.wins, t.total);
  }
  return out;
}

}  // namespace

StatsReport corpus_stats(std::span<const GameRecord> games, Subset subset, WordCount mode) {
  StatsReport r;
  std::set<ImageId> images;
  std::set<ObjectId> objects;
  std::map<std::string, std::size_t> counts;
  AnswerCounts answers;
  std::size_t successes = 0;
  for (const auto& g : games) {
    if (!in_subset(g, subset)) continue;
    ++r.n_dialogues;
    r.n_questions += g.qas.size();
    images.insert(g.image.image_id);
    objects.insert(g.target_id);
    if (g.status == GameStatus::Success) ++successes;
    for (const auto& qa : g.qas) {
      for (auto& tok : data::tokenize(qa.question)) {
        ++r.n_words;
        ++counts[std::move(tok)];
      }
      if (mode == WordCount::QuestionsAndAnswers) ++r.n_words;
      answers.add(qa.answer);
    }
  }
  r.n_images = images.size();
  r.n_objects = objects.size();
  r.vocab_size = counts.size();
  r.vocab_size_min3 = static_cast<std::size_t>(
      std::count_if(counts.begin(), counts.end(), [](const auto& kv) { return kv.second >= 3; }));
  r.answer_fractions = answers.fractions();
  if (r.n_dialogues > 0) {
    r.avg_questions_per_dialogue =
        static_cast<double>(r.n_questions) / static_cast<double>(r.n_dialogues);
    r.success_rate = rate(successes, r.n_dialogues);
  }
  return r;
}

std::optional<AnswerFractions> answer_distribution(std::span<const GameRecord> games,
                                                   Subset subset) {
  AnswerCounts c;
  for (const auto& g : games) {
    if (!in_subset(g, subset)) continue;
    for (const auto& qa : g.qas) c.add(qa.answer);
  }
  return c.fractions();
}

std::map<std::size_t, std::size_t> questions_histogram(std::span<const GameRecord> games,
                                                        Subset subset) {
  std::map<std::size_t, std::size_t> h;
  for (const auto& g : games) {
    if (in_subset(g, subset)) ++h[g.qas.size()];
  }
  return h;
}

std::map<std::size_t, double> questions_vs_object_count(std::span<const GameRecord> games,
                                                         Subset subset) {
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> acc;  // K -> (sum, n)
  for (const auto& g : games) {
    if (!in_subset(g, subset)) continue;
    auto& [sum, n] = acc[g.objects.size()];
    sum += g.qas.size();
    ++n;
  }
  std::map<std::size_t, double> out;
  for (const auto& [k, sn] : acc) out[k] = rate(sn.first, sn.second);
  return out;
}

SuccessBreakdowns success_breakdowns(std::span<const GameRecord> games, std::size_t grid,
                                     std::size_t area_bins) {
  if (grid == 0 || area_bins == 0) throw ConfigError("grid and area_bins must be positive");
  SuccessBreakdowns out;
  out.grid = grid;

  std::vector<double> areas;
  for (const auto& g : games) {
    for (const auto& o : g.objects) {
      if (is_eligible_object(o)) areas.push_back(o.area);
    }
  }
  std::sort(areas.begin(), areas.end());
  std::vector<double> edges;  // area_bins - 1 interior cut points
  if (!areas.empty()) {
    for (std::size_t k = 1; k < area_bins; ++k) {
      edges.push_back(areas[k * areas.size() / area_bins]);
    }
  }

  std::map<std::size_t, Tally> by_k, by_len;
  std::map<std::string, Tally> by_cat;
  std::vector<Tally> by_bin(area_bins), by_cell(grid * grid);
  for (const auto& g : games) {
    if (g.status == GameStatus::Incomplete) continue;
    const bool win = g.status == GameStatus::Success;
    const ObjectRef& t = g.target();
    by_k[g.objects.size()].add(win);
    by_len[g.qas.size()].add(win);
    by_cat[t.category_name.empty() ? std::to_string(t.category_id) : t.category_name].add(win);
    const auto bin = static_cast<std::size_t>(
        std::upper_bound(edges.begin(), edges.end(), t.area) - edges.begin());
    by_bin[bin].add(win);
    if (t.bbox.w > 0 && t.bbox.h > 0 && g.image.width > 0 && g.image.height > 0) {
      const SpatialVec8 s = spatial_features(t.bbox, g.image);
      auto cell = [grid](double c) {
        const double u = std::floor((c + 1.0) / 2.0 * static_cast<double>(grid));
        return static_cast<std::size_t>(std::clamp(u, 0.0, static_cast<double>(grid - 1)));
      };
      by_cell[cell(s[5]) * grid + cell(s[4])].add(win);
    }
  }

  out.by_object_count = to_rates(by_k);
  out.by_dialogue_length = to_rates(by_len);
  out.by_category = to_rates(by_cat);
  for (std::size_t b = 0; b < area_bins; ++b) {
    if (by_bin[b].total == 0) continue;
    AreaBin bin;
    bin.lo = b == 0 ? 0.0 : edges[b - 1];
    bin.hi = b < edges.size() ? edges[b] : std::numeric_limits<double>::infinity();
    bin.games = by_bin[b].total;
    bin.rate = rate(by_bin[b].wins, by_bin[b].total);
    out.by_area.push_back(bin);
  }
  out.by_center_cell.resize(grid * grid);
  for (std::size_t c = 0; c < by_cell.size(); ++c) {
    if (by_cell[c].total > 0) out.by_center_cell[c] = rate(by_cell[c].wins, by_cell[c].total);
  }
  return out;
}

std::map<std::size_t, std::vector<AnswerFractions>> answer_evolution(
    std::span<const GameRecord> games, Subset subset) {
  std::map<std::size_t, std::vector<AnswerCounts>> acc;
  for (const auto& g : games) {
    if (!in_subset(g, subset) || g.qas.empty()) continue;
    auto& row = acc[g.qas.size()];
    row.resize(g.qas.size());
    for (std::size_t i = 0; i < g.qas.size(); ++i) row[i].add(g.qas[i].answer);
  }
  std::map<std::size_t, std::vector<AnswerFractions>> out;
  for (const auto& [len, row] : acc) {
    auto& dst = out[len];
    for (const auto& c : row) dst.push_back(*c.fractions());
  }
  return out;
}

std::size_t WordStats::frequency(std::string_view token) const {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == token) return counts[i];
  }
  return 0;
}

namespace {

std::vector<std::pair<std::string, std::size_t>> top_tokens(std::span<const GameRecord> games,
                                                            Subset subset, std::size_t top_n) {
  std::map<std::string, std::size_t> counts;
  for (const auto& g : games) {
    if (!in_subset(g, subset)) continue;
    for (const auto& qa : g.qas) {
      for (auto& tok : data::tokenize(qa.question)) ++counts[std::move(tok)];
    }
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > top_n) ranked.resize(top_n);
  return ranked;
}

}  // namespace

WordStats word_stats(std::span<const GameRecord> games, Subset subset, std::size_t top_n) {
  WordStats w;
  const auto ranked = top_tokens(games, subset, top_n);
  std::map<std::string, std::size_t> index;
  for (const auto& [tok, n] : ranked) {
    index[tok] = w.tokens.size();
    w.tokens.push_back(tok);
    w.counts.push_back(n);
  }
  const std::size_t n = w.tokens.size();
  std::vector<std::vector<double>> co(n, std::vector<double>(n, 0.0));
  for (const auto& g : games) {
    if (!in_subset(g, subset)) continue;
    for (const auto& qa : g.qas) {
      std::set<std::size_t> present;
      for (const auto& tok : data::tokenize(qa.question)) {
        if (auto it = index.find(tok); it != index.end()) present.insert(it->second);
      }
      for (std::size_t a : present) {
        for (std::size_t b : present) co[a][b] += 1.0;
      }
    }
  }
  for (auto& row : co) {
    double total = 0;
    for (double v : row) total += v;
    if (total > 0) {
      for (double& v : row) v /= total;
    }
  }
  w.cooccurrence = std::move(co);
  return w;
}

std::vector<std::map<std::string, std::size_t>> word_evolution(
    std::span<const GameRecord> games, Subset subset, std::size_t top_n) {
  std::set<std::string> keep;
  for (const auto& [tok, n] : top_tokens(games, subset, top_n)) keep.insert(tok);
  std::vector<std::map<std::string, std::size_t>> out;
  for (const auto& g : games) {
    if (!in_subset(g, subset)) continue;
    if (out.size() < g.qas.size()) out.resize(g.qas.size());
    for (std::size_t i = 0; i < g.qas.size(); ++i) {
      for (auto& tok : data::tokenize(g.qas[i].question)) {
        if (keep.contains(tok)) ++out[i][std::move(tok)];
      }
    }
  }
  return out;
}

}  // namespace gw::stats
