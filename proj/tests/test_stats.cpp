#include <gtest/gtest.h>

#include <numeric>

#include "fixtures.hpp"
#include "gw/core/rng.hpp"
#include "gw/stats/stats.hpp"

namespace gw::stats {
namespace {

using testing::game;
using testing::object;

std::vector<GameRecord> two_game_fixture() {
  return {game(1, 1, GameStatus::Success, {{"is it a person ?", Answer::Yes}, {"red ?", Answer::No}}),
          game(2, 2, GameStatus::Failure,
               {{"a car ?", Answer::No}, {"left ?", Answer::Yes}, {"on the left ?", Answer::NA}})};
}

TEST(CorpusStats, TwoGameFixture) {
  const auto games = two_game_fixture();
  const auto full = corpus_stats(games, Subset::Full);
  EXPECT_EQ(full.n_dialogues, 2u);
  EXPECT_EQ(full.n_questions, 5u);
  EXPECT_EQ(full.n_images, 2u);
  EXPECT_EQ(full.n_objects, 1u);
  EXPECT_EQ(full.n_words, 5u + 2u + 3u + 2u + 4u);
  const auto succ = corpus_stats(games, Subset::Success);
  EXPECT_EQ(succ.n_dialogues, 1u);
  EXPECT_EQ(succ.n_questions, 2u);
  ASSERT_TRUE(full.success_rate.has_value());
  EXPECT_DOUBLE_EQ(*full.success_rate, 0.5);
  EXPECT_DOUBLE_EQ(*full.avg_questions_per_dialogue, 2.5);
  // "?" appears 5 times; "left" twice; nothing else three times
  EXPECT_EQ(full.vocab_size_min3, 1u);
  EXPECT_EQ(corpus_stats(games, Subset::Full, WordCount::QuestionsAndAnswers).n_words,
            full.n_words + 5);
}

TEST(CorpusStats, EmptySubsetFlagsRatesAbsent) {
  const std::vector<GameRecord> games{game(1, 1, GameStatus::Incomplete)};
  const auto r = corpus_stats(games, Subset::Finished);
  EXPECT_EQ(r.n_dialogues, 0u);
  EXPECT_FALSE(r.answer_fractions.has_value());
  EXPECT_FALSE(r.success_rate.has_value());
  EXPECT_FALSE(r.avg_questions_per_dialogue.has_value());
}

TEST(AnswerDistribution, HandCounts) {
  const std::vector<GameRecord> games{
      game(1, 1, GameStatus::Success,
           {{"a", Answer::Yes}, {"b", Answer::Yes}, {"c", Answer::No}, {"d", Answer::NA}})};
  const auto f = answer_distribution(games, Subset::Full);
  ASSERT_TRUE(f.has_value());
  EXPECT_DOUBLE_EQ(f->yes, 0.5);
  EXPECT_DOUBLE_EQ(f->no, 0.25);
  EXPECT_DOUBLE_EQ(f->na, 0.25);

  const std::vector<GameRecord> yes{game(1, 1, GameStatus::Success, {{"a", Answer::Yes}})};
  const auto y = answer_distribution(yes, Subset::Full);
  EXPECT_DOUBLE_EQ(y->yes, 1.0);
  EXPECT_DOUBLE_EQ(y->no + y->na, 0.0);
  EXPECT_FALSE(answer_distribution({}, Subset::Full).has_value());
}

std::vector<std::pair<std::string, Answer>> qs(std::size_t n, Answer a = Answer::No) {
  std::vector<std::pair<std::string, Answer>> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({"q" + std::to_string(i), a});
  return out;
}

TEST(QuestionsHistogram, Examples) {
  const std::vector<GameRecord> games{game(1, 1, GameStatus::Success, qs(2)),
                                      game(2, 1, GameStatus::Success, qs(2)),
                                      game(3, 1, GameStatus::Success, qs(5))};
  EXPECT_EQ(questions_histogram(games, Subset::Full), (std::map<std::size_t, std::size_t>{{2, 2}, {5, 1}}));
  EXPECT_TRUE(questions_histogram({}, Subset::Full).empty());
  const std::vector<GameRecord> one{game(1, 1, GameStatus::Success, qs(7))};
  EXPECT_EQ(questions_histogram(one, Subset::Full), (std::map<std::size_t, std::size_t>{{7, 1}}));
}

TEST(QuestionsVsObjectCount, MeanPerK) {
  const std::vector<GameRecord> games{game(1, 1, GameStatus::Success, qs(2)),
                                      game(2, 1, GameStatus::Success, qs(4))};
  EXPECT_EQ(questions_vs_object_count(games, Subset::Full), (std::map<std::size_t, double>{{3, 3.0}}));
}

TEST(SuccessBreakdowns, RateAtFourObjects) {
  auto a = game(1, 1, GameStatus::Success);
  auto b = game(2, 1, GameStatus::Failure);
  for (auto* g : {&a, &b}) g->objects.push_back(object(4, 4, {10, 60, 30, 30}, "cat"));
  const std::vector<GameRecord> games{a, b, game(3, 1, GameStatus::Incomplete)};
  const auto s = success_breakdowns(games);
  EXPECT_EQ(s.by_object_count, (std::map<std::size_t, double>{{4, 0.5}}));
  EXPECT_DOUBLE_EQ(s.by_category.at("person"), 0.5);
}

TEST(SuccessBreakdowns, AllSuccessRatesAreOne) {
  std::vector<GameRecord> games;
  for (int i = 0; i < 20; ++i) games.push_back(game(i, i, GameStatus::Success, qs(i % 4)));
  const auto s = success_breakdowns(games);
  for (const auto& [k, r] : s.by_object_count) EXPECT_EQ(r, 1.0);
  for (const auto& [k, r] : s.by_dialogue_length) EXPECT_EQ(r, 1.0);
  for (const auto& b : s.by_area) EXPECT_EQ(b.rate, 1.0);
  for (const auto& c : s.by_center_cell) {
    if (c) EXPECT_EQ(*c, 1.0);
  }
}

TEST(AnswerEvolution, LastAnswerYes) {
  const std::vector<GameRecord> games{
      game(1, 1, GameStatus::Success, {{"a", Answer::No}, {"b", Answer::Yes}}),
      game(2, 1, GameStatus::Success, {{"a", Answer::NA}, {"b", Answer::Yes}}),
      game(3, 1, GameStatus::Success, {{"a", Answer::Yes}})};
  const auto e = answer_evolution(games, Subset::Full);
  ASSERT_EQ(e.size(), 2u);
  const auto& two = e.at(2);
  EXPECT_DOUBLE_EQ(two[0].no, 0.5);
  EXPECT_DOUBLE_EQ(two[0].na, 0.5);
  EXPECT_DOUBLE_EQ(two[1].yes, 1.0);
  EXPECT_DOUBLE_EQ(e.at(1)[0].yes, 1.0);
}

TEST(WordStats, UniformRowForThreeTokens) {
  const std::vector<GameRecord> games{game(1, 1, GameStatus::Success, {{"is it red", Answer::No}})};
  const auto w = word_stats(games, Subset::Full, 100);
  ASSERT_EQ(w.tokens.size(), 3u);
  for (const auto& row : w.cooccurrence) {
    for (double v : row) EXPECT_DOUBLE_EQ(v, 1.0 / 3.0);
  }
  EXPECT_EQ(w.frequency("red"), 1u);
  EXPECT_EQ(w.frequency("blue"), 0u);
  EXPECT_EQ(word_stats(games, Subset::Full, 2).tokens.size(), 2u);
}

std::vector<GameRecord> random_corpus(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  const char* words[] = {"is", "it", "a", "cat", "dog", "left", "?", "red"};
  std::vector<GameRecord> games;
  for (std::size_t i = 0; i < n; ++i) {
    const auto status = static_cast<GameStatus>(rng.below(3));
    std::vector<std::pair<std::string, Answer>> qa;
    const std::size_t len = rng.below(6);
    for (std::size_t j = 0; j < len; ++j) {
      std::string q;
      for (std::size_t k = 0, m = 1 + rng.below(5); k < m; ++k) q += std::string(words[rng.below(8)]) + " ";
      qa.push_back({q, static_cast<Answer>(rng.below(3))});
    }
    auto g = game(static_cast<GameId>(i), static_cast<ImageId>(rng.below(30)), status, qa);
    g.target_id = 1 + static_cast<ObjectId>(rng.below(3));
    if (status == GameStatus::Success) g.guess_id = g.target_id;
    if (status == GameStatus::Failure) g.guess_id = g.target_id == 1 ? 2 : 1;
    games.push_back(std::move(g));
  }
  return games;
}

TEST(StatsInvariants, MonotoneSubsetsAndNormalizedOutputs) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto games = random_corpus(seed, 60);
    const auto full = corpus_stats(games, Subset::Full);
    const auto fin = corpus_stats(games, Subset::Finished);
    const auto suc = corpus_stats(games, Subset::Success);
    auto fields = [](const StatsReport& r) {
      return std::vector<std::size_t>{r.n_dialogues, r.n_questions, r.n_words, r.vocab_size,
                                      r.vocab_size_min3, r.n_images, r.n_objects};
    };
    const auto a = fields(full), b = fields(fin), c = fields(suc);
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_LE(c[i], b[i]);
      EXPECT_LE(b[i], a[i]);
    }
    for (Subset s : {Subset::Full, Subset::Finished, Subset::Success}) {
      if (auto f = answer_distribution(games, s)) EXPECT_NEAR(f->yes + f->no + f->na, 1.0, 1e-9);
      const auto h = questions_histogram(games, s);
      std::size_t total = 0;
      for (const auto& [k, n] : h) total += n;
      EXPECT_EQ(total, corpus_stats(games, s).n_dialogues);
      for (const auto& [len, row] : answer_evolution(games, s)) {
        for (const auto& f : row) EXPECT_NEAR(f.yes + f.no + f.na, 1.0, 1e-9);
      }
      const auto w = word_stats(games, s, 5);
      for (const auto& row : w.cooccurrence) {
        const double sum = std::accumulate(row.begin(), row.end(), 0.0);
        EXPECT_TRUE(sum == 0.0 || std::abs(sum - 1.0) < 1e-9);
      }
    }
    const auto sb = success_breakdowns(games);
    for (const auto& [k, r] : sb.by_object_count) {
      EXPECT_GE(r, 0.0);
      EXPECT_LE(r, 1.0);
    }
    std::size_t binned = 0;
    for (const auto& bin : sb.by_area) binned += bin.games;
    EXPECT_EQ(binned, fin.n_dialogues);
  }
}

TEST(Reports, JsonAndTsvShape) {
  const auto games = two_game_fixture();
  const auto j = table1_json(games, WordCount::QuestionsOnly);
  EXPECT_TRUE(j.contains("full"));
  EXPECT_TRUE(j.contains("success"));
  const auto tsv = table1_tsv(games, WordCount::QuestionsOnly);
  EXPECT_NE(tsv.find("dialogues"), std::string::npos);
  EXPECT_NO_THROW(to_json(success_breakdowns(games)).dump());
  EXPECT_EQ(parse_subset("finished"), Subset::Finished);
}

}  // namespace
}  // namespace gw::stats
