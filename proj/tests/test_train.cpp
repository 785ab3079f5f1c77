#include <gtest/gtest.h>

#include <atomic>
#include <sstream>

#include "fixtures.hpp"
#include "gradcheck_suite.hpp"
#include "gw/ad/ops.hpp"
#include "gw/core/error.hpp"
#include "gw/toy/toy_world.hpp"
#include "gw/train/tasks.hpp"
#include "gw/train/trainer.hpp"

namespace gw::train {
namespace {

using testing::game;

// One training example whose loss is the parameter itself; validation error
// follows a script indexed by the number of finished epochs.
class ScriptTask : public TrainTask {
 public:
  explicit ScriptTask(std::vector<double> valid_script, bool with_valid = true)
      : script_(std::move(valid_script)), with_valid_(with_valid) {
    store_.add("p", {1, 1}).value[0] = 10.0;
  }
  std::string kind() const override { return "script"; }
  ad::ParameterStore& parameters() override { return store_; }
  std::size_t size(Part part) const override { return part == Part::Train ? 1 : (with_valid_ ? 1 : 0); }
  ad::Var loss(ad::Graph& g, std::size_t) const override {
    ++epochs_;
    return ad::sum(g.parameter(const_cast<ad::ParameterStore&>(store_).get("p")));
  }
  ErrorCount errors(Part part, std::size_t) const override {
    const double e = script_.at(epochs_ - 1);
    if (part == Part::Valid) values_.push_back(store_.get("p").value[0]);
    // error as wrong / 1000 for exact rates
    const auto wrong = static_cast<std::size_t>(e * 1000 + 0.5);
    return {part == Part::Train ? wrong : wrong, 1000};
  }
  double value() const { return store_.get("p").value[0]; }
  std::vector<double> values_seen() const { return values_; }

 private:
  ad::ParameterStore store_;
  std::vector<double> script_;
  bool with_valid_;
  mutable std::atomic<std::size_t> epochs_{0};
  mutable std::vector<double> values_;
};

TEST(Trainer, PatienceStopsAndRestoresBest) {
  ScriptTask task({0.5, 0.4, 0.45, 0.4, 0.41, 0.6, 0.1, 0.1});
  TrainConfig cfg;
  cfg.max_epochs = 8;
  cfg.patience = 3;
  cfg.adam.lr = 0.5;
  const auto r = train(task, cfg);
  ASSERT_EQ(r.log.size(), 6u);  // epochs 3..6 do not improve strictly; the 4th of them stops
  EXPECT_TRUE(r.stopped_early);
  EXPECT_EQ(r.best_epoch, 2u);
  EXPECT_DOUBLE_EQ(r.best_error, 0.4);
  const auto seen = task.values_seen();
  ASSERT_GE(seen.size(), 2u);
  EXPECT_EQ(task.value(), seen[1]);
  EXPECT_NE(seen[1], seen.back());
}

TEST(Trainer, NoEarlyStopWhenImproving) {
  ScriptTask task({0.9, 0.8, 0.7, 0.6});
  TrainConfig cfg;
  cfg.max_epochs = 4;
  cfg.patience = 1;
  const auto r = train(task, cfg);
  EXPECT_EQ(r.log.size(), 4u);
  EXPECT_FALSE(r.stopped_early);
  EXPECT_EQ(r.best_epoch, 4u);
}

TEST(Trainer, FallsBackToTrainErrorWithoutValidation) {
  ScriptTask task({0.3, 0.2, 0.25}, false);
  TrainConfig cfg;
  cfg.max_epochs = 3;
  const auto r = train(task, cfg);
  EXPECT_EQ(r.best_epoch, 2u);
  for (const auto& m : r.log) EXPECT_FALSE(m.valid_error.has_value());
  std::stringstream ss;
  write_metric_log(r, ss);
  EXPECT_EQ(ss.str(), "epoch\ttrain_err\tvalid_err\n1\t0.300000\tNA\n2\t0.200000\tNA\n3\t0.250000\tNA\n");
}

TEST(Trainer, ConfigValidation) {
  ScriptTask task({0.1});
  TrainConfig cfg;
  cfg.batch_size = 0;
  EXPECT_THROW(train(task, cfg), ConfigError);
  cfg = {};
  cfg.max_epochs = 0;
  EXPECT_THROW(train(task, cfg), ConfigError);
  cfg = {};
  cfg.adam.lr = -1;
  EXPECT_THROW(train(task, cfg), ConfigError);
  cfg = {};
  cfg.patience = 0;
  EXPECT_THROW(train(task, cfg), ConfigError);
}

agents::OracleConfig small_oracle() {
  agents::OracleConfig c;
  c.features = {agents::Feature::Question, agents::Feature::Category};
  c.word_dim = 6;
  c.hidden = 8;
  c.category_dim = 4;
  c.mlp_hidden = 8;
  c.num_categories = 9;
  return c;
}

TEST(Trainer, EmptyTrainingSplitIsAnError) {
  const auto games = toy::oracle_corpus(10, 1);
  agents::OracleModel m(small_oracle(), data::Vocabulary::build(games, 1), 1);
  OracleTask task(m, {}, games);
  EXPECT_THROW(train(task, {}), InsufficientData);
}

TEST(Trainer, SameSeedSameRun) {
  const auto games = toy::oracle_corpus(40, 2);
  const auto vocab = data::Vocabulary::build(games, 1);
  const std::span<const GameRecord> tr(games.data(), 30), va(games.data() + 30, 10);
  TrainConfig cfg;
  cfg.max_epochs = 3;
  cfg.batch_size = 8;
  cfg.seed = 77;
  auto run = [&](std::uint64_t seed) {
    agents::OracleModel m(small_oracle(), vocab, 5);
    OracleTask task(m, tr, va);
    TrainConfig c = cfg;
    c.seed = seed;
    auto r = train(task, c);
    return std::pair{r, m.parameters().snapshot()};
  };
  const auto [r1, p1] = run(77);
  const auto [r2, p2] = run(77);
  const auto [r3, p3] = run(78);
  ASSERT_EQ(r1.log.size(), r2.log.size());
  for (std::size_t i = 0; i < r1.log.size(); ++i) {
    EXPECT_EQ(r1.log[i].train_loss, r2.log[i].train_loss);
    EXPECT_EQ(r1.log[i].shuffle_digest, r2.log[i].shuffle_digest);
    EXPECT_NE(r1.log[i].shuffle_digest, r3.log[i].shuffle_digest);
  }
  EXPECT_EQ(p1, p2);
  EXPECT_NE(p1, p3);
}

TEST(Trainer, LossDecreasesOnToyOracle) {
  const auto games = toy::oracle_corpus(60, 3);
  agents::OracleModel m(small_oracle(), data::Vocabulary::build(games, 1), 5);
  OracleTask task(m, games, {});
  TrainConfig cfg;
  cfg.max_epochs = 10;
  cfg.batch_size = 8;
  cfg.adam.lr = 0.01;
  cfg.patience = 100;
  const auto r = train(task, cfg);
  EXPECT_LT(r.log.back().train_loss, r.log.front().train_loss);
}

TEST(Trainer, ManifestRecordsRun) {
  ScriptTask task({0.5, 0.4});
  TrainConfig cfg;
  cfg.max_epochs = 2;
  cfg.seed = 9;
  const auto r = train(task, cfg);
  const auto j = run_manifest(r, cfg, "script", "out.ckpt", {{"x", 1}});
  EXPECT_EQ(j.at("kind"), "script");
  EXPECT_EQ(j.at("best_epoch"), 2);
  EXPECT_EQ(j.at("train_config").at("seed"), 9);
  EXPECT_EQ(order_digest({0, 1, 2}), order_digest({0, 1, 2}));
  EXPECT_NE(order_digest({0, 1, 2}), order_digest({1, 0, 2}));
}

TEST(Tasks, OracleExamplesSkipEmptyQuestions) {
  std::vector<GameRecord> games{game(1, 1, GameStatus::Success, {{"is it a cat", Answer::Yes},
                                                                  {"  ", Answer::No},
                                                                  {"red", Answer::NA}})};
  const auto vocab = data::Vocabulary::build(games, 1);
  auto cfg = small_oracle();
  agents::OracleModel m(cfg, vocab, 1);
  OracleTask task(m, games, {});
  ASSERT_EQ(task.size(Part::Train), 2u);
  EXPECT_EQ(task.examples(Part::Train)[1].answer, Answer::NA);
  EXPECT_EQ(oracle_errors(m, games).total, 2u);
}

TEST(Tasks, GroundTruthAndOracleModesShareTargets) {
  const auto games = toy::self_play_corpus(20, 4);
  const auto vocab = data::Vocabulary::build(games, 1);
  auto oc = small_oracle();
  agents::OracleModel oracle(oc, vocab, 2);
  const auto conditioned = oracle_conditioned(games, oracle);
  ASSERT_EQ(conditioned.size(), games.size());
  agents::QGenModel q1(testing::tiny_qgen_config(), vocab, 3);
  agents::QGenModel q2(testing::tiny_qgen_config(), vocab, 3);
  QGenTask gt(q1, games, {});
  QGenTask om(q2, conditioned, {});
  ASSERT_EQ(gt.size(Part::Train), om.size(Part::Train));
  std::size_t answer_changes = 0;
  for (std::size_t i = 0; i < gt.size(Part::Train); ++i) {
    const auto& a = gt.examples(Part::Train)[i].dialogue;
    const auto& b = om.examples(Part::Train)[i].dialogue;
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
      EXPECT_EQ(a[j].question, b[j].question);
      answer_changes += a[j].answer != b[j].answer;
    }
  }
  for (std::size_t g = 0; g < games.size(); ++g) {
    for (std::size_t j = 0; j < games[g].qas.size(); ++j) {
      EXPECT_EQ(conditioned[g].qas[j].answer,
                oracle.answer(games[g].qas[j].question, games[g].target(), games[g].image));
    }
  }
  EXPECT_EQ(parse_qgen_mode("gt"), QGenMode::GroundTruth);
  EXPECT_EQ(parse_qgen_mode("oracle"), QGenMode::Oracle);
  EXPECT_THROW(parse_qgen_mode("human"), ConfigError);
  (void)answer_changes;
}

TEST(Baselines, MajorityAnswerAndConstantErrors) {
  std::vector<GameRecord> games{
      game(1, 1, GameStatus::Success, {{"a", Answer::No}, {"b", Answer::No}, {"c", Answer::Yes}}),
      game(2, 1, GameStatus::Failure, {{"d", Answer::NA}, {"e", Answer::No}})};
  EXPECT_EQ(majority_answer(games), Answer::No);
  const auto e = constant_answer_errors(games, Answer::No);
  EXPECT_EQ(e.wrong, 2u);
  EXPECT_EQ(e.total, 5u);
  std::vector<GameRecord> tie{game(1, 1, GameStatus::Success, {{"a", Answer::No}, {"b", Answer::Yes}})};
  EXPECT_EQ(majority_answer(tie), Answer::Yes);
}

TEST(Baselines, RandomGuesserClosedForm) {
  std::vector<GameRecord> games{game(1, 1, GameStatus::Success), game(2, 1, GameStatus::Success)};
  games[1].objects.push_back(testing::object(9, 4, {10, 60, 30, 30}));
  EXPECT_NEAR(random_guesser_expected_error(games), 1.0 - (1.0 / 3 + 1.0 / 4) / 2, 1e-15);
  const double p1 = 2.0 / 3, p2 = 3.0 / 4;
  EXPECT_NEAR(random_guesser_error_stddev(games), std::sqrt(p1 * (1 - p1) + p2 * (1 - p2)) / 2, 1e-15);

  auto single = game(3, 1, GameStatus::Success);
  single.objects.resize(1);
  const std::vector<GameRecord> one{single};
  EXPECT_EQ(random_guesser_expected_error(one), 0.0);
  EXPECT_EQ(random_guesser_errors(one, 5).wrong, 0u);

  const auto corpus = toy::guesser_corpus(3000, 5);
  const auto err = random_guesser_errors(corpus, 11);
  const double mu = random_guesser_expected_error(corpus);
  const double sd = random_guesser_error_stddev(corpus);
  EXPECT_LE(std::abs(err.rate() - mu), 3 * sd);
  EXPECT_EQ(random_guesser_errors(corpus, 11).wrong, err.wrong);
}

}  // namespace
}  // namespace gw::train
