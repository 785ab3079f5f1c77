#include <gtest/gtest.h>

#include <numeric>

#include "beam_oracle.hpp"
#include "gradcheck_suite.hpp"
#include "gw/agents/feature_set.hpp"
#include "gw/core/error.hpp"
#include "roundtrip.hpp"

namespace gw::agents {
namespace {

using testing::tiny_dialogue;
using testing::tiny_scene;
using testing::tiny_vocab;

TEST(FeatureSet, ParseAndPrint) {
  const FeatureSet qcs = FeatureSet::parse("question,category,spatial");
  EXPECT_EQ(qcs, (FeatureSet{Feature::Question, Feature::Category, Feature::Spatial}));
  EXPECT_EQ(FeatureSet::parse("Question + Category + Spatial"), qcs);
  EXPECT_EQ(FeatureSet::parse("question+spatial+category"), qcs);
  EXPECT_EQ(qcs.to_string(), "question,category,spatial");
  EXPECT_EQ(qcs.label(), "Question + Category + Spatial");
  EXPECT_THROW(FeatureSet::parse(""), ConfigError);
  EXPECT_THROW(FeatureSet::parse("question,colour"), ConfigError);
}

TEST(FeatureSet, ThirtyOneCombinations) {
  const auto all = FeatureSet::all_combinations();
  ASSERT_EQ(all.size(), 31u);
  for (std::size_t i = 0; i < all.size(); ++i) {
    EXPECT_EQ(all[i].bits(), i + 1);
    EXPECT_EQ(FeatureSet::parse(all[i].to_string()), all[i]);
    EXPECT_EQ(FeatureSet::parse(all[i].label()), all[i]);
  }
}

TEST(Oracle, EveryFeatureSetGivesADistribution) {
  Rng rng(1);
  const auto scene = tiny_scene(6, rng);
  const std::vector<TokenId> q{7, 8, 10, 13};
  for (FeatureSet fs : FeatureSet::all_combinations()) {
    auto cfg = testing::tiny_oracle_config();
    cfg.features = fs;
    OracleModel m(cfg, tiny_vocab(), 3);
    const auto d = m.distribution(q, scene.objects[0], scene.image);
    double s = 0;
    for (double p : d) {
      EXPECT_GE(p, 0.0);
      s += p;
    }
    EXPECT_NEAR(s, 1.0, 1e-12) << fs.label();
    EXPECT_EQ(m.predict(q, scene.objects[0], scene.image), static_cast<Answer>(argmax(d)));
  }
}

TEST(Oracle, InputSizeFollowsFeatures) {
  auto cfg = testing::tiny_oracle_config();
  cfg.features = FeatureSet{Feature::Spatial};
  EXPECT_EQ(cfg.input_size(), 8u);
  cfg.features = FeatureSet{Feature::Question, Feature::Image};
  EXPECT_EQ(cfg.input_size(), cfg.hidden + cfg.image_dim);
}

TEST(Oracle, RejectsBadInputs) {
  Rng rng(1);
  auto scene = tiny_scene(6, rng);
  OracleModel m(testing::tiny_oracle_config(), tiny_vocab(), 3);
  EXPECT_THROW(m.distribution({}, scene.objects[0], scene.image), ValidationError);
  scene.objects[0].category_id = 99;
  EXPECT_THROW(m.distribution(std::vector<TokenId>{7}, scene.objects[0], scene.image), ValidationError);
  scene.image.features->pop_back();
  EXPECT_THROW(m.distribution(std::vector<TokenId>{7}, scene.objects[1], scene.image), DimensionError);
}

TEST(Oracle, SpatialOnlyIgnoresTheQuestion) {
  Rng rng(1);
  const auto scene = tiny_scene(6, rng);
  auto cfg = testing::tiny_oracle_config();
  cfg.features = FeatureSet{Feature::Spatial, Feature::Category};
  OracleModel m(cfg, tiny_vocab(), 3);
  const std::vector<TokenId> a{7, 8}, b{12, 14, 11};
  EXPECT_EQ(m.distribution(a, scene.objects[2], scene.image), m.distribution(b, scene.objects[2], scene.image));
}

TEST(Argmax, LowestIndexOnTies) {
  EXPECT_EQ(argmax(std::vector<double>{0.2, 0.4, 0.4}), 1u);
  EXPECT_EQ(argmax(std::vector<double>{1, 1, 1}), 0u);
}

class GuesserKinds : public ::testing::TestWithParam<EncoderKind> {};

TEST_P(GuesserKinds, SingleObjectHasProbabilityOne) {
  Rng rng(2);
  const auto scene = tiny_scene(6, rng);
  GuesserModel m(testing::tiny_guesser_config(GetParam(), false), tiny_vocab(), 4);
  const auto d = m.distribution(tiny_dialogue(), std::span(scene.objects).first(1), scene.image);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0], 1.0);
  EXPECT_THROW(m.distribution(tiny_dialogue(), {}, scene.image), ValidationError);
}

TEST_P(GuesserKinds, PermutationEquivariantExactly) {
  Rng rng(3);
  auto scene = tiny_scene(6, rng);
  for (int i = 0; i < 4; ++i) {
    ObjectRef o = scene.objects[static_cast<std::size_t>(i) % 3];
    o.object_id = 10 + i;
    o.category_id = 1 + (i % 4);
    o.bbox.x += 1.5 * i;
    scene.objects.push_back(o);
  }
  GuesserModel m(testing::tiny_guesser_config(GetParam(), true), tiny_vocab(), 5);
  const auto dialogue = tiny_dialogue();
  const auto base = m.distribution(dialogue, scene.objects, scene.image);
  std::vector<std::size_t> perm(scene.objects.size());
  std::iota(perm.begin(), perm.end(), 0);
  for (int t = 0; t < 50; ++t) {
    rng.shuffle(std::span(perm));
    std::vector<ObjectRef> shuffled;
    for (std::size_t i : perm) shuffled.push_back(scene.objects[i]);
    const auto d = m.distribution(dialogue, shuffled, scene.image);
    for (std::size_t i = 0; i < perm.size(); ++i) ASSERT_EQ(d[i], base[perm[i]]);
  }
}

TEST_P(GuesserKinds, DuplicateObjectsScoreEqually) {
  Rng rng(4);
  auto scene = tiny_scene(6, rng);
  ObjectRef dup = scene.objects[1];
  dup.object_id = 77;
  scene.objects.push_back(dup);
  GuesserModel m(testing::tiny_guesser_config(GetParam(), false), tiny_vocab(), 6);
  const auto d = m.distribution(tiny_dialogue(), scene.objects, scene.image);
  EXPECT_EQ(d[1], d[3]);
  EXPECT_NEAR(std::accumulate(d.begin(), d.end(), 0.0), 1.0, 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Encoders, GuesserKinds,
                         ::testing::Values(EncoderKind::LstmFlat, EncoderKind::Hred),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Encoders, FlattenInjectsAnswerTokens) {
  const auto d = tiny_dialogue();
  const auto flat = flatten_dialogue(d);
  const std::vector<TokenId> want{7, 8, 9, 10, 13, data::special::kNo, 12, 13, data::special::kYes,
                                  14, 11, 13, data::special::kNA};
  EXPECT_EQ(flat, want);
  EXPECT_EQ(utterance_tokens(d[1]), (std::vector<TokenId>{12, 13, data::special::kYes}));
  const std::vector<QAPair> qas{{"is it a cat ?", Answer::Yes}};
  const auto enc = encode_dialogue(qas, tiny_vocab());
  ASSERT_EQ(enc.size(), 1u);
  EXPECT_EQ(enc[0].question.size(), 5u);
  EXPECT_EQ(enc[0].answer, Answer::Yes);
  EXPECT_EQ(parse_encoder("hred"), EncoderKind::Hred);
  EXPECT_THROW(parse_encoder("gru"), ConfigError);
}

TEST(Encoders, HredStatesArePrefixConsistent) {
  Rng rng(5);
  ad::ParameterStore store;
  HredEncoder enc(store, "h", tiny_vocab().size(), 4, 4, 5, rng);
  const auto d = tiny_dialogue();
  ad::Graph g;
  const auto full = enc.states(g, d);
  ASSERT_EQ(full.size(), d.size() + 1);
  for (double v : full[0].value().values()) EXPECT_EQ(v, 0.0);
  for (std::size_t j = 0; j <= d.size(); ++j) {
    ad::Graph h;
    const ad::Var prefix = enc.encode(h, std::span(d).first(j));
    EXPECT_EQ(prefix.value(), full[j].value()) << "prefix " << j;
  }
}

TEST(QGen, StepDistributionsSumToOneAndLikelihoodAdds) {
  Rng rng(6);
  const auto scene = tiny_scene(6, rng);
  QGenModel m(testing::tiny_qgen_config(), tiny_vocab(), 7);
  const auto d = tiny_dialogue();
  for (std::size_t j = 0; j < d.size(); ++j) {
    const auto hist = std::span(d).first(j);
    const auto steps = m.step_distributions(hist, scene.image, d[j].question);
    ASSERT_EQ(steps.size(), d[j].question.size() + 1);
    double ll = 0;
    for (std::size_t t = 0; t < steps.size(); ++t) {
      EXPECT_NEAR(std::accumulate(steps[t].begin(), steps[t].end(), 0.0), 1.0, 1e-9);
      const TokenId target = t < d[j].question.size() ? d[j].question[t] : data::special::kStop;
      ll += std::log(steps[t][static_cast<std::size_t>(target)]);
    }
    EXPECT_NEAR(m.log_likelihood(hist, scene.image, d[j].question), ll, 1e-9);
  }
  double total = 0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    total -= m.log_likelihood(std::span(d).first(j), scene.image, d[j].question);
  }
  ad::Graph g;
  EXPECT_NEAR(m.dialogue_loss(g, d, scene.image).item(), total, 1e-9);
  EXPECT_THROW(m.dialogue_loss(g, {}, scene.image), ValidationError);
}

TEST(QGen, AnswersOnlyConditionLaterQuestions) {
  Rng rng(7);
  const auto scene = tiny_scene(6, rng);
  QGenModel m(testing::tiny_qgen_config(), tiny_vocab(), 8);
  auto a = tiny_dialogue();
  auto b = a;
  b.back().answer = Answer::Yes;  // changes nothing that is conditioned on
  ad::Graph g1, g2;
  EXPECT_EQ(m.dialogue_loss(g1, a, scene.image).item(), m.dialogue_loss(g2, b, scene.image).item());
  b[0].answer = Answer::Yes;
  ad::Graph g3;
  EXPECT_NE(m.dialogue_loss(g1, a, scene.image).item(), m.dialogue_loss(g3, b, scene.image).item());
}

TEST(QGen, GenerationAvoidsBannedTokens) {
  Rng rng(8);
  const auto scene = tiny_scene(6, rng);
  QGenModel m(testing::tiny_qgen_config(), tiny_vocab(), 9);
  const auto banned = qgen_banned_tokens();
  const auto d = tiny_dialogue();
  for (std::size_t j = 0; j <= d.size(); ++j) {
    const auto q = m.generate(std::span(d).first(j), scene.image);
    EXPECT_LE(q.size(), m.config().max_len);
    for (TokenId t : q) {
      EXPECT_EQ(std::find(banned.begin(), banned.end(), t), banned.end());
      EXPECT_NE(t, data::special::kStop);
    }
  }
}

TEST(Beam, WidthOneEqualsGreedyOnHashModel) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    testing::HashStepModel model(6, s);
    BeamConfig cfg;
    cfg.width = 1;
    cfg.max_len = 8;
    cfg.start = 0;
    cfg.stop = 1;
    cfg.banned = {0};
    const auto init = testing::hash_state(s * 31 + 7);
    const auto b = beam_search(model, init, cfg);
    const auto g = greedy_decode(model, init, cfg);
    EXPECT_EQ(b.tokens, g.tokens) << "seed " << s;
    EXPECT_EQ(b.log_prob, g.log_prob);
  }
}

TEST(Beam, WidthOneEqualsGreedyOnQGen) {
  QGenModel m(testing::tiny_qgen_config(), tiny_vocab(), 10);
  QGenModel::Stepper stepper(m);
  Rng rng(9);
  BeamConfig cfg;
  cfg.width = 1;
  cfg.max_len = 6;
  cfg.banned = qgen_banned_tokens();
  for (int i = 0; i < 30; ++i) {
    DecoderState init{std::vector<double>(5), std::vector<double>(5)};
    for (double& v : init.h) v = rng.uniform(-1, 1);
    for (double& v : init.c) v = rng.uniform(-2, 2);
    EXPECT_EQ(beam_search(stepper, init, cfg).tokens, greedy_decode(stepper, init, cfg).tokens);
  }
}

TEST(Beam, ExhaustiveWidthMatchesBruteForce) {
  for (std::size_t v : {3u, 4u, 5u}) {
    for (std::size_t len : {1u, 2u, 3u}) {
      for (std::uint64_t s = 0; s < 20; ++s) {
        testing::HashStepModel model(v, s * 1000 + v * 10 + len);
        BeamConfig cfg;
        cfg.max_len = len;
        cfg.width = static_cast<std::size_t>(std::pow(v, len));
        cfg.start = 0;
        cfg.stop = 1;
        cfg.banned = {0};
        const auto init = testing::hash_state(s);
        const auto want = testing::brute_force_best(model, init, cfg);
        const auto got = beam_search(model, init, cfg);
        ASSERT_EQ(got.tokens, want.tokens) << "v=" << v << " len=" << len << " seed=" << s;
        EXPECT_EQ(got.log_prob, want.log_prob);
      }
    }
  }
}

// Two tokens with equal probability: ties resolve towards the lowest id.
class FlatModel : public StepModel {
 public:
  std::size_t vocab_size() const override { return 4; }
  void step(const DecoderState& s, TokenId, DecoderState& next, std::vector<double>& lp) const override {
    next = s;
    lp = {std::log(0.05), std::log(0.05), std::log(0.45), std::log(0.45)};
  }
};

TEST(Beam, TiesBreakByLowestTokenAndLexicographicOrder) {
  FlatModel m;
  BeamConfig cfg;
  cfg.start = 0;
  cfg.stop = 1;
  cfg.max_len = 3;
  cfg.banned = {0};
  for (std::size_t w : {1u, 2u, 5u, 27u}) {
    cfg.width = w;
    const auto h = beam_search(m, {}, cfg);
    EXPECT_EQ(h.tokens, (std::vector<TokenId>{2, 2, 2, 1})) << "width " << w;
    EXPECT_TRUE(h.finished);
  }
  EXPECT_EQ(greedy_decode(m, {}, cfg).tokens, (std::vector<TokenId>{2, 2, 2, 1}));
  cfg.width = 0;
  EXPECT_THROW(beam_search(m, {}, cfg), ConfigError);
}

TEST(Beam, ScoresNeverIncreaseAlongAPrefix) {
  testing::HashStepModel model(5, 42);
  BeamConfig cfg;
  cfg.start = 0;
  cfg.stop = 1;
  cfg.banned = {0};
  cfg.width = 4;
  cfg.max_len = 6;
  const auto h = beam_search(model, testing::hash_state(3), cfg);
  // Replay the prefix and check the running score.
  DecoderState state = testing::hash_state(3), next;
  std::vector<double> lp;
  double score = 0, prev = 0;
  TokenId last = cfg.start;
  for (std::size_t i = 0; i < h.tokens.size(); ++i) {
    if (i == cfg.max_len) break;  // forced STOP carries no score
    model.step(state, last, next, lp);
    score += lp[static_cast<std::size_t>(h.tokens[i])];
    EXPECT_LE(score, prev);
    prev = score;
    state = next;
    last = h.tokens[i];
  }
  EXPECT_DOUBLE_EQ(score, h.log_prob);
  EXPECT_EQ(h.tokens.back(), cfg.stop);
}

TEST(Models, GradientsMatchFiniteDifferences) {
  for (const auto& c : testing::model_gradchecks(11)) {
    EXPECT_LE(c.result.max_rel_error, 1e-4)
        << c.name << " worst " << c.result.worst_parameter << "[" << c.result.worst_index
        << "] analytic " << c.result.worst_analytic << " numeric " << c.result.worst_numeric;
  }
}

TEST(Models, CheckpointRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "gw-test-agents";
  for (const auto& r : testing::checkpoint_roundtrips(dir, 12)) {
    EXPECT_LE(r.max_abs_diff, 1e-5) << r.kind;
  }
}

TEST(Models, CheckpointKindsAreChecked) {
  OracleModel o(testing::tiny_oracle_config(), tiny_vocab(), 1);
  EXPECT_THROW(GuesserModel::from_checkpoint(o.to_checkpoint()), ConfigError);
  EXPECT_THROW(QGenModel::from_checkpoint(o.to_checkpoint()), ConfigError);
  const auto back = OracleModel::from_checkpoint(o.to_checkpoint());
  EXPECT_EQ(back.vocab(), o.vocab());
  EXPECT_EQ(back.config().features, o.config().features);
}

TEST(Models, SameSeedSameInitialization) {
  QGenModel a(testing::tiny_qgen_config(), tiny_vocab(), 5);
  QGenModel b(testing::tiny_qgen_config(), tiny_vocab(), 5);
  QGenModel c(testing::tiny_qgen_config(), tiny_vocab(), 6);
  EXPECT_EQ(a.parameters().snapshot(), b.parameters().snapshot());
  EXPECT_NE(a.parameters().snapshot(), c.parameters().snapshot());
}

}  // namespace
}  // namespace gw::agents
