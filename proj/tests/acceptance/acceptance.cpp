// Acceptance runner: one PASS, FAIL or SKIP line per criterion.
//
// Criteria that need the public corpus read GW_OFFICIAL_DIR, which must hold
// guesswhat.train.jsonl.gz, guesswhat.valid.jsonl.gz and
// guesswhat.test.jsonl.gz.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "beam_oracle.hpp"
#include "gradcheck_suite.hpp"
#include "roundtrip.hpp"
#include "spatial_props.hpp"
#include "gw/agents/beam_search.hpp"
#include "gw/core/error.hpp"
#include "gw/core/geometry.hpp"
#include "gw/data/official.hpp"
#include "gw/data/records.hpp"
#include "gw/data/vocabulary.hpp"
#include "gw/game/agents.hpp"
#include "gw/game/self_play.hpp"
#include "gw/stats/stats.hpp"
#include "gw/toy/toy_world.hpp"
#include "gw/train/tasks.hpp"
#include "gw/train/trainer.hpp"

namespace fs = std::filesystem;
using namespace gw;

namespace {

enum class Verdict { Pass, Fail, Skip };

struct Outcome {
  Verdict verdict = Verdict::Fail;
  std::string detail;
};

Outcome pass_if(bool ok, std::string detail) {
  return {ok ? Verdict::Pass : Verdict::Fail, std::move(detail)};
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---- official corpus ---------------------------------------------------------

struct Official {
  std::vector<GameRecord> train, valid, test;
};

std::optional<Official> load_official() {
  const char* dir = std::getenv("GW_OFFICIAL_DIR");
  if (!dir || !*dir) return std::nullopt;
  const fs::path d(dir);
  for (const char* part : {"train", "valid", "test"}) {
    if (!fs::exists(d / ("guesswhat." + std::string(part) + ".jsonl.gz"))) return std::nullopt;
  }
  Official o;
  o.train = data::load_official_games(d / "guesswhat.train.jsonl.gz");
  o.valid = data::load_official_games(d / "guesswhat.valid.jsonl.gz");
  o.test = data::load_official_games(d / "guesswhat.test.jsonl.gz");
  return o;
}

// ---- criteria ------------------------------------------------------------------

Outcome gradients() {
  const auto t0 = Clock::now();
  double worst = 0;
  std::string worst_name;
  std::size_t cases = 0;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto all = checks::op_gradchecks(seed);
    auto models = checks::model_gradchecks(seed);
    all.insert(all.end(), models.begin(), models.end());
    for (const auto& c : all) {
      ++cases;
      if (c.result.max_rel_error >= worst) {
        worst = c.result.max_rel_error;
        worst_name = c.name;
      }
    }
  }
  const double secs = seconds_since(t0);
  return pass_if(worst <= 1e-4 && secs < 120.0,
                 fmt("%zu checks, worst rel error %.2e (%s), %.1fs", cases, worst, worst_name.c_str(), secs));
}

Outcome spatial() {
  struct Example {
    BBox box;
    int w, h;
    SpatialVec8 want;
  };
  const Example examples[] = {
      {{0, 0, 200, 100}, 200, 100, {-1, -1, 1, 1, 0, 0, 2, 2}},
      {{50, 25, 100, 50}, 200, 100, {-0.5, -0.5, 0.5, 0.5, 0, 0, 1, 1}},
      {{0, 0, 50, 50}, 100, 100, {-1, -1, 0, 0, -0.5, -0.5, 1, 1}},
  };
  for (const auto& e : examples) {
    ImageMeta im;
    im.image_id = 1;
    im.width = e.w;
    im.height = e.h;
    if (spatial_features(e.box, im) != e.want) return {Verdict::Fail, "worked example mismatch"};
  }
  Rng rng(2024);
  for (int i = 0; i < 10000; ++i) {
    auto [im, box] = testing::random_box(rng);
    const std::string err = testing::spatial_violation(spatial_features(box, im));
    if (!err.empty()) return {Verdict::Fail, fmt("case %d: %s", i, err.c_str())};
  }
  return {Verdict::Pass, "3 worked examples exact, 10000 random boxes"};
}

Outcome oracle_overfit() {
  const auto t0 = Clock::now();
  const auto games = toy::oracle_corpus(200, 11);
  agents::OracleConfig c;
  c.features = agents::FeatureSet::parse("question,category");
  c.word_dim = 16;
  c.hidden = 16;
  c.category_dim = 8;
  c.mlp_hidden = 32;
  c.num_categories = 9;
  agents::OracleModel m(c, data::Vocabulary::build(games, 1), 5);
  train::OracleTask task(m, games, {});
  train::TrainConfig tc;
  tc.max_epochs = 200;
  tc.batch_size = 16;
  tc.patience = 10;
  tc.adam.lr = 5e-3;
  tc.seed = 5;
  const auto r = train::train(task, tc);
  const double err = train::oracle_errors(m, games).rate();
  const double secs = seconds_since(t0);
  return pass_if(err <= 0.05 && r.log.size() <= 200 && secs < 300.0,
                 fmt("train error %.3f after %zu epochs (best %zu), %.1fs", err, r.log.size(), r.best_epoch,
                     secs));
}

Outcome guesser_learnability() {
  const auto t0 = Clock::now();
  const auto games = toy::guesser_corpus(300, 12);
  agents::GuesserConfig c;
  c.encoder = agents::EncoderKind::LstmFlat;
  c.word_dim = 16;
  c.hidden = 32;
  c.category_dim = 8;
  c.object_hidden = 32;
  c.num_categories = 9;
  agents::GuesserModel m(c, data::Vocabulary::build(games, 1), 6);
  train::GuesserTask task(m, games, {});
  train::TrainConfig tc;
  tc.max_epochs = 200;
  tc.batch_size = 16;
  tc.patience = 10;
  tc.adam.lr = 5e-3;
  tc.seed = 6;
  const auto r = train::train(task, tc);
  const double err = train::guesser_errors(m, games).rate();

  // Permuting the candidates permutes the scores and nothing else.
  Rng rng(77);
  const auto& examples = task.examples(train::Part::Train);
  std::size_t broken = 0;
  for (std::size_t i = 0; i < 1000; ++i) {
    const auto& ex = examples[i % examples.size()];
    const auto& objects = ex.game->objects;
    const auto base = m.distribution(ex.dialogue, objects, ex.game->image);
    std::vector<std::size_t> perm(objects.size());
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(std::span(perm));
    std::vector<ObjectRef> shuffled;
    for (std::size_t k : perm) shuffled.push_back(objects[k]);
    const auto got = m.distribution(ex.dialogue, shuffled, ex.game->image);
    for (std::size_t k = 0; k < perm.size(); ++k) {
      if (got[k] != base[perm[k]]) {
        ++broken;
        break;
      }
    }
  }
  return pass_if(err <= 0.10 && broken == 0,
                 fmt("train error %.3f after %zu epochs, %zu/1000 permutations not exact, %.1fs", err,
                     r.log.size(), broken, seconds_since(t0)));
}

Outcome beam() {
  std::size_t mismatches = 0, cases = 0;
  agents::BeamConfig greedy_cfg;
  greedy_cfg.width = 1;
  greedy_cfg.max_len = 10;
  greedy_cfg.banned = {data::special::kPad, data::special::kStart, data::special::kYes,
                       data::special::kNo, data::special::kNA};
  Rng rng(404);
  agents::QGenModel qgen(checks::tiny_qgen_config(), checks::tiny_vocab(), 8);
  checks::randomize(qgen.parameters(), rng);
  const agents::QGenModel::Stepper stepper(qgen);
  const auto vocab = static_cast<data::TokenId>(qgen.vocab().size());
  for (int s = 0; s < 100; ++s) {
    const auto scene = checks::tiny_scene(qgen.config().image_dim, rng);
    std::vector<agents::EncodedQA> history(rng.below(4));
    for (auto& qa : history) {
      qa.question.resize(1 + rng.below(5));
      for (auto& t : qa.question) {
        t = data::special::kCount + static_cast<data::TokenId>(rng.below(vocab - data::special::kCount));
      }
      qa.answer = static_cast<Answer>(rng.below(3));
    }
    const auto init = qgen.decoder_state(history, scene.image);
    ++cases;
    const auto beam1 = agents::beam_search(stepper, init, greedy_cfg);
    if (beam1.tokens != agents::greedy_decode(stepper, init, greedy_cfg).tokens) ++mismatches;
  }
  const std::size_t greedy_mismatches = mismatches;
  for (std::size_t v : {2u, 3u, 4u, 5u}) {
    for (std::size_t len : {1u, 2u, 3u}) {
      for (std::uint64_t s = 0; s < 25; ++s) {
        testing::HashStepModel model(v, 9000 + s * 100 + v * 10 + len);
        agents::BeamConfig cfg;
        cfg.max_len = len;
        cfg.width = static_cast<std::size_t>(std::pow(v, len));
        cfg.start = 0;
        cfg.stop = 1;
        cfg.banned = {0};
        const auto init = testing::hash_state(s + 1);
        ++cases;
        const auto want = testing::brute_force_best(model, init, cfg);
        const auto got = agents::beam_search(model, init, cfg);
        if (got.tokens != want.tokens || got.log_prob != want.log_prob) ++mismatches;
      }
    }
  }
  return pass_if(mismatches == 0, fmt("%zu cases (100 decoder states, the rest brute force), "
                                      "%zu width-1 vs greedy mismatches, %zu brute-force mismatches",
                                      cases, greedy_mismatches, mismatches - greedy_mismatches));
}

Outcome self_play() {
  const auto t0 = Clock::now();
  const auto train_games = toy::self_play_corpus(300, 21);
  const auto play_games = toy::self_play_corpus(500, 22);

  agents::OracleConfig oc;
  oc.features = agents::FeatureSet::parse("question,category,spatial");
  oc.word_dim = 16;
  oc.hidden = 16;
  oc.category_dim = 8;
  oc.mlp_hidden = 32;
  oc.num_categories = 9;
  auto oracle = std::make_shared<agents::OracleModel>(oc, data::Vocabulary::build(train_games, 1), 31);
  train::TrainConfig tc;
  tc.max_epochs = 40;
  tc.batch_size = 16;
  tc.patience = 5;
  tc.adam.lr = 5e-3;
  tc.seed = 31;
  {
    train::OracleTask task(*oracle, train_games, {});
    train::train(task, tc);
  }

  agents::GuesserConfig gc;
  gc.word_dim = 16;
  gc.hidden = 32;
  gc.category_dim = 8;
  gc.object_hidden = 32;
  gc.num_categories = 9;
  auto guesser = std::make_shared<agents::GuesserModel>(gc, data::Vocabulary::build(train_games, 1), 32);
  {
    train::GuesserTask task(*guesser, train_games, {});
    tc.seed = 32;
    train::train(task, tc);
  }

  agents::QGenConfig qc;
  qc.word_dim = 16;
  qc.utterance_hidden = 16;
  qc.context_hidden = 16;
  qc.decoder_hidden = 32;
  qc.use_image = false;
  qc.max_len = 6;
  qc.beam_width = 3;
  auto qgen = std::make_shared<agents::QGenModel>(qc, data::Vocabulary::build(train_games, 1), 33);
  {
    train::QGenTask task(*qgen, train_games, {});
    tc.seed = 33;
    tc.max_epochs = 30;
    train::train(task, tc);
  }

  const game::QGenAsker asker(qgen);
  const game::OracleAnswerer answerer(oracle);
  const game::ModelGuesser guess(guesser);
  const auto r = game::eval_pipeline(play_games, &asker, &answerer, guess, game::DialogueSource::Generated);

  std::size_t bad_len = 0, invalid = 0, not_round_trip = 0;
  for (const auto& rec : r.records) {
    if (rec.qas.size() != 5) ++bad_len;
    try {
      validate(rec);
    } catch (const Error&) {
      ++invalid;
    }
    std::istringstream in(data::to_json(rec).dump() + "\n");
    const auto back = data::parse_games(in);
    if (back.size() != 1 || back[0] != rec) ++not_round_trip;
  }
  const double success = 1.0 - r.errors.rate();
  const double baseline = 1.0 - train::random_guesser_expected_error(play_games);
  const bool ok = r.records.size() == 500 && bad_len == 0 && invalid == 0 && not_round_trip == 0 &&
                  success > baseline;
  return pass_if(ok, fmt("%zu games, success %.3f vs random %.3f; %zu wrong length, %zu invalid, "
                         "%zu not round-tripping, %.1fs",
                         r.records.size(), success, baseline, bad_len, invalid, not_round_trip,
                         seconds_since(t0)));
}

Outcome random_guesser(const std::optional<Official>& official) {
  const auto check = [](std::span<const GameRecord> games, std::uint64_t seed, double& measured,
                        double& expected, double& sigma) {
    measured = train::random_guesser_errors(games, seed).rate();
    expected = train::random_guesser_expected_error(games);
    sigma = train::random_guesser_error_stddev(games);
    return std::abs(measured - expected) <= 3.0 * sigma;
  };
  double m = 0, e = 0, s = 0;
  bool ok = true;
  std::string detail;
  for (auto [n, seed] : {std::pair<std::size_t, std::uint64_t>{2000, 1}, {5000, 2}}) {
    const auto games = toy::guesser_corpus(n, seed);
    const bool this_ok = check(games, seed + 10, m, e, s);
    ok = ok && this_ok;
    detail += fmt("toy n=%zu measured %.4f expected %.4f (3 sigma %.4f); ", n, m, e, 3 * s);
  }
  if (!official) return pass_if(ok, detail + "official test split SKIP");
  const bool close = check(official->test, 3, m, e, s);
  const bool table = std::abs(100.0 * e - 82.9) <= 1.0;
  return pass_if(ok && close && table, detail + fmt("official test measured %.2f%% expected %.2f%% vs 82.9%%",
                                                    100.0 * m, 100.0 * e));
}

Outcome stats_reproduction(const std::optional<Official>& official) {
  if (!official) return {Verdict::Skip, "GW_OFFICIAL_DIR not set"};
  std::vector<GameRecord> all = official->train;
  all.insert(all.end(), official->valid.begin(), official->valid.end());
  all.insert(all.end(), official->test.begin(), official->test.end());
  const auto r = stats::corpus_stats(all, stats::Subset::Full);
  const auto within = [](double got, double want, double tol) { return std::abs(got - want) <= tol; };
  const bool exact = r.n_dialogues == 155280 && r.n_questions == 821889 && r.n_images == 66537 &&
                     r.n_objects == 134073;
  const bool vocab = within(static_cast<double>(r.vocab_size), 11465, 0.02 * 11465) &&
                     within(static_cast<double>(r.vocab_size_min3), 5444, 0.02 * 5444);
  const auto& f = *r.answer_fractions;
  const bool answers = within(100 * f.no, 52.2, 0.3) && within(100 * f.yes, 45.6, 0.3) &&
                       within(100 * f.na, 2.2, 0.3);
  const auto b = stats::success_breakdowns(all);
  const double k3 = b.by_object_count.count(3) ? b.by_object_count.at(3) : -1;
  const double k20 = b.by_object_count.count(20) ? b.by_object_count.at(20) : -1;
  const bool curve = within(k3, 0.95, 0.03) && within(k20, 0.70, 0.03);
  return pass_if(exact && vocab && answers && curve,
                 fmt("dialogues %zu questions %zu images %zu objects %zu vocab %zu/%zu; "
                     "no/yes/na %.1f/%.1f/%.1f; success K=3 %.3f K=20 %.3f",
                     r.n_dialogues, r.n_questions, r.n_images, r.n_objects, r.vocab_size, r.vocab_size_min3,
                     100 * f.no, 100 * f.yes, 100 * f.na, k3, k20));
}

Outcome checkpoint_roundtrip() {
  const fs::path dir = fs::temp_directory_path() / "gw-acceptance-ckpt";
  double worst = 0;
  std::string detail;
  const auto results = testing::checkpoint_roundtrips(dir, 99);
  for (const auto& r : results) {
    worst = std::max(worst, r.max_abs_diff);
    detail += fmt("%s %.2e; ", r.kind.c_str(), r.max_abs_diff);
  }
  fs::remove_all(dir);
  return pass_if(results.size() >= 3 && worst <= 1e-5, detail + fmt("worst %.2e", worst));
}

Outcome dominant_class(const std::optional<Official>& official) {
  if (!official) return {Verdict::Skip, "GW_OFFICIAL_DIR not set"};
  const auto e = train::constant_answer_errors(official->test, Answer::No);
  const double pct = 100.0 * e.rate();
  return pass_if(std::abs(pct - 50.9) <= 0.5,
                 fmt("constant No on %zu test questions: %.2f%% error vs 50.9%%", e.total, pct));
}

}  // namespace

int main() {
  std::optional<Official> official;
  std::string official_note;
  try {
    official = load_official();
  } catch (const Error& e) {
    official_note = std::string(" (official corpus unreadable: ") + e.what() + ")";
  }

  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "gradient correctness", gradients},
      {2, "spatial features", spatial},
      {3, "oracle overfit", oracle_overfit},
      {4, "guesser learnability", guesser_learnability},
      {5, "beam search", beam},
      {6, "self-play end to end", self_play},
      {7, "random guesser", [&] { return random_guesser(official); }},
      {8, "stats reproduction", [&] { return stats_reproduction(official); }},
      {9, "checkpoint round trip", checkpoint_roundtrip},
      {10, "dominant class oracle", [&] { return dominant_class(official); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {Verdict::Fail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.verdict == Verdict::Pass ? "PASS" : o.verdict == Verdict::Fail ? "FAIL" : "SKIP";
    if (o.verdict == Verdict::Skip) o.detail += official_note;
    std::printf("%s %2d %s: %s\n", tag, c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
    if (o.verdict == Verdict::Fail) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
