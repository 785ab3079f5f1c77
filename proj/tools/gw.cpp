// gw: command line entry point.
//
// Every subcommand except serve reads options in the order defaults, then a
// JSON --config file (keys are option names), then flags, then GW_<NAME>
// environment variables. serve applies the same order to its own keys.

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gw/ad/checkpoint.hpp"
#include "gw/agents/feature_set.hpp"
#include "gw/agents/guesser.hpp"
#include "gw/agents/model_checks.hpp"
#include "gw/agents/oracle.hpp"
#include "gw/agents/qgen.hpp"
#include "gw/core/error.hpp"
#include "gw/core/rng.hpp"
#include "gw/data/features.hpp"
#include "gw/data/official.hpp"
#include "gw/data/records.hpp"
#include "gw/data/split.hpp"
#include "gw/data/vocabulary.hpp"
#include "gw/game/agents.hpp"
#include "gw/game/self_play.hpp"
#include "gw/service/config.hpp"
#include "gw/service/http_server.hpp"
#include "gw/service/play_service.hpp"
#include "gw/stats/stats.hpp"
#include "gw/train/tasks.hpp"
#include "gw/train/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace gw::cli {
namespace {

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& m) : Error("usage", m) {}
};

std::string env_name(const std::string& option) {
  std::string out = "GW_";
  for (char c : option) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

void emit(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump() << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump(2) << "\n";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << text;
}

// ---- corpus loading ------------------------------------------------------

struct CorpusFlags {
  bool official = false;
  std::string image_features;
  std::string crop_features;
  std::size_t feature_dim = kDefaultImageFeatureDim;

  void add(CLI::App* app) {
    app->add_flag("--official", official, "Inputs use the public download layout");
    app->add_option("--image-features", image_features, "Image feature sidecar keyed by image_id");
    app->add_option("--crop-features", crop_features, "Crop feature sidecar keyed by object_id");
    app->add_option("--feature-dim", feature_dim, "Length of every feature vector")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  }

  std::vector<GameRecord> load(const std::string& path) const {
    auto games = official ? data::load_official_games(path) : data::load_games(path);
    std::optional<data::FeatureTable> image, crop;
    if (!image_features.empty()) image = data::read_feature_file(image_features, feature_dim);
    if (!crop_features.empty()) crop = data::read_feature_file(crop_features, feature_dim);
    if (image || crop) data::attach_features(games, image ? &*image : nullptr, crop ? &*crop : nullptr);
    return games;
  }
};

std::vector<GameRecord> keep_subset(std::vector<GameRecord> games, const std::string& subset) {
  const auto which = stats::parse_subset(subset);
  std::erase_if(games, [&](const GameRecord& g) { return !stats::in_subset(g, which); });
  return games;
}

void add_subset(CLI::App* app, std::string& subset, const std::string& help) {
  app->add_option("--subset", subset, help)
      ->capture_default_str()
      ->check(CLI::IsMember({"full", "finished", "success"}));
}

// ---- training flags ------------------------------------------------------

struct TrainFlags {
  std::string train_path;
  std::string valid_path;
  std::string out;
  std::string log;
  std::string manifest;
  int min_count = 3;
  std::string subset = "full";
  train::TrainConfig config;
  CorpusFlags corpus;

  void add(CLI::App* app) {
    app->add_option("--train", train_path, "Training games")->required();
    add_subset(app, subset, "Games used from --train and --valid");
    app->add_option("--valid", valid_path, "Validation games used for early stopping");
    app->add_option("--out", out, "Checkpoint to write")->required();
    app->add_option("--log", log, "Metric log (default <out>.metrics.tsv)");
    app->add_option("--manifest", manifest, "Run manifest (default <out>.manifest.json)");
    app->add_option("--min-count", min_count, "Vocabulary threshold")->capture_default_str();
    app->add_option("--epochs", config.max_epochs, "Maximum epochs")->capture_default_str();
    app->add_option("--batch", config.batch_size, "Mini-batch size")->capture_default_str();
    app->add_option("--patience", config.patience, "Epochs without improvement before stopping")
        ->capture_default_str();
    app->add_option("--lr", config.adam.lr, "Adam learning rate")->capture_default_str();
    corpus.add(app);
  }

  struct Data {
    std::vector<GameRecord> train, valid;
  };

  Data load() const {
    Data d{keep_subset(corpus.load(train_path), subset), {}};
    if (!valid_path.empty()) d.valid = keep_subset(corpus.load(valid_path), subset);
    return d;
  }

  void finish(const train::TrainResult& r, const std::string& kind, const json& model_config) const {
    const std::string log_path = log.empty() ? out + ".metrics.tsv" : log;
    const std::string manifest_path = manifest.empty() ? out + ".manifest.json" : manifest;
    std::ostringstream tsv;
    train::write_metric_log(r, tsv);
    write_text(log_path, tsv.str());
    const json m = train::run_manifest(r, config, kind, out, model_config);
    write_text(manifest_path, m.dump(2) + "\n");
    std::cout << json{{"kind", kind},
                      {"checkpoint", out},
                      {"best_epoch", r.best_epoch},
                      {"best_error", r.best_error},
                      {"epochs", r.log.size()},
                      {"stopped_early", r.stopped_early}}
                     .dump()
              << "\n";
  }
};

CategoryId max_category(std::span<const GameRecord> a, std::span<const GameRecord> b) {
  CategoryId m = 0;
  for (auto games : {a, b}) {
    for (const auto& g : games) {
      for (const auto& o : g.objects) m = std::max(m, o.category_id);
    }
  }
  return m;
}

// ---- subcommands ----------------------------------------------------------

struct Stats {
  std::string input;
  std::string subset = "all";
  std::string words = "questions";
  std::string format = "json";
  std::string output;
  std::size_t top_words = 0;
  bool breakdowns = false;
  std::uint64_t seed = 0;
  CorpusFlags corpus;

  void add(CLI::App* app) {
    app->add_option("--input", input, "Games file (.jsonl or .jsonl.gz)")->required();
    app->add_option("--subset", subset, "full, finished, success or all")
        ->capture_default_str()
        ->check(CLI::IsMember({"full", "finished", "success", "all"}));
    app->add_option("--words", words, "Word count mode")
        ->capture_default_str()
        ->check(CLI::IsMember({"questions", "questions+answers"}));
    app->add_option("--format", format, "json or tsv (tsv needs --subset all)")
        ->capture_default_str()
        ->check(CLI::IsMember({"json", "tsv"}));
    app->add_option("--output", output, "Write the report here instead of stdout");
    app->add_option("--top-words", top_words, "Add word statistics for the top N tokens");
    app->add_flag("--breakdowns", breakdowns, "Add success-rate breakdowns");
    app->add_option("--seed", seed, "Unused; accepted for uniformity")->capture_default_str();
    corpus.add(app);
  }

  int run() const {
    const auto games = corpus.load(input);
    const auto mode = words == "questions" ? stats::WordCount::QuestionsOnly
                                           : stats::WordCount::QuestionsAndAnswers;
    if (format == "tsv") {
      if (subset != "all") throw UsageError("--format tsv prints every subset; drop --subset");
      const std::string t = stats::table1_tsv(games, mode);
      if (output.empty()) {
        std::cout << t;
      } else {
        write_text(output, t);
      }
      return 0;
    }
    json j;
    const auto which = subset == "all" ? stats::Subset::Full : stats::parse_subset(subset);
    if (subset == "all") {
      j = stats::table1_json(games, mode);
    } else {
      j = stats::to_json(stats::corpus_stats(games, which, mode));
    }
    if (top_words > 0) j["words"] = stats::to_json(stats::word_stats(games, which, top_words));
    if (breakdowns) j["breakdowns"] = stats::to_json(stats::success_breakdowns(games));
    emit(j, output);
    return 0;
  }
};

struct SplitCmd {
  std::string input;
  std::string out_dir;
  data::SplitRatios ratios;
  std::uint64_t seed = 0;
  CorpusFlags corpus;

  void add(CLI::App* app) {
    app->add_option("--input", input, "Games file")->required();
    app->add_option("--out-dir", out_dir, "Directory for train/valid/test.jsonl")->required();
    app->add_option("--train-ratio", ratios.train, "Share of images in train")->capture_default_str();
    app->add_option("--valid-ratio", ratios.valid, "Share of images in valid")->capture_default_str();
    app->add_option("--test-ratio", ratios.test, "Share of images in test")->capture_default_str();
    app->add_option("--seed", seed, "Shuffle seed")->capture_default_str();
    corpus.add(app);
  }

  int run() const {
    const auto games = corpus.load(input);
    const auto assignment = data::split_by_image(games, ratios, seed);
    fs::create_directories(out_dir);
    json summary{{"seed", seed}};
    for (auto s : {data::Split::Train, data::Split::Valid, data::Split::Test}) {
      const auto part = assignment.select(games, s);
      const fs::path path = fs::path(out_dir) / (std::string(data::to_string(s)) + ".jsonl");
      data::save_games(part, path);
      summary[std::string(data::to_string(s))] = {
          {"games", part.size()},
          {"images", assignment.counts()[static_cast<std::size_t>(s)]},
          {"path", path.string()}};
    }
    std::cout << summary.dump() << "\n";
    return 0;
  }
};

struct TrainOracle {
  TrainFlags t;
  std::string features = "question,category,spatial";
  agents::OracleConfig model;

  void add(CLI::App* app) {
    t.add(app);
    app->add_option("--seed", t.config.seed, "Initialization and shuffle seed")->capture_default_str();
    app->add_option("--features", features, "Comma separated: question,image,crop,spatial,category")
        ->capture_default_str();
    app->add_option("--word-dim", model.word_dim)->capture_default_str();
    app->add_option("--hidden", model.hidden, "Question LSTM size")->capture_default_str();
    app->add_option("--category-dim", model.category_dim)->capture_default_str();
    app->add_option("--mlp-hidden", model.mlp_hidden)->capture_default_str();
    app->add_option("--num-categories", model.num_categories,
                    "Category table size (raised to fit the data)")
        ->capture_default_str();
  }

  int run() {
    model.features = agents::FeatureSet::parse(features);
    model.image_dim = t.corpus.feature_dim;
    train::validate(t.config);
    auto d = t.load();
    model.num_categories = std::max<std::size_t>(model.num_categories,
                                                 static_cast<std::size_t>(max_category(d.train, d.valid)) + 1);
    agents::OracleModel m(model, data::Vocabulary::build(d.train, t.min_count), t.config.seed);
    train::OracleTask task(m, d.train, d.valid);
    const auto r = train::train(task, t.config);
    ad::save_checkpoint(t.out, m.to_checkpoint());
    t.finish(r, "oracle", agents::to_json(model));
    return 0;
  }
};

struct TrainGuesser {
  TrainFlags t;
  std::string encoder = "lstm";
  agents::GuesserConfig model;

  void add(CLI::App* app) {
    t.add(app);
    app->add_option("--seed", t.config.seed, "Initialization and shuffle seed")->capture_default_str();
    app->add_option("--encoder", encoder, "lstm or hred")
        ->capture_default_str()
        ->check(CLI::IsMember({"lstm", "hred"}));
    app->add_flag("--use-image,!--no-use-image", model.use_image, "Append image features to the state");
    app->add_option("--word-dim", model.word_dim)->capture_default_str();
    app->add_option("--hidden", model.hidden, "Dialogue state size")->capture_default_str();
    app->add_option("--utterance-hidden", model.utterance_hidden, "HRED utterance size")
        ->capture_default_str();
    app->add_option("--category-dim", model.category_dim)->capture_default_str();
    app->add_option("--object-hidden", model.object_hidden)->capture_default_str();
    app->add_option("--num-categories", model.num_categories,
                    "Category table size (raised to fit the data)")
        ->capture_default_str();
  }

  int run() {
    model.encoder = agents::parse_encoder(encoder);
    model.image_dim = t.corpus.feature_dim;
    train::validate(t.config);
    auto d = t.load();
    model.num_categories = std::max<std::size_t>(model.num_categories,
                                                 static_cast<std::size_t>(max_category(d.train, d.valid)) + 1);
    agents::GuesserModel m(model, data::Vocabulary::build(d.train, t.min_count), t.config.seed);
    train::GuesserTask task(m, d.train, d.valid);
    const auto r = train::train(task, t.config);
    ad::save_checkpoint(t.out, m.to_checkpoint());
    t.finish(r, "guesser", agents::to_json(model));
    return 0;
  }
};

struct TrainQGen {
  TrainFlags t;
  std::string mode = "gt";
  std::string oracle_checkpoint;
  agents::QGenConfig model;

  void add(CLI::App* app) {
    t.add(app);
    app->add_option("--seed", t.config.seed, "Initialization and shuffle seed")->capture_default_str();
    app->add_option("--mode", mode, "gt trains on recorded answers, oracle on oracle answers")
        ->capture_default_str()
        ->check(CLI::IsMember({"gt", "oracle"}));
    app->add_option("--oracle-checkpoint", oracle_checkpoint, "Oracle used by --mode oracle");
    app->add_flag("--use-image,!--no-use-image", model.use_image, "Condition on image features");
    app->add_option("--word-dim", model.word_dim)->capture_default_str();
    app->add_option("--utterance-hidden", model.utterance_hidden)->capture_default_str();
    app->add_option("--context-hidden", model.context_hidden)->capture_default_str();
    app->add_option("--decoder-hidden", model.decoder_hidden)->capture_default_str();
    app->add_option("--max-len", model.max_len, "Generation length limit")->capture_default_str();
    app->add_option("--beam", model.beam_width, "Generation beam width")->capture_default_str();
  }

  void check() const {
    const auto m = train::parse_qgen_mode(mode);
    if (m == train::QGenMode::Oracle && oracle_checkpoint.empty()) {
      throw UsageError("--mode oracle needs --oracle-checkpoint");
    }
    if (m == train::QGenMode::GroundTruth && !oracle_checkpoint.empty()) {
      throw UsageError("--oracle-checkpoint only applies to --mode oracle");
    }
  }

  int run() {
    model.image_dim = t.corpus.feature_dim;
    train::validate(t.config);
    auto d = t.load();
    if (train::parse_qgen_mode(mode) == train::QGenMode::Oracle) {
      const auto oracle = game::load_oracle(oracle_checkpoint);
      d.train = train::oracle_conditioned(d.train, *oracle);
      d.valid = train::oracle_conditioned(d.valid, *oracle);
    }
    agents::QGenModel m(model, data::Vocabulary::build(d.train, t.min_count), t.config.seed);
    train::QGenTask task(m, d.train, d.valid);
    const auto r = train::train(task, t.config);
    ad::save_checkpoint(t.out, m.to_checkpoint());
    json cfg = agents::to_json(model);
    cfg["mode"] = mode;
    t.finish(r, "qgen", cfg);
    return 0;
  }
};

struct PlayerFlags {
  std::string qgen, oracle, guesser;
  std::size_t beam = 0;
  std::size_t max_len = 0;
  std::size_t n_questions = 5;

  void add(CLI::App* app) {
    app->add_option("--qgen", qgen, "Question generator checkpoint");
    app->add_option("--oracle", oracle, "Oracle checkpoint");
    app->add_option("--guesser", guesser, "Guesser checkpoint");
    app->add_option("--beam", beam, "Beam width (0: the checkpoint's)")->capture_default_str();
    app->add_option("--max-len", max_len, "Question length limit (0: the checkpoint's)")
        ->capture_default_str();
    app->add_option("--n-questions", n_questions, "Questions per game")->capture_default_str();
  }

  void require(bool asker, bool answerer) const {
    if (guesser.empty()) throw UsageError("--guesser is required");
    if (asker && qgen.empty()) throw UsageError("--qgen is required");
    if (answerer && oracle.empty()) throw UsageError("--oracle is required");
  }

  std::shared_ptr<game::Asker> make_asker() const {
    auto q = game::load_qgen(qgen);
    return std::make_shared<game::QGenAsker>(q, beam ? beam : q->config().beam_width,
                                             max_len ? max_len : q->config().max_len);
  }
};

json summarize(const game::PipelineResult& r, std::span<const GameRecord> games) {
  const double rnd = train::random_guesser_expected_error(games);
  return {{"games", r.errors.total},
          {"wrong", r.errors.wrong},
          {"error", r.errors.rate()},
          {"success_rate", 1.0 - r.errors.rate()},
          {"random_baseline_success", 1.0 - rnd}};
}

struct Eval {
  std::string model = "oracle";
  std::string input;
  std::string checkpoint;
  std::string train_path;
  std::string source = "generated";
  std::string records;
  std::string subset = "full";
  std::uint64_t seed = 0;
  PlayerFlags players;
  CorpusFlags corpus;

  void add(CLI::App* app) {
    add_subset(app, subset, "Games of --input that are evaluated");
    app->add_option("--model", model, "oracle, guesser, qgen, pipeline, dominant or random")
        ->capture_default_str()
        ->check(CLI::IsMember({"oracle", "guesser", "qgen", "pipeline", "dominant", "random"}));
    app->add_option("--input", input, "Games to evaluate on")->required();
    app->add_option("--checkpoint", checkpoint, "Model checkpoint for oracle, guesser or qgen");
    app->add_option("--train", train_path, "Games the dominant answer is taken from (default --input)");
    app->add_option("--source", source, "Pipeline dialogues: generated or human")
        ->capture_default_str()
        ->check(CLI::IsMember({"generated", "human"}));
    app->add_option("--records", records, "Write the pipeline's games here");
    app->add_option("--seed", seed, "Seed of the random guesser")->capture_default_str();
    players.add(app);
    corpus.add(app);
  }

  void check() const {
    const bool single = model == "oracle" || model == "guesser" || model == "qgen";
    if (single && checkpoint.empty()) throw UsageError("--model " + model + " needs --checkpoint");
    if (!single && !checkpoint.empty()) throw UsageError("--checkpoint only applies to single models");
    if (model == "pipeline") players.require(source == "generated", source == "generated");
  }

  int run() const {
    const auto games = keep_subset(corpus.load(input), subset);
    train::ErrorCount e;
    json out{{"model", model}};
    if (model == "oracle") {
      e = train::oracle_errors(*game::load_oracle(checkpoint), games);
    } else if (model == "guesser") {
      e = train::guesser_errors(*game::load_guesser(checkpoint), games);
    } else if (model == "qgen") {
      const auto ckpt = ad::load_checkpoint(checkpoint);
      ad::require_kind(ckpt, "qgen");
      auto m = agents::QGenModel::from_checkpoint(ckpt);
      train::QGenTask task(m, {}, games);
      e = train::evaluate(task, train::Part::Valid);
    } else if (model == "dominant") {
      const auto source_games = train_path.empty() ? games : keep_subset(corpus.load(train_path), subset);
      const Answer a = train::majority_answer(source_games);
      e = train::constant_answer_errors(games, a);
      out["answer"] = to_string(a);
    } else if (model == "random") {
      e = train::random_guesser_errors(games, seed);
      out["expected_error"] = train::random_guesser_expected_error(games);
      out["stddev"] = train::random_guesser_error_stddev(games);
    } else {
      const bool generated = source == "generated";
      std::shared_ptr<game::Asker> asker;
      std::shared_ptr<game::Answerer> answerer;
      if (generated) {
        asker = players.make_asker();
        answerer = std::make_shared<game::OracleAnswerer>(game::load_oracle(players.oracle));
      }
      const game::ModelGuesser guesser(game::load_guesser(players.guesser));
      const auto r = game::eval_pipeline(games, asker.get(), answerer.get(), guesser,
                                         generated ? game::DialogueSource::Generated
                                                   : game::DialogueSource::Human,
                                         {players.n_questions});
      e = r.errors;
      out["source"] = source;
      if (!records.empty()) data::save_games(r.records, records);
    }
    out["wrong"] = e.wrong;
    out["total"] = e.total;
    out["error"] = e.rate();
    std::cout << out.dump() << "\n";
    return 0;
  }
};

struct SelfPlay {
  std::string input;
  std::size_t n = 500;
  std::string output;
  std::string subset = "full";
  std::uint64_t seed = 0;
  PlayerFlags players;
  CorpusFlags corpus;

  void add(CLI::App* app) {
    app->add_option("--input", input, "Games supplying image, objects and target")->required();
    add_subset(app, subset, "Games of --input that are played");
    app->add_option("--n", n, "Number of games (a seeded sample when fewer than the input)")
        ->capture_default_str();
    app->add_option("--output", output, "Write the generated games here");
    app->add_option("--seed", seed, "Sampling seed")->capture_default_str();
    players.add(app);
    corpus.add(app);
  }

  void check() const { players.require(true, true); }

  int run() const {
    auto all = keep_subset(corpus.load(input), subset);
    std::vector<GameRecord> games;
    if (n >= all.size()) {
      games = std::move(all);
    } else {
      std::vector<std::size_t> idx(all.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      Rng rng(seed);
      rng.shuffle(std::span<std::size_t>(idx));
      idx.resize(n);
      std::sort(idx.begin(), idx.end());
      for (std::size_t i : idx) games.push_back(all[i]);
    }
    const auto asker = players.make_asker();
    const game::OracleAnswerer answerer(game::load_oracle(players.oracle));
    const game::ModelGuesser guesser(game::load_guesser(players.guesser));
    const auto r = game::eval_pipeline(games, asker.get(), &answerer, guesser,
                                       game::DialogueSource::Generated, {players.n_questions});
    if (!output.empty()) data::save_games(r.records, output);
    json s = summarize(r, games);
    if (!output.empty()) s["records"] = output;
    std::cout << s.dump() << "\n";
    return 0;
  }
};

struct Gradcheck {
  std::string suite = "all";
  double tolerance = 1e-4;
  std::uint64_t seed = 1;

  void add(CLI::App* app) {
    app->add_option("--suite", suite, "ops, models or all")
        ->capture_default_str()
        ->check(CLI::IsMember({"ops", "models", "all"}));
    app->add_option("--tolerance", tolerance, "Largest accepted relative error")->capture_default_str();
    app->add_option("--seed", seed, "Seed of the random instances")->capture_default_str();
  }

  int run() const {
    std::vector<checks::GradcheckCase> cases;
    if (suite != "models") cases = checks::op_gradchecks(seed);
    if (suite != "ops") {
      auto m = checks::model_gradchecks(seed);
      cases.insert(cases.end(), m.begin(), m.end());
    }
    double worst = 0;
    std::string worst_name;
    for (const auto& c : cases) {
      std::cout << json{{"case", c.name},
                        {"max_rel_error", c.result.max_rel_error},
                        {"coordinates", c.result.coordinates},
                        {"worst", c.result.worst_parameter}}
                       .dump()
                << "\n";
      if (c.result.max_rel_error >= worst) {
        worst = c.result.max_rel_error;
        worst_name = c.name;
      }
    }
    if (worst > tolerance) {
      throw NumericError(worst_name + " has relative error " + std::to_string(worst));
    }
    return 0;
  }
};

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted = true; }

struct Serve {
  std::string config_file;
  std::string listen, data_dir, corpus_path, oracle, qgen, guesser, static_dir;
  std::optional<std::size_t> n_questions;
  std::optional<long> idle_timeout_s;
  std::uint64_t seed = 0;
  CorpusFlags corpus;
  CLI::App* app = nullptr;

  void add(CLI::App* a) {
    app = a;
    a->add_option("--listen", listen, "host:port");
    a->add_option("--data-dir", data_dir, "Session log directory");
    a->add_option("--corpus", corpus_path, "Games whose images are played");
    a->add_option("--oracle-checkpoint", oracle);
    a->add_option("--qgen-checkpoint", qgen);
    a->add_option("--guesser-checkpoint", guesser);
    a->add_option("--static-dir", static_dir, "Files served under /");
    a->add_option("--n-questions", n_questions, "Questions per game");
    a->add_option("--idle-timeout-s", idle_timeout_s, "Seconds before an idle game is closed");
    a->add_option("--seed", seed, "Unused; session seeds come from requests")->capture_default_str();
    corpus.add(a);
  }

  service::ServiceConfig resolve() const {
    service::ServiceConfig c;
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw IoError("cannot read " + config_file);
      json j;
      try {
        j = json::parse(in);
      } catch (const json::exception& e) {
        throw ConfigError(config_file + ": " + e.what());
      }
      service::merge_config(c, j);
    }
    if (!listen.empty()) service::parse_listen(listen, c.host, c.port);
    if (!data_dir.empty()) c.data_dir = data_dir;
    if (!corpus_path.empty()) c.corpus = corpus_path;
    if (!oracle.empty()) c.oracle_checkpoint = oracle;
    if (!qgen.empty()) c.qgen_checkpoint = qgen;
    if (!guesser.empty()) c.guesser_checkpoint = guesser;
    if (!static_dir.empty()) c.static_dir = static_dir;
    if (n_questions) c.n_questions = *n_questions;
    if (idle_timeout_s) c.idle_timeout = std::chrono::seconds(*idle_timeout_s);
    service::merge_env(c, service::getenv_lookup);
    return c;
  }

  int run() const {
    const auto c = resolve();
    if (c.corpus.empty()) throw UsageError("serve needs a corpus");
    if (c.oracle_checkpoint.empty() || c.qgen_checkpoint.empty() || c.guesser_checkpoint.empty()) {
      throw UsageError("serve needs oracle, qgen and guesser checkpoints");
    }
    const auto games = corpus.load(c.corpus.string());
    service::AgentSet agents;
    agents.asker = std::make_shared<game::QGenAsker>(game::load_qgen(c.qgen_checkpoint.string()));
    agents.answerer =
        std::make_shared<game::OracleAnswerer>(game::load_oracle(c.oracle_checkpoint.string()));
    agents.guesser =
        std::make_shared<game::ModelGuesser>(game::load_guesser(c.guesser_checkpoint.string()));
    service::ServiceOptions opts;
    opts.data_dir = c.data_dir;
    opts.n_questions = c.n_questions;
    opts.idle_timeout = c.idle_timeout;
    service::PlayService svc(games, agents, opts);
    service::HttpServer server(svc, c.static_dir);
    const int port = server.bind(c.host, c.port);
    std::cout << json{{"listening", c.host + ":" + std::to_string(port)},
                      {"sessions", svc.size()}}
                     .dump()
              << std::endl;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::thread watcher([&] {
      while (!g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
      server.stop();
    });
    server.serve();
    g_interrupted = true;
    watcher.join();
    return 0;
  }
};

// ---- option layering -------------------------------------------------------

bool is_flag(const CLI::Option* o) { return o->get_type_size_max() == 0; }

std::string scalar_text(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number() || v.is_boolean()) return v.dump();
  throw ConfigError("config key '" + key + "' must be a string, number or boolean");
}

std::optional<std::string> find_config(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

// Layers config file options before and environment options after the
// command line; the last occurrence of an option wins.
std::vector<std::string> layered_args(CLI::App& app, std::vector<std::string> args) {
  if (args.empty()) return args;
  CLI::App* sub = nullptr;
  try {
    sub = app.get_subcommand(args[0]);
  } catch (const CLI::OptionNotFound&) {
    return args;
  }
  if (sub->get_name() == "serve") return args;

  std::vector<std::string> before, after;
  if (const auto path = find_config(args)) {
    std::ifstream in(*path);
    if (!in) throw IoError("cannot read config file " + *path);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError(*path + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError(*path + ": expected a JSON object");
    for (const auto& [key, value] : j.items()) {
      std::string name = key;
      std::replace(name.begin(), name.end(), '_', '-');
      const CLI::Option* o = sub->get_option_no_throw("--" + name);
      if (!o || name == "config" || name == "help") {
        throw ConfigError("unknown config key '" + key + "' for " + sub->get_name());
      }
      if (is_flag(o) && value.is_boolean()) {
        before.push_back(value.get<bool>() ? "--" + name : "--" + name + "=false");
      } else {
        before.push_back("--" + name + "=" + scalar_text(value, key));
      }
    }
  }
  for (const CLI::Option* o : sub->get_options()) {
    if (o->get_lnames().empty()) continue;
    const std::string& name = o->get_lnames().front();
    if (name == "help" || name == "config") continue;
    if (const char* v = std::getenv(env_name(name).c_str())) after.push_back("--" + name + "=" + v);
  }
  std::vector<std::string> out{args[0]};
  out.insert(out.end(), before.begin(), before.end());
  out.insert(out.end(), args.begin() + 1, args.end());
  out.insert(out.end(), after.begin(), after.end());
  return out;
}

void print_error(const std::string& kind, const std::string& message, json extra = json::object()) {
  json j{{"error", kind}, {"message", message}};
  for (auto& [k, v] : extra.items()) j[k] = v;
  std::cerr << j.dump() << std::endl;
}

int main_impl(int argc, char** argv) {
  CLI::App app{"Cooperative visual guessing game: data, models, training and play."};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  std::string config_file;
  auto add_sub = [&](const std::string& name, const std::string& help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("--config", config_file, "JSON file of option values");
    return s;
  };

  Stats stats_cmd;
  SplitCmd split_cmd;
  TrainOracle oracle_cmd;
  TrainGuesser guesser_cmd;
  TrainQGen qgen_cmd;
  Eval eval_cmd;
  SelfPlay selfplay_cmd;
  Gradcheck gradcheck_cmd;
  Serve serve_cmd;

  auto* s_stats = add_sub("stats", "Corpus statistics");
  stats_cmd.add(s_stats);
  auto* s_split = add_sub("split", "Split games by image into train, valid and test");
  split_cmd.add(s_split);
  auto* s_oracle = add_sub("train-oracle", "Train the oracle");
  oracle_cmd.add(s_oracle);
  auto* s_guesser = add_sub("train-guesser", "Train the guesser");
  guesser_cmd.add(s_guesser);
  auto* s_qgen = add_sub("train-qgen", "Train the question generator");
  qgen_cmd.add(s_qgen);
  auto* s_eval = add_sub("eval", "Error rates of models and baselines");
  eval_cmd.add(s_eval);
  auto* s_self = add_sub("selfplay", "Play games between the three trained agents");
  selfplay_cmd.add(s_self);
  auto* s_grad = add_sub("gradcheck", "Finite-difference gradient checks");
  gradcheck_cmd.add(s_grad);
  auto* s_serve = add_sub("serve", "HTTP play service");
  serve_cmd.add(s_serve);

  std::vector<std::string> args(argv + 1, argv + argc);
  args = layered_args(app, std::move(args));
  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return 2;
  }

  if (s_stats->parsed()) return stats_cmd.run();
  if (s_split->parsed()) return split_cmd.run();
  if (s_oracle->parsed()) return oracle_cmd.run();
  if (s_guesser->parsed()) return guesser_cmd.run();
  if (s_qgen->parsed()) {
    qgen_cmd.check();
    return qgen_cmd.run();
  }
  if (s_eval->parsed()) {
    eval_cmd.check();
    return eval_cmd.run();
  }
  if (s_self->parsed()) {
    selfplay_cmd.check();
    return selfplay_cmd.run();
  }
  if (s_grad->parsed()) return gradcheck_cmd.run();
  serve_cmd.config_file = config_file;
  return serve_cmd.run();
}

}  // namespace
}  // namespace gw::cli

int main(int argc, char** argv) {
  using namespace gw;
  try {
    return cli::main_impl(argc, argv);
  } catch (const cli::UsageError& e) {
    cli::print_error(e.kind(), e.what());
    return 2;
  } catch (const ValidationError& e) {
    cli::print_error(e.kind(), e.what(), {{"field", e.field()}});
  } catch (const ParseError& e) {
    cli::print_error(e.kind(), e.what(), {{"line", e.line()}});
  } catch (const ProtocolError& e) {
    cli::print_error(e.kind(), e.what(), {{"reason", e.reason()}});
  } catch (const Error& e) {
    cli::print_error(e.kind(), e.what());
  } catch (const std::exception& e) {
    cli::print_error("internal", e.what());
  }
  return 1;
}
