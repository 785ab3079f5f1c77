#pragma once

// Save, reload and re-run each model kind; reports the largest output change.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "gradcheck_suite.hpp"
#include "gw/ad/checkpoint.hpp"

namespace gw::testing {

struct RoundTripResult {
  std::string kind;
  double max_abs_diff = 0;
};

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline std::vector<RoundTripResult> checkpoint_roundtrips(const std::filesystem::path& dir,
                                                          std::uint64_t seed) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  Rng rng(seed);
  const TinyScene scene = tiny_scene(6, rng);
  const auto dialogue = tiny_dialogue();
  std::vector<RoundTripResult> out;

  {
    agents::OracleModel m(tiny_oracle_config(), tiny_vocab(), seed);
    const fs::path p = dir / "oracle.ckpt";
    ad::save_checkpoint(p, m.to_checkpoint());
    const agents::OracleModel back = agents::OracleModel::from_checkpoint(ad::load_checkpoint(p));
    double worst = 0;
    for (const auto& qa : dialogue) {
      for (const auto& o : scene.objects) {
        const auto a = m.distribution(qa.question, o, scene.image);
        const auto b = back.distribution(qa.question, o, scene.image);
        worst = std::max(worst, max_abs_diff(a, b));
      }
    }
    out.push_back({"oracle", worst});
  }
  for (auto kind : {agents::EncoderKind::LstmFlat, agents::EncoderKind::Hred}) {
    agents::GuesserModel m(tiny_guesser_config(kind, true), tiny_vocab(), seed);
    const fs::path p = dir / "guesser.ckpt";
    ad::save_checkpoint(p, m.to_checkpoint());
    const agents::GuesserModel back = agents::GuesserModel::from_checkpoint(ad::load_checkpoint(p));
    double worst = 0;
    for (std::size_t j = 0; j <= dialogue.size(); ++j) {
      const std::span<const agents::EncodedQA> prefix(dialogue.data(), j);
      worst = std::max(worst, max_abs_diff(m.distribution(prefix, scene.objects, scene.image),
                                           back.distribution(prefix, scene.objects, scene.image)));
    }
    out.push_back({std::string("guesser-") + std::string(agents::to_string(kind)), worst});
  }
  {
    agents::QGenModel m(tiny_qgen_config(), tiny_vocab(), seed);
    const fs::path p = dir / "qgen.ckpt";
    ad::save_checkpoint(p, m.to_checkpoint());
    const agents::QGenModel back = agents::QGenModel::from_checkpoint(ad::load_checkpoint(p));
    double worst = 0;
    for (std::size_t j = 0; j < dialogue.size(); ++j) {
      const std::span<const agents::EncodedQA> history(dialogue.data(), j);
      const auto a = m.step_distributions(history, scene.image, dialogue[j].question);
      const auto b = back.step_distributions(history, scene.image, dialogue[j].question);
      for (std::size_t r = 0; r < a.size(); ++r) worst = std::max(worst, max_abs_diff(a[r], b[r]));
      if (m.generate(history, scene.image) != back.generate(history, scene.image)) {
        worst = std::numeric_limits<double>::infinity();
      }
    }
    out.push_back({"qgen", worst});
  }
  return out;
}

}  // namespace gw::testing
