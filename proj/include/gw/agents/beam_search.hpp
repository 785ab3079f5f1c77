#pragma once

#include <cstddef>
#include <vector>

#include "gw/data/vocabulary.hpp"

namespace gw::agents {

using data::TokenId;

struct DecoderState {
  std::vector<double> h;
  std::vector<double> c;
};

// One decoding step: consumes the previous token and yields the state after
// it together with log-probabilities over the whole vocabulary.
class StepModel {
 public:
  virtual ~StepModel() = default;
  virtual std::size_t vocab_size() const = 0;
  virtual void step(const DecoderState& state, TokenId input, DecoderState& next,
                    std::vector<double>& log_probs) const = 0;
};

struct BeamConfig {
  std::size_t width = 5;
  std::size_t max_len = 12;  // emitted tokens before a forced STOP
  TokenId start = data::special::kStart;
  TokenId stop = data::special::kStop;
  std::vector<TokenId> banned;  // never emitted
};

struct BeamHypothesis {
  std::vector<TokenId> tokens;  // ends with STOP once finished
  double log_prob = 0.0;
  bool finished = false;
};

// Keeps the width best prefixes by cumulative log-probability; candidates are
// ranked by (score desc, parent rank asc, token id asc). Prefixes reaching
// max_len are closed with a STOP that adds no score. Returns the best finished
// hypothesis, lexicographically smallest on equal scores.
BeamHypothesis beam_search(const StepModel& model, const DecoderState& initial,
                           const BeamConfig& config);

// Argmax rollout, lowest id on ties.
BeamHypothesis greedy_decode(const StepModel& model, const DecoderState& initial,
                             const BeamConfig& config);

}  // namespace gw::agents
