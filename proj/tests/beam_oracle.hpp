#pragma once

// Table-free pseudo-random decoder and an exhaustive reference search.

#include <bit>
#include <cmath>
#include <limits>
#include <vector>

#include "gw/agents/beam_search.hpp"
#include "gw/core/rng.hpp"

namespace gw::testing {

// Log-probabilities are a hash of (state, input); the state is the hash of
// the whole prefix, so every prefix gets its own distribution.
class HashStepModel : public agents::StepModel {
 public:
  HashStepModel(std::size_t vocab, std::uint64_t seed, double spread = 3.0)
      : vocab_(vocab), seed_(seed), spread_(spread) {}

  std::size_t vocab_size() const override { return vocab_; }

  void step(const agents::DecoderState& state, agents::TokenId input, agents::DecoderState& next,
            std::vector<double>& log_probs) const override {
    const std::uint64_t key =
        mix_seed(seed_ ^ std::bit_cast<std::uint64_t>(state.h.at(0)), static_cast<std::uint64_t>(input));
    Rng rng(key);
    std::vector<double> logits(vocab_);
    double mx = -std::numeric_limits<double>::infinity();
    for (double& l : logits) {
      l = rng.uniform(-spread_, spread_);
      mx = std::max(mx, l);
    }
    double z = 0;
    for (double l : logits) z += std::exp(l - mx);
    log_probs.resize(vocab_);
    for (std::size_t t = 0; t < vocab_; ++t) log_probs[t] = logits[t] - mx - std::log(z);
    next.h = {static_cast<double>(key >> 11)};
    next.c = state.c;
  }

 private:
  std::size_t vocab_;
  std::uint64_t seed_;
  double spread_;
};

inline agents::DecoderState hash_state(std::uint64_t v) {
  return {{static_cast<double>(v >> 11)}, {}};
}

// Every admissible sequence: up to max_len - 1 tokens then a scored STOP, or
// max_len non-STOP tokens followed by an unscored STOP. Best score wins,
// lexicographically smallest tokens on ties.
inline agents::BeamHypothesis brute_force_best(const agents::StepModel& model,
                                               const agents::DecoderState& initial,
                                               const agents::BeamConfig& cfg) {
  agents::BeamHypothesis best;
  best.log_prob = -std::numeric_limits<double>::infinity();
  bool have = false;
  std::vector<bool> allowed(model.vocab_size(), true);
  for (auto t : cfg.banned) allowed[static_cast<std::size_t>(t)] = false;

  auto offer = [&](std::vector<agents::TokenId> tokens, double score) {
    if (!have || score > best.log_prob || (score == best.log_prob && tokens < best.tokens)) {
      best = {std::move(tokens), score, true};
      have = true;
    }
  };
  std::vector<agents::TokenId> prefix;
  auto rec = [&](auto&& self, const agents::DecoderState& state, agents::TokenId last,
                 double score) -> void {
    agents::DecoderState next;
    std::vector<double> lp;
    model.step(state, last, next, lp);
    for (std::size_t t = 0; t < lp.size(); ++t) {
      if (!allowed[t]) continue;
      const auto tok = static_cast<agents::TokenId>(t);
      prefix.push_back(tok);
      const double s = score + lp[t];
      if (tok == cfg.stop) {
        offer(prefix, s);
      } else if (prefix.size() == cfg.max_len) {
        auto closed = prefix;
        closed.push_back(cfg.stop);
        offer(std::move(closed), s);
      } else {
        self(self, next, tok, s);
      }
      prefix.pop_back();
    }
  };
  rec(rec, initial, cfg.start, 0.0);
  return best;
}

}  // namespace gw::testing
