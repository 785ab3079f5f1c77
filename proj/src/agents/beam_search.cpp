#include "gw/agents/beam_search.hpp"

#include <algorithm>
#include <limits>

#include "gw/core/error.hpp"

namespace gw::agents {

namespace {

struct Live {
  std::vector<TokenId> tokens;
  double log_prob;
  DecoderState state;
  TokenId last;
};

struct Candidate {
  std::size_t parent;
  TokenId token;
  double score;
};

void check(const StepModel& model, const BeamConfig& config) {
  if (config.width < 1) throw ConfigError("beam width must be at least 1");
  if (config.max_len < 1) throw ConfigError("beam max_len must be at least 1");
  if (model.vocab_size() == 0) throw ConfigError("empty decoder vocabulary");
}

std::vector<bool> allowed_mask(const StepModel& model, const BeamConfig& config) {
  std::vector<bool> allowed(model.vocab_size(), true);
  for (TokenId t : config.banned) {
    if (t >= 0 && static_cast<std::size_t>(t) < allowed.size()) allowed[t] = false;
  }
  return allowed;
}

bool better(const BeamHypothesis& a, const BeamHypothesis& b) {
  if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
  return a.tokens < b.tokens;
}

}  // namespace

BeamHypothesis beam_search(const StepModel& model, const DecoderState& initial,
                           const BeamConfig& config) {
  check(model, config);
  const auto allowed = allowed_mask(model, config);
  const std::size_t v = model.vocab_size();

  std::vector<Live> live{{{}, 0.0, initial, config.start}};
  std::vector<BeamHypothesis> finished;
  std::vector<double> log_probs;
  for (std::size_t step = 0; step < config.max_len && !live.empty(); ++step) {
    std::vector<DecoderState> next(live.size());
    std::vector<Candidate> cands;
    cands.reserve(live.size() * v);
    for (std::size_t i = 0; i < live.size(); ++i) {
      model.step(live[i].state, live[i].last, next[i], log_probs);
      for (std::size_t t = 0; t < v; ++t) {
        if (!allowed[t]) continue;
        cands.push_back({i, static_cast<TokenId>(t), live[i].log_prob + log_probs[t]});
      }
    }
    const std::size_t keep = std::min(config.width, cands.size());
    std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(keep), cands.end(),
                      [](const Candidate& a, const Candidate& b) {
                        if (a.score != b.score) return a.score > b.score;
                        if (a.parent != b.parent) return a.parent < b.parent;
                        return a.token < b.token;
                      });
    std::vector<Live> grown;
    for (std::size_t j = 0; j < keep; ++j) {
      const Candidate& c = cands[j];
      std::vector<TokenId> tokens = live[c.parent].tokens;
      tokens.push_back(c.token);
      if (c.token == config.stop) {
        finished.push_back({std::move(tokens), c.score, true});
      } else if (step + 1 == config.max_len) {
        tokens.push_back(config.stop);
        finished.push_back({std::move(tokens), c.score, true});
      } else {
        grown.push_back({std::move(tokens), c.score, next[c.parent], c.token});
      }
    }
    live = std::move(grown);
  }
  if (finished.empty()) return {{config.stop}, -std::numeric_limits<double>::infinity(), true};
  return *std::min_element(finished.begin(), finished.end(),
                           [](const BeamHypothesis& a, const BeamHypothesis& b) {
                             return better(a, b);
                           });
}

BeamHypothesis greedy_decode(const StepModel& model, const DecoderState& initial,
                             const BeamConfig& config) {
  check(model, config);
  const auto allowed = allowed_mask(model, config);
  BeamHypothesis h;
  DecoderState state = initial, next;
  TokenId last = config.start;
  std::vector<double> log_probs;
  for (std::size_t step = 0; step < config.max_len; ++step) {
    model.step(state, last, next, log_probs);
    std::size_t best = log_probs.size();
    for (std::size_t t = 0; t < log_probs.size(); ++t) {
      if (allowed[t] && (best == log_probs.size() || log_probs[t] > log_probs[best])) best = t;
    }
    if (best == log_probs.size()) break;
    h.log_prob += log_probs[best];
    h.tokens.push_back(static_cast<TokenId>(best));
    if (static_cast<TokenId>(best) == config.stop) {
      h.finished = true;
      return h;
    }
    state = std::move(next);
    last = static_cast<TokenId>(best);
  }
  h.tokens.push_back(config.stop);
  h.finished = true;
  return h;
}

}  // namespace gw::agents
