#pragma once

// Finite-difference checks for every operator and every model on tiny
// configurations, plus the small fixtures they run on.

#include <functional>
#include <string>
#include <vector>

#include "gw/ad/gradcheck.hpp"
#include "gw/ad/lstm.hpp"
#include "gw/ad/ops.hpp"
#include "gw/agents/guesser.hpp"
#include "gw/agents/oracle.hpp"
#include "gw/agents/qgen.hpp"
#include "gw/core/geometry.hpp"
#include "gw/core/rng.hpp"
#include "gw/data/vocabulary.hpp"

namespace gw::checks {

struct GradcheckCase {
  std::string name;
  ad::GradcheckResult result;
};

inline ad::Tensor random_tensor(ad::Shape shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
  ad::Tensor t(std::move(shape));
  for (double& v : t.values()) v = rng.uniform(lo, hi);
  return t;
}

// Values in +-[0.2, 1], away from the relu kink.
inline ad::Tensor signed_away_from_zero(ad::Shape shape, Rng& rng) {
  ad::Tensor t(std::move(shape));
  for (double& v : t.values()) v = (rng.below(2) ? 1.0 : -1.0) * rng.uniform(0.2, 1.0);
  return t;
}

// sum(v * R) for a fixed random R, so every output coordinate matters.
inline ad::Var weighted_sum(ad::Var v, const ad::Tensor& r) {
  return ad::sum(ad::mul(v, v.graph().constant(r)));
}

inline std::vector<GradcheckCase> op_gradchecks(std::uint64_t seed) {
  using namespace ad;
  std::vector<GradcheckCase> out;
  Rng rng(seed);

  // One scalar function over freshly registered parameters.
  auto run = [&](const std::string& name, std::vector<std::pair<std::string, Tensor>> inputs,
                 Shape out_shape,
                 const std::function<Var(Graph&, const std::vector<Var>&)>& body) {
    ParameterStore store;
    std::vector<Parameter*> params;
    for (auto& [n, t] : inputs) {
      Parameter& p = store.add(n, t.shape());
      p.value = t;
      params.push_back(&p);
    }
    const Tensor r = random_tensor(out_shape, rng);
    ScalarFn f = [&](Graph& g) {
      std::vector<Var> vars;
      for (Parameter* p : params) vars.push_back(g.parameter(*p));
      Var y = body(g, vars);
      return y.value().size() == 1 && out_shape == Shape{1, 1} ? y : weighted_sum(y, r);
    };
    out.push_back({name, gradcheck(f, params)});
  };

  run("matmul", {{"a", random_tensor({3, 4}, rng)}, {"b", random_tensor({4, 2}, rng)}}, {3, 2},
      [](Graph&, const std::vector<Var>& v) { return matmul(v[0], v[1]); });
  run("transpose", {{"a", random_tensor({3, 4}, rng)}}, {4, 3},
      [](Graph&, const std::vector<Var>& v) { return transpose(v[0]); });
  run("add", {{"a", random_tensor({2, 3}, rng)}, {"b", random_tensor({2, 3}, rng)}}, {2, 3},
      [](Graph&, const std::vector<Var>& v) { return add(v[0], v[1]); });
  run("add_bias", {{"a", random_tensor({4, 3}, rng)}, {"b", random_tensor({1, 3}, rng)}}, {4, 3},
      [](Graph&, const std::vector<Var>& v) { return add(v[0], v[1]); });
  run("mul", {{"a", random_tensor({2, 3}, rng)}, {"b", random_tensor({2, 3}, rng)}}, {2, 3},
      [](Graph&, const std::vector<Var>& v) { return mul(v[0], v[1]); });
  run("concat_rows", {{"a", random_tensor({2, 3}, rng)}, {"b", random_tensor({1, 3}, rng)}}, {3, 3},
      [](Graph&, const std::vector<Var>& v) { return concat({v[0], v[1]}, 0); });
  run("concat_cols", {{"a", random_tensor({2, 3}, rng)}, {"b", random_tensor({2, 2}, rng)}}, {2, 5},
      [](Graph&, const std::vector<Var>& v) { return concat({v[0], v[1]}, 1); });
  run("slice_rows", {{"a", random_tensor({4, 3}, rng)}}, {2, 3},
      [](Graph&, const std::vector<Var>& v) { return slice(v[0], 0, 1, 2); });
  run("slice_cols", {{"a", random_tensor({3, 5}, rng)}}, {3, 2},
      [](Graph&, const std::vector<Var>& v) { return slice(v[0], 1, 2, 2); });
  run("embedding_lookup", {{"t", random_tensor({5, 3}, rng)}}, {4, 3},
      [](Graph&, const std::vector<Var>& v) {
        const std::vector<std::int32_t> ids{2, 0, 2, 4};
        return embedding_lookup(v[0], ids);
      });
  {
    ParameterStore store;
    Parameter& t = store.add("table", {6, 3});
    t.value = random_tensor({6, 3}, rng);
    const Tensor r = random_tensor({3, 3}, rng);
    std::vector<Parameter*> params{&t};
    ScalarFn f = [&](Graph& g) {
      const std::vector<std::int32_t> ids{5, 1, 5};
      return weighted_sum(embedding_lookup(g, t, ids), r);
    };
    out.push_back({"embedding_lookup_sparse", gradcheck(f, params)});
  }
  run("sigmoid", {{"a", random_tensor({2, 4}, rng, -3, 3)}}, {2, 4},
      [](Graph&, const std::vector<Var>& v) { return sigmoid(v[0]); });
  run("tanh", {{"a", random_tensor({2, 4}, rng, -2, 2)}}, {2, 4},
      [](Graph&, const std::vector<Var>& v) { return tanh(v[0]); });
  run("relu", {{"a", signed_away_from_zero({2, 4}, rng)}}, {2, 4},
      [](Graph&, const std::vector<Var>& v) { return relu(v[0]); });
  run("log", {{"a", random_tensor({2, 4}, rng, 0.3, 3.0)}}, {2, 4},
      [](Graph&, const std::vector<Var>& v) { return log(v[0]); });
  run("softmax", {{"a", random_tensor({3, 4}, rng, -2, 2)}}, {3, 4},
      [](Graph&, const std::vector<Var>& v) { return softmax(v[0]); });
  run("sum", {{"a", random_tensor({3, 2}, rng)}}, {1, 1},
      [](Graph&, const std::vector<Var>& v) { return sum(mul(v[0], v[0])); });
  run("cross_entropy", {{"a", random_tensor({1, 5}, rng, -2, 2)}}, {1, 1},
      [](Graph&, const std::vector<Var>& v) { return cross_entropy(v[0], 3); });
  run("cross_entropy_rows", {{"a", random_tensor({3, 4}, rng, -2, 2)}}, {1, 1},
      [](Graph&, const std::vector<Var>& v) {
        const std::vector<std::size_t> targets{0, 3, 1};
        return cross_entropy(v[0], targets);
      });

  {
    ParameterStore store;
    LstmWeights w = make_lstm(store, "lstm", 3, 4, rng);
    Parameter& x = store.add("x", {1, 3});
    x.value = random_tensor({1, 3}, rng);
    Parameter& h0 = store.add("h0", {1, 4});
    h0.value = random_tensor({1, 4}, rng);
    Parameter& c0 = store.add("c0", {1, 4});
    c0.value = random_tensor({1, 4}, rng);
    const Tensor rh = random_tensor({1, 4}, rng), rc = random_tensor({1, 4}, rng);
    ScalarFn f = [&](Graph& g) {
      LstmState s = lstm_cell(g.parameter(x), {g.parameter(h0), g.parameter(c0)}, w);
      return add(weighted_sum(s.h, rh), weighted_sum(s.c, rc));
    };
    const auto all = store.all();
    out.push_back({"lstm_cell", gradcheck(f, all)});
  }
  {
    ParameterStore store;
    LstmWeights w = make_lstm(store, "lstm", 2, 3, rng);
    Parameter& xs = store.add("xs", {5, 2});
    xs.value = random_tensor({5, 2}, rng);
    const Tensor r = random_tensor({5, 3}, rng);
    ScalarFn f = [&](Graph& g) {
      LstmRun run = lstm_sequence(g.parameter(xs), lstm_zero_state(g, 3), w);
      return weighted_sum(run.hidden_rows, r);
    };
    const auto all = store.all();
    out.push_back({"lstm_sequence", gradcheck(f, all)});
  }
  return out;
}

// Specials followed by a few words.
inline data::Vocabulary tiny_vocab() {
  std::vector<std::string> tokens = data::Vocabulary().tokens();
  for (const char* w : {"is", "it", "a", "cat", "dog", "left", "?", "red"}) tokens.push_back(w);
  return data::Vocabulary::from_tokens(tokens, 1);
}

inline std::vector<float> random_features(std::size_t dim, Rng& rng) {
  std::vector<float> v(dim);
  for (float& x : v) x = static_cast<float>(rng.uniform(-1.0, 1.0));
  return v;
}

// Small image with three objects, carrying image and crop features.
struct TinyScene {
  ImageMeta image;
  std::vector<ObjectRef> objects;
};

inline TinyScene tiny_scene(std::size_t feature_dim, Rng& rng) {
  TinyScene s;
  s.image.image_id = 1;
  s.image.width = 120;
  s.image.height = 90;
  s.image.features = random_features(feature_dim, rng);
  const BBox boxes[] = {{5, 5, 40, 30}, {50, 20, 30, 60}, {80, 10, 35, 35}};
  for (int i = 0; i < 3; ++i) {
    ObjectRef o;
    o.object_id = i + 1;
    o.category_id = 1 + i;
    o.category_name = "c" + std::to_string(i);
    o.bbox = boxes[i];
    o.area = o.bbox.w * o.bbox.h;
    o.crop_features = random_features(feature_dim, rng);
    s.objects.push_back(o);
  }
  return s;
}

inline std::vector<agents::EncodedQA> tiny_dialogue() {
  using data::TokenId;
  return {{{7, 8, 9, 10, 13}, Answer::No}, {{12, 13}, Answer::Yes}, {{14, 11, 13}, Answer::NA}};
}

inline agents::OracleConfig tiny_oracle_config() {
  agents::OracleConfig c;
  c.features = agents::FeatureSet::all_combinations().back();
  c.word_dim = 4;
  c.hidden = 5;
  c.category_dim = 3;
  c.mlp_hidden = 6;
  c.image_dim = 6;
  c.num_categories = 5;
  return c;
}

inline agents::GuesserConfig tiny_guesser_config(agents::EncoderKind kind, bool use_image) {
  agents::GuesserConfig c;
  c.encoder = kind;
  c.word_dim = 4;
  c.hidden = 5;
  c.utterance_hidden = 4;
  c.use_image = use_image;
  c.image_dim = 6;
  c.category_dim = 3;
  c.object_hidden = 6;
  c.num_categories = 5;
  return c;
}

inline agents::QGenConfig tiny_qgen_config() {
  agents::QGenConfig c;
  c.word_dim = 4;
  c.utterance_hidden = 4;
  c.context_hidden = 5;
  c.decoder_hidden = 5;
  c.use_image = true;
  c.image_dim = 6;
  c.max_len = 4;
  c.beam_width = 3;
  return c;
}

// Every parameter redrawn from U(-1, 1), so recurrent states and their
// gradients are not vanishingly small at these tiny sizes.
inline void randomize(ad::ParameterStore& store, Rng& rng) {
  for (ad::Parameter* p : store.all()) {
    for (double& v : p->value.values()) v = rng.uniform(-1.0, 1.0);
  }
}

inline constexpr double kModelGradcheckEpsilon = 1e-4;

// Guesser and question generator objectives are random projections of their
// logits; the oracle uses its training loss.
inline std::vector<GradcheckCase> model_gradchecks(std::uint64_t seed,
                                                   double epsilon = kModelGradcheckEpsilon) {
  using namespace ad;
  std::vector<GradcheckCase> out;
  Rng rng(seed);
  const TinyScene scene = tiny_scene(6, rng);
  const auto dialogue = tiny_dialogue();

  {
    agents::OracleModel m(tiny_oracle_config(), tiny_vocab(), seed);
    randomize(m.parameters(), rng);
    const std::vector<data::TokenId> q{7, 8, 9, 11, 13};
    ScalarFn f = [&](Graph& g) {
      return cross_entropy(m.logits(g, q, scene.objects[1], scene.image), 1);
    };
    const auto params = m.parameters().all();
    out.push_back({"oracle", gradcheck(f, params, epsilon)});
  }
  for (auto [kind, use_image, name] :
       {std::tuple{agents::EncoderKind::LstmFlat, false, "guesser_lstm"},
        std::tuple{agents::EncoderKind::Hred, false, "guesser_hred"},
        std::tuple{agents::EncoderKind::LstmFlat, true, "guesser_lstm_image"}}) {
    agents::GuesserModel m(tiny_guesser_config(kind, use_image), tiny_vocab(), seed);
    randomize(m.parameters(), rng);
    const Tensor r = random_tensor({1, scene.objects.size()}, rng);
    ScalarFn f = [&](Graph& g) {
      return weighted_sum(m.logits(g, dialogue, scene.objects, scene.image), r);
    };
    const auto params = m.parameters().all();
    out.push_back({name, gradcheck(f, params, epsilon)});
  }
  {
    agents::QGenModel m(tiny_qgen_config(), tiny_vocab(), seed);
    randomize(m.parameters(), rng);
    const std::vector<agents::EncodedQA> pairs{{{7, 8, 13}, Answer::No}, {{12, 13}, Answer::Yes}};
    std::vector<Tensor> r;
    for (const auto& qa : pairs) r.push_back(random_tensor({qa.question.size() + 1, m.vocab().size()}, rng));
    ScalarFn f = [&](Graph& g) {
      const auto states = m.encoder().states(g, pairs);
      std::vector<Var> parts;
      for (std::size_t j = 0; j < pairs.size(); ++j) {
        parts.push_back(weighted_sum(m.question_logits(g, states[j], scene.image, pairs[j].question), r[j]));
      }
      return sum(concat(parts, 1));
    };
    const auto params = m.parameters().all();
    out.push_back({"qgen", gradcheck(f, params, epsilon)});
  }
  return out;
}

}  // namespace gw::checks
