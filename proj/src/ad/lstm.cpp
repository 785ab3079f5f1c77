#include "gw/ad/lstm.hpp"

#include "gw/ad/init.hpp"
#include "gw/ad/ops.hpp"
#include "gw/core/error.hpp"

namespace gw::ad {

LstmWeights make_lstm(ParameterStore& store, const std::string& prefix, std::size_t input_size,
                      std::size_t hidden, Rng& rng, double forget_bias) {
  LstmWeights w;
  w.input_size = input_size;
  w.hidden = hidden;
  w.input = &store.add(prefix + ".wx", {input_size, 4 * hidden});
  w.recurrent = &store.add(prefix + ".wh", {hidden, 4 * hidden});
  w.bias = &store.add(prefix + ".b", {1, 4 * hidden});
  glorot_uniform(w.input->value, input_size, 4 * hidden, rng);
  glorot_uniform(w.recurrent->value, hidden, 4 * hidden, rng);
  for (std::size_t j = hidden; j < 2 * hidden; ++j) w.bias->value[j] = forget_bias;
  return w;
}

LstmWeights bind_lstm(ParameterStore& store, const std::string& prefix) {
  LstmWeights w;
  w.input = &store.get(prefix + ".wx");
  w.recurrent = &store.get(prefix + ".wh");
  w.bias = &store.get(prefix + ".b");
  w.input_size = w.input->value.rows();
  w.hidden = w.recurrent->value.rows();
  return w;
}

LstmState lstm_zero_state(Graph& g, std::size_t hidden) {
  return {g.constant(Tensor({1, hidden})), g.constant(Tensor({1, hidden}))};
}

LstmState lstm_cell_projected(Var x_proj, const LstmState& prev, const LstmWeights& w) {
  Graph& g = x_proj.graph();
  const std::size_t hd = w.hidden;
  if (x_proj.rows() != 1 || x_proj.cols() != 4 * hd) {
    throw DimensionError("lstm_cell", "projected input has shape " + to_string(x_proj.shape()));
  }
  if (prev.h.cols() != hd || prev.c.cols() != hd || prev.h.rows() != 1 || prev.c.rows() != 1) {
    throw DimensionError("lstm_cell", "state width differs from hidden size " + std::to_string(hd));
  }
  Var gates = add(add(x_proj, matmul(prev.h, g.parameter(*w.recurrent))), g.parameter(*w.bias));
  Var i = sigmoid(slice(gates, 1, 0, hd));
  Var f = sigmoid(slice(gates, 1, hd, hd));
  Var cand = tanh(slice(gates, 1, 2 * hd, hd));
  Var o = sigmoid(slice(gates, 1, 3 * hd, hd));
  Var c = add(mul(f, prev.c), mul(i, cand));
  Var h = mul(o, tanh(c));
  return {h, c};
}

LstmState lstm_cell(Var x, const LstmState& prev, const LstmWeights& w) {
  if (x.rows() != 1 || x.cols() != w.input_size) {
    throw DimensionError("lstm_cell", "input of shape " + to_string(x.shape()) +
                                          " for input size " + std::to_string(w.input_size));
  }
  return lstm_cell_projected(matmul(x, x.graph().parameter(*w.input)), prev, w);
}

LstmRun lstm_sequence(Var inputs, const LstmState& initial, const LstmWeights& w) {
  if (inputs.cols() != w.input_size) {
    throw DimensionError("lstm_cell", "inputs of shape " + to_string(inputs.shape()) +
                                          " for input size " + std::to_string(w.input_size));
  }
  Var projected = matmul(inputs, inputs.graph().parameter(*w.input));
  LstmState state = initial;
  std::vector<Var> rows;
  rows.reserve(inputs.rows());
  for (std::size_t t = 0; t < inputs.rows(); ++t) {
    state = lstm_cell_projected(slice(projected, 0, t, 1), state, w);
    rows.push_back(state.h);
  }
  return {state, concat(rows, 0)};
}

}  // namespace gw::ad
