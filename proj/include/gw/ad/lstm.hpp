#pragma once

#include <string>

#include "gw/ad/graph.hpp"
#include "gw/ad/parameters.hpp"
#include "gw/core/rng.hpp"

namespace gw::ad {

// Gate blocks are laid out [input | forget | candidate | output] along the
// 4H columns of every weight.
struct LstmWeights {
  Parameter* input = nullptr;      // in x 4H
  Parameter* recurrent = nullptr;  // H x 4H
  Parameter* bias = nullptr;       // 1 x 4H
  std::size_t input_size = 0;
  std::size_t hidden = 0;
};

struct LstmState {
  Var h;  // 1 x H
  Var c;  // 1 x H
};

// Registers "<prefix>.wx", "<prefix>.wh", "<prefix>.b" with Glorot weights
// and the forget-gate bias set to forget_bias.
LstmWeights make_lstm(ParameterStore& store, const std::string& prefix, std::size_t input_size,
                      std::size_t hidden, Rng& rng, double forget_bias = 1.0);

// Looks up the three tensors of an already registered LSTM.
LstmWeights bind_lstm(ParameterStore& store, const std::string& prefix);

LstmState lstm_zero_state(Graph& g, std::size_t hidden);

// i = sig(.), f = sig(.), g = tanh(.), o = sig(.);
// c_t = f * c_prev + i * g;  h_t = o * tanh(c_t)
LstmState lstm_cell(Var x, const LstmState& prev, const LstmWeights& w);

// Same step given precomputed x * Wx (1 x 4H) for the input.
LstmState lstm_cell_projected(Var x_proj, const LstmState& prev, const LstmWeights& w);

struct LstmRun {
  LstmState last;
  Var hidden_rows;  // T x H, one row per step
};

// Runs the cell over the rows of inputs (T x in), projecting all inputs with
// one matrix product first.
LstmRun lstm_sequence(Var inputs, const LstmState& initial, const LstmWeights& w);

}  // namespace gw::ad
