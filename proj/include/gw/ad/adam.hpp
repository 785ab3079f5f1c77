#pragma once

#include <cstdint>
#include <vector>

#include "gw/ad/parameters.hpp"

namespace gw::ad {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  AdamConfig config;
  std::int64_t t = 0;
  std::vector<Tensor> m;
  std::vector<Tensor> v;
};

AdamState make_adam(const ParameterStore& store, AdamConfig config = {});

// One bias-corrected update of every parameter from its grad buffer.
void adam_step(ParameterStore& store, AdamState& state);

}  // namespace gw::ad
