#include "gw/ad/adam.hpp"

#include <cmath>

#include "gw/core/error.hpp"

namespace gw::ad {

AdamState make_adam(const ParameterStore& store, AdamConfig config) {
  AdamState s;
  s.config = config;
  for (const Parameter* p : store.all()) {
    s.m.emplace_back(p->value.shape());
    s.v.emplace_back(p->value.shape());
  }
  return s;
}

void adam_step(ParameterStore& store, AdamState& state) {
  auto params = store.all();
  if (params.size() != state.m.size()) {
    throw ConfigError("optimizer state covers " + std::to_string(state.m.size()) +
                      " parameters, store has " + std::to_string(params.size()));
  }
  const AdamConfig& c = state.config;
  ++state.t;
  const double t = static_cast<double>(state.t);
  const double corr1 = 1.0 - std::pow(c.beta1, t);
  const double corr2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    Parameter& p = *params[i];
    if (p.grad.shape() != p.value.shape() || state.m[i].shape() != p.value.shape()) {
      throw DimensionError("adam_step", "shape mismatch for '" + p.name + "'");
    }
    double* w = p.value.data();
    const double* g = p.grad.data();
    double* m = state.m[i].data();
    double* v = state.v[i].data();
    for (std::size_t j = 0; j < p.value.size(); ++j) {
      m[j] = c.beta1 * m[j] + (1.0 - c.beta1) * g[j];
      v[j] = c.beta2 * v[j] + (1.0 - c.beta2) * g[j] * g[j];
      const double mh = m[j] / corr1;
      const double vh = v[j] / corr2;
      w[j] -= c.lr * mh / (std::sqrt(vh) + c.epsilon);
    }
  }
}

}  // namespace gw::ad
