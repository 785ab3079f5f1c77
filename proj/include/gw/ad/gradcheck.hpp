#pragma once

#include <functional>
#include <span>
#include <string>

#include "gw/ad/graph.hpp"

namespace gw::ad {

struct GradcheckResult {
  double max_rel_error = 0.0;
  std::string worst_parameter;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t coordinates = 0;
};

using ScalarFn = std::function<Var(Graph&)>;

// Compares backward() against central differences on every coordinate of
// params. rel = |a - n| / max(|a|, |n|, 1e-8). Parameter grads are zeroed
// before and left holding the analytic gradient.
GradcheckResult gradcheck(const ScalarFn& f, std::span<Parameter* const> params,
                          double epsilon = 1e-5);

}  // namespace gw::ad
