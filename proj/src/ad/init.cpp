#include "gw/ad/init.hpp"

#include <cmath>

namespace gw::ad {

void glorot_uniform(Tensor& t, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (double& v : t.values()) v = rng.uniform(-limit, limit);
}

void glorot_uniform(Tensor& t, Rng& rng) { glorot_uniform(t, t.rows(), t.cols(), rng); }

}  // namespace gw::ad
