#pragma once

#include "gw/ad/tensor.hpp"
#include "gw/core/rng.hpp"

namespace gw::ad {

// Uniform in +-sqrt(6 / (fan_in + fan_out)).
void glorot_uniform(Tensor& t, std::size_t fan_in, std::size_t fan_out, Rng& rng);

// Matrix-shaped tensor: fan_in = rows, fan_out = cols.
void glorot_uniform(Tensor& t, Rng& rng);

}  // namespace gw::ad
