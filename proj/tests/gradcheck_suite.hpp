#pragma once

#include "gw/agents/model_checks.hpp"

namespace gw::testing {
using namespace gw::checks;
}  // namespace gw::testing
