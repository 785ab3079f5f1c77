#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gw::data {

// Lowercases ASCII letters, then emits maximal runs of alphanumeric
// characters and maximal runs of other non-whitespace characters. Bytes of
// multi-byte UTF-8 sequences count as alphanumeric so accented words stay
// whole.
std::vector<std::string> tokenize(std::string_view question);

}  // namespace gw::data
