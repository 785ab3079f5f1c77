#include "gw/data/tokenizer.hpp"

namespace gw::data {
namespace {

enum class CharClass { Space, Word, Punct };

CharClass classify(unsigned char c) {
  if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
    return CharClass::Space;
  }
  if ((c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80) {
    return CharClass::Word;
  }
  return CharClass::Punct;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view question) {
  std::vector<std::string> tokens;
  std::string current;
  CharClass current_class = CharClass::Space;
  for (unsigned char c : question) {
    const CharClass cls = classify(c);
    if (cls != current_class && !current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
    current_class = cls;
    if (cls == CharClass::Space) continue;
    if (c >= 'A' && c <= 'Z') c = static_cast<unsigned char>(c - 'A' + 'a');
    current.push_back(static_cast<char>(c));
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

}  // namespace gw::data
