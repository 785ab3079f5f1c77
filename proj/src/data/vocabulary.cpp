#include "gw/data/vocabulary.hpp"

#include <algorithm>

#include "gw/core/error.hpp"
#include "gw/data/tokenizer.hpp"

namespace gw::data {
namespace {

const std::vector<std::string>& special_names() {
  static const std::vector<std::string> names = {"<pad>", "<unk>", "<start>", "<stop>",
                                                 "<yes>", "<no>",  "<na>"};
  return names;
}

}  // namespace

TokenId answer_token(Answer a) {
  switch (a) {
    case Answer::Yes:
      return special::kYes;
    case Answer::No:
      return special::kNo;
    case Answer::NA:
      return special::kNA;
  }
  return special::kNA;
}

Vocabulary::Vocabulary() : id_to_token_(special_names()) { index(); }

void Vocabulary::index() {
  token_to_id_.clear();
  for (std::size_t i = 0; i < id_to_token_.size(); ++i) {
    auto [it, inserted] = token_to_id_.emplace(id_to_token_[i], static_cast<TokenId>(i));
    if (!inserted) throw ValidationError("vocabulary", "duplicate token '" + id_to_token_[i] + "'");
  }
}

std::map<std::string, std::size_t> count_tokens(std::span<const GameRecord> games) {
  std::map<std::string, std::size_t> counts;
  for (const auto& g : games) {
    for (const auto& qa : g.qas) {
      for (auto& tok : tokenize(qa.question)) ++counts[std::move(tok)];
    }
  }
  return counts;
}

Vocabulary Vocabulary::from_counts(const std::map<std::string, std::size_t>& counts,
                                   int min_count) {
  if (min_count < 1) throw ConfigError("min_count must be >= 1");
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (const auto& [tok, n] : counts) {
    if (n >= static_cast<std::size_t>(min_count)) kept.emplace_back(tok, n);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  Vocabulary v;
  v.min_count_ = min_count;
  for (auto& [tok, n] : kept) {
    if (v.token_to_id_.contains(tok)) continue;  // literal special-token text
    v.id_to_token_.push_back(tok);
    v.token_to_id_.emplace(tok, static_cast<TokenId>(v.id_to_token_.size() - 1));
  }
  return v;
}

Vocabulary Vocabulary::build(std::span<const GameRecord> games, int min_count) {
  return from_counts(count_tokens(games), min_count);
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> id_to_token, int min_count) {
  const auto& specials = special_names();
  if (id_to_token.size() < specials.size() ||
      !std::equal(specials.begin(), specials.end(), id_to_token.begin())) {
    throw ValidationError("vocabulary", "special tokens missing or out of order");
  }
  Vocabulary v;
  v.id_to_token_ = std::move(id_to_token);
  v.min_count_ = min_count;
  v.index();
  return v;
}

TokenId Vocabulary::id(std::string_view token) const {
  auto it = token_to_id_.find(std::string(token));
  return it == token_to_id_.end() ? special::kUnk : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return token_to_id_.contains(std::string(token));
}

const std::string& Vocabulary::token(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= id_to_token_.size()) {
    throw ValidationError("token_id", "out of range: " + std::to_string(id));
  }
  return id_to_token_[static_cast<std::size_t>(id)];
}

std::vector<TokenId> Vocabulary::encode(std::string_view question) const {
  std::vector<TokenId> ids;
  for (const auto& tok : tokenize(question)) ids.push_back(id(tok));
  return ids;
}

std::string Vocabulary::decode(std::span<const TokenId> ids) const {
  std::string out;
  for (TokenId id : ids) {
    if (id == special::kPad || id == special::kStart || id == special::kStop) continue;
    if (!out.empty()) out.push_back(' ');
    out += token(id);
  }
  return out;
}

std::vector<TokenId> encode(std::string_view question, const Vocabulary& vocab) {
  return vocab.encode(question);
}

}  // namespace gw::data
