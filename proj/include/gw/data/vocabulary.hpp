#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gw/core/types.hpp"

namespace gw::data {

using TokenId = std::int32_t;

namespace special {
inline constexpr TokenId kPad = 0;
inline constexpr TokenId kUnk = 1;
inline constexpr TokenId kStart = 2;
inline constexpr TokenId kStop = 3;
inline constexpr TokenId kYes = 4;
inline constexpr TokenId kNo = 5;
inline constexpr TokenId kNA = 6;
inline constexpr TokenId kCount = 7;
}  // namespace special

TokenId answer_token(Answer a);

class Vocabulary {
 public:
  // Specials only.
  Vocabulary();

  // Counts tokens over every question of games. Tokens are ordered by
  // descending count then ascending byte order before ids are assigned.
  static Vocabulary build(std::span<const GameRecord> games, int min_count);
  static Vocabulary from_counts(const std::map<std::string, std::size_t>& counts, int min_count);
  // Restores a vocabulary from its id-ordered token list (specials included).
  static Vocabulary from_tokens(std::vector<std::string> id_to_token, int min_count);

  std::size_t size() const { return id_to_token_.size(); }
  int min_count() const { return min_count_; }

  TokenId id(std::string_view token) const;  // kUnk when absent
  bool contains(std::string_view token) const;
  const std::string& token(TokenId id) const;
  const std::vector<std::string>& tokens() const { return id_to_token_; }

  std::vector<TokenId> encode(std::string_view question) const;
  // Space-joins tokens, skipping PAD, START and STOP.
  std::string decode(std::span<const TokenId> ids) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.id_to_token_ == b.id_to_token_ && a.min_count_ == b.min_count_;
  }

 private:
  void index();

  std::unordered_map<std::string, TokenId> token_to_id_;
  std::vector<std::string> id_to_token_;
  int min_count_ = 1;
};

// Token occurrence counts over all questions.
std::map<std::string, std::size_t> count_tokens(std::span<const GameRecord> games);

std::vector<TokenId> encode(std::string_view question, const Vocabulary& vocab);

}  // namespace gw::data
