#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gw/agents/guesser.hpp"
#include "gw/agents/oracle.hpp"
#include "gw/agents/qgen.hpp"

namespace gw::game {

// The three players. Implementations are const and safe to call from
// several threads at once.
class Asker {
 public:
  virtual ~Asker() = default;
  virtual std::string ask(const ImageMeta& image, std::span<const QAPair> history) const = 0;
};

class Answerer {
 public:
  virtual ~Answerer() = default;
  virtual Answer answer(std::string_view question, const ObjectRef& target,
                        const ImageMeta& image) const = 0;
};

struct GuessRequest {
  std::span<const QAPair> dialogue;
  std::span<const ObjectRef> objects;
  const ImageMeta& image;
  GameId game_id = 0;
};

class Guesser {
 public:
  virtual ~Guesser() = default;
  // Index into request.objects.
  virtual std::size_t guess(const GuessRequest& request) const = 0;
};

class QGenAsker : public Asker {
 public:
  QGenAsker(std::shared_ptr<const agents::QGenModel> model, std::size_t beam_width,
            std::size_t max_len);
  explicit QGenAsker(std::shared_ptr<const agents::QGenModel> model);
  std::string ask(const ImageMeta& image, std::span<const QAPair> history) const override;

 private:
  std::shared_ptr<const agents::QGenModel> model_;
  std::size_t beam_width_, max_len_;
};

class OracleAnswerer : public Answerer {
 public:
  explicit OracleAnswerer(std::shared_ptr<const agents::OracleModel> model)
      : model_(std::move(model)) {}
  Answer answer(std::string_view question, const ObjectRef& target,
                const ImageMeta& image) const override;

 private:
  std::shared_ptr<const agents::OracleModel> model_;
};

class ModelGuesser : public Guesser {
 public:
  explicit ModelGuesser(std::shared_ptr<const agents::GuesserModel> model)
      : model_(std::move(model)) {}
  std::size_t guess(const GuessRequest& request) const override;

 private:
  std::shared_ptr<const agents::GuesserModel> model_;
};

// Cycles through a fixed list of questions.
class ScriptedAsker : public Asker {
 public:
  explicit ScriptedAsker(std::vector<std::string> questions);
  std::string ask(const ImageMeta& image, std::span<const QAPair> history) const override;

 private:
  std::vector<std::string> questions_;
};

class ConstantAnswerer : public Answerer {
 public:
  explicit ConstantAnswerer(Answer a) : answer_(a) {}
  Answer answer(std::string_view, const ObjectRef&, const ImageMeta&) const override {
    return answer_;
  }

 private:
  Answer answer_;
};

// Uniform pick seeded by (seed, game id).
class RandomGuesser : public Guesser {
 public:
  explicit RandomGuesser(std::uint64_t seed) : seed_(seed) {}
  std::size_t guess(const GuessRequest& request) const override;

 private:
  std::uint64_t seed_;
};

// Checkpoint loaders; each rejects a checkpoint of another kind.
std::shared_ptr<const agents::OracleModel> load_oracle(const std::string& path);
std::shared_ptr<const agents::GuesserModel> load_guesser(const std::string& path);
std::shared_ptr<const agents::QGenModel> load_qgen(const std::string& path);

}  // namespace gw::game
