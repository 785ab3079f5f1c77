#include "gw/game/agents.hpp"

#include "gw/core/error.hpp"
#include "gw/core/rng.hpp"

namespace gw::game {

QGenAsker::QGenAsker(std::shared_ptr<const agents::QGenModel> model, std::size_t beam_width,
                     std::size_t max_len)
    : model_(std::move(model)), beam_width_(beam_width), max_len_(max_len) {}

QGenAsker::QGenAsker(std::shared_ptr<const agents::QGenModel> model)
    : QGenAsker(model, model->config().beam_width, model->config().max_len) {}

std::string QGenAsker::ask(const ImageMeta& image, std::span<const QAPair> history) const {
  const auto encoded = agents::encode_dialogue(history, model_->vocab());
  const auto tokens = model_->generate(encoded, image, beam_width_, max_len_);
  const std::string text = model_->vocab().decode(tokens);
  return text.empty() ? std::string(model_->vocab().token(data::special::kUnk)) : text;
}

Answer OracleAnswerer::answer(std::string_view question, const ObjectRef& target,
                              const ImageMeta& image) const {
  return model_->answer(question, target, image);
}

std::size_t ModelGuesser::guess(const GuessRequest& r) const {
  return model_->predict(r.dialogue, r.objects, r.image);
}

ScriptedAsker::ScriptedAsker(std::vector<std::string> questions) : questions_(std::move(questions)) {
  if (questions_.empty()) throw ConfigError("scripted asker needs at least one question");
}

std::string ScriptedAsker::ask(const ImageMeta&, std::span<const QAPair> history) const {
  return questions_[history.size() % questions_.size()];
}

std::size_t RandomGuesser::guess(const GuessRequest& r) const {
  if (r.objects.empty()) throw ValidationError("objects", "no objects to guess from");
  Rng rng(mix_seed(seed_, static_cast<std::uint64_t>(r.game_id)));
  return rng.below(r.objects.size());
}

std::shared_ptr<const agents::OracleModel> load_oracle(const std::string& path) {
  return std::make_shared<const agents::OracleModel>(
      agents::OracleModel::from_checkpoint(ad::load_checkpoint(path)));
}

std::shared_ptr<const agents::GuesserModel> load_guesser(const std::string& path) {
  return std::make_shared<const agents::GuesserModel>(
      agents::GuesserModel::from_checkpoint(ad::load_checkpoint(path)));
}

std::shared_ptr<const agents::QGenModel> load_qgen(const std::string& path) {
  return std::make_shared<const agents::QGenModel>(
      agents::QGenModel::from_checkpoint(ad::load_checkpoint(path)));
}

}  // namespace gw::game
