#include "gw/train/trainer.hpp"

#include <cstdio>
#include <exception>
#include <numeric>
#include <ostream>

#include "gw/core/error.hpp"
#include "gw/core/rng.hpp"

namespace gw::train {

using nlohmann::json;

ErrorCount evaluate(const TrainTask& task, Part part) {
  const auto n = static_cast<std::ptrdiff_t>(task.size(part));
  std::size_t wrong = 0, total = 0;
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 8) reduction(+ : wrong, total)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      const ErrorCount e = task.errors(part, static_cast<std::size_t>(i));
      wrong += e.wrong;
      total += e.total;
    } catch (...) {
#pragma omp critical(gw_evaluate_error)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return {wrong, total};
}

json to_json(const TrainConfig& c) {
  return {{"max_epochs", c.max_epochs},
          {"batch_size", c.batch_size},
          {"patience", c.patience},
          {"lr", c.adam.lr},
          {"beta1", c.adam.beta1},
          {"beta2", c.adam.beta2},
          {"epsilon", c.adam.epsilon},
          {"seed", c.seed}};
}

void validate(const TrainConfig& c) {
  if (c.max_epochs < 1) throw ConfigError("max_epochs must be at least 1");
  if (c.patience < 1) throw ConfigError("patience must be at least 1");
  if (c.batch_size < 1) throw ConfigError("batch_size must be at least 1");
  if (!(c.adam.lr > 0)) throw ConfigError("learning rate must be positive");
}

std::uint64_t order_digest(const std::vector<std::size_t>& order) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t v : order) {
    for (int b = 0; b < 8; ++b) {
      h ^= (static_cast<std::uint64_t>(v) >> (8 * b)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

TrainResult train(TrainTask& task, const TrainConfig& config) {
  validate(config);
  const std::size_t n = task.size(Part::Train);
  if (n == 0) throw InsufficientData("training split is empty");
  const bool has_valid = task.size(Part::Valid) > 0;

  ad::ParameterStore& store = task.parameters();
  ad::AdamState adam = ad::make_adam(store, config.adam);
  TrainResult result;
  std::vector<ad::Tensor> best;
  std::size_t since_best = 0;

  std::vector<std::size_t> order(n);
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(mix_seed(config.seed, epoch));
    rng.shuffle(std::span(order));

    double loss_sum = 0.0;
    for (std::size_t begin = 0; begin < n; begin += config.batch_size) {
      const std::size_t end = std::min(n, begin + config.batch_size);
      const double scale = 1.0 / static_cast<double>(end - begin);
      store.zero_grad();
      for (std::size_t b = begin; b < end; ++b) {
        ad::Graph g;
        ad::Var l = task.loss(g, order[b]);
        loss_sum += l.item();
        g.backward(l, scale);
      }
      ad::adam_step(store, adam);
    }

    EpochMetrics m;
    m.epoch = epoch;
    m.train_loss = loss_sum / static_cast<double>(n);
    m.train_error = evaluate(task, Part::Train).rate();
    if (has_valid) m.valid_error = evaluate(task, Part::Valid).rate();
    m.shuffle_digest = order_digest(order);
    result.log.push_back(m);

    const double selection = has_valid ? *m.valid_error : m.train_error;
    if (result.best_epoch == 0 || selection < result.best_error) {
      result.best_epoch = epoch;
      result.best_error = selection;
      best = store.snapshot();
      since_best = 0;
    } else if (++since_best > config.patience) {
      result.stopped_early = true;
      break;
    }
  }
  store.restore(best);
  return result;
}

void write_metric_log(const TrainResult& r, std::ostream& out) {
  out << "epoch\ttrain_err\tvalid_err\n";
  char buf[64];
  for (const EpochMetrics& m : r.log) {
    out << m.epoch << '\t';
    std::snprintf(buf, sizeof buf, "%.6f", m.train_error);
    out << buf << '\t';
    if (m.valid_error) {
      std::snprintf(buf, sizeof buf, "%.6f", *m.valid_error);
      out << buf;
    } else {
      out << "NA";
    }
    out << '\n';
  }
}

json run_manifest(const TrainResult& r, const TrainConfig& c, const std::string& kind,
                  const std::string& checkpoint_path, const json& model_config) {
  json epochs = json::array();
  for (const EpochMetrics& m : r.log) {
    epochs.push_back({{"epoch", m.epoch},
                      {"train_loss", m.train_loss},
                      {"train_error", m.train_error},
                      {"valid_error", m.valid_error ? json(*m.valid_error) : json(nullptr)},
                      {"shuffle_digest", m.shuffle_digest}});
  }
  return {{"kind", kind},
          {"train_config", to_json(c)},
          {"model_config", model_config},
          {"seed", c.seed},
          {"checkpoint", checkpoint_path},
          {"best_epoch", r.best_epoch},
          {"best_error", r.best_error},
          {"stopped_early", r.stopped_early},
          {"epochs", epochs}};
}

}  // namespace gw::train
