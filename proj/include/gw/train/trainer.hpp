#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gw/ad/adam.hpp"
#include "gw/ad/graph.hpp"

namespace gw::train {

struct ErrorCount {
  std::size_t wrong = 0;
  std::size_t total = 0;

  double rate() const { return total ? static_cast<double>(wrong) / static_cast<double>(total) : 0.0; }
  ErrorCount& operator+=(const ErrorCount& o) {
    wrong += o.wrong;
    total += o.total;
    return *this;
  }
};

enum class Part { Train, Valid };

// A model bound to its training and validation examples.
class TrainTask {
 public:
  virtual ~TrainTask() = default;
  virtual std::string kind() const = 0;
  virtual ad::ParameterStore& parameters() = 0;
  virtual std::size_t size(Part part) const = 0;
  // Loss of one training example on a fresh graph.
  virtual ad::Var loss(ad::Graph& g, std::size_t index) const = 0;
  // Prediction errors over one example.
  virtual ErrorCount errors(Part part, std::size_t index) const = 0;
};

// Sums errors over all examples of part, in parallel when OpenMP is on.
ErrorCount evaluate(const TrainTask& task, Part part);

struct TrainConfig {
  std::size_t max_epochs = 15;
  std::size_t batch_size = 64;
  std::size_t patience = 3;
  ad::AdamConfig adam;
  std::uint64_t seed = 0;
};

nlohmann::json to_json(const TrainConfig& c);
void validate(const TrainConfig& c);

struct EpochMetrics {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;  // mean per example
  double train_error = 0.0;
  std::optional<double> valid_error;
  std::uint64_t shuffle_digest = 0;
};

struct TrainResult {
  std::vector<EpochMetrics> log;
  std::size_t best_epoch = 0;
  double best_error = 0.0;  // validation error, or training error without a validation part
  bool stopped_early = false;
};

// Mini-batch Adam with per-epoch seeded shuffling. After every epoch the
// selection error is computed; the best parameters are restored at the
// end. Training stops once more than patience epochs pass without a strict
// improvement. Throws InsufficientData on an empty training part.
TrainResult train(TrainTask& task, const TrainConfig& config);

// epoch, train_err, valid_err (tab separated, with header).
void write_metric_log(const TrainResult& r, std::ostream& out);

nlohmann::json run_manifest(const TrainResult& r, const TrainConfig& c, const std::string& kind,
                            const std::string& checkpoint_path,
                            const nlohmann::json& model_config);

// FNV-1a over the example order.
std::uint64_t order_digest(const std::vector<std::size_t>& order);

}  // namespace gw::train
