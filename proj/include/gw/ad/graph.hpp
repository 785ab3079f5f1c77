#pragma once

#include <cstddef>
#include <functional>
#include <unordered_map>
#include <vector>

#include "gw/ad/parameters.hpp"
#include "gw/ad/tensor.hpp"

namespace gw::ad {

class Graph;

// Handle to a node of a Graph. Cheap to copy; valid while the graph lives.
class Var {
 public:
  Var() = default;

  Graph& graph() const { return *graph_; }
  std::size_t index() const { return index_; }
  bool valid() const { return graph_ != nullptr; }

  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
  double item() const;  // value of a single-element tensor

 private:
  friend class Graph;
  Var(Graph* g, std::size_t i) : graph_(g), index_(i) {}

  Graph* graph_ = nullptr;
  std::size_t index_ = 0;
};

// Tape of recorded operations. Nodes are appended in evaluation order, which
// is a topological order, so backward() is a single reverse sweep.
class Graph {
 public:
  using BackwardFn = std::function<void(Graph&, std::size_t self)>;

  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  Var constant(Tensor value);
  // One node per parameter per graph; gradients flow into Parameter::grad.
  Var parameter(Parameter& p);

  // Used by operator implementations. The node requires a gradient when any
  // input does; fn is dropped otherwise.
  Var record(Tensor value, std::initializer_list<Var> inputs, BackwardFn fn);
  Var record(Tensor value, const std::vector<Var>& inputs, BackwardFn fn);
  // A node whose gradient is consumed directly by fn (e.g. sparse lookups).
  Var record_leaf(Tensor value, BackwardFn fn);

  // Reverse-mode sweep from a single-element loss. Parameter gradients
  // accumulate across calls until zeroed.
  void backward(Var loss, double seed = 1.0);

  const Tensor& value(std::size_t i) const {
    const Node& n = nodes_[i];
    return n.param ? n.param->value : n.value;
  }
  bool requires_grad(std::size_t i) const { return nodes_[i].requires_grad; }
  // Gradient buffer of node i, allocated (zeroed) on first access.
  std::vector<double>& grad(std::size_t i);
  bool has_grad(std::size_t i) const { return !nodes_[i].grad.empty(); }

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;  // unused for parameter nodes, which read Parameter::value
    std::vector<double> grad;
    BackwardFn backward;
    Parameter* param = nullptr;
    bool requires_grad = false;
  };

  Var push(Node node);

  std::vector<Node> nodes_;
  std::unordered_map<const Parameter*, std::size_t> param_nodes_;
};

}  // namespace gw::ad
