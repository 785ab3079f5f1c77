#include "gw/ad/graph.hpp"

#include <algorithm>

#include "gw/core/error.hpp"

namespace gw::ad {

const Tensor& Var::value() const { return graph_->value(index_); }

double Var::item() const {
  const Tensor& v = value();
  if (v.size() != 1) throw DimensionError("item", "tensor of shape " + to_string(v.shape()));
  return v[0];
}

Var Graph::push(Node node) {
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Var Graph::constant(Tensor value) {
  Node n;
  n.value = std::move(value);
  return push(std::move(n));
}

Var Graph::parameter(Parameter& p) {
  if (auto it = param_nodes_.find(&p); it != param_nodes_.end()) return Var(this, it->second);
  Node n;
  n.param = &p;
  n.requires_grad = true;
  Var v = push(std::move(n));
  param_nodes_.emplace(&p, v.index());
  return v;
}

Var Graph::record(Tensor value, std::initializer_list<Var> inputs, BackwardFn fn) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = std::any_of(inputs.begin(), inputs.end(),
                                [this](const Var& v) { return nodes_[v.index()].requires_grad; });
  if (n.requires_grad) n.backward = std::move(fn);
  return push(std::move(n));
}

Var Graph::record(Tensor value, const std::vector<Var>& inputs, BackwardFn fn) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = std::any_of(inputs.begin(), inputs.end(),
                                [this](const Var& v) { return nodes_[v.index()].requires_grad; });
  if (n.requires_grad) n.backward = std::move(fn);
  return push(std::move(n));
}

Var Graph::record_leaf(Tensor value, BackwardFn fn) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = true;
  n.backward = std::move(fn);
  return push(std::move(n));
}

std::vector<double>& Graph::grad(std::size_t i) {
  Node& n = nodes_[i];
  if (n.grad.empty()) n.grad.assign(value(i).size(), 0.0);
  return n.grad;
}

void Graph::backward(Var loss, double seed) {
  if (loss.graph_ != this) throw DimensionError("backward", "loss belongs to another graph");
  if (value(loss.index()).size() != 1) {
    throw DimensionError("backward", "loss must be a scalar, got shape " +
                                         to_string(value(loss.index()).shape()));
  }
  for (auto& n : nodes_) n.grad.clear();
  if (!nodes_[loss.index()].requires_grad) return;
  grad(loss.index())[0] = seed;
  for (std::size_t i = loss.index() + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (n.grad.empty()) continue;
    if (n.backward) n.backward(*this, i);
    if (n.param) {
      auto& dst = n.param->grad;
      if (dst.shape() != n.param->value.shape()) dst = Tensor(n.param->value.shape());
      for (std::size_t k = 0; k < n.grad.size(); ++k) dst[k] += n.grad[k];
    }
  }
}

}  // namespace gw::ad
