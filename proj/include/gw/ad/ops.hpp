#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gw/ad/graph.hpp"

namespace gw::ad {

// Operators throw DimensionError naming the operator on shape mismatch.

Var matmul(Var a, Var b);  // (m x k) * (k x n)
Var transpose(Var a);

// Same shapes, or b a single row broadcast over the rows of a (bias add).
Var add(Var a, Var b);
Var mul(Var a, Var b);  // element-wise, same shapes

// axis 0 stacks rows (equal column counts), axis 1 joins columns.
Var concat(std::span<const Var> parts, int axis = 1);
Var concat(std::initializer_list<Var> parts, int axis = 1);
Var slice(Var a, int axis, std::size_t begin, std::size_t length);

// Rows of a dense table addressed by id; gradients scatter into the rows.
Var embedding_lookup(Var table, std::span<const std::int32_t> ids);
// Same, reading straight from a parameter so only touched rows are updated.
Var embedding_lookup(Graph& g, Parameter& table, std::span<const std::int32_t> ids);

Var sigmoid(Var a);
Var tanh(Var a);
Var relu(Var a);
Var log(Var a);
Var softmax(Var a);  // row-wise
Var sum(Var a);      // all elements -> 1 x 1

// -log softmax(logits)[target] for a single row of logits.
Var cross_entropy(Var logits, std::size_t target);
// Sum of per-row cross entropies; targets[i] indexes row i.
Var cross_entropy(Var logits, std::span<const std::size_t> targets);

// Row softmax used by the operator. Terms of the normalizer are summed in
// ascending order so the result does not depend on the order of the inputs.
void softmax_row(std::span<const double> logits, std::span<double> out);
double log_sum_exp(std::span<const double> logits);

}  // namespace gw::ad
