#include "gw/ad/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gw/ad/kernels.hpp"
#include "gw/core/error.hpp"

namespace gw::ad {
namespace {

void require_matrix(const char* op, const Var& v) {
  if (v.value().rank() > 2) {
    throw DimensionError(op, "operand of shape " + to_string(v.shape()) + " is not a matrix");
  }
}

void require_same_graph(const char* op, const Var& a, const Var& b) {
  if (&a.graph() != &b.graph()) throw DimensionError(op, "operands belong to different graphs");
}

std::string shape_pair(const Var& a, const Var& b) {
  return to_string(a.shape()) + " vs " + to_string(b.shape());
}

template <class F>
Var unary(Var a, F&& forward, void (*backward)(std::span<const double> x, std::span<const double> y,
                                               std::span<const double> gy, std::span<double> gx)) {
  const Tensor& x = a.value();
  Tensor y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = forward(x[i]);
  const std::size_t ai = a.index();
  return a.graph().record(std::move(y), {a}, [ai, backward](Graph& g, std::size_t self) {
    if (!g.requires_grad(ai)) return;
    backward(g.value(ai).values(), g.value(self).values(), g.grad(self), g.grad(ai));
  });
}

double stable_sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

void softmax_row(std::span<const double> logits, std::span<double> out) {
  const double mx = *std::max_element(logits.begin(), logits.end());
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] = std::exp(logits[i] - mx);
  std::vector<double> terms(out.begin(), out.end());
  std::sort(terms.begin(), terms.end());
  double total = 0.0;
  for (double t : terms) total += t;
  for (double& v : out) v /= total;
}

double log_sum_exp(std::span<const double> logits) {
  const double mx = *std::max_element(logits.begin(), logits.end());
  if (std::isinf(mx)) return mx;
  std::vector<double> terms(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) terms[i] = std::exp(logits[i] - mx);
  std::sort(terms.begin(), terms.end());
  double total = 0.0;
  for (double t : terms) total += t;
  return mx + std::log(total);
}

Var matmul(Var a, Var b) {
  require_same_graph("matmul", a, b);
  require_matrix("matmul", a);
  require_matrix("matmul", b);
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  if (b.rows() != k) throw DimensionError("matmul", "inner dimensions differ: " + shape_pair(a, b));
  Tensor c({m, n});
  kernels::matmul(a.value().data(), b.value().data(), c.data(), m, k, n);
  const std::size_t ai = a.index(), bi = b.index();
  return a.graph().record(std::move(c), {a, b}, [ai, bi, m, k, n](Graph& g, std::size_t self) {
    const double* gc = g.grad(self).data();
    if (g.requires_grad(ai)) kernels::matmul_grad_a(gc, g.value(bi).data(), g.grad(ai).data(), m, k, n);
    if (g.requires_grad(bi)) kernels::matmul_grad_b(g.value(ai).data(), gc, g.grad(bi).data(), m, k, n);
  });
}

Var transpose(Var a) {
  require_matrix("transpose", a);
  const std::size_t r = a.rows(), c = a.cols();
  const Tensor& x = a.value();
  Tensor y({c, r});
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) y[j * r + i] = x[i * c + j];
  const std::size_t ai = a.index();
  return a.graph().record(std::move(y), {a}, [ai, r, c](Graph& g, std::size_t self) {
    if (!g.requires_grad(ai)) return;
    const auto& gy = g.grad(self);
    auto& gx = g.grad(ai);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) gx[i * c + j] += gy[j * r + i];
  });
}

Var add(Var a, Var b) {
  require_same_graph("add", a, b);
  require_matrix("add", a);
  require_matrix("add", b);
  const bool same = a.rows() == b.rows() && a.cols() == b.cols();
  const bool bias = !same && b.rows() == 1 && b.cols() == a.cols();
  if (!same && !bias) throw DimensionError("add", "incompatible shapes " + shape_pair(a, b));
  const Tensor& x = a.value();
  const Tensor& z = b.value();
  Tensor y(x.shape());
  const std::size_t cols = a.cols();
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + z[same ? i : i % cols];
  const std::size_t ai = a.index(), bi = b.index();
  return a.graph().record(std::move(y), {a, b}, [ai, bi, same, cols](Graph& g, std::size_t self) {
    const auto& gy = g.grad(self);
    if (g.requires_grad(ai)) {
      auto& ga = g.grad(ai);
      for (std::size_t i = 0; i < gy.size(); ++i) ga[i] += gy[i];
    }
    if (g.requires_grad(bi)) {
      auto& gb = g.grad(bi);
      for (std::size_t i = 0; i < gy.size(); ++i) gb[same ? i : i % cols] += gy[i];
    }
  });
}

Var mul(Var a, Var b) {
  require_same_graph("mul", a, b);
  require_matrix("mul", a);
  require_matrix("mul", b);
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("mul", "incompatible shapes " + shape_pair(a, b));
  }
  const Tensor& x = a.value();
  const Tensor& z = b.value();
  Tensor y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] * z[i];
  const std::size_t ai = a.index(), bi = b.index();
  return a.graph().record(std::move(y), {a, b}, [ai, bi](Graph& g, std::size_t self) {
    const auto& gy = g.grad(self);
    if (g.requires_grad(ai)) {
      auto& ga = g.grad(ai);
      const Tensor& z = g.value(bi);
      for (std::size_t i = 0; i < gy.size(); ++i) ga[i] += gy[i] * z[i];
    }
    if (g.requires_grad(bi)) {
      auto& gb = g.grad(bi);
      const Tensor& x = g.value(ai);
      for (std::size_t i = 0; i < gy.size(); ++i) gb[i] += gy[i] * x[i];
    }
  });
}

Var concat(std::span<const Var> parts, int axis) {
  if (parts.empty()) throw DimensionError("concat", "no operands");
  if (axis != 0 && axis != 1) throw DimensionError("concat", "axis must be 0 or 1");
  for (const auto& p : parts) {
    require_same_graph("concat", parts[0], p);
    require_matrix("concat", p);
  }
  std::vector<Var> inputs(parts.begin(), parts.end());
  std::vector<std::size_t> idx;
  std::size_t rows = 0, cols = 0;
  for (const auto& p : parts) {
    idx.push_back(p.index());
    if (axis == 1) {
      if (p.rows() != parts[0].rows()) {
        throw DimensionError("concat", "row counts differ: " + shape_pair(parts[0], p));
      }
      rows = p.rows();
      cols += p.cols();
    } else {
      if (p.cols() != parts[0].cols()) {
        throw DimensionError("concat", "column counts differ: " + shape_pair(parts[0], p));
      }
      rows += p.rows();
      cols = p.cols();
    }
  }
  Tensor y({rows, cols});
  if (axis == 1) {
    std::size_t offset = 0;
    for (const auto& p : parts) {
      const Tensor& x = p.value();
      const std::size_t pc = p.cols();
      for (std::size_t r = 0; r < rows; ++r)
        std::copy_n(x.data() + r * pc, pc, y.data() + r * cols + offset);
      offset += pc;
    }
  } else {
    std::size_t offset = 0;
    for (const auto& p : parts) {
      std::copy(p.value().values().begin(), p.value().values().end(), y.data() + offset);
      offset += p.value().size();
    }
  }
  return parts[0].graph().record(
      std::move(y), inputs, [idx, axis, rows, cols](Graph& g, std::size_t self) {
        const auto& gy = g.grad(self);
        std::size_t offset = 0;
        for (std::size_t i : idx) {
          const Tensor& x = g.value(i);
          const std::size_t pc = x.cols();
          if (g.requires_grad(i)) {
            auto& gx = g.grad(i);
            if (axis == 1) {
              for (std::size_t r = 0; r < rows; ++r)
                for (std::size_t c = 0; c < pc; ++c) gx[r * pc + c] += gy[r * cols + offset + c];
            } else {
              for (std::size_t k = 0; k < x.size(); ++k) gx[k] += gy[offset + k];
            }
          }
          offset += axis == 1 ? pc : x.size();
        }
      });
}

Var concat(std::initializer_list<Var> parts, int axis) {
  return concat(std::span<const Var>(parts.begin(), parts.size()), axis);
}

Var slice(Var a, int axis, std::size_t begin, std::size_t length) {
  require_matrix("slice", a);
  if (axis != 0 && axis != 1) throw DimensionError("slice", "axis must be 0 or 1");
  const std::size_t rows = a.rows(), cols = a.cols();
  const std::size_t extent = axis == 0 ? rows : cols;
  if (length == 0 || begin + length > extent) {
    throw DimensionError("slice", "range [" + std::to_string(begin) + ", " +
                                      std::to_string(begin + length) + ") outside " +
                                      to_string(a.shape()));
  }
  const Tensor& x = a.value();
  const std::size_t out_rows = axis == 0 ? length : rows;
  const std::size_t out_cols = axis == 0 ? cols : length;
  Tensor y({out_rows, out_cols});
  for (std::size_t r = 0; r < out_rows; ++r)
    for (std::size_t c = 0; c < out_cols; ++c)
      y[r * out_cols + c] = axis == 0 ? x[(begin + r) * cols + c] : x[r * cols + begin + c];
  const std::size_t ai = a.index();
  return a.graph().record(
      std::move(y), {a}, [ai, axis, begin, cols, out_rows, out_cols](Graph& g, std::size_t self) {
        if (!g.requires_grad(ai)) return;
        const auto& gy = g.grad(self);
        auto& gx = g.grad(ai);
        for (std::size_t r = 0; r < out_rows; ++r)
          for (std::size_t c = 0; c < out_cols; ++c) {
            const std::size_t src = axis == 0 ? (begin + r) * cols + c : r * cols + begin + c;
            gx[src] += gy[r * out_cols + c];
          }
      });
}

Var embedding_lookup(Var table, std::span<const std::int32_t> ids) {
  require_matrix("embedding_lookup", table);
  const std::size_t rows = table.rows(), width = table.cols();
  if (ids.empty()) throw DimensionError("embedding_lookup", "no ids");
  std::vector<std::size_t> rows_used;
  for (auto id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= rows) {
      throw DimensionError("embedding_lookup", "id " + std::to_string(id) + " outside table of " +
                                                   std::to_string(rows) + " rows");
    }
    rows_used.push_back(static_cast<std::size_t>(id));
  }
  const Tensor& t = table.value();
  Tensor y({ids.size(), width});
  for (std::size_t r = 0; r < rows_used.size(); ++r)
    std::copy_n(t.data() + rows_used[r] * width, width, y.data() + r * width);
  const std::size_t ti = table.index();
  return table.graph().record(std::move(y), {table},
                              [ti, rows_used, width](Graph& g, std::size_t self) {
                                if (!g.requires_grad(ti)) return;
                                const auto& gy = g.grad(self);
                                auto& gt = g.grad(ti);
                                for (std::size_t r = 0; r < rows_used.size(); ++r)
                                  for (std::size_t c = 0; c < width; ++c)
                                    gt[rows_used[r] * width + c] += gy[r * width + c];
                              });
}

Var embedding_lookup(Graph& g, Parameter& table, std::span<const std::int32_t> ids) {
  const Tensor& t = table.value;
  if (t.rank() != 2) throw DimensionError("embedding_lookup", "table must be a matrix");
  const std::size_t rows = t.rows(), width = t.cols();
  if (ids.empty()) throw DimensionError("embedding_lookup", "no ids");
  std::vector<std::size_t> rows_used;
  for (auto id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= rows) {
      throw DimensionError("embedding_lookup", "id " + std::to_string(id) + " outside table '" +
                                                   table.name + "' of " + std::to_string(rows) +
                                                   " rows");
    }
    rows_used.push_back(static_cast<std::size_t>(id));
  }
  Tensor y({ids.size(), width});
  for (std::size_t r = 0; r < rows_used.size(); ++r)
    std::copy_n(t.data() + rows_used[r] * width, width, y.data() + r * width);
  Parameter* p = &table;
  return g.record_leaf(std::move(y), [p, rows_used, width](Graph& gr, std::size_t self) {
    if (p->grad.shape() != p->value.shape()) p->grad = Tensor(p->value.shape());
    const auto& gy = gr.grad(self);
    for (std::size_t r = 0; r < rows_used.size(); ++r)
      for (std::size_t c = 0; c < width; ++c) p->grad[rows_used[r] * width + c] += gy[r * width + c];
  });
}

Var sigmoid(Var a) {
  return unary(a, stable_sigmoid, [](auto, auto y, auto gy, auto gx) {
    for (std::size_t i = 0; i < y.size(); ++i) gx[i] += gy[i] * y[i] * (1.0 - y[i]);
  });
}

Var tanh(Var a) {
  return unary(a, [](double x) { return std::tanh(x); }, [](auto, auto y, auto gy, auto gx) {
    for (std::size_t i = 0; i < y.size(); ++i) gx[i] += gy[i] * (1.0 - y[i] * y[i]);
  });
}

Var relu(Var a) {
  return unary(a, [](double x) { return x > 0 ? x : 0.0; }, [](auto x, auto, auto gy, auto gx) {
    for (std::size_t i = 0; i < x.size(); ++i) gx[i] += x[i] > 0 ? gy[i] : 0.0;
  });
}

Var log(Var a) {
  return unary(a, [](double x) { return std::log(x); }, [](auto x, auto, auto gy, auto gx) {
    for (std::size_t i = 0; i < x.size(); ++i) gx[i] += gy[i] / x[i];
  });
}

Var softmax(Var a) {
  require_matrix("softmax", a);
  const std::size_t rows = a.rows(), cols = a.cols();
  const Tensor& x = a.value();
  Tensor y(x.shape());
  for (std::size_t r = 0; r < rows; ++r) {
    softmax_row(x.values().subspan(r * cols, cols), y.values().subspan(r * cols, cols));
  }
  const std::size_t ai = a.index();
  return a.graph().record(std::move(y), {a}, [ai, rows, cols](Graph& g, std::size_t self) {
    if (!g.requires_grad(ai)) return;
    const Tensor& y = g.value(self);
    const auto& gy = g.grad(self);
    auto& gx = g.grad(ai);
    for (std::size_t r = 0; r < rows; ++r) {
      double dot = 0.0;
      for (std::size_t c = 0; c < cols; ++c) dot += gy[r * cols + c] * y[r * cols + c];
      for (std::size_t c = 0; c < cols; ++c) {
        gx[r * cols + c] += y[r * cols + c] * (gy[r * cols + c] - dot);
      }
    }
  });
}

Var sum(Var a) {
  const Tensor& x = a.value();
  double total = 0.0;
  for (double v : x.values()) total += v;
  const std::size_t ai = a.index();
  return a.graph().record(Tensor::scalar(total), {a}, [ai](Graph& g, std::size_t self) {
    if (!g.requires_grad(ai)) return;
    const double gy = g.grad(self)[0];
    for (double& v : g.grad(ai)) v += gy;
  });
}

Var cross_entropy(Var logits, std::size_t target) {
  require_matrix("cross_entropy", logits);
  if (logits.rows() != 1) {
    throw DimensionError("cross_entropy", "expected a single row, got " + to_string(logits.shape()));
  }
  const std::size_t t = target;
  return cross_entropy(logits, std::span<const std::size_t>(&t, 1));
}

Var cross_entropy(Var logits, std::span<const std::size_t> targets) {
  require_matrix("cross_entropy", logits);
  const std::size_t rows = logits.rows(), cols = logits.cols();
  if (targets.size() != rows) {
    throw DimensionError("cross_entropy", std::to_string(targets.size()) + " targets for " +
                                              std::to_string(rows) + " rows");
  }
  for (std::size_t t : targets) {
    if (t >= cols) {
      throw DimensionError("cross_entropy", "target " + std::to_string(t) + " outside " +
                                                std::to_string(cols) + " classes");
    }
  }
  const Tensor& x = logits.value();
  double loss = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    auto row = x.values().subspan(r * cols, cols);
    loss += log_sum_exp(row) - row[targets[r]];
  }
  std::vector<std::size_t> tg(targets.begin(), targets.end());
  const std::size_t li = logits.index();
  return logits.graph().record(
      Tensor::scalar(loss), {logits}, [li, tg, rows, cols](Graph& g, std::size_t self) {
        if (!g.requires_grad(li)) return;
        const double gy = g.grad(self)[0];
        const Tensor& x = g.value(li);
        auto& gx = g.grad(li);
        std::vector<double> p(cols);
        for (std::size_t r = 0; r < rows; ++r) {
          softmax_row(x.values().subspan(r * cols, cols), p);
          for (std::size_t c = 0; c < cols; ++c) {
            gx[r * cols + c] += gy * (p[c] - (c == tg[r] ? 1.0 : 0.0));
          }
        }
      });
}

}  // namespace gw::ad
