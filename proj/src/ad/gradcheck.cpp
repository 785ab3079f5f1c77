#include "gw/ad/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "gw/core/error.hpp"

namespace gw::ad {

namespace {

double evaluate(const ScalarFn& f) {
  Graph g;
  const double v = f(g).item();
  if (!std::isfinite(v)) throw NumericError("gradcheck: function value is not finite");
  return v;
}

}  // namespace

GradcheckResult gradcheck(const ScalarFn& f, std::span<Parameter* const> params, double epsilon) {
  for (Parameter* p : params) {
    p->grad = Tensor(p->value.shape());
  }
  {
    Graph g;
    Var loss = f(g);
    if (!std::isfinite(loss.item())) throw NumericError("gradcheck: function value is not finite");
    g.backward(loss);
  }
  GradcheckResult r;
  for (Parameter* p : params) {
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      const double a = p->grad[i];
      if (!std::isfinite(a)) throw NumericError("gradcheck: non-finite gradient in " + p->name);
      const double saved = p->value[i];
      p->value[i] = saved + epsilon;
      const double up = evaluate(f);
      p->value[i] = saved - epsilon;
      const double down = evaluate(f);
      p->value[i] = saved;
      const double n = (up - down) / (2.0 * epsilon);
      const double rel = std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-8});
      ++r.coordinates;
      if (rel > r.max_rel_error || r.coordinates == 1) {
        r.max_rel_error = rel;
        r.worst_parameter = p->name;
        r.worst_index = i;
        r.worst_analytic = a;
        r.worst_numeric = n;
      }
    }
  }
  return r;
}

}  // namespace gw::ad
