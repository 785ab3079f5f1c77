#include "gw/ad/kernels.hpp"

#if defined(GW_HAVE_OPENMP)
#include <omp.h>
#endif

#include <algorithm>
#include <cstdint>

namespace gw::ad::kernels {

bool openmp_available() {
#if defined(GW_HAVE_OPENMP)
  return true;
#else
  return false;
#endif
}

namespace omp {
namespace {
constexpr std::size_t kBlock = 64;

std::size_t blocks(std::size_t n) { return (n + kBlock - 1) / kBlock; }
}  // namespace

// Work is split over (row, column-block) tiles; each output element still
// accumulates over the inner dimension in ascending order.
void matmul(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
            std::size_t n) {
  const std::size_t nb = blocks(n);
  const auto tiles = static_cast<std::int64_t>(m * nb);
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < tiles; ++t) {
    const std::size_t i = static_cast<std::size_t>(t) / nb;
    const std::size_t j0 = (static_cast<std::size_t>(t) % nb) * kBlock;
    const std::size_t j1 = std::min(n, j0 + kBlock);
    double* ci = c + i * n;
    for (std::size_t j = j0; j < j1; ++j) ci[j] = 0.0;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a[i * k + p];
      const double* bp = b + p * n;
      for (std::size_t j = j0; j < j1; ++j) ci[j] += aip * bp[j];
    }
  }
}

void matmul_grad_a(const double* dc, const double* b, double* da, std::size_t m, std::size_t k,
                   std::size_t n) {
  const auto cells = static_cast<std::int64_t>(m * k);
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < cells; ++t) {
    const std::size_t i = static_cast<std::size_t>(t) / k;
    const std::size_t p = static_cast<std::size_t>(t) % k;
    const double* dci = dc + i * n;
    const double* bp = b + p * n;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += dci[j] * bp[j];
    da[i * k + p] += acc;
  }
}

void matmul_grad_b(const double* a, const double* dc, double* db, std::size_t m, std::size_t k,
                   std::size_t n) {
  const std::size_t nb = blocks(n);
  const auto tiles = static_cast<std::int64_t>(k * nb);
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < tiles; ++t) {
    const std::size_t p = static_cast<std::size_t>(t) / nb;
    const std::size_t j0 = (static_cast<std::size_t>(t) % nb) * kBlock;
    const std::size_t j1 = std::min(n, j0 + kBlock);
    double* dbp = db + p * n;
    for (std::size_t i = 0; i < m; ++i) {
      const double aip = a[i * k + p];
      const double* dci = dc + i * n;
      for (std::size_t j = j0; j < j1; ++j) dbp[j] += aip * dci[j];
    }
  }
}

}  // namespace omp
}  // namespace gw::ad::kernels
