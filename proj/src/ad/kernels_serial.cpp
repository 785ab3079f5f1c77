#include <atomic>

#include "gw/ad/kernels.hpp"

namespace gw::ad::kernels {

namespace serial {

void matmul(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
            std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = c + i * n;
    for (std::size_t j = 0; j < n; ++j) ci[j] = 0.0;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a[i * k + p];
      const double* bp = b + p * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += aip * bp[j];
    }
  }
}

void matmul_grad_a(const double* dc, const double* b, double* da, std::size_t m, std::size_t k,
                   std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* dci = dc + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double* bp = b + p * n;
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += dci[j] * bp[j];
      da[i * k + p] += acc;
    }
  }
}

void matmul_grad_b(const double* a, const double* dc, double* db, std::size_t m, std::size_t k,
                   std::size_t n) {
  for (std::size_t p = 0; p < k; ++p) {
    double* dbp = db + p * n;
    for (std::size_t i = 0; i < m; ++i) {
      const double aip = a[i * k + p];
      const double* dci = dc + i * n;
      for (std::size_t j = 0; j < n; ++j) dbp[j] += aip * dci[j];
    }
  }
}

}  // namespace serial

namespace {
std::atomic<Backend> g_backend{openmp_available() ? Backend::OpenMP : Backend::Serial};

bool use_parallel(std::size_t m, std::size_t k, std::size_t n) {
  return g_backend.load(std::memory_order_relaxed) == Backend::OpenMP &&
         m * k * n >= kParallelThreshold;
}
}  // namespace

void set_backend(Backend b) {
  g_backend.store(openmp_available() ? b : Backend::Serial, std::memory_order_relaxed);
}

Backend backend() { return g_backend.load(std::memory_order_relaxed); }

void matmul(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
            std::size_t n) {
  if (use_parallel(m, k, n)) {
    omp::matmul(a, b, c, m, k, n);
  } else {
    serial::matmul(a, b, c, m, k, n);
  }
}

void matmul_grad_a(const double* dc, const double* b, double* da, std::size_t m, std::size_t k,
                   std::size_t n) {
  if (use_parallel(m, k, n)) {
    omp::matmul_grad_a(dc, b, da, m, k, n);
  } else {
    serial::matmul_grad_a(dc, b, da, m, k, n);
  }
}

void matmul_grad_b(const double* a, const double* dc, double* db, std::size_t m, std::size_t k,
                   std::size_t n) {
  if (use_parallel(m, k, n)) {
    omp::matmul_grad_b(a, dc, db, m, k, n);
  } else {
    serial::matmul_grad_b(a, dc, db, m, k, n);
  }
}

}  // namespace gw::ad::kernels
