#pragma once

#include <cstddef>

// Dense matrix kernels behind the matmul operator. Row-major buffers:
// A is m x k, B is k x n, C is m x n. The serial versions are the reference;
// the OpenMP versions split the output across threads without changing the
// per-element summation order, so both produce bit-identical results.
namespace gw::ad::kernels {

namespace serial {
void matmul(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
            std::size_t n);
// dA += dC * B^T
void matmul_grad_a(const double* dc, const double* b, double* da, std::size_t m, std::size_t k,
                   std::size_t n);
// dB += A^T * dC
void matmul_grad_b(const double* a, const double* dc, double* db, std::size_t m, std::size_t k,
                   std::size_t n);
}  // namespace serial

namespace omp {
void matmul(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
            std::size_t n);
void matmul_grad_a(const double* dc, const double* b, double* da, std::size_t m, std::size_t k,
                   std::size_t n);
void matmul_grad_b(const double* a, const double* dc, double* db, std::size_t m, std::size_t k,
                   std::size_t n);
}  // namespace omp

enum class Backend { Serial, OpenMP };

bool openmp_available();
void set_backend(Backend b);
Backend backend();

// Products smaller than this many multiply-adds stay serial.
inline constexpr std::size_t kParallelThreshold = std::size_t{1} << 15;

void matmul(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
            std::size_t n);
void matmul_grad_a(const double* dc, const double* b, double* da, std::size_t m, std::size_t k,
                   std::size_t n);
void matmul_grad_b(const double* a, const double* dc, double* db, std::size_t m, std::size_t k,
                   std::size_t n);

}  // namespace gw::ad::kernels
