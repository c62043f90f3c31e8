#include "emscat/dense.hpp"

#include <cmath>
#include <stdexcept>

extern "C" {
void zgetrf_(const int* m, const int* n, void* a, const int* lda, int* ipiv, int* info);
void zgetrs_(const char* trans, const int* n, const int* nrhs, const void* a, const int* lda,
             const int* ipiv, void* b, const int* ldb, int* info);
}

namespace emscat {

std::vector<Complex> ZMatrix::apply(const std::vector<Complex>& x) const {
  if (static_cast<int>(x.size()) != cols) throw std::invalid_argument("ZMatrix::apply: size");
  std::vector<Complex> y(rows, Complex{});
  for (int j = 0; j < cols; ++j) {
    Complex xj = x[j];
    if (xj == Complex{}) continue;
    const Complex* col = a.data() + static_cast<std::size_t>(j) * rows;
    for (int i = 0; i < rows; ++i) y[i] += col[i] * xj;
  }
  return y;
}

ZMatrix ZMatrix::transposed() const {
  ZMatrix t(cols, rows);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) t(j, i) = (*this)(i, j);
  return t;
}

Real frobenius_norm(const ZMatrix& m) {
  Real s = 0;
  for (const Complex& v : m.a) s += std::norm(v);
  return std::sqrt(s);
}

LuFactor::LuFactor(ZMatrix m) : lu_(std::move(m)) {
  if (lu_.rows != lu_.cols) throw std::invalid_argument("LuFactor: matrix must be square");
  ipiv_.resize(lu_.rows);
  int info = 0;
  zgetrf_(&lu_.rows, &lu_.cols, lu_.a.data(), &lu_.rows, ipiv_.data(), &info);
  if (info != 0)
    throw std::runtime_error("LU factorization failed (singular matrix?), info=" +
                             std::to_string(info));
}

std::vector<Complex> LuFactor::solve(std::vector<Complex> rhs, bool transpose) const {
  if (static_cast<int>(rhs.size()) % lu_.rows != 0)
    throw std::invalid_argument("LuFactor::solve: rhs size");
  char trans = transpose ? 'T' : 'N';
  int nrhs = static_cast<int>(rhs.size()) / lu_.rows;
  int info = 0;
  zgetrs_(&trans, &lu_.rows, &nrhs, lu_.a.data(), &lu_.rows, ipiv_.data(), rhs.data(), &lu_.rows,
          &info);
  if (info != 0) throw std::runtime_error("LU solve failed, info=" + std::to_string(info));
  return rhs;
}

}  // namespace emscat
