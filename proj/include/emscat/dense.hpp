#ifndef EMSCAT_DENSE_HPP
#define EMSCAT_DENSE_HPP

#include <vector>

#include "emscat/types.hpp"

namespace emscat {

// Column-major dense complex matrix (LAPACK layout).
struct ZMatrix {
  int rows = 0, cols = 0;
  std::vector<Complex> a;

  ZMatrix() = default;
  ZMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}
  Complex& operator()(int i, int j) { return a[static_cast<std::size_t>(j) * rows + i]; }
  Complex operator()(int i, int j) const { return a[static_cast<std::size_t>(j) * rows + i]; }

  std::vector<Complex> apply(const std::vector<Complex>& x) const;
  ZMatrix transposed() const;
};

Real frobenius_norm(const ZMatrix& m);

// LU factorization with partial pivoting (zgetrf); solves support the
// transposed system so one factorization serves both directions.
class LuFactor {
 public:
  LuFactor() = default;
  explicit LuFactor(ZMatrix m);

  std::vector<Complex> solve(std::vector<Complex> rhs, bool transpose = false) const;
  int size() const { return lu_.rows; }
  bool valid() const { return lu_.rows > 0; }

 private:
  ZMatrix lu_;
  std::vector<int> ipiv_;
};

}  // namespace emscat

#endif
