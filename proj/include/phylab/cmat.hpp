#ifndef PHYLAB_CMAT_HPP
#define PHYLAB_CMAT_HPP

#include <cassert>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace phylab {

using cplx = std::complex<double>;

// Row-major complex matrix, used for MIMO channels and the SVD.
struct CMat {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<cplx> v;

  CMat() = default;
  CMat(size_t r, size_t c) : rows(r), cols(c), v(r * c) {}

  cplx& at(size_t r, size_t c) {
    assert(r < rows && c < cols);
    return v[r * cols + c];
  }
  cplx at(size_t r, size_t c) const {
    assert(r < rows && c < cols);
    return v[r * cols + c];
  }

  static CMat identity(size_t n) {
    CMat m(n, n);
    for (size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }

  CMat adjoint() const {
    CMat m(cols, rows);
    for (size_t r = 0; r < rows; ++r)
      for (size_t c = 0; c < cols; ++c) m.at(c, r) = std::conj(at(r, c));
    return m;
  }

  double fro_norm() const {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
  }
};

inline CMat mul(const CMat& a, const CMat& b) {
  assert(a.cols == b.rows);
  CMat c(a.rows, b.cols);
  for (size_t i = 0; i < a.rows; ++i)
    for (size_t k = 0; k < a.cols; ++k) {
      const cplx aik = a.at(i, k);
      if (aik == cplx{}) continue;
      for (size_t j = 0; j < b.cols; ++j) c.at(i, j) += aik * b.at(k, j);
    }
  return c;
}

// y = A x for a column vector x.
inline std::vector<cplx> matvec(const CMat& a, const std::vector<cplx>& x) {
  assert(a.cols == x.size());
  std::vector<cplx> y(a.rows);
  for (size_t i = 0; i < a.rows; ++i) {
    cplx s{};
    for (size_t j = 0; j < a.cols; ++j) s += a.at(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

}  // namespace phylab

#endif  // PHYLAB_CMAT_HPP
