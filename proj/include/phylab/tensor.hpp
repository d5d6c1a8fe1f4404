#ifndef PHYLAB_TENSOR_HPP
#define PHYLAB_TENSOR_HPP

#include <cassert>
#include <cstddef>
#include <vector>

namespace phylab {

// Row-major 2-D array of doubles. Row = sample, column = feature.
struct Tensor {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<double> v;

  Tensor() = default;
  Tensor(size_t r, size_t c, double fill = 0.0) : rows(r), cols(c), v(r * c, fill) {}

  double& at(size_t r, size_t c) {
    assert(r < rows && c < cols);
    return v[r * cols + c];
  }
  double at(size_t r, size_t c) const {
    assert(r < rows && c < cols);
    return v[r * cols + c];
  }

  double* row(size_t r) {
    assert(r < rows);
    return v.data() + r * cols;
  }
  const double* row(size_t r) const {
    assert(r < rows);
    return v.data() + r * cols;
  }

  size_t size() const { return v.size(); }

  void fill(double x) { std::fill(v.begin(), v.end(), x); }
};

}  // namespace phylab

#endif  // PHYLAB_TENSOR_HPP
