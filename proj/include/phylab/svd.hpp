#ifndef PHYLAB_SVD_HPP
#define PHYLAB_SVD_HPP

#include <vector>

#include "phylab/cmat.hpp"

namespace phylab {

// h = U diag(s) V^* with U (rows x rows) and V (cols x cols) unitary and
// s the min(rows, cols) singular values sorted descending.
struct Svd {
  CMat u;
  std::vector<double> s;
  CMat v;
};

// One-sided complex Jacobi SVD: accurate and dependency-free for the small
// matrices used here (N <= 8).
Svd svd_channel(const CMat& h);

}  // namespace phylab

#endif  // PHYLAB_SVD_HPP
