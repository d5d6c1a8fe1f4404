#include "phylab/svd.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

namespace phylab {

namespace {

// <col p, col q> = sum_i conj(a_ip) a_iq
cplx col_dot(const CMat& a, size_t p, size_t q) {
  cplx s{};
  for (size_t i = 0; i < a.rows; ++i) s += std::conj(a.at(i, p)) * a.at(i, q);
  return s;
}

void scale_col(CMat& a, size_t j, cplx f) {
  for (size_t i = 0; i < a.rows; ++i) a.at(i, j) *= f;
}

void rotate_cols(CMat& a, size_t p, size_t q, double c, double s) {
  for (size_t i = 0; i < a.rows; ++i) {
    const cplx ap = a.at(i, p), aq = a.at(i, q);
    a.at(i, p) = c * ap - s * aq;
    a.at(i, q) = s * ap + c * aq;
  }
}

// Fill columns [have, m) of u with an orthonormal completion, greedily
// taking the basis vector with the largest residual (norm >= 1/sqrt(m), so
// this always succeeds).
void complete_basis(CMat& u, size_t have) {
  const size_t m = u.rows;
  for (size_t next = have; next < m; ++next) {
    std::vector<cplx> best;
    double best_norm = -1.0;
    for (size_t k = 0; k < m; ++k) {
      std::vector<cplx> v(m);
      v[k] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (size_t j = 0; j < next; ++j) {
          cplx d{};
          for (size_t i = 0; i < m; ++i) d += std::conj(u.at(i, j)) * v[i];
          for (size_t i = 0; i < m; ++i) v[i] -= d * u.at(i, j);
        }
      }
      double nrm = 0.0;
      for (const auto& z : v) nrm += std::norm(z);
      nrm = std::sqrt(nrm);
      if (nrm > best_norm) {
        best_norm = nrm;
        best = std::move(v);
      }
    }
    assert(best_norm > 1e-6);
    for (size_t i = 0; i < m; ++i) u.at(i, next) = best[i] / best_norm;
  }
}

}  // namespace

Svd svd_channel(const CMat& h) {
  if (h.rows < h.cols) {
    Svd t = svd_channel(h.adjoint());
    return {std::move(t.v), std::move(t.s), std::move(t.u)};
  }
  const size_t m = h.rows, n = h.cols;
  CMat a = h;
  CMat v = CMat::identity(n);

  constexpr double kTol = 1e-13;
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool changed = false;
    for (size_t p = 0; p + 1 < n; ++p) {
      for (size_t q = p + 1; q < n; ++q) {
        const double alpha = std::real(col_dot(a, p, p));
        const double beta = std::real(col_dot(a, q, q));
        const cplx gamma = col_dot(a, p, q);
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= kTol * std::sqrt(alpha * beta)) continue;
        changed = true;
        // make the cross term real positive, then a real Jacobi rotation
        const cplx phase = std::conj(gamma) / g;
        scale_col(a, q, phase);
        scale_col(v, q, phase);
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t =
            (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        rotate_cols(a, p, q, c, c * t);
        rotate_cols(v, p, q, c, c * t);
      }
    }
    if (!changed) break;
  }

  std::vector<double> sigma(n);
  for (size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(std::real(col_dot(a, j, j)));

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t i, size_t j) { return sigma[i] > sigma[j]; });

  Svd out;
  out.u = CMat(m, m);
  out.v = CMat(n, n);
  out.s.resize(n);
  const double smax = sigma[order[0]];
  const double cut = smax * 1e-12;
  size_t have = 0;
  for (size_t j = 0; j < n; ++j) {
    const size_t src = order[j];
    out.s[j] = sigma[src];
    for (size_t i = 0; i < n; ++i) out.v.at(i, j) = v.at(i, src);
    if (sigma[src] > cut && sigma[src] > 0.0) {
      for (size_t i = 0; i < m; ++i) out.u.at(i, j) = a.at(i, src) / sigma[src];
      ++have;
    }
  }
  complete_basis(out.u, have);
  return out;
}

}  // namespace phylab
