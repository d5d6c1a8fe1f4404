#include "phylab/losses.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace phylab {

namespace {
constexpr double kProbFloor = 1e-12;
}

LossGrad softmax_cross_entropy(const Tensor& probs, const std::vector<int>& labels) {
  assert(probs.rows == labels.size());
  const double n = static_cast<double>(probs.rows);
  double loss = 0.0;
  Tensor grad(probs.rows, probs.cols);
  for (size_t b = 0; b < probs.rows; ++b) {
    const auto lab = static_cast<size_t>(labels[b]);
    assert(lab < probs.cols);
    loss -= std::log(std::max(probs.at(b, lab), kProbFloor));
    for (size_t c = 0; c < probs.cols; ++c)
      grad.at(b, c) = (probs.at(b, c) - (c == lab ? 1.0 : 0.0)) / n;
  }
  return {loss / n, std::move(grad)};
}

std::vector<double> per_sample_ce(const Tensor& probs, const std::vector<int>& labels) {
  assert(probs.rows == labels.size());
  std::vector<double> out(probs.rows);
  for (size_t b = 0; b < probs.rows; ++b) {
    const auto lab = static_cast<size_t>(labels[b]);
    assert(lab < probs.cols);
    out[b] = -std::log(std::max(probs.at(b, lab), kProbFloor));
  }
  return out;
}

LossGrad bce_disc_real(const Tensor& p) {
  assert(p.cols == 1);
  const double n = static_cast<double>(p.rows);
  double loss = 0.0;
  Tensor grad(p.rows, 1);
  for (size_t b = 0; b < p.rows; ++b) {
    loss -= std::log(std::max(p.at(b, 0), kProbFloor));
    grad.at(b, 0) = (p.at(b, 0) - 1.0) / n;
  }
  return {loss / n, std::move(grad)};
}

LossGrad bce_disc_fake(const Tensor& p) {
  assert(p.cols == 1);
  const double n = static_cast<double>(p.rows);
  double loss = 0.0;
  Tensor grad(p.rows, 1);
  for (size_t b = 0; b < p.rows; ++b) {
    loss -= std::log(std::max(1.0 - p.at(b, 0), kProbFloor));
    grad.at(b, 0) = p.at(b, 0) / n;
  }
  return {loss / n, std::move(grad)};
}

LossGrad gan_gen_minimax(const Tensor& p_fake) {
  assert(p_fake.cols == 1);
  const double n = static_cast<double>(p_fake.rows);
  double loss = 0.0;
  Tensor grad(p_fake.rows, 1);
  for (size_t b = 0; b < p_fake.rows; ++b) {
    loss += std::log(std::max(1.0 - p_fake.at(b, 0), kProbFloor));
    grad.at(b, 0) = -p_fake.at(b, 0) / n;
  }
  return {loss / n, std::move(grad)};
}

}  // namespace phylab
