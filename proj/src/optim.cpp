#include "phylab/optim.hpp"

#include <cassert>
#include <cmath>

namespace phylab {

void SgdMomentum::step(const std::vector<ParamBlock>& blocks) {
  if (vel_.empty()) {
    vel_.resize(blocks.size());
    for (size_t i = 0; i < blocks.size(); ++i) vel_[i].assign(blocks[i].w->size(), 0.0);
  }
  assert(vel_.size() == blocks.size());
  for (size_t i = 0; i < blocks.size(); ++i) {
    auto& w = *blocks[i].w;
    auto& g = *blocks[i].g;
    auto& v = vel_[i];
    assert(v.size() == w.size());
    for (size_t j = 0; j < w.size(); ++j) {
      v[j] = mu_ * v[j] + g[j];
      w[j] -= lr * v[j];
    }
  }
}

void Adam::step(const std::vector<ParamBlock>& blocks) {
  if (m_.empty()) {
    m_.resize(blocks.size());
    v_.resize(blocks.size());
    for (size_t i = 0; i < blocks.size(); ++i) {
      m_[i].assign(blocks[i].w->size(), 0.0);
      v_[i].assign(blocks[i].w->size(), 0.0);
    }
  }
  assert(m_.size() == blocks.size());
  ++t_;
  const double c1 = 1.0 - std::pow(b1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2_, static_cast<double>(t_));
  for (size_t i = 0; i < blocks.size(); ++i) {
    auto& w = *blocks[i].w;
    auto& g = *blocks[i].g;
    assert(m_[i].size() == w.size());
    for (size_t j = 0; j < w.size(); ++j) {
      m_[i][j] = b1_ * m_[i][j] + (1.0 - b1_) * g[j];
      v_[i][j] = b2_ * v_[i][j] + (1.0 - b2_) * g[j] * g[j];
      const double mh = m_[i][j] / c1;
      const double vh = v_[i][j] / c2;
      w[j] -= lr * mh / (std::sqrt(vh) + eps_);
    }
  }
}

}  // namespace phylab
