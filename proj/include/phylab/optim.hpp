#ifndef PHYLAB_OPTIM_HPP
#define PHYLAB_OPTIM_HPP

#include <vector>

#include "phylab/layers.hpp"

namespace phylab {

// Applies one update from the accumulated gradients. State is keyed by block
// order, so always pass the same network's blocks.
class Optimizer {
 public:
  explicit Optimizer(double lr) : lr(lr) {}
  virtual ~Optimizer() = default;
  virtual void step(const std::vector<ParamBlock>& blocks) = 0;

  double lr;
};

class SgdMomentum : public Optimizer {
 public:
  explicit SgdMomentum(double lr, double momentum = 0.9)
      : Optimizer(lr), mu_(momentum) {}
  void step(const std::vector<ParamBlock>& blocks) override;

 private:
  double mu_;
  std::vector<std::vector<double>> vel_;
};

class Adam : public Optimizer {
 public:
  explicit Adam(double lr, double beta1 = 0.9, double beta2 = 0.999,
                double eps = 1e-8)
      : Optimizer(lr), b1_(beta1), b2_(beta2), eps_(eps) {}
  void step(const std::vector<ParamBlock>& blocks) override;

 private:
  double b1_, b2_, eps_;
  long t_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

}  // namespace phylab

#endif  // PHYLAB_OPTIM_HPP
