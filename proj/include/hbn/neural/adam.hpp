#pragma once

#include "hbn/neural/dense_net.hpp"

namespace hbn::neural {

struct AdamConfig {
  double learning_rate = 1e-2;
  double weight_decay = 1e-3;  // decoupled: applied as lr * wd * param
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with decoupled weight decay over a DenseNet's parameters.
class AdamState {
 public:
  AdamState() = default;
  AdamState(const DenseNet& net, AdamConfig cfg);

  // One bias-corrected update. A non-finite gradient aborts with a
  // NumericError naming the parameter.
  void step(DenseNet& net, const GradSet& grad);

  long step_count() const { return t_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  AdamConfig cfg_;
  long t_ = 0;
  GradSet m_, v_;
};

// Same update rule for a single scalar parameter (CPT logits, priors).
class AdamScalar {
 public:
  AdamScalar() = default;
  explicit AdamScalar(AdamConfig cfg) : cfg_(cfg) {}

  double step(double param, double grad);

 private:
  AdamConfig cfg_;
  long t_ = 0;
  double m_ = 0.0, v_ = 0.0;
};

}  // namespace hbn::neural
