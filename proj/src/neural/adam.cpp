#include "hbn/neural/adam.hpp"

#include <cmath>
#include <string>

#include "hbn/core/errors.hpp"

namespace hbn::neural {

namespace {

double update_one(double g, double& m, double& v, long t, const AdamConfig& c) {
  m = c.beta1 * m + (1.0 - c.beta1) * g;
  v = c.beta2 * v + (1.0 - c.beta2) * g * g;
  double m_hat = m / (1.0 - std::pow(c.beta1, static_cast<double>(t)));
  double v_hat = v / (1.0 - std::pow(c.beta2, static_cast<double>(t)));
  return c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
}

}  // namespace

AdamState::AdamState(const DenseNet& net, AdamConfig cfg)
    : cfg_(cfg), m_(net.make_grad()), v_(net.make_grad()) {}

void AdamState::step(DenseNet& net, const GradSet& grad) {
  ++t_;
  for (std::size_t l = 0; l < net.layers().size(); ++l) {
    Layer& layer = net.layers()[l];
    for (std::size_t i = 0; i < layer.w.data.size(); ++i) {
      double g = grad.w[l].data[i];
      if (!std::isfinite(g))
        throw NumericError("non-finite gradient at layer " + std::to_string(l) +
                           " weights[" + std::to_string(i) + "]");
      double& p = layer.w.data[i];
      p -= cfg_.learning_rate * cfg_.weight_decay * p;
      p -= update_one(g, m_.w[l].data[i], v_.w[l].data[i], t_, cfg_);
    }
    for (std::size_t i = 0; i < layer.b.size(); ++i) {
      double g = grad.b[l][i];
      if (!std::isfinite(g))
        throw NumericError("non-finite gradient at layer " + std::to_string(l) +
                           " bias[" + std::to_string(i) + "]");
      double& p = layer.b[i];
      p -= cfg_.learning_rate * cfg_.weight_decay * p;
      p -= update_one(g, m_.b[l][i], v_.b[l][i], t_, cfg_);
    }
  }
}

double AdamScalar::step(double param, double grad) {
  if (!std::isfinite(grad)) throw NumericError("non-finite gradient for scalar parameter");
  ++t_;
  param -= cfg_.learning_rate * cfg_.weight_decay * param;
  return param - update_one(grad, m_, v_, t_, cfg_);
}

}  // namespace hbn::neural
