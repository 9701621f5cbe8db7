#include "hbn/neural/dense_net.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hbn/core/kernels.hpp"

namespace hbn::neural {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void apply_activation(Activation act, std::span<const double> z,
                      std::span<double> out) {
  switch (act) {
    case Activation::Identity:
      std::copy(z.begin(), z.end(), out.begin());
      break;
    case Activation::Relu:
      for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] > 0.0 ? z[i] : 0.0;
      break;
    case Activation::Sigmoid:
      for (std::size_t i = 0; i < z.size(); ++i) out[i] = sigmoid(z[i]);
      break;
  }
}

double activation_derivative(Activation act, double z) {
  switch (act) {
    case Activation::Identity:
      return 1.0;
    case Activation::Relu:
      return z > 0.0 ? 1.0 : 0.0;
    case Activation::Sigmoid: {
      double s = sigmoid(z);
      return s * (1.0 - s);
    }
  }
  return 0.0;
}

void check_input_dim(const DenseNet& net, std::size_t got) {
  if (got != net.input_dim())
    throw std::invalid_argument("input size " + std::to_string(got) +
                                ", expected " + std::to_string(net.input_dim()));
}

}  // namespace

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::Identity: return "identity";
    case Activation::Relu: return "relu";
    case Activation::Sigmoid: return "sigmoid";
  }
  return "identity";
}

Activation activation_from_name(const std::string& name) {
  if (name == "identity") return Activation::Identity;
  if (name == "relu") return Activation::Relu;
  if (name == "sigmoid") return Activation::Sigmoid;
  throw std::invalid_argument("unknown activation " + name);
}

void GradSet::zero() {
  for (auto& m : w) m.fill(0.0);
  for (auto& v : b) std::fill(v.begin(), v.end(), 0.0);
}

void GradSet::add(const GradSet& other) {
  for (std::size_t l = 0; l < w.size(); ++l) {
    for (std::size_t i = 0; i < w[l].data.size(); ++i)
      w[l].data[i] += other.w[l].data[i];
    for (std::size_t i = 0; i < b[l].size(); ++i) b[l][i] += other.b[l][i];
  }
}

void GradSet::scale(double s) {
  for (auto& m : w)
    for (double& x : m.data) x *= s;
  for (auto& v : b)
    for (double& x : v) x *= s;
}

DenseNet::DenseNet(const std::vector<LayerSpec>& spec, Rng& init) {
  if (spec.empty()) throw std::invalid_argument("net needs at least one layer");
  for (std::size_t l = 0; l + 1 < spec.size(); ++l)
    if (spec[l].out != spec[l + 1].in)
      throw std::invalid_argument("layer dimensions do not chain at layer " +
                                  std::to_string(l));
  for (const auto& s : spec)
    if (s.dropout < 0.0 || s.dropout >= 1.0)
      throw std::invalid_argument("dropout rate must lie in [0,1)");

  for (const auto& s : spec) {
    Layer layer;
    layer.w = Matrix(s.out, s.in);
    layer.b = Vec(s.out, 0.0);
    layer.act = s.act;
    layer.dropout = s.dropout;
    double limit = std::sqrt(6.0 / static_cast<double>(s.in + s.out));
    for (double& x : layer.w.data) x = init.uniform(-limit, limit);
    layers_.push_back(std::move(layer));
  }
}

GradSet DenseNet::make_grad() const {
  GradSet g;
  for (const auto& l : layers_) {
    g.w.emplace_back(l.w.rows, l.w.cols);
    g.b.emplace_back(l.b.size(), 0.0);
  }
  return g;
}

double forward(const DenseNet& net, std::span<const double> x) {
  check_input_dim(net, x.size());
  Vec a(x.begin(), x.end());
  Vec z;
  for (const auto& layer : net.layers()) {
    z.resize(layer.w.rows);
    kernels::affine(layer.w, a, layer.b, z);
    a.resize(z.size());
    apply_activation(layer.act, z, a);
  }
  return a[0];
}

double forward_train(const DenseNet& net, std::span<const double> x,
                     Rng& dropout_rng, ForwardTrace& trace) {
  check_input_dim(net, x.size());
  const std::size_t n_layers = net.layers().size();
  trace.inputs.assign(n_layers, {});
  trace.pre.assign(n_layers, {});
  trace.mask.assign(n_layers, {});

  Vec a(x.begin(), x.end());
  for (std::size_t l = 0; l < n_layers; ++l) {
    const Layer& layer = net.layers()[l];
    if (layer.dropout > 0.0) {
      double keep = 1.0 - layer.dropout;
      double scale = 1.0 / keep;
      Vec& mask = trace.mask[l];
      mask.resize(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        mask[i] = dropout_rng.bernoulli(keep) ? scale : 0.0;
        a[i] *= mask[i];
      }
    }
    trace.inputs[l] = a;
    Vec& z = trace.pre[l];
    z.resize(layer.w.rows);
    kernels::affine(layer.w, a, layer.b, z);
    a.resize(z.size());
    apply_activation(layer.act, z, a);
  }
  trace.out = a;
  return a[0];
}

double bce_loss(double p, int label, double weight) {
  double clamped = std::min(std::max(p, 1e-12), 1.0 - 1e-12);
  double ll = label == 1 ? std::log(clamped) : std::log(1.0 - clamped);
  return -weight * ll;
}

double bce_backward(const DenseNet& net, const ForwardTrace& trace, int label,
                    double weight, GradSet& grad) {
  const auto& layers = net.layers();
  if (layers.back().act != Activation::Sigmoid)
    throw std::invalid_argument("bce_backward expects a sigmoid output layer");
  if (layers.back().w.rows != 1)
    throw std::invalid_argument("bce_backward expects a scalar output");

  double p = trace.out[0];
  double loss = bce_loss(p, label, weight);

  // Fused sigmoid + cross-entropy at the output.
  Vec delta{weight * (p - static_cast<double>(label))};
  Vec next;
  for (std::size_t l = layers.size(); l-- > 0;) {
    const Layer& layer = layers[l];
    kernels::add_outer(grad.w[l], delta, trace.inputs[l], 1.0);
    for (std::size_t i = 0; i < delta.size(); ++i) grad.b[l][i] += delta[i];
    if (l == 0) break;

    next.resize(layer.w.cols);
    kernels::gemv_transposed(layer.w, delta, next);
    if (!trace.mask[l].empty())
      for (std::size_t i = 0; i < next.size(); ++i) next[i] *= trace.mask[l][i];
    const Vec& pre_prev = trace.pre[l - 1];
    for (std::size_t i = 0; i < next.size(); ++i)
      next[i] *= activation_derivative(layers[l - 1].act, pre_prev[i]);
    delta = next;
  }
  return loss;
}

}  // namespace hbn::neural
