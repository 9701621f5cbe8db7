#pragma once

#include <span>
#include <string>
#include <vector>

#include "hbn/core/matrix.hpp"
#include "hbn/core/rng.hpp"

namespace hbn::neural {

enum class Activation { Identity, Relu, Sigmoid };

std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

struct LayerSpec {
  std::size_t in = 0;
  std::size_t out = 0;
  Activation act = Activation::Identity;
  double dropout = 0.0;  // rate applied to this layer's input while training
};

struct Layer {
  Matrix w;  // out x in
  Vec b;
  Activation act = Activation::Identity;
  double dropout = 0.0;
};

// Per-layer gradient (or moment) buffers, shaped like a net's parameters.
struct GradSet {
  std::vector<Matrix> w;
  std::vector<Vec> b;

  void zero();
  void add(const GradSet& other);
  void scale(double s);
};

// A chain of dense layers ending in a scalar output. Nets are mutable while
// training and treated as frozen afterwards; frozen nets support concurrent
// forward passes.
class DenseNet {
 public:
  DenseNet() = default;
  // Glorot-uniform weights (+- sqrt(6/(fan_in+fan_out))), zero biases, drawn
  // from `init` in layer order, row-major within each weight matrix.
  DenseNet(const std::vector<LayerSpec>& spec, Rng& init);

  std::size_t input_dim() const { return layers_.empty() ? 0 : layers_.front().w.cols; }
  std::size_t output_dim() const { return layers_.empty() ? 0 : layers_.back().w.rows; }

  std::vector<Layer>& layers() { return layers_; }
  const std::vector<Layer>& layers() const { return layers_; }

  GradSet make_grad() const;

 private:
  std::vector<Layer> layers_;
};

// Activations recorded by a training-mode forward pass, consumed by
// bce_backward.
struct ForwardTrace {
  std::vector<Vec> inputs;  // post-dropout input of each layer
  std::vector<Vec> pre;     // pre-activation of each layer
  std::vector<Vec> mask;    // dropout scale factors; empty when rate is 0
  Vec out;                  // final activation
};

// Inference forward pass: deterministic, dropout-free.
double forward(const DenseNet& net, std::span<const double> x);

// Training forward pass with inverted dropout: kept units are scaled by
// 1/(1-rate) so the inference pass needs no rescaling.
double forward_train(const DenseNet& net, std::span<const double> x,
                     Rng& dropout_rng, ForwardTrace& trace);

// Clamps p away from 0/1 at 1e-12 before the log.
double bce_loss(double p, int label, double weight);

// Backpropagates weight * bce(out, label) through the trace, accumulating
// parameter gradients into `grad`. Returns the loss. The final activation
// must be a sigmoid.
double bce_backward(const DenseNet& net, const ForwardTrace& trace, int label,
                    double weight, GradSet& grad);

}  // namespace hbn::neural
