#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "hbn/core/errors.hpp"
#include "hbn/neural/adam.hpp"
#include "hbn/neural/checkpoint.hpp"
#include "hbn/neural/dense_net.hpp"
#include "oracles.hpp"

using namespace hbn;
using namespace hbn::neural;

namespace {

DenseNet make_net(const std::vector<LayerSpec>& spec, std::uint64_t seed) {
  Rng rng(seed);
  return DenseNet(spec, rng);
}

double loss_of(const DenseNet& net, const Vec& x, int label) {
  Rng unused(0);
  ForwardTrace trace;
  double p = forward_train(net, x, unused, trace);
  return bce_loss(p, label, 1.0);
}

// Central finite differences over every parameter of a (small) net.
void check_gradients(DenseNet net, const Vec& x, int label, double tol) {
  Rng unused(0);
  ForwardTrace trace;
  forward_train(net, x, unused, trace);
  GradSet grad = net.make_grad();
  bce_backward(net, trace, label, 1.0, grad);

  const double eps = 1e-5;
  for (std::size_t l = 0; l < net.layers().size(); ++l) {
    auto check_param = [&](double& p, double analytic) {
      double keep = p;
      p = keep + eps;
      double up = loss_of(net, x, label);
      p = keep - eps;
      double down = loss_of(net, x, label);
      p = keep;
      double numeric = (up - down) / (2.0 * eps);
      double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
      CHECK(std::abs(analytic - numeric) / denom <= tol);
    };
    for (std::size_t i = 0; i < net.layers()[l].w.data.size(); ++i)
      check_param(net.layers()[l].w.data[i], grad.w[l].data[i]);
    for (std::size_t i = 0; i < net.layers()[l].b.size(); ++i)
      check_param(net.layers()[l].b[i], grad.b[l][i]);
  }
}

}  // namespace

TEST_CASE("all-zero parameters give 0.5 through the sigmoid") {
  auto net = make_net({{4, 3, Activation::Relu, 0.0}, {3, 1, Activation::Sigmoid, 0.0}}, 1);
  for (auto& layer : net.layers()) {
    layer.w.fill(0.0);
    std::fill(layer.b.begin(), layer.b.end(), 0.0);
  }
  CHECK(forward(net, Vec{1.0, -2.0, 0.5, 3.0}) == doctest::Approx(0.5));
}

TEST_CASE("single unit at zero input gives 0.5") {
  auto net = make_net({{1, 1, Activation::Sigmoid, 0.0}}, 2);
  net.layers()[0].w(0, 0) = 1.0;
  net.layers()[0].b[0] = 0.0;
  CHECK(forward(net, Vec{0.0}) == doctest::Approx(0.5));
}

TEST_CASE("forward matches a naive matrix-product oracle") {
  auto net = make_net({{6, 4, Activation::Relu, 0.0}, {4, 1, Activation::Sigmoid, 0.0}}, 3);
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    Vec x(6);
    for (double& v : x) v = rng.normal();
    CHECK(std::abs(forward(net, x) - oracles::net_forward_naive(net, x)) <= 1e-10);
  }
}

TEST_CASE("dimension mismatch reports expected and actual sizes") {
  auto net = make_net({{6, 1, Activation::Sigmoid, 0.0}}, 4);
  CHECK_THROWS_WITH_AS(forward(net, Vec{1.0, 2.0}),
                       doctest::Contains("expected 6"), std::invalid_argument);
}

TEST_CASE("bce loss at 0.5 is ln 2 and a zero weight kills everything") {
  CHECK(bce_loss(0.5, 1, 1.0) == doctest::Approx(std::log(2.0)));

  auto net = make_net({{3, 1, Activation::Sigmoid, 0.0}}, 5);
  Rng unused(0);
  ForwardTrace trace;
  forward_train(net, Vec{0.3, -0.2, 1.0}, unused, trace);
  GradSet grad = net.make_grad();
  double loss = bce_backward(net, trace, 1, 0.0, grad);
  CHECK(loss == doctest::Approx(0.0));
  for (double g : grad.w[0].data) CHECK(g == 0.0);
  CHECK(grad.b[0][0] == 0.0);
}

TEST_CASE("bce loss clamps saturated outputs") {
  CHECK(std::isfinite(bce_loss(0.0, 1, 1.0)));
  CHECK(std::isfinite(bce_loss(1.0, 0, 1.0)));
  CHECK(bce_loss(0.0, 1, 1.0) == doctest::Approx(-std::log(1e-12)));
}

TEST_CASE("analytic gradients match central finite differences") {
  Rng rng(23);
  for (int label : {0, 1}) {
    {
      auto net = make_net({{5, 1, Activation::Sigmoid, 0.0}}, 11);
      Vec x(5);
      for (double& v : x) v = rng.normal();
      check_gradients(net, x, label, 1e-4);
    }
    {
      auto net = make_net({{5, 4, Activation::Relu, 0.0},
                           {4, 1, Activation::Sigmoid, 0.0}}, 12);
      Vec x(5);
      for (double& v : x) v = rng.normal();
      check_gradients(net, x, label, 1e-4);
    }
  }
}

TEST_CASE("adam leaves parameters alone on zero gradients without decay") {
  auto net = make_net({{3, 1, Activation::Sigmoid, 0.0}}, 31);
  AdamConfig cfg;
  cfg.weight_decay = 0.0;
  AdamState opt(net, cfg);
  Vec before = net.layers()[0].w.data;
  GradSet zero = net.make_grad();
  opt.step(net, zero);
  for (std::size_t i = 0; i < before.size(); ++i)
    CHECK(net.layers()[0].w.data[i] == before[i]);
}

TEST_CASE("one adam step moves a parameter by roughly the learning rate") {
  auto net = make_net({{1, 1, Activation::Sigmoid, 0.0}}, 32);
  net.layers()[0].w(0, 0) = 1.0;
  AdamConfig cfg;
  cfg.learning_rate = 0.1;
  cfg.weight_decay = 0.0;
  AdamState opt(net, cfg);
  GradSet g = net.make_grad();
  g.w[0](0, 0) = 1.0;
  opt.step(net, g);
  // Bias-corrected first step: m_hat = v_hat = 1, so the step is lr/(1+eps).
  CHECK(net.layers()[0].w(0, 0) == doctest::Approx(0.9).epsilon(1e-6));
}

TEST_CASE("adam drives w^2 to zero within 500 steps") {
  auto net = make_net({{1, 1, Activation::Sigmoid, 0.0}}, 33);
  net.layers()[0].w(0, 0) = 1.0;
  AdamConfig cfg;
  cfg.learning_rate = 1e-2;
  cfg.weight_decay = 0.0;
  AdamState opt(net, cfg);
  for (int step = 0; step < 500; ++step) {
    GradSet g = net.make_grad();
    g.w[0](0, 0) = 2.0 * net.layers()[0].w(0, 0);  // d/dw of w^2
    opt.step(net, g);
  }
  CHECK(std::abs(net.layers()[0].w(0, 0)) < 0.01);
}

TEST_CASE("non-finite gradients abort with the parameter path") {
  auto net = make_net({{2, 1, Activation::Sigmoid, 0.0}}, 34);
  AdamState opt(net, {});
  GradSet g = net.make_grad();
  g.w[0](0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_WITH_AS(opt.step(net, g), doctest::Contains("layer 0"),
                       NumericError);
}

TEST_CASE("inverted dropout keeps the expected activation") {
  // Identity single layer: the dropout expectation is exactly the
  // inference activation, testable by Monte Carlo.
  auto net = make_net({{8, 1, Activation::Identity, 0.7}}, 35);
  Rng rng(36);
  Vec x(8);
  for (double& v : x) v = rng.uniform(0.5, 1.5);
  double infer = forward(net, x);

  Rng drop(37);
  ForwardTrace trace;
  double sum = 0.0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) sum += forward_train(net, x, drop, trace);
  double mc = sum / trials;
  CHECK(std::abs(mc - infer) <= 0.02 * std::max(std::abs(infer), 1.0));
}

TEST_CASE("training-mode forward without dropout equals inference") {
  auto net = make_net({{5, 4, Activation::Relu, 0.0},
                       {4, 1, Activation::Sigmoid, 0.0}}, 38);
  Rng rng(39), unused(0);
  ForwardTrace trace;
  for (int t = 0; t < 10; ++t) {
    Vec x(5);
    for (double& v : x) v = rng.normal();
    CHECK(forward(net, x) == forward_train(net, x, unused, trace));
  }
}

TEST_CASE("loss decreases monotonically on a separable toy set") {
  Rng data(40);
  std::vector<Vec> xs;
  std::vector<int> ys;
  for (int i = 0; i < 20; ++i) {
    int label = i % 2;
    Vec x(4);
    for (double& v : x) v = data.normal() * 0.2 + (label ? 1.0 : -1.0);
    xs.push_back(x);
    ys.push_back(label);
  }
  auto net = make_net({{4, 1, Activation::Sigmoid, 0.0}}, 41);
  AdamState opt(net, {});  // default lr 1e-2, wd 1e-3
  Rng unused(0);
  ForwardTrace trace;
  double prev = std::numeric_limits<double>::infinity();
  for (int epoch = 0; epoch < 10; ++epoch) {
    GradSet grad = net.make_grad();
    double loss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      forward_train(net, xs[i], unused, trace);
      loss += bce_backward(net, trace, ys[i], 1.0, grad);
    }
    grad.scale(1.0 / static_cast<double>(xs.size()));
    opt.step(net, grad);
    CHECK(loss < prev);
    prev = loss;
  }
}

TEST_CASE("checkpoints round-trip to identical nets") {
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / "hbn_net_ckpt";
  fs::create_directories(dir);
  auto net = make_net({{6, 4, Activation::Relu, 0.3},
                       {4, 1, Activation::Sigmoid, 0.3}}, 42);
  save_net(net, 42, dir / "net.bin");
  auto loaded = load_net(dir / "net.bin");
  CHECK(loaded.seed == 42);
  REQUIRE(loaded.net.layers().size() == net.layers().size());
  for (std::size_t l = 0; l < net.layers().size(); ++l) {
    CHECK(loaded.net.layers()[l].w.data == net.layers()[l].w.data);
    CHECK(loaded.net.layers()[l].b == net.layers()[l].b);
    CHECK(loaded.net.layers()[l].dropout == net.layers()[l].dropout);
    CHECK(loaded.net.layers()[l].act == net.layers()[l].act);
  }
  fs::remove_all(dir);
}
