#include "xmlkit/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "xmlkit/linear.hpp"

namespace xmlkit {

Activation activation_from_string(const std::string& s) {
  if (s == "relu") return Activation::relu;
  if (s == "sigmoid") return Activation::sigmoid_act;
  if (s == "tanh") return Activation::tanh_act;
  throw DataError("unknown activation: " + s);
}

std::string to_string(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::sigmoid_act: return "sigmoid";
    default: return "tanh";
  }
}

namespace {

double activate(double z, Activation a) {
  switch (a) {
    case Activation::relu: return z > 0.0 ? z : 0.0;
    case Activation::sigmoid_act: return sigmoid(z);
    default: return std::tanh(z);
  }
}

// Derivative expressed through the post-activation value.
double activate_grad(double a_val, Activation a) {
  switch (a) {
    case Activation::relu: return a_val > 0.0 ? 1.0 : 0.0;
    case Activation::sigmoid_act: return a_val * (1.0 - a_val);
    default: return 1.0 - a_val * a_val;
  }
}

}  // namespace

Network init_network(const std::vector<std::size_t>& sizes, Activation act,
                     std::uint64_t seed) {
  if (sizes.size() < 2) throw DataError("network needs input and output layers");
  for (std::size_t s : sizes)
    if (s == 0) throw DataError("zero-sized layer");
  if (sizes.back() != 1) throw DataError("output layer must have a single logit unit");

  Network n;
  n.sizes = sizes;
  n.activation = act;
  Rng rng(seed);
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    Network::Layer layer;
    layer.in = sizes[l];
    layer.out = sizes[l + 1];
    double scale = act == Activation::relu
                       ? std::sqrt(2.0 / static_cast<double>(layer.in))
                       : std::sqrt(1.0 / static_cast<double>(layer.in));
    layer.w.resize(layer.in * layer.out);
    for (double& w : layer.w) w = scale * rng.normal();
    layer.b.assign(layer.out, 0.0);
    n.layers.push_back(std::move(layer));
  }
  return n;
}

double Network::forward_cached(const std::vector<double>& x,
                               std::vector<std::vector<double>>& activations) const {
  if (x.size() != sizes.front()) throw DataError("network input dimension mismatch");
  activations.clear();
  activations.push_back(x);
  std::vector<double> cur = x;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const Layer& lay = layers[l];
    std::vector<double> next(lay.out);
    for (std::size_t o = 0; o < lay.out; ++o) {
      double z = lay.b[o];
      const double* wrow = lay.w.data() + o * lay.in;
      for (std::size_t i = 0; i < lay.in; ++i) z += wrow[i] * cur[i];
      next[o] = (l + 1 == layers.size()) ? z : activate(z, activation);
    }
    activations.push_back(next);
    cur = std::move(next);
  }
  return cur[0];
}

double Network::forward(const std::vector<double>& x) const {
  std::vector<std::vector<double>> cache;
  return forward_cached(x, cache);
}

double Network::predict_proba(const std::vector<double>& x) const {
  return sigmoid(forward(x));
}

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.w.size() + l.b.size();
  return n;
}

std::vector<double> Network::flatten() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  for (const auto& l : layers) {
    out.insert(out.end(), l.w.begin(), l.w.end());
    out.insert(out.end(), l.b.begin(), l.b.end());
  }
  return out;
}

void Network::unflatten(const std::vector<double>& params) {
  std::size_t pos = 0;
  for (auto& l : layers) {
    std::copy_n(params.begin() + static_cast<std::ptrdiff_t>(pos), l.w.size(), l.w.begin());
    pos += l.w.size();
    std::copy_n(params.begin() + static_cast<std::ptrdiff_t>(pos), l.b.size(), l.b.begin());
    pos += l.b.size();
  }
}

double bce_with_logits(const std::vector<double>& logits, const std::vector<int>& labels) {
  if (logits.size() != labels.size() || logits.empty())
    throw DataError("bce_with_logits: length mismatch or empty batch");
  double loss = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    double z = logits[i];
    loss += std::max(z, 0.0) - z * static_cast<double>(labels[i]) +
            std::log1p(std::exp(-std::abs(z)));
  }
  return loss / static_cast<double>(logits.size());
}

Gradients backward(const Network& n, const FeatureMatrix& x,
                   const std::vector<int>& y, const std::vector<std::size_t>& batch) {
  if (batch.empty()) throw DataError("backward: empty batch");
  Gradients g;
  for (const auto& l : n.layers) {
    Network::Layer gl;
    gl.in = l.in;
    gl.out = l.out;
    gl.w.assign(l.w.size(), 0.0);
    gl.b.assign(l.b.size(), 0.0);
    g.layers.push_back(std::move(gl));
  }

  const double inv = 1.0 / static_cast<double>(batch.size());
  std::vector<std::vector<double>> acts;
  for (std::size_t s : batch) {
    double logit = n.forward_cached(x.row(s), acts);
    // dL/dlogit for mean BCE-with-logits
    std::vector<double> delta{(sigmoid(logit) - static_cast<double>(y[s])) * inv};
    for (std::size_t l = n.layers.size(); l-- > 0;) {
      const Network::Layer& lay = n.layers[l];
      Network::Layer& gl = g.layers[l];
      const std::vector<double>& a_in = acts[l];
      for (std::size_t o = 0; o < lay.out; ++o) {
        gl.b[o] += delta[o];
        double* gw = gl.w.data() + o * lay.in;
        for (std::size_t i = 0; i < lay.in; ++i) gw[i] += delta[o] * a_in[i];
      }
      if (l == 0) break;
      std::vector<double> prev(lay.in, 0.0);
      for (std::size_t o = 0; o < lay.out; ++o) {
        const double* wrow = lay.w.data() + o * lay.in;
        for (std::size_t i = 0; i < lay.in; ++i) prev[i] += wrow[i] * delta[o];
      }
      for (std::size_t i = 0; i < lay.in; ++i)
        prev[i] *= activate_grad(acts[l][i], n.activation);
      delta = std::move(prev);
    }
  }
  return g;
}

void optimizer_step(std::vector<double>& params, const std::vector<double>& grads,
                    AdamState& state, const TrainConfig& cfg) {
  if (params.size() != grads.size()) throw DataError("optimizer_step: shape mismatch");
  if (cfg.optimizer == OptimizerKind::gd) {
    for (std::size_t i = 0; i < params.size(); ++i)
      params[i] -= cfg.learning_rate * grads[i];
    return;
  }
  if (state.m.empty()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
  }
  ++state.step;
  double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * grads[i];
    state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * grads[i] * grads[i];
    double mhat = state.m[i] / bc1;
    double vhat = state.v[i] / bc2;
    params[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.eps);
  }
}

namespace {

std::vector<double> flatten_grads(const Gradients& g) {
  std::vector<double> out;
  for (const auto& l : g.layers) {
    out.insert(out.end(), l.w.begin(), l.w.end());
    out.insert(out.end(), l.b.begin(), l.b.end());
  }
  return out;
}

double dataset_loss(const Network& n, const Dataset& d, std::vector<double>* logits_out) {
  std::vector<double> logits(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) logits[i] = n.forward(d.x.row(i));
  double loss = bce_with_logits(logits, d.y.labels);
  if (logits_out) *logits_out = std::move(logits);
  return loss;
}

double accuracy_from_logits(const std::vector<double>& logits, const std::vector<int>& y) {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < logits.size(); ++i)
    correct += (logits[i] >= 0.0 ? 1 : 0) == y[i] ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(logits.size());
}

}  // namespace

std::pair<Network, TrainHistory> train_mlp(const Dataset& train, const TrainConfig& cfg,
                                           const std::vector<std::size_t>& hidden_sizes,
                                           Activation act, const Dataset* validation) {
  std::vector<std::size_t> sizes{train.x.cols};
  sizes.insert(sizes.end(), hidden_sizes.begin(), hidden_sizes.end());
  sizes.push_back(1);

  Network net = init_network(sizes, act, derive_subseed(cfg.seed, 0));
  TrainHistory hist;
  AdamState state;
  std::vector<double> params = net.flatten();

  std::vector<double> best_params = params;
  double best_val_loss = std::numeric_limits<double>::infinity();

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng rng(derive_subseed(cfg.seed, 1 + epoch));
    rng.shuffle(order);
    std::size_t bs = cfg.batch_size == 0 ? train.size() : cfg.batch_size;
    for (std::size_t start = 0; start < order.size(); start += bs) {
      std::size_t end = std::min(start + bs, order.size());
      std::vector<std::size_t> batch(order.begin() + static_cast<std::ptrdiff_t>(start),
                                     order.begin() + static_cast<std::ptrdiff_t>(end));
      Gradients g = backward(net, train.x, train.y.labels, batch);
      optimizer_step(params, flatten_grads(g), state, cfg);
      net.unflatten(params);
    }

    std::vector<double> logits;
    double loss = dataset_loss(net, train, &logits);
    if (!std::isfinite(loss))
      throw NumericError("mlp training diverged at epoch " + std::to_string(epoch));
    hist.train_loss.push_back(loss);
    hist.train_accuracy.push_back(accuracy_from_logits(logits, train.y.labels));

    if (validation) {
      std::vector<double> vlogits;
      double vloss = dataset_loss(net, *validation, &vlogits);
      hist.val_loss.push_back(vloss);
      hist.val_accuracy.push_back(accuracy_from_logits(vlogits, validation->y.labels));
      if (vloss < best_val_loss) {
        best_val_loss = vloss;
        best_params = params;
      }
    }
    if (cfg.loss_epsilon && loss <= *cfg.loss_epsilon) break;
  }

  if (validation && !hist.val_loss.empty()) net.unflatten(best_params);
  return {std::move(net), std::move(hist)};
}

double gradient_check(Network& n, const FeatureMatrix& x, const std::vector<int>& y) {
  std::vector<std::size_t> batch(x.rows);
  std::iota(batch.begin(), batch.end(), 0);
  Gradients g = backward(n, x, y, batch);
  std::vector<double> analytic = flatten_grads(g);
  std::vector<double> params = n.flatten();

  const double h = 1e-5;
  double worst = 0.0;
  for (std::size_t p = 0; p < params.size(); ++p) {
    double orig = params[p];
    auto loss_at = [&](double v) {
      params[p] = v;
      n.unflatten(params);
      std::vector<double> logits(x.rows);
      for (std::size_t i = 0; i < x.rows; ++i) logits[i] = n.forward(x.row(i));
      return bce_with_logits(logits, y);
    };
    double numeric = (loss_at(orig + h) - loss_at(orig - h)) / (2.0 * h);
    params[p] = orig;
    n.unflatten(params);

    double denom = std::max(std::abs(analytic[p]), std::abs(numeric));
    double err = denom > 1e-8 ? std::abs(analytic[p] - numeric) / denom
                              : std::abs(analytic[p] - numeric);
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace xmlkit
