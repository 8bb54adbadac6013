#include <cmath>
#include <limits>

#include "adr/planners.hpp"
#include "adr/serialize.hpp"

namespace adr {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::Tanh: return "tanh";
    case Activation::Identity: return "identity";
  }
  return "unknown";
}

Activation activation_from_string(std::string_view s) {
  if (s == "tanh") return Activation::Tanh;
  if (s == "identity") return Activation::Identity;
  throw std::invalid_argument("unknown activation '" + std::string(s) + "'");
}

void PolicyWeights::validate() const {
  if (layers.empty()) throw std::invalid_argument("policy has no layers");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    const auto where = "layer " + std::to_string(i);
    if (l.in < 1 || l.out < 1) throw std::invalid_argument(where + ": non-positive dimension");
    if (l.weights.size() != static_cast<std::size_t>(l.in) * static_cast<std::size_t>(l.out))
      throw std::invalid_argument(where + ": weight count does not match in x out");
    if (l.bias.size() != static_cast<std::size_t>(l.out))
      throw std::invalid_argument(where + ": bias length does not match out");
    if (i > 0 && layers[i - 1].out != l.in)
      throw std::invalid_argument(where + ": input size does not chain from previous layer");
    for (double w : l.weights)
      if (!std::isfinite(w)) throw std::invalid_argument(where + ": non-finite weight");
    for (double b : l.bias)
      if (!std::isfinite(b)) throw std::invalid_argument(where + ": non-finite bias");
  }
}

PolicyWeights PolicyWeights::zeros(int n_debris, int hidden) {
  const int dims[] = {observation_size(n_debris), hidden, hidden, n_debris + 1};
  PolicyWeights p;
  for (int i = 0; i < 3; ++i) {
    DenseLayer l;
    l.in = dims[i];
    l.out = dims[i + 1];
    l.weights.assign(static_cast<std::size_t>(l.in) * static_cast<std::size_t>(l.out), 0.0);
    l.bias.assign(static_cast<std::size_t>(l.out), 0.0);
    l.activation = i < 2 ? Activation::Tanh : Activation::Identity;
    p.layers.push_back(std::move(l));
  }
  return p;
}

std::vector<double> policy_forward(const PolicyWeights& weights, std::span<const double> obs) {
  if (static_cast<int>(obs.size()) != weights.input_size()) {
    throw std::invalid_argument("observation length " + std::to_string(obs.size()) +
                                " does not match policy input " + std::to_string(weights.input_size()));
  }
  std::vector<double> x(obs.begin(), obs.end());
  std::vector<double> y;
  for (const auto& layer : weights.layers) {
    y.assign(layer.bias.begin(), layer.bias.end());
    for (int r = 0; r < layer.out; ++r) {
      const double* row = layer.weights.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(layer.in);
      double acc = 0.0;
      for (int c = 0; c < layer.in; ++c) acc += row[c] * x[static_cast<std::size_t>(c)];
      y[static_cast<std::size_t>(r)] += acc;
    }
    if (layer.activation == Activation::Tanh)
      for (double& v : y) v = std::tanh(v);
    x.swap(y);
  }
  return x;
}

int masked_argmax(std::span<const double> logits, const std::vector<bool>& mask) {
  if (mask.size() != logits.size())
    throw std::invalid_argument("mask length does not match logits");
  int best = -1;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (!mask[i]) continue;
    // NaN never wins; the first legal index is the fallback.
    if (best < 0 || logits[i] > best_value) {
      best = static_cast<int>(i);
      best_value = logits[i];
    }
  }
  if (best < 0) throw std::invalid_argument("action mask allows no action");
  return best;
}

Action policy_select(const PolicyWeights& weights, const Observation& obs, const std::vector<bool>& mask) {
  const auto logits = policy_forward(weights, obs);
  return Action::from_flat(masked_argmax(logits, mask), static_cast<int>(mask.size()) - 1);
}

EpisodeResult policy_episode(const Scenario& scenario, const PolicyWeights& weights) {
  weights.validate();
  if (weights.input_size() != observation_size(scenario.n_debris()) ||
      weights.output_size() != scenario.n_debris() + 1) {
    throw std::invalid_argument("policy dimensions do not fit a scenario with " +
                                std::to_string(scenario.n_debris()) + " debris");
  }
  return run_episode(scenario, [&](const MissionState& state) {
    return policy_select(weights, observe(state, scenario), action_mask(state));
  });
}

// ---------------------------------------------------------------------------
// Weight files

std::string policy_to_json(const PolicyWeights& weights) {
  weights.validate();
  JsonWriter w;
  w.begin_object();
  w.field("format", std::string_view("adr-policy-v1"));
  w.field("observation_layout", std::string_view(weights.observation_layout));
  w.key("dims");
  w.begin_array();
  w.value(weights.input_size());
  for (const auto& l : weights.layers) w.value(l.out);
  w.end_array();
  w.key("layers");
  w.begin_array();
  for (const auto& l : weights.layers) {
    w.begin_object();
    w.field("in", l.in);
    w.field("out", l.out);
    w.field("activation", to_string(l.activation));
    w.key("weights");
    w.array(l.weights);
    w.key("bias");
    w.array(l.bias);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str();
}

PolicyWeights policy_from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  if (j.value("format", std::string{}) != "adr-policy-v1")
    throw std::invalid_argument("not an adr-policy-v1 document");
  PolicyWeights p;
  p.observation_layout = j.at("observation_layout").get<std::string>();
  if (p.observation_layout != kObservationLayout) {
    throw std::invalid_argument("policy observation layout '" + p.observation_layout +
                                "' does not match '" + std::string(kObservationLayout) + "'");
  }
  for (const auto& jl : j.at("layers")) {
    DenseLayer l;
    l.in = jl.at("in").get<int>();
    l.out = jl.at("out").get<int>();
    l.activation = activation_from_string(jl.at("activation").get<std::string>());
    l.weights = jl.at("weights").get<std::vector<double>>();
    l.bias = jl.at("bias").get<std::vector<double>>();
    p.layers.push_back(std::move(l));
  }
  const auto dims = j.at("dims").get<std::vector<int>>();
  if (dims.size() != p.layers.size() + 1 || (!p.layers.empty() && dims.front() != p.input_size()))
    throw std::invalid_argument("dims header does not match layers");
  for (std::size_t i = 0; i < p.layers.size(); ++i)
    if (dims[i + 1] != p.layers[i].out) throw std::invalid_argument("dims header does not match layers");
  p.validate();
  return p;
}

void write_policy(const PolicyWeights& weights, const std::filesystem::path& path) {
  write_text_file(path, policy_to_json(weights));
}

PolicyWeights read_policy(const std::filesystem::path& path) {
  return policy_from_json(read_text_file(path));
}

}  // namespace adr
