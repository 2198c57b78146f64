#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "extsum/corpus.hpp"
#include "extsum/embed.hpp"
#include "extsum/error.hpp"
#include "extsum/log.hpp"
#include "extsum/net.hpp"

namespace extsum {

struct TrainConfig {
  int epochs = 20;
  double learning_rate = 1e-3;
  int batch_size = 16;  // documents per optimizer step
  std::int64_t seed = 13;
  Dims dims{100, 200, 100};
  double gradient_clip = 5.0;  // global L2 norm
  bool shuffle = true;
  double holdout_fraction = 0.1;   // used by the pipeline's train/test split
  std::string validation_corpus;   // optional, monitored but never trained on
};

inline void validate_train_config(const TrainConfig& c) {
  if (c.epochs < 1) throw Error("config: epochs must be a positive integer");
  if (!(c.learning_rate > 0)) throw Error("config: learning_rate must be positive");
  if (c.batch_size < 1) throw Error("config: batch_size must be a positive integer");
  if (c.dims.input < 1 || c.dims.hidden < 1 || c.dims.doc < 1)
    throw Error("config: model dimensions must be positive");
  if (!(c.gradient_clip > 0)) throw Error("config: gradient_clip must be positive");
  if (!(c.holdout_fraction > 0.0) || !(c.holdout_fraction < 1.0))
    throw Error("config: holdout_fraction must lie in (0, 1)");
}

namespace detail {

inline long parse_long(const std::string& v, const std::string& key) {
  std::size_t pos = 0;
  long out;
  try {
    out = std::stol(v, &pos);
  } catch (const std::exception&) {
    throw Error("config: invalid integer for " + key + ": \"" + v + "\"");
  }
  if (pos != v.size())
    throw Error("config: invalid integer for " + key + ": \"" + v + "\"");
  return out;
}

inline double parse_double(const std::string& v, const std::string& key) {
  std::size_t pos = 0;
  double out;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw Error("config: invalid number for " + key + ": \"" + v + "\"");
  }
  if (pos != v.size())
    throw Error("config: invalid number for " + key + ": \"" + v + "\"");
  return out;
}

inline bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw Error("config: expected true/false for " + key + ", got \"" + v + "\"");
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

// Flat `key = value` file, one entry per line; '#' starts a comment. Unknown
// keys are rejected. Values override the supplied base config, so CLI-level
// defaults (e.g. the global seed) survive when the file stays silent.
inline TrainConfig parse_train_config(const std::string& path,
                                      TrainConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string entry = detail::trim(line);
    if (entry.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    const auto eq = entry.find('=');
    if (eq == std::string::npos)
      throw Error(where + ": expected `key = value`");
    const std::string key = detail::trim(entry.substr(0, eq));
    const std::string value = detail::trim(entry.substr(eq + 1));
    if (key.empty() || value.empty())
      throw Error(where + ": expected `key = value`");

    if (key == "epochs") base.epochs = static_cast<int>(detail::parse_long(value, key));
    else if (key == "learning_rate") base.learning_rate = detail::parse_double(value, key);
    else if (key == "batch_size") base.batch_size = static_cast<int>(detail::parse_long(value, key));
    else if (key == "seed") base.seed = detail::parse_long(value, key);
    else if (key == "input_dim") base.dims.input = static_cast<int>(detail::parse_long(value, key));
    else if (key == "hidden_dim") base.dims.hidden = static_cast<int>(detail::parse_long(value, key));
    else if (key == "doc_dim") base.dims.doc = static_cast<int>(detail::parse_long(value, key));
    else if (key == "gradient_clip") base.gradient_clip = detail::parse_double(value, key);
    else if (key == "shuffle") base.shuffle = detail::parse_bool(value, key);
    else if (key == "holdout_fraction") base.holdout_fraction = detail::parse_double(value, key);
    else if (key == "validation_corpus") base.validation_corpus = value;
    else throw Error(where + ": unknown config key \"" + key + "\"");
  }
  validate_train_config(base);
  return base;
}

inline void write_train_config(const TrainConfig& c, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write config file: " + path);
  out.precision(17);
  out << "epochs = " << c.epochs << "\n"
      << "learning_rate = " << c.learning_rate << "\n"
      << "batch_size = " << c.batch_size << "\n"
      << "seed = " << c.seed << "\n"
      << "input_dim = " << c.dims.input << "\n"
      << "hidden_dim = " << c.dims.hidden << "\n"
      << "doc_dim = " << c.dims.doc << "\n"
      << "gradient_clip = " << c.gradient_clip << "\n"
      << "shuffle = " << (c.shuffle ? "true" : "false") << "\n"
      << "holdout_fraction = " << c.holdout_fraction << "\n";
  if (!c.validation_corpus.empty())
    out << "validation_corpus = " << c.validation_corpus << "\n";
}

// ---------------------------------------------------------------------------
// Optimizer
// ---------------------------------------------------------------------------

namespace detail {

template <typename Params, typename Fn>
void for_each_coordinate(Params& p, Fn&& fn) {
  visit_tensors(p, [&](const std::string&, auto* data, Eigen::Index rows,
                       Eigen::Index cols) {
    for (Eigen::Index i = 0; i < rows * cols; ++i) fn(data[i]);
  });
}

}  // namespace detail

inline std::size_t parameter_count(const ModelParams& p) {
  std::size_t n = 0;
  detail::for_each_coordinate(p, [&](const double&) { ++n; });
  return n;
}

inline double global_norm(const ModelParams& g) {
  double sq = 0.0;
  detail::for_each_coordinate(g, [&](const double& v) { sq += v * v; });
  return std::sqrt(sq);
}

inline void scale_params(ModelParams& g, double factor) {
  detail::for_each_coordinate(g, [&](double& v) { v *= factor; });
}

inline void accumulate_params(ModelParams& into, const ModelParams& g) {
  if (!(into.dims == g.dims)) throw Error("gradient accumulation: shape mismatch");
  std::vector<const double*> src;
  visit_tensors(g, [&](const std::string&, const double* data, Eigen::Index,
                       Eigen::Index) { src.push_back(data); });
  std::size_t k = 0;
  visit_tensors(into, [&](const std::string&, double* data, Eigen::Index rows,
                          Eigen::Index cols) {
    const double* s = src[k++];
    for (Eigen::Index i = 0; i < rows * cols; ++i) data[i] += s[i];
  });
}

// Rescales in place so the global L2 norm never exceeds max_norm.
inline void clip_global_norm(ModelParams& g, double max_norm) {
  const double norm = global_norm(g);
  if (norm > max_norm && norm > 0.0) scale_params(g, max_norm / norm);
}

// First/second moment buffers, flat in canonical tensor order.
struct AdamState {
  std::vector<double> m, v;

  static AdamState zeros_for(const ModelParams& p) {
    AdamState s;
    s.m.assign(parameter_count(p), 0.0);
    s.v.assign(parameter_count(p), 0.0);
    return s;
  }
};

// Standard Adam update with bias correction; beta1 = 0.9, beta2 = 0.999,
// eps = 1e-8. t is the 1-based step count.
inline void adam_step(ModelParams& params, const ModelParams& grads,
                      AdamState& state, double lr, long t) {
  if (t < 1) throw Error("adam_step: step index must be >= 1");
  if (!(params.dims == grads.dims)) throw Error("adam_step: shape mismatch");
  constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  if (state.m.size() != parameter_count(params))
    throw Error("adam_step: moment state size mismatch");

  std::vector<const double*> gsrc;
  visit_tensors(grads, [&](const std::string&, const double* data, Eigen::Index,
                           Eigen::Index) { gsrc.push_back(data); });

  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
  std::size_t tensor = 0, off = 0;
  visit_tensors(params, [&](const std::string&, double* data, Eigen::Index rows,
                            Eigen::Index cols) {
    const double* g = gsrc[tensor++];
    for (Eigen::Index i = 0; i < rows * cols; ++i, ++off) {
      state.m[off] = beta1 * state.m[off] + (1.0 - beta1) * g[i];
      state.v[off] = beta2 * state.v[off] + (1.0 - beta2) * g[i] * g[i];
      const double mhat = state.m[off] / c1;
      const double vhat = state.v[off] / c2;
      data[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
  });
}

// ---------------------------------------------------------------------------
// Training loop
// ---------------------------------------------------------------------------

struct TrainReport {
  std::vector<double> epoch_mean_loss;
  std::string checkpoint_path;  // empty when no checkpoint was requested
  double wall_seconds = 0.0;
  std::size_t documents_seen = 0;      // forward/backward passes, all epochs
  std::size_t skipped_documents = 0;   // nothing embeddable in them
};

struct TrainResult {
  ModelParams params;
  TrainReport report;
};

namespace detail {

// Fisher-Yates with an explicit draw so the permutation sequence is pinned by
// the seed alone.
inline void seeded_shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

struct TrainSample {
  std::vector<Vec> x;
  std::vector<int> y;
};

inline std::vector<TrainSample> prepare_samples(const std::vector<Document>& corpus,
                                                const WordVectorStore& vectors,
                                                std::size_t& skipped) {
  std::vector<TrainSample> samples;
  samples.reserve(corpus.size());
  for (const auto& doc : corpus) {
    if (!doc.labels)
      throw Error("document \"" + doc.id +
                  "\" has no labels; generate them with `label` first");
    auto embeddings = embed_document(vectors, doc);
    bool embeddable = false;
    TrainSample sample;
    sample.x.reserve(embeddings.size());
    for (auto& e : embeddings) {
      embeddable = embeddable || !e.all_oov;
      sample.x.push_back(std::move(e.values));
    }
    if (!embeddable) {
      log_warn("skipping document \"" + doc.id +
               "\": no sentence has an in-vocabulary token");
      ++skipped;
      continue;
    }
    sample.y = *doc.labels;
    samples.push_back(std::move(sample));
  }
  return samples;
}

}  // namespace detail

// Mini-batched Adam training over whole documents. Deterministic given the
// corpus order and config.seed: the seed pins the parameter init and every
// shuffle, batches accumulate by summation, and the update is serialized.
inline TrainResult train(const std::vector<Document>& corpus,
                         const WordVectorStore& vectors, const TrainConfig& config,
                         const std::string& checkpoint_path = "") {
  validate_train_config(config);
  if (corpus.empty()) throw Error("training corpus is empty");
  if (vectors.dim != config.dims.input)
    throw Error("vector dimension " + std::to_string(vectors.dim) +
                " does not match configured input_dim " +
                std::to_string(config.dims.input));

  const auto t0 = std::chrono::steady_clock::now();
  TrainResult result;
  result.report.skipped_documents = 0;
  auto samples =
      detail::prepare_samples(corpus, vectors, result.report.skipped_documents);
  if (samples.empty())
    throw Error("no trainable documents (all skipped as unembeddable)");

  std::vector<detail::TrainSample> validation;
  if (!config.validation_corpus.empty()) {
    std::size_t val_skipped = 0;
    validation = detail::prepare_samples(read_corpus(config.validation_corpus),
                                         vectors, val_skipped);
  }

  ModelParams params = init_params(config.dims, config.seed);
  AdamState adam = AdamState::zeros_for(params);
  // distinct stream from the init so reordering one never shifts the other
  std::mt19937_64 shuffle_rng(static_cast<std::uint64_t>(config.seed) ^
                              0x9e3779b97f4a7c15ULL);

  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);

  long step = 0;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    if (config.shuffle) detail::seeded_shuffle(order, shuffle_rng);
    double epoch_loss = 0.0;
    for (std::size_t begin = 0; begin < order.size();
         begin += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end =
          std::min(begin + static_cast<std::size_t>(config.batch_size), order.size());
      ModelParams batch_grads = zero_params(config.dims);
      for (std::size_t k = begin; k < end; ++k) {
        const auto& sample = samples[order[k]];
        ForwardTrace trace = forward(params, sample.x);
        BackwardResult back = backward(params, trace, sample.y);
        epoch_loss += back.loss;
        accumulate_params(batch_grads, back.grads);
        ++result.report.documents_seen;
      }
      scale_params(batch_grads, 1.0 / static_cast<double>(end - begin));
      clip_global_norm(batch_grads, config.gradient_clip);
      adam_step(params, batch_grads, adam, config.learning_rate, ++step);
    }
    const double mean_loss = epoch_loss / static_cast<double>(samples.size());
    result.report.epoch_mean_loss.push_back(mean_loss);

    std::ostringstream msg;
    msg.precision(6);
    msg << "epoch " << epoch << "/" << config.epochs << ": mean loss " << mean_loss;
    if (!validation.empty()) {
      double val_loss = 0.0;
      for (const auto& sample : validation) {
        ForwardTrace trace = forward(params, sample.x);
        val_loss += sequence_loss(trace.logit, sample.y);
      }
      msg << ", validation loss " << val_loss / static_cast<double>(validation.size());
    }
    log_info(msg.str());
  }

  if (!checkpoint_path.empty()) {
    save_params(params, checkpoint_path);
    result.report.checkpoint_path = checkpoint_path;
  }
  result.report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  result.params = std::move(params);
  return result;
}

}  // namespace extsum
