#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "extsum/error.hpp"

namespace extsum {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Dims {
  int input = 100;
  int hidden = 200;
  int doc = 100;
  bool operator==(const Dims&) const = default;
};

// One GRU direction. W_* act on the input, U_* on the previous hidden state.
struct GruCellParams {
  Mat W_z, W_r, W_h;  // hidden x input
  Mat U_z, U_r, U_h;  // hidden x hidden
  Vec b_z, b_r, b_h;  // hidden
};

// Selection head: sigmoid of content + salience - novelty + bias. These six
// tensors are the entire head; there are no position features.
struct ClassifierParams {
  Vec w_content;   // 2*hidden
  Mat W_salience;  // 2*hidden x doc
  Mat W_novelty;   // 2*hidden x 2*hidden
  Mat W_doc;       // doc x 2*hidden
  Vec b_doc;       // doc
  double bias = 0.0;
};

struct ModelParams {
  Dims dims;
  std::int64_t init_seed = 0;
  GruCellParams forward_cell;
  GruCellParams backward_cell;
  ClassifierParams head;
};

// Walks every trainable tensor in the canonical order used by the optimizer,
// the checkpoint format and the initializer. fn(name, data, rows, cols); the
// scalar bias is visited as a 1x1 tensor.
template <typename Params, typename Fn>
void visit_tensors(Params& p, Fn&& fn) {
  auto cell = [&](const char* which, auto& c) {
    std::string prefix(which);
    fn(prefix + ".W_z", c.W_z.data(), c.W_z.rows(), c.W_z.cols());
    fn(prefix + ".U_z", c.U_z.data(), c.U_z.rows(), c.U_z.cols());
    fn(prefix + ".b_z", c.b_z.data(), c.b_z.rows(), Eigen::Index(1));
    fn(prefix + ".W_r", c.W_r.data(), c.W_r.rows(), c.W_r.cols());
    fn(prefix + ".U_r", c.U_r.data(), c.U_r.rows(), c.U_r.cols());
    fn(prefix + ".b_r", c.b_r.data(), c.b_r.rows(), Eigen::Index(1));
    fn(prefix + ".W_h", c.W_h.data(), c.W_h.rows(), c.W_h.cols());
    fn(prefix + ".U_h", c.U_h.data(), c.U_h.rows(), c.U_h.cols());
    fn(prefix + ".b_h", c.b_h.data(), c.b_h.rows(), Eigen::Index(1));
  };
  cell("forward", p.forward_cell);
  cell("backward", p.backward_cell);
  auto& h = p.head;
  fn(std::string("head.w_content"), h.w_content.data(), h.w_content.rows(), Eigen::Index(1));
  fn(std::string("head.W_salience"), h.W_salience.data(), h.W_salience.rows(), h.W_salience.cols());
  fn(std::string("head.W_novelty"), h.W_novelty.data(), h.W_novelty.rows(), h.W_novelty.cols());
  fn(std::string("head.W_doc"), h.W_doc.data(), h.W_doc.rows(), h.W_doc.cols());
  fn(std::string("head.b_doc"), h.b_doc.data(), h.b_doc.rows(), Eigen::Index(1));
  fn(std::string("head.bias"), &h.bias, Eigen::Index(1), Eigen::Index(1));
}

inline ModelParams zero_params(const Dims& dims) {
  if (dims.input < 1 || dims.hidden < 1 || dims.doc < 1)
    throw Error("model dimensions must be positive");
  const int I = dims.input, H = dims.hidden, D = dims.doc, HH = 2 * dims.hidden;
  ModelParams p;
  p.dims = dims;
  auto cell = [&](GruCellParams& c) {
    c.W_z = Mat::Zero(H, I); c.U_z = Mat::Zero(H, H); c.b_z = Vec::Zero(H);
    c.W_r = Mat::Zero(H, I); c.U_r = Mat::Zero(H, H); c.b_r = Vec::Zero(H);
    c.W_h = Mat::Zero(H, I); c.U_h = Mat::Zero(H, H); c.b_h = Vec::Zero(H);
  };
  cell(p.forward_cell);
  cell(p.backward_cell);
  p.head.w_content = Vec::Zero(HH);
  p.head.W_salience = Mat::Zero(HH, D);
  p.head.W_novelty = Mat::Zero(HH, HH);
  p.head.W_doc = Mat::Zero(D, HH);
  p.head.b_doc = Vec::Zero(D);
  p.head.bias = 0.0;
  return p;
}

namespace detail {

// 53-bit uniform in [0, 1); avoids std::uniform_real_distribution so the
// stream is identical across standard libraries.
inline double next_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double sigmoid(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                  : std::exp(x) / (1.0 + std::exp(x));
}

}  // namespace detail

// Glorot-style uniform init: entries ~ U(-a, a) with a = sqrt(6/(rows+cols)),
// biases zero. Tensors are filled in canonical order, column-major within
// each tensor, so a seed pins every coordinate.
inline ModelParams init_params(const Dims& dims, std::int64_t seed) {
  ModelParams p = zero_params(dims);
  p.init_seed = seed;
  std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
  visit_tensors(p, [&](const std::string& name, double* data, Eigen::Index rows,
                       Eigen::Index cols) {
    if (name.find(".b_") != std::string::npos || name == "head.bias") return;
    const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
    for (Eigen::Index i = 0; i < rows * cols; ++i)
      data[i] = (2.0 * detail::next_uniform(rng) - 1.0) * bound;
  });
  return p;
}

namespace detail {

inline void check_cell_shapes(const GruCellParams& cell, const Vec& x,
                              const Vec& h_prev) {
  if (cell.W_z.cols() != x.size())
    throw Error("gru_cell: input size " + std::to_string(x.size()) +
                " does not match cell input dimension " +
                std::to_string(cell.W_z.cols()));
  if (cell.U_z.cols() != h_prev.size())
    throw Error("gru_cell: state size " + std::to_string(h_prev.size()) +
                " does not match cell hidden dimension " +
                std::to_string(cell.U_z.cols()));
}

}  // namespace detail

struct GruStep {
  Vec z, r, c, state;  // update gate, reset gate, candidate, new state
};

// z = sig(W_z x + U_z h + b_z); r = sig(W_r x + U_r h + b_r);
// c = tanh(W_h x + U_h (r .* h) + b_h); state = (1-z) .* h + z .* c
inline GruStep gru_cell_step(const GruCellParams& cell, const Vec& x,
                             const Vec& h_prev) {
  detail::check_cell_shapes(cell, x, h_prev);
  GruStep s;
  s.z = (cell.W_z * x + cell.U_z * h_prev + cell.b_z).unaryExpr(&detail::sigmoid);
  s.r = (cell.W_r * x + cell.U_r * h_prev + cell.b_r).unaryExpr(&detail::sigmoid);
  s.c = (cell.W_h * x + cell.U_h * s.r.cwiseProduct(h_prev) + cell.b_h)
            .array()
            .tanh()
            .matrix();
  s.state = ((1.0 - s.z.array()) * h_prev.array() + s.z.array() * s.c.array())
                .matrix();
  return s;
}

inline Vec gru_cell(const GruCellParams& cell, const Vec& x, const Vec& h_prev) {
  return gru_cell_step(cell, x, h_prev).state;
}

// Logits are clamped here before the sigmoid so the loss can never hit
// log(0); invisible at ordinary scales.
inline constexpr double logit_clamp = 30.0;

// Everything the backward pass needs from one forward run.
struct ForwardTrace {
  std::vector<Vec> x;  // sentence embeddings as given

  // fwd_state[0] is the zero start; fwd_state[j+1] is the state after
  // sentence j. bwd_state[n] is the zero start; bwd_state[j] the state after
  // sentence j on the right-to-left pass.
  std::vector<Vec> fwd_state, bwd_state;
  std::vector<Vec> fwd_z, fwd_r, fwd_c;
  std::vector<Vec> bwd_z, bwd_r, bwd_c;

  std::vector<Vec> h;  // h[j] = [fwd_state[j+1]; bwd_state[j]], length 2*hidden
  Vec mean_h;
  Vec d;  // document representation tanh(W_doc mean_h + b_doc)

  std::vector<Vec> s;          // accumulated summary state before sentence j; s[0] = 0
  std::vector<double> logit;   // pre-clamp logits
  std::vector<double> p;       // selection probabilities, strictly in (0, 1)

  int size() const { return static_cast<int>(x.size()); }
};

struct EncodeResult {
  std::vector<Vec> h;
  Vec d;
};

struct ClassifyResult {
  std::vector<double> p;
  std::vector<Vec> s;
};

namespace detail {

inline void run_encoder(const ModelParams& params, const std::vector<Vec>& xs,
                        ForwardTrace& t) {
  const int n = static_cast<int>(xs.size());
  const int H = params.dims.hidden;
  for (const auto& x : xs)
    if (x.size() != params.dims.input)
      throw Error("encode: embedding size " + std::to_string(x.size()) +
                  " does not match model input dimension " +
                  std::to_string(params.dims.input));

  t.x = xs;
  t.fwd_state.assign(n + 1, Vec());
  t.bwd_state.assign(n + 1, Vec());
  t.fwd_z.resize(n); t.fwd_r.resize(n); t.fwd_c.resize(n);
  t.bwd_z.resize(n); t.bwd_r.resize(n); t.bwd_c.resize(n);

  t.fwd_state[0] = Vec::Zero(H);
  for (int j = 0; j < n; ++j) {
    GruStep s = gru_cell_step(params.forward_cell, xs[j], t.fwd_state[j]);
    t.fwd_z[j] = std::move(s.z);
    t.fwd_r[j] = std::move(s.r);
    t.fwd_c[j] = std::move(s.c);
    t.fwd_state[j + 1] = std::move(s.state);
  }
  t.bwd_state[n] = Vec::Zero(H);
  for (int j = n - 1; j >= 0; --j) {
    GruStep s = gru_cell_step(params.backward_cell, xs[j], t.bwd_state[j + 1]);
    t.bwd_z[j] = std::move(s.z);
    t.bwd_r[j] = std::move(s.r);
    t.bwd_c[j] = std::move(s.c);
    t.bwd_state[j] = std::move(s.state);
  }

  t.h.resize(n);
  Vec sum = Vec::Zero(2 * H);
  for (int j = 0; j < n; ++j) {
    t.h[j].resize(2 * H);
    t.h[j] << t.fwd_state[j + 1], t.bwd_state[j];
    sum += t.h[j];
  }
  t.mean_h = sum / n;
  t.d = (params.head.W_doc * t.mean_h + params.head.b_doc).array().tanh().matrix();
}

inline void run_head(const ClassifierParams& head, const std::vector<Vec>& h,
                     const Vec& d, std::vector<Vec>& s, std::vector<double>& logit,
                     std::vector<double>& p) {
  const int n = static_cast<int>(h.size());
  if (n == 0) throw Error("classify: empty sentence sequence");
  const Eigen::Index hh = h[0].size();
  if (head.w_content.size() != hh || head.W_salience.rows() != hh ||
      head.W_novelty.rows() != hh || head.W_novelty.cols() != hh ||
      head.W_doc.cols() != hh || head.W_salience.cols() != d.size() ||
      head.W_doc.rows() != d.size())
    throw Error("classify: head shapes do not match the encoder output");

  s.assign(n, Vec());
  logit.assign(n, 0.0);
  p.assign(n, 0.0);
  const Vec salience_dir = head.W_salience * d;  // reused across sentences
  Vec acc = Vec::Zero(hh);
  for (int j = 0; j < n; ++j) {
    s[j] = acc;
    const Vec t = acc.array().tanh().matrix();
    const double l = head.w_content.dot(h[j]) + h[j].dot(salience_dir) -
                     h[j].dot(head.W_novelty * t) + head.bias;
    logit[j] = l;
    p[j] = detail::sigmoid(std::clamp(l, -logit_clamp, logit_clamp));
    acc += p[j] * h[j];
  }
}

}  // namespace detail

// Bidirectional pass over the sentence embeddings plus the document
// representation d = tanh(W_doc * mean(h) + b_doc).
inline EncodeResult encode(const ModelParams& params, const std::vector<Vec>& embeddings) {
  if (embeddings.empty()) throw Error("encode: empty sentence sequence");
  ForwardTrace t;
  detail::run_encoder(params, embeddings, t);
  return {std::move(t.h), std::move(t.d)};
}

// Sequential head: logit_j = w_content.h_j + h_j'W_salience d
// - h_j'W_novelty tanh(s_j) + bias, with s_{j+1} = s_j + p_j h_j and s_0 = 0.
inline ClassifyResult classify(const ClassifierParams& head,
                               const std::vector<Vec>& h, const Vec& d) {
  ClassifyResult r;
  std::vector<double> logit;
  detail::run_head(head, h, d, r.s, logit, r.p);
  return r;
}

inline ForwardTrace forward(const ModelParams& params,
                            const std::vector<Vec>& embeddings) {
  if (embeddings.empty()) throw Error("forward: empty sentence sequence");
  ForwardTrace t;
  detail::run_encoder(params, embeddings, t);
  detail::run_head(params.head, t.h, t.d, t.s, t.logit, t.p);
  return t;
}

// Mean binary cross-entropy over clamped logits, in the overflow-free form
// max(l,0) + log(1+exp(-|l|)) - l*y.
inline double sequence_loss(const std::vector<double>& logits,
                            const std::vector<int>& targets) {
  if (logits.size() != targets.size())
    throw Error("loss: " + std::to_string(targets.size()) + " targets for " +
                std::to_string(logits.size()) + " sentences");
  if (logits.empty()) throw Error("loss: empty sequence");
  double total = 0.0;
  for (std::size_t j = 0; j < logits.size(); ++j) {
    if (targets[j] != 0 && targets[j] != 1)
      throw Error("loss: targets must be 0 or 1");
    const double l = std::clamp(logits[j], -logit_clamp, logit_clamp);
    total += std::max(l, 0.0) + std::log1p(std::exp(-std::abs(l))) - l * targets[j];
  }
  return total / static_cast<double>(logits.size());
}

struct BackwardResult {
  double loss = 0.0;
  ModelParams grads;
};

namespace detail {

// Reverse-mode step through one GRU application. Accumulates parameter
// gradients into g and returns the gradient with respect to the previous
// state. dstate is the total gradient arriving at this step's output.
inline Vec gru_cell_backward(const GruCellParams& cell, GruCellParams& g,
                             const Vec& x, const Vec& prev, const Vec& z,
                             const Vec& r, const Vec& c, const Vec& dstate) {
  // state = (1-z) .* prev + z .* c
  const Vec dz = dstate.cwiseProduct(c - prev);
  const Vec dc = dstate.cwiseProduct(z);
  Vec dprev = dstate.cwiseProduct((1.0 - z.array()).matrix());

  // candidate: c = tanh(W_h x + U_h (r .* prev) + b_h)
  const Vec dc_pre = dc.cwiseProduct((1.0 - c.array().square()).matrix());
  g.W_h.noalias() += dc_pre * x.transpose();
  g.U_h.noalias() += dc_pre * r.cwiseProduct(prev).transpose();
  g.b_h += dc_pre;
  const Vec dq = cell.U_h.transpose() * dc_pre;  // q = r .* prev
  const Vec dr = dq.cwiseProduct(prev);
  dprev += dq.cwiseProduct(r);

  // update gate
  const Vec dz_pre = dz.cwiseProduct(z.cwiseProduct((1.0 - z.array()).matrix()));
  g.W_z.noalias() += dz_pre * x.transpose();
  g.U_z.noalias() += dz_pre * prev.transpose();
  g.b_z += dz_pre;
  dprev.noalias() += cell.U_z.transpose() * dz_pre;

  // reset gate
  const Vec dr_pre = dr.cwiseProduct(r.cwiseProduct((1.0 - r.array()).matrix()));
  g.W_r.noalias() += dr_pre * x.transpose();
  g.U_r.noalias() += dr_pre * prev.transpose();
  g.b_r += dr_pre;
  dprev.noalias() += cell.U_r.transpose() * dr_pre;

  return dprev;
}

}  // namespace detail

// Exact reverse-mode gradients of the mean BCE loss, including the path
// through the p_j -> s_{j+1} recurrence and both GRU directions.
inline BackwardResult backward(const ModelParams& params, const ForwardTrace& trace,
                               const std::vector<int>& targets) {
  const int n = trace.size();
  if (static_cast<int>(targets.size()) != n)
    throw Error("backward: " + std::to_string(targets.size()) +
                " targets for " + std::to_string(n) + " sentences");
  const int H = params.dims.hidden;
  const int HH = 2 * H;

  BackwardResult out;
  out.grads = zero_params(params.dims);
  out.loss = sequence_loss(trace.logit, targets);
  ModelParams& g = out.grads;

  // ----- head, right to left, carrying dL/ds_{j+1} -----
  std::vector<Vec> dh(n, Vec::Zero(HH));
  Vec dd = Vec::Zero(params.dims.doc);
  Vec ds = Vec::Zero(HH);
  const Vec salience_dir = params.head.W_salience * trace.d;
  for (int j = n - 1; j >= 0; --j) {
    const Vec& hj = trace.h[j];
    const Vec tj = trace.s[j].array().tanh().matrix();
    const double pj = trace.p[j];

    double dlogit = (pj - targets[j]) / n + ds.dot(hj) * pj * (1.0 - pj);
    if (std::abs(trace.logit[j]) > logit_clamp) dlogit = 0.0;

    g.head.w_content += dlogit * hj;
    g.head.W_salience.noalias() += dlogit * hj * trace.d.transpose();
    g.head.W_novelty.noalias() -= dlogit * hj * tj.transpose();
    g.head.bias += dlogit;

    dd.noalias() += dlogit * (params.head.W_salience.transpose() * hj);
    const Vec dt = -dlogit * (params.head.W_novelty.transpose() * hj);

    dh[j] = dlogit * (params.head.w_content + salience_dir -
                      params.head.W_novelty * tj) +
            pj * ds;
    // s_{j+1} = s_j + p_j h_j, and t_j = tanh(s_j)
    ds += dt.cwiseProduct((1.0 - tj.array().square()).matrix());
  }

  // ----- document representation -----
  const Vec du = dd.cwiseProduct((1.0 - trace.d.array().square()).matrix());
  g.head.W_doc.noalias() += du * trace.mean_h.transpose();
  g.head.b_doc += du;
  const Vec dmean = params.head.W_doc.transpose() * du;
  for (int j = 0; j < n; ++j) dh[j] += dmean / n;

  // ----- forward GRU: gradient flows right to left -----
  Vec carry = Vec::Zero(H);
  for (int j = n - 1; j >= 0; --j) {
    const Vec da = dh[j].head(H) + carry;
    carry = detail::gru_cell_backward(params.forward_cell, g.forward_cell,
                                      trace.x[j], trace.fwd_state[j],
                                      trace.fwd_z[j], trace.fwd_r[j],
                                      trace.fwd_c[j], da);
  }
  // ----- backward GRU: gradient flows left to right -----
  carry = Vec::Zero(H);
  for (int j = 0; j < n; ++j) {
    const Vec db = dh[j].tail(H) + carry;
    carry = detail::gru_cell_backward(params.backward_cell, g.backward_cell,
                                      trace.x[j], trace.bwd_state[j + 1],
                                      trace.bwd_z[j], trace.bwd_r[j],
                                      trace.bwd_c[j], db);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Checkpoint format (little-endian):
//   magic "XSUMGRU1" | u32 version | i32 input, hidden, doc | i64 init_seed |
//   u32 tensor count | per tensor: u32 name length, name bytes, u32 rows,
//   u32 cols, rows*cols f64 values (column-major).
// Tensors appear in canonical visit_tensors order; loads are bit-exact.
// ---------------------------------------------------------------------------

inline constexpr char checkpoint_magic[9] = "XSUMGRU1";
inline constexpr std::uint32_t checkpoint_version = 1;

namespace detail {

template <typename T>
void write_pod(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_pod(std::ifstream& in, T& v, const std::string& path) {
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error("truncated checkpoint: " + path);
}

}  // namespace detail

inline void save_params(const ModelParams& params, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open checkpoint for writing: " + path);
  out.write(checkpoint_magic, 8);
  detail::write_pod(out, checkpoint_version);
  detail::write_pod(out, static_cast<std::int32_t>(params.dims.input));
  detail::write_pod(out, static_cast<std::int32_t>(params.dims.hidden));
  detail::write_pod(out, static_cast<std::int32_t>(params.dims.doc));
  detail::write_pod(out, params.init_seed);

  std::uint32_t count = 0;
  visit_tensors(params, [&](const std::string&, const double*, Eigen::Index,
                            Eigen::Index) { ++count; });
  detail::write_pod(out, count);

  visit_tensors(params, [&](const std::string& name, const double* data,
                            Eigen::Index rows, Eigen::Index cols) {
    detail::write_pod(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    detail::write_pod(out, static_cast<std::uint32_t>(rows));
    detail::write_pod(out, static_cast<std::uint32_t>(cols));
    out.write(reinterpret_cast<const char*>(data),
              static_cast<std::streamsize>(sizeof(double) * rows * cols));
  });
  out.flush();
  if (!out) throw Error("failed to write checkpoint: " + path);
}

struct TensorInfo {
  std::string name;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
};

// Reads only the tensor directory (names and shapes) of a checkpoint.
inline std::vector<TensorInfo> read_checkpoint_schema(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint: " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, checkpoint_magic, 8) != 0)
    throw Error("not a model checkpoint (bad magic): " + path);
  std::uint32_t version;
  detail::read_pod(in, version, path);
  if (version != checkpoint_version)
    throw Error("unsupported checkpoint version " + std::to_string(version) +
                " (expected " + std::to_string(checkpoint_version) + "): " + path);
  std::int32_t dims[3];
  for (auto& d : dims) detail::read_pod(in, d, path);
  std::int64_t seed;
  detail::read_pod(in, seed, path);
  std::uint32_t count;
  detail::read_pod(in, count, path);

  std::vector<TensorInfo> schema;
  for (std::uint32_t i = 0; i < count; ++i) {
    std::uint32_t name_len;
    detail::read_pod(in, name_len, path);
    if (name_len > 4096) throw Error("corrupt checkpoint tensor name: " + path);
    TensorInfo info;
    info.name.resize(name_len);
    in.read(info.name.data(), name_len);
    if (!in) throw Error("truncated checkpoint: " + path);
    detail::read_pod(in, info.rows, path);
    detail::read_pod(in, info.cols, path);
    in.seekg(static_cast<std::streamoff>(sizeof(double)) * info.rows * info.cols,
             std::ios::cur);
    if (!in) throw Error("truncated checkpoint: " + path);
    schema.push_back(std::move(info));
  }
  return schema;
}

inline ModelParams load_params(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint: " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, checkpoint_magic, 8) != 0)
    throw Error("not a model checkpoint (bad magic): " + path);
  std::uint32_t version;
  detail::read_pod(in, version, path);
  if (version != checkpoint_version)
    throw Error("unsupported checkpoint version " + std::to_string(version) +
                " (expected " + std::to_string(checkpoint_version) + "): " + path);
  std::int32_t input, hidden, doc;
  detail::read_pod(in, input, path);
  detail::read_pod(in, hidden, path);
  detail::read_pod(in, doc, path);
  if (input < 1 || hidden < 1 || doc < 1)
    throw Error("corrupt checkpoint dimensions: " + path);
  std::int64_t seed;
  detail::read_pod(in, seed, path);
  std::uint32_t count;
  detail::read_pod(in, count, path);

  ModelParams p = zero_params({input, hidden, doc});
  p.init_seed = seed;
  std::uint32_t expected = 0;
  visit_tensors(p, [&](const std::string&, double*, Eigen::Index, Eigen::Index) {
    ++expected;
  });
  if (count != expected)
    throw Error("corrupt checkpoint: " + std::to_string(count) +
                " tensors, expected " + std::to_string(expected) + ": " + path);

  visit_tensors(p, [&](const std::string& name, double* data, Eigen::Index rows,
                       Eigen::Index cols) {
    std::uint32_t name_len;
    detail::read_pod(in, name_len, path);
    std::string stored(name_len, '\0');
    in.read(stored.data(), name_len);
    if (!in) throw Error("truncated checkpoint: " + path);
    std::uint32_t srows, scols;
    detail::read_pod(in, srows, path);
    detail::read_pod(in, scols, path);
    if (stored != name || srows != static_cast<std::uint32_t>(rows) ||
        scols != static_cast<std::uint32_t>(cols))
      throw Error("corrupt checkpoint: tensor \"" + stored + "\" (" +
                  std::to_string(srows) + "x" + std::to_string(scols) +
                  ") where \"" + name + "\" (" + std::to_string(rows) + "x" +
                  std::to_string(cols) + ") was expected: " + path);
    in.read(reinterpret_cast<char*>(data),
            static_cast<std::streamsize>(sizeof(double) * rows * cols));
    if (!in) throw Error("truncated checkpoint: " + path);
  });
  char extra;
  if (in.read(&extra, 1)) throw Error("trailing data in checkpoint: " + path);
  return p;
}

}  // namespace extsum
