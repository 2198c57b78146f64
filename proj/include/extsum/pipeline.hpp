#pragma once

#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "extsum/corpus.hpp"
#include "extsum/embed.hpp"
#include "extsum/error.hpp"
#include "extsum/eval.hpp"
#include "extsum/labeler.hpp"
#include "extsum/log.hpp"
#include "extsum/summarize.hpp"
#include "extsum/train.hpp"

namespace extsum {

struct PipelineResult {
  EvaluationReport report;
  TrainReport train_report;
  std::string run_dir;
  std::size_t annotated = 0;
  std::size_t skipped = 0;
  std::size_t train_docs = 0;
  std::size_t heldout_docs = 0;
};

namespace detail {

template <typename Fn>
auto pipeline_stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(std::string(name) + ": " + e.what());
  }
}

}  // namespace detail

// label -> split -> train -> summarize the held-out documents -> evaluate
// them against their generated labels. Every intermediate artifact lands in
// run_dir; a fixed seed makes the whole run byte-for-byte reproducible.
inline PipelineResult run_pipeline(const std::string& corpus_path,
                                   const std::string& vectors_path,
                                   const TrainConfig& config,
                                   const std::string& run_dir) {
  validate_train_config(config);
  std::filesystem::create_directories(run_dir);
  const auto artifact = [&](const char* name) {
    return (std::filesystem::path(run_dir) / name).string();
  };
  write_train_config(config, artifact("config.txt"));

  PipelineResult result;
  result.run_dir = run_dir;

  const std::vector<Document> raw = detail::pipeline_stage(
      "read", [&] { return read_corpus(corpus_path); });
  const WordVectorStore vectors = detail::pipeline_stage(
      "vectors", [&] { return load_vectors(vectors_path); });

  // ---- label ----
  std::vector<Document> labeled = detail::pipeline_stage("label", [&] {
    AnnotateResult annotated = annotate_corpus(raw);
    if (annotated.labeled.empty())
      throw Error("no document in " + corpus_path +
                  " carries an abstractive summary to annotate from");
    std::vector<Document> docs;
    docs.reserve(annotated.labeled.size());
    for (auto& ld : annotated.labeled) docs.push_back(std::move(ld.document));
    result.annotated = docs.size();
    result.skipped = annotated.failures.size();
    write_corpus(docs, artifact("labeled.jsonl"));
    return docs;
  });

  // ---- split ----
  std::vector<Document> train_docs, heldout_docs;
  detail::pipeline_stage("split", [&] {
    const std::size_t n = labeled.size();
    if (n < 2)
      throw Error("need at least 2 annotatable documents to hold out a test split");
    std::size_t hold = static_cast<std::size_t>(
        config.holdout_fraction * static_cast<double>(n));
    hold = std::max<std::size_t>(1, std::min(hold, n - 1));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(static_cast<std::uint64_t>(config.seed) ^
                        0xd1b54a32d192ed03ULL);
    detail::seeded_shuffle(order, rng);

    std::vector<bool> held(n, false);
    for (std::size_t k = 0; k < hold; ++k) held[order[k]] = true;
    for (std::size_t i = 0; i < n; ++i)
      (held[i] ? heldout_docs : train_docs).push_back(labeled[i]);

    write_corpus(train_docs, artifact("train.jsonl"));
    write_corpus(heldout_docs, artifact("heldout.jsonl"));
    result.train_docs = train_docs.size();
    result.heldout_docs = heldout_docs.size();
    log_info("split: " + std::to_string(train_docs.size()) + " train / " +
             std::to_string(heldout_docs.size()) + " held out");
    return 0;
  });

  // ---- train ----
  detail::pipeline_stage("train", [&] {
    TrainResult trained = train(train_docs, vectors, config, artifact("model.bin"));
    result.train_report = std::move(trained.report);
    std::ofstream losses(artifact("train_losses.txt"),
                         std::ios::binary | std::ios::trunc);
    losses.precision(17);
    for (double loss : result.train_report.epoch_mean_loss) losses << loss << "\n";
    return 0;
  });

  // ---- summarize ----
  detail::pipeline_stage("summarize", [&] {
    const ModelParams params = load_params(artifact("model.bin"));
    summarize_corpus(params, vectors, heldout_docs, artifact("results.jsonl"));
    return 0;
  });

  // ---- evaluate ----
  detail::pipeline_stage("evaluate", [&] {
    const auto results = read_results(artifact("results.jsonl"));
    result.report = evaluate(results, heldout_docs);
    std::ofstream rep(artifact("report.json"), std::ios::binary | std::ios::trunc);
    rep << report_to_json(result.report).dump(2) << "\n";
    std::ofstream txt(artifact("report.txt"), std::ios::binary | std::ios::trunc);
    txt << render_report_text(result.report);
    return 0;
  });

  return result;
}

}  // namespace extsum
