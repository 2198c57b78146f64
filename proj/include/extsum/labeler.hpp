#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "extsum/corpus.hpp"
#include "extsum/log.hpp"
#include "extsum/rouge.hpp"

namespace extsum {

// A document with generated extractive labels and the per-sentence ROUGE-1
// F1 scores they were derived from.
struct LabeledDocument {
  Document document;
  std::vector<double> scores;
};

// Summary size rule: 10% of the sentence count rounded up, at least 3, never
// more than the document has. Integer arithmetic so 0.1*n cannot pick up a
// float rounding artifact.
inline int target_count(int num_sentences) {
  if (num_sentences < 1)
    throw Error("target_count requires at least one sentence, got " +
                std::to_string(num_sentences));
  int n = (num_sentences + 9) / 10;
  n = std::max(n, 3);
  return std::min(n, num_sentences);
}

// Per-sentence ROUGE-1 F1 against the whole abstractive summary, treated as
// one concatenated token sequence.
inline std::vector<double> score_sentences(const Document& doc) {
  if (!doc.abstractive || doc.abstractive->empty())
    throw Error("document not annotatable: \"" + doc.id +
                "\" has no abstractive summary");
  std::vector<Token> summary;
  for (const auto& s : *doc.abstractive)
    summary.insert(summary.end(), s.tokens.begin(), s.tokens.end());
  std::vector<double> scores;
  scores.reserve(doc.sentences.size());
  for (const auto& sentence : doc.sentences)
    scores.push_back(rouge_n(sentence.tokens, summary, 1).f1);
  return scores;
}

// Top-N selection by (score desc, index asc). Sentences without tokens are
// never labeled; if fewer than N sentences have tokens, all of them are.
inline LabeledDocument generate_labels(const Document& doc) {
  std::vector<double> scores = score_sentences(doc);
  const int n = static_cast<int>(doc.sentences.size());

  std::vector<int> eligible;
  for (int j = 0; j < n; ++j)
    if (!doc.sentences[j].tokens.empty()) eligible.push_back(j);
  if (eligible.empty())
    throw Error("document not annotatable: \"" + doc.id +
                "\" has no tokenizable sentence");

  std::stable_sort(eligible.begin(), eligible.end(),
                   [&](int a, int b) { return scores[a] > scores[b]; });
  const int want = std::min<int>(target_count(n), static_cast<int>(eligible.size()));

  std::vector<int> labels(n, 0);
  for (int k = 0; k < want; ++k) labels[eligible[k]] = 1;

  LabeledDocument out;
  out.document = doc;
  out.document.labels = std::move(labels);
  out.scores = std::move(scores);
  return out;
}

struct AnnotateResult {
  std::vector<LabeledDocument> labeled;
  // (document id, reason) for every skipped document
  std::vector<std::pair<std::string, std::string>> failures;
};

// Annotates every document it can; unannotatable ones are skipped with a
// warning and collected instead of aborting the run.
inline AnnotateResult annotate_corpus(const std::vector<Document>& docs) {
  AnnotateResult result;
  for (const auto& doc : docs) {
    try {
      result.labeled.push_back(generate_labels(doc));
    } catch (const Error& e) {
      log_warn(std::string("skipping document: ") + e.what());
      result.failures.emplace_back(doc.id, e.what());
    }
  }
  if (!result.failures.empty())
    log_warn(std::to_string(result.failures.size()) +
             " document(s) skipped during annotation");
  return result;
}

}  // namespace extsum
