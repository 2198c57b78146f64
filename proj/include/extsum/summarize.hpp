#pragma once

#include <algorithm>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "json.hpp"

#include "extsum/corpus.hpp"
#include "extsum/embed.hpp"
#include "extsum/error.hpp"
#include "extsum/labeler.hpp"
#include "extsum/log.hpp"
#include "extsum/net.hpp"

namespace extsum {

struct SummaryResult {
  std::string doc_id;
  std::vector<int> selected_indices;      // ascending
  std::vector<double> probabilities;      // one per sentence
  std::vector<std::string> summary_text;  // raw sentences, document order
};

// Indices of the `count` largest probabilities, ties broken by ascending
// index, returned in ascending order.
inline std::vector<int> select_top(const std::vector<double>& probabilities,
                                   int count) {
  std::vector<int> idx(probabilities.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return probabilities[a] > probabilities[b];
  });
  idx.resize(std::min<std::size_t>(idx.size(), static_cast<std::size_t>(count)));
  std::sort(idx.begin(), idx.end());
  return idx;
}

// Scores every sentence with the model and keeps the top N under the
// 10%-minimum-3 size rule, emitted in original document order.
inline SummaryResult summarize(const ModelParams& params,
                               const WordVectorStore& vectors, const Document& doc) {
  if (doc.sentences.empty())
    throw Error("document \"" + doc.id + "\" has no sentences");
  if (vectors.dim != params.dims.input)
    throw Error("vector dimension " + std::to_string(vectors.dim) +
                " does not match model input dimension " +
                std::to_string(params.dims.input));

  auto embeddings = embed_document(vectors, doc);
  bool embeddable = false;
  std::vector<Vec> xs;
  xs.reserve(embeddings.size());
  for (auto& e : embeddings) {
    embeddable = embeddable || !e.all_oov;
    xs.push_back(std::move(e.values));
  }
  if (!embeddable)
    throw Error("document \"" + doc.id + "\" has no embeddable sentences");

  ForwardTrace trace = forward(params, xs);
  const int n = static_cast<int>(doc.sentences.size());

  SummaryResult result;
  result.doc_id = doc.id;
  result.probabilities = trace.p;
  result.selected_indices = select_top(trace.p, target_count(n));
  result.summary_text.reserve(result.selected_indices.size());
  for (int j : result.selected_indices)
    result.summary_text.push_back(doc.sentences[j].raw);
  return result;
}

// One JSONL record per document, input order preserved. Failing documents are
// logged and skipped; returns how many failed.
inline std::size_t summarize_corpus(const ModelParams& params,
                                    const WordVectorStore& vectors,
                                    const std::vector<Document>& docs,
                                    const std::string& out_path) {
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open output file: " + out_path);
  std::size_t failures = 0;
  for (const auto& doc : docs) {
    try {
      SummaryResult r = summarize(params, vectors, doc);
      nlohmann::ordered_json rec;
      rec["id"] = r.doc_id;
      rec["selected"] = r.selected_indices;
      rec["probabilities"] = r.probabilities;
      rec["summary"] = r.summary_text;
      out << rec.dump() << "\n";
    } catch (const Error& e) {
      log_warn(std::string("summarize: ") + e.what());
      ++failures;
    }
  }
  out.flush();
  if (!out) throw Error("failed to write results file: " + out_path);
  if (failures > 0)
    log_warn(std::to_string(failures) + " document(s) failed to summarize");
  return failures;
}

// Reads a results file back; the inverse of summarize_corpus's record layout.
inline std::vector<SummaryResult> read_results(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open results file: " + path);
  std::vector<SummaryResult> results;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(where + ": malformed JSON: " + e.what());
    }
    if (!rec.is_object() || !rec.contains("id") || !rec["id"].is_string() ||
        !rec.contains("selected") || !rec["selected"].is_array() ||
        !rec.contains("probabilities") || !rec["probabilities"].is_array() ||
        !rec.contains("summary") || !rec["summary"].is_array())
      throw Error(where + ": not a summarize result record");
    SummaryResult r;
    r.doc_id = rec["id"].get<std::string>();
    for (const auto& v : rec["selected"]) {
      if (!v.is_number_integer())
        throw Error(where + ": \"selected\" must contain integers");
      r.selected_indices.push_back(v.get<int>());
    }
    for (const auto& v : rec["probabilities"]) {
      if (!v.is_number())
        throw Error(where + ": \"probabilities\" must contain numbers");
      r.probabilities.push_back(v.get<double>());
    }
    for (const auto& v : rec["summary"]) {
      if (!v.is_string())
        throw Error(where + ": \"summary\" must contain strings");
      r.summary_text.push_back(v.get<std::string>());
    }
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace extsum
