#pragma once

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "extsum/corpus.hpp"
#include "extsum/error.hpp"
#include "extsum/rouge.hpp"
#include "extsum/summarize.hpp"

namespace extsum {

struct MetricRow {
  std::string name;  // sentence_match | rouge1 | rouge2
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct DocumentEvaluation {
  std::string id;
  MetricRow sentence_match;
  MetricRow rouge1;
  MetricRow rouge2;
};

struct EvaluationReport {
  std::vector<MetricRow> rows;  // fixed order: sentence_match, rouge1, rouge2
  std::size_t num_documents = 0;
  std::string aggregate = "macro";
  std::vector<DocumentEvaluation> per_document;
};

// Set overlap between selected and gold sentence indices. The gold side must
// be non-empty; an empty selection just zeroes precision.
inline RougeScore sentence_match(const std::vector<int>& selected,
                                 const std::vector<int>& gold) {
  const std::set<int> sel(selected.begin(), selected.end());
  const std::set<int> gld(gold.begin(), gold.end());
  if (gld.empty()) throw Error("sentence_match: empty gold sentence set");
  std::size_t hits = 0;
  for (int i : sel) hits += gld.count(i);
  RougeScore s;
  s.precision = sel.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(sel.size());
  s.recall = static_cast<double>(hits) / static_cast<double>(gld.size());
  s.f1 = (s.precision + s.recall) > 0.0
             ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  return s;
}

struct EvaluateOptions {
  std::string aggregate = "macro";  // macro | micro
  std::string match = "index";      // index | text
};

namespace detail {

// lowercased, whitespace runs collapsed to single spaces, edges trimmed
inline std::string normalize_sentence(const std::string& raw) {
  std::string out;
  bool pending_space = false;
  for (std::size_t i = 0; i < raw.size();) {
    char32_t cp = decode_utf8(raw, i);
    if (is_space_cp(cp)) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      encode_utf8(lowercase_cp(cp), out);
    }
  }
  return out;
}

// multiset intersection size over normalized sentence strings
inline std::size_t text_match_count(const std::vector<std::string>& selected,
                                    const std::vector<std::string>& gold) {
  std::unordered_map<std::string, long long> pool;
  for (const auto& s : gold) ++pool[normalize_sentence(s)];
  std::size_t hits = 0;
  for (const auto& s : selected) {
    auto it = pool.find(normalize_sentence(s));
    if (it != pool.end() && it->second > 0) {
      --it->second;
      ++hits;
    }
  }
  return hits;
}

inline RougeScore prf(double hits, double selected, double gold) {
  RougeScore s;
  s.precision = selected > 0 ? hits / selected : 0.0;
  s.recall = gold > 0 ? hits / gold : 0.0;
  s.f1 = (s.precision + s.recall) > 0.0
             ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  return s;
}

}  // namespace detail

// Scores every summary against its gold document: sentence matching plus
// summary-level ROUGE-1/2, then aggregates. Macro averages the per-document
// P/R/F1; micro pools the raw counts first.
inline EvaluationReport evaluate(const std::vector<SummaryResult>& results,
                                 const std::vector<Document>& gold_corpus,
                                 const EvaluateOptions& opts = {}) {
  if (opts.aggregate != "macro" && opts.aggregate != "micro")
    throw Error("evaluate: aggregate must be macro or micro");
  if (opts.match != "index" && opts.match != "text")
    throw Error("evaluate: match must be index or text");

  std::unordered_map<std::string, const Document*> gold_by_id;
  for (const auto& doc : gold_corpus) gold_by_id[doc.id] = &doc;

  EvaluationReport report;
  report.aggregate = opts.aggregate;
  report.num_documents = results.size();

  // macro accumulators
  MetricRow macro_sm{"sentence_match"}, macro_r1{"rouge1"}, macro_r2{"rouge2"};
  // micro accumulators
  double sm_hits = 0, sm_selected = 0, sm_gold = 0;
  OverlapCounts micro_r1, micro_r2;

  for (const auto& result : results) {
    const auto it = gold_by_id.find(result.doc_id);
    if (it == gold_by_id.end())
      throw Error("evaluate: result id \"" + result.doc_id +
                  "\" not present in the gold corpus");
    const Document& gold = *it->second;
    if (!gold.labels)
      throw Error("evaluate: gold document \"" + gold.id + "\" has no labels");

    std::vector<int> gold_indices;
    std::vector<std::string> gold_sentences;
    std::vector<std::vector<Token>> gold_tokens;
    for (std::size_t j = 0; j < gold.sentences.size(); ++j) {
      if ((*gold.labels)[j] == 1) {
        gold_indices.push_back(static_cast<int>(j));
        gold_sentences.push_back(gold.sentences[j].raw);
        gold_tokens.push_back(gold.sentences[j].tokens);
      }
    }
    if (gold_indices.empty())
      throw Error("evaluate: gold document \"" + gold.id +
                  "\" selects no sentence");

    RougeScore sm;
    double hits;
    if (opts.match == "index") {
      sm = sentence_match(result.selected_indices, gold_indices);
      const std::set<int> sel(result.selected_indices.begin(),
                              result.selected_indices.end());
      const std::set<int> gld(gold_indices.begin(), gold_indices.end());
      hits = 0;
      for (int i : sel) hits += gld.count(i);
      sm_selected += static_cast<double>(sel.size());
      sm_gold += static_cast<double>(gld.size());
    } else {
      hits = static_cast<double>(
          detail::text_match_count(result.summary_text, gold_sentences));
      sm = detail::prf(hits, static_cast<double>(result.summary_text.size()),
                       static_cast<double>(gold_sentences.size()));
      sm_selected += static_cast<double>(result.summary_text.size());
      sm_gold += static_cast<double>(gold_sentences.size());
    }
    sm_hits += hits;

    std::vector<std::vector<Token>> candidate_tokens;
    candidate_tokens.reserve(result.summary_text.size());
    for (const auto& sent : result.summary_text)
      candidate_tokens.push_back(tokenize(sent));

    const OverlapCounts c1 = overlap_counts_multi(candidate_tokens, gold_tokens, 1);
    const OverlapCounts c2 = overlap_counts_multi(candidate_tokens, gold_tokens, 2);
    const RougeScore r1 = score_from_counts(c1);
    const RougeScore r2 = score_from_counts(c2);
    micro_r1.overlap += c1.overlap;
    micro_r1.candidate_total += c1.candidate_total;
    micro_r1.reference_total += c1.reference_total;
    micro_r2.overlap += c2.overlap;
    micro_r2.candidate_total += c2.candidate_total;
    micro_r2.reference_total += c2.reference_total;

    auto add = [](MetricRow& row, const RougeScore& s) {
      row.precision += s.precision;
      row.recall += s.recall;
      row.f1 += s.f1;
    };
    add(macro_sm, sm);
    add(macro_r1, r1);
    add(macro_r2, r2);

    DocumentEvaluation de;
    de.id = result.doc_id;
    de.sentence_match = {"sentence_match", sm.precision, sm.recall, sm.f1};
    de.rouge1 = {"rouge1", r1.precision, r1.recall, r1.f1};
    de.rouge2 = {"rouge2", r2.precision, r2.recall, r2.f1};
    report.per_document.push_back(std::move(de));
  }

  const double n = static_cast<double>(results.size());
  if (opts.aggregate == "macro") {
    auto mean = [&](MetricRow row) {
      if (n > 0) {
        row.precision /= n;
        row.recall /= n;
        row.f1 /= n;
      }
      return row;
    };
    report.rows = {mean(macro_sm), mean(macro_r1), mean(macro_r2)};
  } else {
    const RougeScore sm = detail::prf(sm_hits, sm_selected, sm_gold);
    const RougeScore r1 = score_from_counts(micro_r1);
    const RougeScore r2 = score_from_counts(micro_r2);
    report.rows = {{"sentence_match", sm.precision, sm.recall, sm.f1},
                   {"rouge1", r1.precision, r1.recall, r1.f1},
                   {"rouge2", r2.precision, r2.recall, r2.f1}};
  }
  return report;
}

// Aligned text table with three decimals per value.
inline std::string render_report_text(const EvaluationReport& report) {
  std::ostringstream out;
  out << std::left << std::setw(16) << "Score" << std::right << std::setw(10)
      << "Precision" << std::setw(8) << "Recall" << std::setw(8) << "F1" << "\n";
  out << std::fixed << std::setprecision(3);
  for (const auto& row : report.rows) {
    out << std::left << std::setw(16) << row.name << std::right << std::setw(10)
        << row.precision << std::setw(8) << row.recall << std::setw(8) << row.f1
        << "\n";
  }
  out << "(" << report.num_documents << " document(s), " << report.aggregate
      << " aggregation)\n";
  return out.str();
}

inline nlohmann::ordered_json report_to_json(const EvaluationReport& report) {
  nlohmann::ordered_json j;
  j["num_documents"] = report.num_documents;
  j["aggregate"] = report.aggregate;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    j["rows"].push_back({{"name", row.name},
                         {"precision", row.precision},
                         {"recall", row.recall},
                         {"f1", row.f1}});
  }
  j["per_document"] = nlohmann::ordered_json::array();
  for (const auto& de : report.per_document) {
    nlohmann::ordered_json d;
    d["id"] = de.id;
    for (const MetricRow* row : {&de.sentence_match, &de.rouge1, &de.rouge2}) {
      d[row->name] = {{"precision", row->precision},
                      {"recall", row->recall},
                      {"f1", row->f1}};
    }
    j["per_document"].push_back(std::move(d));
  }
  return j;
}

inline EvaluationReport report_from_json(const nlohmann::json& j) {
  try {
    EvaluationReport report;
    report.num_documents = j.at("num_documents").get<std::size_t>();
    report.aggregate = j.at("aggregate").get<std::string>();
    for (const auto& row : j.at("rows")) {
      report.rows.push_back({row.at("name").get<std::string>(),
                             row.at("precision").get<double>(),
                             row.at("recall").get<double>(),
                             row.at("f1").get<double>()});
    }
    if (j.contains("per_document")) {
      for (const auto& d : j.at("per_document")) {
        DocumentEvaluation de;
        de.id = d.at("id").get<std::string>();
        auto read_row = [&](const char* name) {
          const auto& r = d.at(name);
          return MetricRow{name, r.at("precision").get<double>(),
                           r.at("recall").get<double>(), r.at("f1").get<double>()};
        };
        de.sentence_match = read_row("sentence_match");
        de.rouge1 = read_row("rouge1");
        de.rouge2 = read_row("rouge2");
        report.per_document.push_back(std::move(de));
      }
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed evaluation report: ") + e.what());
  }
}

}  // namespace extsum
