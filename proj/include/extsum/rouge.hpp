#pragma once

#include <algorithm>
#include <string>
#include <unordered_map>
#include <vector>

#include "extsum/corpus.hpp"
#include "extsum/error.hpp"

namespace extsum {

// Precision / recall / F1 triple. F1 is the harmonic mean, 0 when both
// components are 0.
struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Multiset of n-grams. Keys are the n tokens joined with 0x1F, which cannot
// occur inside a token (tokens carry no whitespace or control characters
// from tokenize, and the corpus format is line-based).
struct NGramBag {
  int order = 1;
  std::unordered_map<std::string, long long> counts;
  long long total = 0;
};

inline NGramBag ngrams(const std::vector<Token>& tokens, int order) {
  if (order < 1)
    throw Error("n-gram order must be >= 1, got " + std::to_string(order));
  NGramBag bag;
  bag.order = order;
  const std::size_t w = static_cast<std::size_t>(order);
  if (tokens.size() < w) return bag;
  for (std::size_t i = 0; i + w <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (std::size_t k = 1; k < w; ++k) {
      key.push_back('\x1f');
      key += tokens[i + k];
    }
    ++bag.counts[key];
    ++bag.total;
  }
  return bag;
}

// Accumulates n-grams of several sentences into one bag without ever forming
// an n-gram across a sentence boundary.
inline NGramBag ngrams_by_sentence(const std::vector<std::vector<Token>>& sentences,
                                   int order) {
  if (order < 1)
    throw Error("n-gram order must be >= 1, got " + std::to_string(order));
  NGramBag bag;
  bag.order = order;
  for (const auto& sent : sentences) {
    NGramBag part = ngrams(sent, order);
    for (auto& [key, count] : part.counts) bag.counts[key] += count;
    bag.total += part.total;
  }
  return bag;
}

// Raw clipped-overlap statistics; kept separate from the score so callers can
// micro-average across documents.
struct OverlapCounts {
  long long overlap = 0;
  long long candidate_total = 0;
  long long reference_total = 0;
};

inline OverlapCounts clipped_overlap(const NGramBag& candidate,
                                     const NGramBag& reference) {
  OverlapCounts c;
  c.candidate_total = candidate.total;
  c.reference_total = reference.total;
  for (const auto& [key, count] : candidate.counts) {
    auto it = reference.counts.find(key);
    if (it != reference.counts.end()) c.overlap += std::min(count, it->second);
  }
  return c;
}

inline RougeScore score_from_counts(const OverlapCounts& c) {
  RougeScore s;
  s.precision = c.candidate_total > 0
                    ? static_cast<double>(c.overlap) / static_cast<double>(c.candidate_total)
                    : 0.0;
  s.recall = c.reference_total > 0
                 ? static_cast<double>(c.overlap) / static_cast<double>(c.reference_total)
                 : 0.0;
  s.f1 = (s.precision + s.recall) > 0.0
             ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  return s;
}

// ROUGE-N with clipped (multiset-min) matching. An empty side zeroes the
// corresponding component instead of dividing by zero.
inline RougeScore rouge_n(const std::vector<Token>& candidate,
                          const std::vector<Token>& reference, int order) {
  return score_from_counts(
      clipped_overlap(ngrams(candidate, order), ngrams(reference, order)));
}

inline OverlapCounts overlap_counts_multi(
    const std::vector<std::vector<Token>>& candidates,
    const std::vector<std::vector<Token>>& references, int order) {
  return clipped_overlap(ngrams_by_sentence(candidates, order),
                         ngrams_by_sentence(references, order));
}

// Summary-level ROUGE-N: both sides are sentence lists and n-grams respect
// sentence boundaries.
inline RougeScore rouge_n_multi(const std::vector<std::vector<Token>>& candidates,
                                const std::vector<std::vector<Token>>& references,
                                int order) {
  return score_from_counts(overlap_counts_multi(candidates, references, order));
}

}  // namespace extsum
