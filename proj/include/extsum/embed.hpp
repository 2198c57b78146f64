#pragma once

#include <Eigen/Core>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "extsum/corpus.hpp"
#include "extsum/error.hpp"
#include "extsum/log.hpp"

namespace extsum {

struct WordVectorStore {
  int dim = 0;
  std::unordered_map<std::string, Eigen::VectorXd> table;
  std::size_t duplicates = 0;  // entries overwritten during load (last wins)
};

// Loads the plain text layout `<token> <f1> ... <fd>`, one entry per line.
// The first line fixes the dimension; every later line must match it.
inline WordVectorStore load_vectors(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open vector file: " + path);
  WordVectorStore store;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::string where = path + ":" + std::to_string(line_no);

    std::istringstream ss(line);
    std::string token;
    ss >> token;
    std::vector<double> values;
    double v;
    while (ss >> v) values.push_back(v);
    if (!ss.eof()) throw Error(where + ": unparsable vector component");
    if (values.empty()) throw Error(where + ": no vector components");

    if (store.dim == 0) {
      store.dim = static_cast<int>(values.size());
    } else if (static_cast<int>(values.size()) != store.dim) {
      throw Error(where + ": expected " + std::to_string(store.dim) +
                  " components, got " + std::to_string(values.size()));
    }
    if (store.table.count(token)) ++store.duplicates;
    store.table[token] =
        Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());
  }
  if (store.table.empty()) throw Error("empty vector file: " + path);
  if (store.duplicates > 0)
    log_warn(std::to_string(store.duplicates) + " duplicate token(s) in " +
             path + "; last occurrence wins");
  return store;
}

struct SentenceEmbedding {
  Eigen::VectorXd values;
  bool all_oov = false;  // no token was in vocabulary; values is the zero vector
};

// Mean of the in-vocabulary token vectors. OOV tokens are skipped; a sentence
// with no vocabulary hit falls back to the zero vector and is flagged.
inline SentenceEmbedding embed_sentence(const WordVectorStore& store,
                                        const Sentence& sentence) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(store.dim);
  int hits = 0;
  for (const auto& token : sentence.tokens) {
    auto it = store.table.find(token);
    if (it != store.table.end()) {
      sum += it->second;
      ++hits;
    }
  }
  if (hits == 0) return {std::move(sum), true};
  return {sum / hits, false};
}

inline std::vector<SentenceEmbedding> embed_document(const WordVectorStore& store,
                                                     const Document& doc) {
  std::vector<SentenceEmbedding> out;
  out.reserve(doc.sentences.size());
  for (const auto& sentence : doc.sentences)
    out.push_back(embed_sentence(store, sentence));
  return out;
}

}  // namespace extsum
