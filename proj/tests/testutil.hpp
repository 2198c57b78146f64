#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "extsum/corpus.hpp"

namespace testutil {

// Scratch directory removed on scope exit.
struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    path = std::filesystem::temp_directory_path() /
           ("extsum_" + tag + "_" + std::to_string(counter++) + "_" +
            std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::vector<std::string> random_tokens(std::mt19937_64& rng, int max_len,
                                              int alphabet = 5) {
  const int len = static_cast<int>(rng() % static_cast<unsigned>(max_len + 1));
  std::vector<std::string> out;
  out.reserve(len);
  for (int i = 0; i < len; ++i)
    out.push_back(std::string(1, static_cast<char>('a' + rng() % alphabet)));
  return out;
}

inline std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

// Random document whose sentences share tokens with a synthetic abstractive
// summary to a random degree. Every sentence is non-empty.
inline extsum::Document random_document(std::mt19937_64& rng, const std::string& id,
                                        int min_sentences, int max_sentences) {
  const int n = min_sentences +
                static_cast<int>(rng() % static_cast<unsigned>(
                                     max_sentences - min_sentences + 1));
  extsum::Document doc;
  doc.id = id;
  std::vector<std::string> vocab;
  for (char c = 'a'; c <= 'j'; ++c) vocab.push_back(std::string(1, c));

  auto random_sentence = [&] {
    const int len = 1 + static_cast<int>(rng() % 8);
    std::vector<std::string> toks;
    for (int i = 0; i < len; ++i) toks.push_back(vocab[rng() % vocab.size()]);
    return extsum::Sentence::from_raw(join(toks));
  };
  for (int j = 0; j < n; ++j) doc.sentences.push_back(random_sentence());
  std::vector<extsum::Sentence> abstractive;
  const int k = 1 + static_cast<int>(rng() % 3);
  for (int j = 0; j < k; ++j) abstractive.push_back(random_sentence());
  doc.abstractive = std::move(abstractive);
  return doc;
}

}  // namespace testutil
