#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "extsum/error.hpp"

namespace extsum {

// A token is the normalized form of one word: lowercase, non-empty, and free
// of whitespace. Tokens only ever come out of tokenize().
using Token = std::string;

namespace detail {

// Decodes one UTF-8 code point starting at byte i, advancing i. A malformed
// sequence consumes a single byte and yields its value, so tokenization is
// total and deterministic on arbitrary input.
inline char32_t decode_utf8(const std::string& s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    i += 1;
    return b0;
  }
  auto cont = [&](std::size_t k) {
    return k < s.size() && (static_cast<unsigned char>(s[k]) & 0xC0) == 0x80;
  };
  auto tail = [&](std::size_t k) {
    return static_cast<char32_t>(static_cast<unsigned char>(s[k]) & 0x3F);
  };
  if ((b0 & 0xE0) == 0xC0 && cont(i + 1)) {
    char32_t cp = (static_cast<char32_t>(b0 & 0x1F) << 6) | tail(i + 1);
    i += 2;
    return cp;
  }
  if ((b0 & 0xF0) == 0xE0 && cont(i + 1) && cont(i + 2)) {
    char32_t cp = (static_cast<char32_t>(b0 & 0x0F) << 12) |
                  (tail(i + 1) << 6) | tail(i + 2);
    i += 3;
    return cp;
  }
  if ((b0 & 0xF8) == 0xF0 && cont(i + 1) && cont(i + 2) && cont(i + 3)) {
    char32_t cp = (static_cast<char32_t>(b0 & 0x07) << 18) |
                  (tail(i + 1) << 12) | (tail(i + 2) << 6) | tail(i + 3);
    i += 4;
    return cp;
  }
  i += 1;
  return b0;
}

inline void encode_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline bool is_space_cp(char32_t cp) {
  switch (cp) {
    case U' ': case U'\t': case U'\n': case U'\r': case 0x0B: case 0x0C:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

// Punctuation stripped from token edges: the ASCII punctuation block plus
// common typographic marks (curly quotes, guillemets, dashes, ellipsis).
// Interior punctuation stays, so hyphenations and decimals survive.
inline bool is_strip_punct(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
           (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
  }
  switch (cp) {
    case 0x2018: case 0x2019: case 0x201C: case 0x201D:  // curly quotes
    case 0x00AB: case 0x00BB:                            // guillemets
    case 0x2010: case 0x2013: case 0x2014:               // hyphen/dashes
    case 0x2026:                                         // ellipsis
    case 0x00A1: case 0x00BF:                            // inverted ! ?
      return true;
    default:
      return false;
  }
}

// ASCII plus the Latin-1 letter range; everything else passes through.
inline char32_t lowercase_cp(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  return cp;
}

inline bool is_upper_cp(char32_t cp) {
  return (cp >= U'A' && cp <= U'Z') || (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7);
}

inline bool is_opening_cp(char32_t cp) {
  switch (cp) {
    case U'"': case U'\'': case U'(': case U'[': case U'{':
    case 0x201C: case 0x2018: case 0x00AB:
      return true;
    default:
      return false;
  }
}

inline bool is_closing_cp(char32_t cp) {
  switch (cp) {
    case U'"': case U'\'': case U')': case U']': case U'}':
    case 0x201D: case 0x2019: case 0x00BB:
      return true;
    default:
      return false;
  }
}

}  // namespace detail

// Lowercases, splits on Unicode whitespace, strips edge punctuation from each
// piece and drops pieces that end up empty. Deterministic; empty input gives
// an empty list.
inline std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  std::vector<char32_t> piece;
  auto flush = [&] {
    std::size_t b = 0, e = piece.size();
    while (b < e && detail::is_strip_punct(piece[b])) ++b;
    while (e > b && detail::is_strip_punct(piece[e - 1])) --e;
    if (b < e) {
      std::string tok;
      for (std::size_t k = b; k < e; ++k) detail::encode_utf8(piece[k], tok);
      out.push_back(std::move(tok));
    }
    piece.clear();
  };
  for (std::size_t i = 0; i < text.size();) {
    char32_t cp = detail::decode_utf8(text, i);
    if (detail::is_space_cp(cp)) {
      flush();
    } else {
      piece.push_back(detail::lowercase_cp(cp));
    }
  }
  flush();
  return out;
}

// Abbreviations that never terminate a sentence, matched case-insensitively
// against the word ending at the period.
inline const std::unordered_set<std::string>& sentence_abbreviations() {
  static const std::unordered_set<std::string> abbrev = {
      "mr.",   "mrs.",  "ms.",   "dr.",   "prof.", "sr.",   "jr.",
      "st.",   "gen.",  "gov.",  "sen.",  "rep.",  "sgt.",  "col.",
      "capt.", "lt.",   "cmdr.", "vs.",   "etc.",  "e.g.",  "i.e.",
      "cf.",   "inc.",  "ltd.",  "co.",   "corp.", "dept.", "est.",
      "fig.",  "no.",   "vol.",  "approx.", "u.s.", "u.k.", "u.n.",
      "a.m.",  "p.m.",  "jan.",  "feb.",  "mar.",  "apr.",  "jun.",
      "jul.",  "aug.",  "sep.",  "sept.", "oct.",  "nov.",  "dec.",
      "mon.",  "tue.",  "wed.",  "thu.",  "fri.",  "sat.",  "sun."};
  return abbrev;
}

// Rule-based splitter: a sentence ends at .?! (plus trailing closers) when
// followed by whitespace and an uppercase or opening character, unless the
// word ending at a lone period is a known abbreviation. Terminators stay with
// their sentence; pieces are trimmed and empty pieces dropped.
inline std::vector<std::string> split_sentences(const std::string& text) {
  std::vector<char32_t> cps;
  std::vector<std::size_t> offs;  // byte offset of each code point
  for (std::size_t i = 0; i < text.size();) {
    offs.push_back(i);
    cps.push_back(detail::decode_utf8(text, i));
  }
  offs.push_back(text.size());
  const std::size_t n = cps.size();

  auto is_terminal = [](char32_t c) { return c == U'.' || c == U'?' || c == U'!'; };

  std::vector<std::string> out;
  auto emit = [&](std::size_t from_cp, std::size_t to_cp) {
    while (from_cp < to_cp && detail::is_space_cp(cps[from_cp])) ++from_cp;
    while (to_cp > from_cp && detail::is_space_cp(cps[to_cp - 1])) --to_cp;
    if (from_cp < to_cp)
      out.push_back(text.substr(offs[from_cp], offs[to_cp] - offs[from_cp]));
  };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < n) {
    if (!is_terminal(cps[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && is_terminal(cps[j + 1])) ++j;
    std::size_t k = j;
    while (k + 1 < n && detail::is_closing_cp(cps[k + 1])) ++k;

    bool boundary = false;
    if (k + 1 == n) {
      boundary = true;
    } else if (detail::is_space_cp(cps[k + 1])) {
      std::size_t m = k + 1;
      while (m < n && detail::is_space_cp(cps[m])) ++m;
      if (m < n && (detail::is_upper_cp(cps[m]) || detail::is_opening_cp(cps[m])))
        boundary = true;
    }
    if (boundary && i == j && cps[i] == U'.') {
      // the word ending at this period, lowercased; non-ASCII never matches
      std::size_t b = i;
      while (b > 0 && !detail::is_space_cp(cps[b - 1])) --b;
      std::string word;
      bool ascii = true;
      for (std::size_t q = b; q <= i; ++q) {
        char32_t c = detail::lowercase_cp(cps[q]);
        if (c > 0x7F) { ascii = false; break; }
        word.push_back(static_cast<char>(c));
      }
      if (ascii && sentence_abbreviations().count(word)) boundary = false;
    }
    if (boundary) {
      emit(start, k + 1);
      start = k + 1;
    }
    i = k + 1;
  }
  emit(start, n);
  return out;
}

// One article sentence: the original surface text plus its tokenization.
struct Sentence {
  std::string raw;
  std::vector<Token> tokens;

  static Sentence from_raw(std::string text) {
    Sentence s;
    s.tokens = tokenize(text);
    s.raw = std::move(text);
    return s;
  }

  bool operator==(const Sentence&) const = default;
};

// An article: ordered sentences, optional abstractive summary, optional
// binary extractive labels aligned with the sentences.
struct Document {
  std::string id;
  std::vector<Sentence> sentences;
  std::optional<std::vector<Sentence>> abstractive;
  std::optional<std::vector<int>> labels;

  bool operator==(const Document&) const = default;
};

inline void validate_document(const Document& doc) {
  if (doc.id.empty()) throw Error("document has an empty id");
  if (doc.sentences.empty())
    throw Error("document " + doc.id + " has no sentences");
  if (doc.labels) {
    if (doc.labels->size() != doc.sentences.size())
      throw Error("document " + doc.id + ": label length mismatch: " +
                  std::to_string(doc.labels->size()) + " labels for " +
                  std::to_string(doc.sentences.size()) + " sentences");
    int sum = 0;
    for (int v : *doc.labels) {
      if (v != 0 && v != 1)
        throw Error("document " + doc.id + ": labels must be 0 or 1");
      sum += v;
    }
    if (sum < 1)
      throw Error("document " + doc.id + ": labels select no sentence");
  }
}

namespace detail {

inline std::vector<Sentence> sentences_from_json(const nlohmann::json& arr,
                                                 const std::string& where) {
  std::vector<Sentence> out;
  out.reserve(arr.size());
  for (const auto& item : arr) {
    if (!item.is_string())
      throw Error(where + " must be an array of strings");
    out.push_back(Sentence::from_raw(item.get<std::string>()));
  }
  return out;
}

inline Document parse_corpus_record(const std::string& line,
                                    const std::string& where) {
  nlohmann::json rec;
  try {
    rec = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(where + ": malformed JSON: " + e.what());
  }
  if (!rec.is_object()) throw Error(where + ": record is not a JSON object");
  if (!rec.contains("id") || !rec["id"].is_string())
    throw Error(where + ": missing string field \"id\"");
  if (!rec.contains("sentences") || !rec["sentences"].is_array())
    throw Error(where + ": missing array field \"sentences\"");

  Document doc;
  doc.id = rec["id"].get<std::string>();
  doc.sentences = sentences_from_json(rec["sentences"], where + ": \"sentences\"");
  if (rec.contains("abstractive")) {
    if (!rec["abstractive"].is_array())
      throw Error(where + ": \"abstractive\" must be an array of strings");
    doc.abstractive =
        sentences_from_json(rec["abstractive"], where + ": \"abstractive\"");
  }
  if (rec.contains("labels")) {
    if (!rec["labels"].is_array())
      throw Error(where + ": \"labels\" must be an array of 0/1");
    std::vector<int> labels;
    for (const auto& v : rec["labels"]) {
      if (!v.is_number_integer() || (v.get<int>() != 0 && v.get<int>() != 1))
        throw Error(where + ": \"labels\" must contain only 0 or 1");
      labels.push_back(v.get<int>());
    }
    doc.labels = std::move(labels);
  }
  try {
    validate_document(doc);
  } catch (const Error& e) {
    throw Error(where + ": " + e.what());
  }
  return doc;
}

}  // namespace detail

// Reads a JSONL corpus: one record per line, order preserved, ids unique.
// Blank lines are skipped; anything else must be a well-formed record.
inline std::vector<Document> read_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus file: " + path);
  std::vector<Document> docs;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    Document doc = detail::parse_corpus_record(line, where);
    if (!ids.insert(doc.id).second)
      throw Error(where + ": duplicate document id \"" + doc.id + "\"");
    docs.push_back(std::move(doc));
  }
  return docs;
}

// Writes JSONL such that read_corpus(write_corpus(docs)) == docs. Unknown
// keys from the input are never carried over.
inline void write_corpus(const std::vector<Document>& docs,
                         const std::string& path) {
  for (const auto& doc : docs) validate_document(doc);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open output file: " + path);
  for (const auto& doc : docs) {
    nlohmann::ordered_json rec;
    rec["id"] = doc.id;
    auto raws = [](const std::vector<Sentence>& ss) {
      std::vector<std::string> r;
      r.reserve(ss.size());
      for (const auto& s : ss) r.push_back(s.raw);
      return r;
    };
    rec["sentences"] = raws(doc.sentences);
    if (doc.abstractive) rec["abstractive"] = raws(*doc.abstractive);
    if (doc.labels) rec["labels"] = *doc.labels;
    out << rec.dump() << "\n";
  }
  out.flush();
  if (!out) throw Error("failed to write corpus file: " + path);
}

}  // namespace extsum
