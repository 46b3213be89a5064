#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "maiclass/error.hpp"
#include "maiclass/unicode.hpp"

namespace maiclass {

enum class Network { twitter, vkontakte };
enum class Language { en, ru };

inline std::string_view to_string(Network n) { return n == Network::twitter ? "twitter" : "vkontakte"; }
inline std::string_view to_string(Language l) { return l == Language::en ? "en" : "ru"; }

using Tokens = std::vector<std::string>;

// One community page: its concatenated text and the interest class it belongs to.
struct Document {
  std::string id;
  Network network = Network::twitter;
  Language language = Language::en;
  std::string label;
  std::string raw_text;
  Tokens tokens;

  bool operator==(const Document&) const = default;
};

struct Corpus {
  std::string name;
  std::vector<Document> documents;
  std::vector<std::string> classes;  // sorted, distinct

  bool operator==(const Corpus&) const = default;
};

// Lowercase, split on Unicode whitespace, drop '#'-tokens, strip emoji and
// punctuation, discard what is left empty.
inline Tokens normalize_text(std::string_view raw) {
  const icu::UnicodeString text = unicode::fold_lower(unicode::from_utf8(raw));

  Tokens tokens;
  icu::UnicodeString current;
  bool hashtag = false;
  bool at_token_start = true;

  auto flush = [&] {
    if (!hashtag && !current.isEmpty()) tokens.push_back(unicode::to_utf8(current));
    current.remove();
    hashtag = false;
    at_token_start = true;
  };

  for (int32_t i = 0; i < text.length();) {
    const UChar32 c = text.char32At(i);
    i = text.moveIndex32(i, 1);
    if (unicode::is_whitespace(c)) {
      flush();
      continue;
    }
    if (at_token_start) {
      at_token_start = false;
      if (c == U'#') hashtag = true;
    }
    if (hashtag || unicode::is_emoji(c) || unicode::is_punctuation(c)) continue;
    current.append(c);
  }
  flush();
  return tokens;
}

namespace detail {

inline std::string required_string(const nlohmann::json& rec, const char* key, std::size_t line) {
  auto it = rec.find(key);
  if (it == rec.end()) throw ParseError(line, std::string("missing key '") + key + "'");
  if (!it->is_string()) throw ParseError(line, std::string("key '") + key + "' is not a string");
  return it->get<std::string>();
}

inline std::vector<std::string> sorted_classes(const std::vector<Document>& docs) {
  std::set<std::string> labels;
  for (const auto& d : docs) labels.insert(d.label);
  return {labels.begin(), labels.end()};
}

}  // namespace detail

// Builds a corpus from already constructed documents, normalizing raw_text.
inline Corpus make_corpus(std::string name, std::vector<Document> docs) {
  std::unordered_set<std::string> seen;
  for (auto& d : docs) {
    if (d.id.empty()) throw InvalidArgument("document id must be non-empty");
    if (!seen.insert(d.id).second) throw DuplicateId(d.id);
    d.tokens = normalize_text(d.raw_text);
  }
  Corpus c{std::move(name), std::move(docs), {}};
  c.classes = detail::sorted_classes(c.documents);
  return c;
}

// JSONL corpus: one {"id","network","language","label","text"} object per
// line. Blank lines are skipped.
inline Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());

  std::vector<Document> docs;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, e.what());
    }
    if (!rec.is_object()) throw ParseError(line_no, "record is not an object");

    Document d;
    d.id = detail::required_string(rec, "id", line_no);
    if (d.id.empty()) throw ParseError(line_no, "empty id");
    const std::string network = detail::required_string(rec, "network", line_no);
    if (network == "twitter") d.network = Network::twitter;
    else if (network == "vkontakte") d.network = Network::vkontakte;
    else throw ParseError(line_no, "unknown network '" + network + "'");
    const std::string language = detail::required_string(rec, "language", line_no);
    if (language == "en") d.language = Language::en;
    else if (language == "ru") d.language = Language::ru;
    else throw ParseError(line_no, "unknown language '" + language + "'");
    d.label = detail::required_string(rec, "label", line_no);
    if (d.label.empty()) throw ParseError(line_no, "empty label");
    d.raw_text = detail::required_string(rec, "text", line_no);

    if (!seen.insert(d.id).second) throw DuplicateId(d.id);
    d.tokens = normalize_text(d.raw_text);
    docs.push_back(std::move(d));
  }
  if (in.bad()) throw IoError("read failure on " + path.string());

  Corpus c{path.stem().string(), std::move(docs), {}};
  c.classes = detail::sorted_classes(c.documents);
  return c;
}

struct ValidationReport {
  std::map<std::string, std::size_t> per_class;
  std::vector<std::string> unbalanced_classes;
  std::vector<std::string> empty_documents;
  bool pass = false;
};

inline ValidationReport validate_corpus(const Corpus& c, std::size_t expected_per_class) {
  ValidationReport r;
  for (const auto& cls : c.classes) r.per_class[cls] = 0;
  for (const auto& d : c.documents) {
    ++r.per_class[d.label];
    if (d.tokens.empty()) r.empty_documents.push_back(d.id);
  }
  for (const auto& [cls, n] : r.per_class)
    if (n != expected_per_class) r.unbalanced_classes.push_back(cls);
  r.pass = r.unbalanced_classes.empty() && r.empty_documents.empty();
  return r;
}

}  // namespace maiclass
