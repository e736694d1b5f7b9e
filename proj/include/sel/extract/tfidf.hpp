#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sel/core/error.hpp"

namespace sel::extract {

using Document = std::vector<std::string>;

struct TfidfMatrix {
  std::vector<std::string> vocabulary;  // lexicographic
  std::vector<double> idf;              // parallel to vocabulary
  std::vector<std::vector<double>> rows;

  double weight(std::size_t doc, const std::string& term) const {
    const auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), term);
    if (it == vocabulary.end() || *it != term) return 0.0;
    return rows.at(doc)[static_cast<std::size_t>(it - vocabulary.begin())];
  }
};

/// Unigram TF-IDF with raw counts and smoothed idf = ln((1 + N) / (1 + df)) + 1.
inline TfidfMatrix tfidf(const std::vector<Document>& corpus) {
  if (corpus.empty()) fail(ErrorCode::EmptyCorpus, "corpus has no documents");

  std::map<std::string, std::size_t> doc_freq;
  for (const auto& doc : corpus) {
    std::set<std::string> unique(doc.begin(), doc.end());
    for (const auto& term : unique) ++doc_freq[term];
  }
  if (doc_freq.empty()) fail(ErrorCode::EmptyCorpus, "every document is empty");

  TfidfMatrix out;
  std::map<std::string, std::size_t> index;
  const double n_docs = static_cast<double>(corpus.size());
  for (const auto& [term, df] : doc_freq) {
    index.emplace(term, out.vocabulary.size());
    out.vocabulary.push_back(term);
    out.idf.push_back(std::log((1.0 + n_docs) / (1.0 + static_cast<double>(df))) + 1.0);
  }
  out.rows.reserve(corpus.size());
  for (const auto& doc : corpus) {
    std::vector<double> row(out.vocabulary.size(), 0.0);
    for (const auto& term : doc) row[index.at(term)] += 1.0;
    for (std::size_t j = 0; j < row.size(); ++j) row[j] *= out.idf[j];
    out.rows.push_back(std::move(row));
  }
  return out;
}

/// Whitespace tokenization, no case folding.
inline Document tokenize(const std::string& text) {
  std::istringstream in(text);
  Document tokens;
  for (std::string tok; in >> tok;) tokens.push_back(std::move(tok));
  return tokens;
}

}  // namespace sel::extract
