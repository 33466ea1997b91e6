#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace smd {

/// Dense sentence/document embeddings, one vector per row.
using EmbeddingMatrix =
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct SentenceRef {
  std::string text;
  Eigen::Index emb_row = 0;
  int token_count = 1;

  bool operator==(const SentenceRef&) const = default;
};

struct Document {
  std::string doc_id;
  std::string domain_id;
  std::string lang;
  std::vector<SentenceRef> sentences;
  std::optional<Eigen::Index> doc_emb_row;

  bool operator==(const Document&) const = default;
};

/// All documents of one web-domain. Embedding rows referenced by the
/// documents index into the shared, immutable `embeddings` matrix.
struct DomainCorpus {
  std::string domain_id;
  std::vector<Document> source_docs;
  std::vector<Document> target_docs;
  std::shared_ptr<const EmbeddingMatrix> embeddings;

  const EmbeddingMatrix& emb() const { return *embeddings; }
};

/// Structural equality; embeddings are compared by value, not pointer.
bool operator==(const DomainCorpus& a, const DomainCorpus& b);

struct VocabEntry {
  std::string text;
  Eigen::Index emb_row = 0;
  int count = 0;
  int token_count = 1;
};

/// Unique sentences of a document in first-occurrence order.
struct SentenceVocabulary {
  std::vector<VocabEntry> entries;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
  long total_count() const;
};

using GoldPair = std::pair<std::string, std::string>;
using GoldSet = std::set<GoldPair>;

std::string trim(std::string_view s);

/// Number of whitespace-separated tokens.
int count_tokens(std::string_view text);

EmbeddingMatrix read_embeddings(const std::filesystem::path& path);
void write_embeddings(const std::filesystem::path& path, const EmbeddingMatrix& emb);
void write_embeddings(std::ostream& os, const EmbeddingMatrix& emb);

/// Parses JSON Lines corpus records against an already loaded matrix.
/// Domains come back sorted by domain_id, documents sorted by doc_id.
std::vector<DomainCorpus> parse_corpus(std::istream& is,
                                       std::shared_ptr<const EmbeddingMatrix> emb);

std::vector<DomainCorpus> load_corpus(const std::filesystem::path& corpus_path,
                                      const std::filesystem::path& embeddings_path);

/// Writes domains to the JSON Lines + XEMB pair read by load_corpus. Domains
/// backed by distinct matrices are concatenated and their rows renumbered.
void write_corpus(std::span<const DomainCorpus> domains,
                  const std::filesystem::path& corpus_path,
                  const std::filesystem::path& embeddings_path);
void write_corpus(std::span<const DomainCorpus> domains, std::ostream& corpus_os,
                  std::ostream& emb_os);

SentenceVocabulary build_vocabulary(const Document& doc);

GoldSet load_gold(const std::filesystem::path& path);
GoldSet parse_gold(std::istream& is);
void write_gold(std::ostream& os, const GoldSet& gold);

/// Cuts every document longer than `max_sentences` down to its first
/// `max_sentences` sentences. Returns the ids of truncated documents.
std::vector<std::string> truncate_documents(DomainCorpus& domain,
                                            std::size_t max_sentences);

}  // namespace smd
