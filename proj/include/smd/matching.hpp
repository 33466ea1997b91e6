#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "smd/baselines.hpp"
#include "smd/corpus.hpp"
#include "smd/transport.hpp"
#include "smd/weighting.hpp"

namespace smd {

enum class Scorer { DE, SA, SMD };

std::string_view to_string(Scorer scorer);
std::optional<Scorer> parse_scorer(std::string_view name);

struct ScorerConfig {
  Scorer scorer = Scorer::SMD;
  Solver solver = Solver::Greedy;
  WeightingScheme scheme = WeightingScheme::Uniform;
};

struct ScoredPair {
  std::string src_id;
  std::string tgt_id;
  double distance = 0;

  bool operator==(const ScoredPair&) const = default;
};

/// Ascending distance, ties broken by (src_id, tgt_id).
bool scored_pair_less(const ScoredPair& a, const ScoredPair& b);

/// One-to-one set of document pairs.
struct Alignment {
  std::vector<ScoredPair> pairs;

  std::size_t size() const { return pairs.size(); }
  double total_distance() const;
};

/// Caches per-document vocabularies, masses and vectors of a domain so
/// every candidate pair can be scored without recomputing them.
class DomainScorer {
 public:
  DomainScorer(const DomainCorpus& domain, ScorerConfig config);

  std::size_t source_count() const { return sources_.size(); }
  std::size_t target_count() const { return targets_.size(); }

  /// Distance between source_docs[s] and target_docs[t].
  double score(std::size_t s, std::size_t t) const;

  /// Distance with an explicit solver, for SMD only.
  double smd(std::size_t s, std::size_t t, Solver solver) const;

 private:
  struct Prepared {
    const Document* doc = nullptr;
    Eigen::MatrixXd vectors;  // one row per vocabulary entry
    MassDistribution mass;
    std::optional<DocEmbedding> doc_vector;
  };

  Prepared prepare(const Document& doc, const DomainIdf* idf) const;

  const DomainCorpus& domain_;
  ScorerConfig config_;
  std::vector<Prepared> sources_;
  std::vector<Prepared> targets_;
};

/// Scores every (source, target) pair of the domain, source-major in
/// doc_id order. Errors carry the domain and pair ids.
std::vector<ScoredPair> score_all_pairs(const DomainCorpus& domain,
                                        const ScorerConfig& config, int threads = 1);

/// Greedy one-to-one selection in ascending distance order.
Alignment competitive_match(std::vector<ScoredPair> pairs);

/// TSV: src_doc_id, tgt_doc_id, distance with 6 decimals; ascending distance.
void write_alignment(std::ostream& os, const Alignment& alignment);
Alignment parse_alignment(std::istream& is);
Alignment load_alignment(const std::filesystem::path& path);

}  // namespace smd
