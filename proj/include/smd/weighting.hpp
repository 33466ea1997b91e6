#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include <Eigen/Core>

#include "smd/corpus.hpp"

namespace smd {

/// Per-sentence probability mass, one entry per vocabulary entry.
using MassDistribution = Eigen::VectorXd;

enum class WeightingScheme { Uniform, SL, IDF, SLIDF };

std::string_view to_string(WeightingScheme scheme);
std::optional<WeightingScheme> parse_scheme(std::string_view name);

/// Document frequencies of sentences within one web-domain, both languages.
struct DomainIdf {
  long doc_count = 0;
  std::unordered_map<std::string, long> df;

  /// Smoothed inverse document frequency, 1 + ln(|D| / df).
  double idf(const std::string& sentence) const;
};

DomainIdf build_domain_idf(const DomainCorpus& domain);

MassDistribution uniform_weights(const SentenceVocabulary& vocab);
MassDistribution sl_weights(const SentenceVocabulary& vocab);
MassDistribution idf_weights(const SentenceVocabulary& vocab, const DomainIdf& idf);
MassDistribution slidf_weights(const SentenceVocabulary& vocab, const DomainIdf& idf);

/// Dispatches on `scheme`. `idf` is required for IDF and SLIDF.
MassDistribution weights(const SentenceVocabulary& vocab, WeightingScheme scheme,
                         const DomainIdf* idf = nullptr);

}  // namespace smd
