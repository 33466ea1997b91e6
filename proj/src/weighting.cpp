#include "smd/weighting.hpp"

#include <cmath>
#include <unordered_set>

#include "smd/errors.hpp"

namespace smd {

namespace {

void require_nonempty(const SentenceVocabulary& vocab) {
  if (vocab.empty()) throw InputError("cannot weight an empty vocabulary");
}

MassDistribution normalized(const Eigen::VectorXd& raw) {
  const double total = raw.sum();
  if (!(total > 0.0) || !std::isfinite(total))
    throw InvariantError("mass distribution has non-positive total");
  return raw / total;
}

// cnt(i) * |i|; both are integers, so the products and their sum are exact.
Eigen::VectorXd length_mass(const SentenceVocabulary& vocab) {
  Eigen::VectorXd raw(static_cast<Eigen::Index>(vocab.size()));
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    const auto& e = vocab.entries[i];
    if (e.token_count < 1)
      throw InputError("sentence \"" + e.text + "\" has no tokens");
    raw[static_cast<Eigen::Index>(i)] = double(e.count) * double(e.token_count);
  }
  return raw;
}

Eigen::VectorXd count_mass(const SentenceVocabulary& vocab) {
  Eigen::VectorXd raw(static_cast<Eigen::Index>(vocab.size()));
  for (std::size_t i = 0; i < vocab.size(); ++i)
    raw[static_cast<Eigen::Index>(i)] = double(vocab.entries[i].count);
  return raw;
}

// IDF of each entry divided by the smallest one. The common factor cancels
// under normalization, and equal IDFs give exactly 1.0.
Eigen::VectorXd relative_idf(const SentenceVocabulary& vocab, const DomainIdf& idf) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(vocab.size()));
  for (std::size_t i = 0; i < vocab.size(); ++i)
    r[static_cast<Eigen::Index>(i)] = idf.idf(vocab.entries[i].text);
  return r / r.minCoeff();
}

}  // namespace

std::string_view to_string(WeightingScheme scheme) {
  switch (scheme) {
    case WeightingScheme::Uniform: return "uniform";
    case WeightingScheme::SL: return "sl";
    case WeightingScheme::IDF: return "idf";
    case WeightingScheme::SLIDF: return "slidf";
  }
  return "?";
}

std::optional<WeightingScheme> parse_scheme(std::string_view name) {
  if (name == "uniform") return WeightingScheme::Uniform;
  if (name == "sl") return WeightingScheme::SL;
  if (name == "idf") return WeightingScheme::IDF;
  if (name == "slidf") return WeightingScheme::SLIDF;
  return std::nullopt;
}

double DomainIdf::idf(const std::string& sentence) const {
  auto it = df.find(sentence);
  if (it == df.end() || it->second < 1)
    throw InputError("sentence \"" + sentence +
                     "\" missing from domain IDF (built from a different corpus?)");
  return 1.0 + std::log(double(doc_count) / double(it->second));
}

DomainIdf build_domain_idf(const DomainCorpus& domain) {
  DomainIdf idf;
  for (const auto* side : {&domain.source_docs, &domain.target_docs}) {
    for (const auto& doc : *side) {
      ++idf.doc_count;
      std::unordered_set<std::string> members;
      for (const auto& s : doc.sentences) members.insert(trim(s.text));
      for (const auto& text : members) ++idf.df[text];
    }
  }
  return idf;
}

MassDistribution uniform_weights(const SentenceVocabulary& vocab) {
  require_nonempty(vocab);
  return normalized(count_mass(vocab));
}

MassDistribution sl_weights(const SentenceVocabulary& vocab) {
  require_nonempty(vocab);
  return normalized(length_mass(vocab));
}

// Mass per occurrence is the sentence IDF, so a sentence repeated cnt(i)
// times carries cnt(i) * IDF(i) before normalization.
MassDistribution idf_weights(const SentenceVocabulary& vocab, const DomainIdf& idf) {
  require_nonempty(vocab);
  return normalized(count_mass(vocab).cwiseProduct(relative_idf(vocab, idf)));
}

MassDistribution slidf_weights(const SentenceVocabulary& vocab, const DomainIdf& idf) {
  require_nonempty(vocab);
  return normalized(length_mass(vocab).cwiseProduct(relative_idf(vocab, idf)));
}

MassDistribution weights(const SentenceVocabulary& vocab, WeightingScheme scheme,
                         const DomainIdf* idf) {
  switch (scheme) {
    case WeightingScheme::Uniform: return uniform_weights(vocab);
    case WeightingScheme::SL: return sl_weights(vocab);
    case WeightingScheme::IDF:
    case WeightingScheme::SLIDF:
      if (!idf) throw InputError("IDF weighting requires domain IDF statistics");
      return scheme == WeightingScheme::IDF ? idf_weights(vocab, *idf)
                                            : slidf_weights(vocab, *idf);
  }
  throw InvariantError("unknown weighting scheme");
}

}  // namespace smd
