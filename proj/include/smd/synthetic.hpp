#pragma once

#include <cstdint>
#include <vector>

#include "smd/corpus.hpp"

namespace smd {

/// Parameters of a planted-translation corpus.
struct SynthSpec {
  int n_domains = 10;
  int docs_per_side = 10;
  int min_sentences = 10;  // content sentences per document, inclusive range
  int max_sentences = 30;
  int dim = 32;
  double noise_sigma = 0.0;
  std::uint64_t seed = 1;
  /// Boilerplate sentences shared by every document of a domain, as a
  /// fraction of min_sentences (rounded).
  double boilerplate_fraction = 0.1;
};

struct SyntheticCorpus {
  std::vector<DomainCorpus> domains;
  GoldSet gold;
};

/// Source sentences get unit-Gaussian embeddings. Each target document is a
/// shuffled copy of one source document whose vectors are perturbed by
/// N(0, noise_sigma^2); gold holds the planted pairs. Same spec, same bytes.
SyntheticCorpus generate_synthetic(const SynthSpec& spec);

}  // namespace smd
