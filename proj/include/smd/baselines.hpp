#pragma once

#include <Eigen/Core>

#include "smd/corpus.hpp"

namespace smd {

struct DocEmbedding {
  enum class Source { Averaged, Direct };

  Eigen::VectorXd vector;
  Source source = Source::Averaged;
};

/// Mean of the document's sentence vectors, one term per occurrence.
DocEmbedding sa_embedding(const Document& doc, const EmbeddingMatrix& emb);

/// The precomputed document-level vector at doc.doc_emb_row.
DocEmbedding de_embedding(const Document& doc, const EmbeddingMatrix& emb);

/// 1 - cosine similarity, in [0, 2].
double cosine_distance(const DocEmbedding& x, const DocEmbedding& y);

}  // namespace smd
