#include "smd/baselines.hpp"

#include <algorithm>

#include "smd/errors.hpp"

namespace smd {

DocEmbedding sa_embedding(const Document& doc, const EmbeddingMatrix& emb) {
  if (doc.sentences.empty())
    throw InputError("document " + doc.doc_id + " has no sentences");
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(emb.cols());
  for (const auto& s : doc.sentences) sum += emb.row(s.emb_row).transpose().cast<double>();
  return {sum / double(doc.sentences.size()), DocEmbedding::Source::Averaged};
}

DocEmbedding de_embedding(const Document& doc, const EmbeddingMatrix& emb) {
  if (!doc.doc_emb_row)
    throw InputError("document " + doc.doc_id + " has no direct embedding");
  return {emb.row(*doc.doc_emb_row).transpose().cast<double>(),
          DocEmbedding::Source::Direct};
}

double cosine_distance(const DocEmbedding& x, const DocEmbedding& y) {
  if (x.vector.size() != y.vector.size())
    throw InputError("cosine_distance: dimension mismatch");
  const double nx = x.vector.norm();
  const double ny = y.vector.norm();
  if (nx == 0.0 || ny == 0.0) throw InputError("cosine_distance: zero-norm vector");
  const double sim = x.vector.dot(y.vector) / (nx * ny);
  return std::clamp(1.0 - sim, 0.0, 2.0);
}

}  // namespace smd
