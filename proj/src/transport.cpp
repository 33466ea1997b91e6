#include "smd/transport.hpp"

namespace smd {

std::string_view to_string(Solver solver) {
  switch (solver) {
    case Solver::Exact: return "exact";
    case Solver::RelaxedMax: return "relaxed";
    case Solver::Greedy: return "greedy";
  }
  return "?";
}

std::optional<Solver> parse_solver(std::string_view name) {
  if (name == "exact") return Solver::Exact;
  if (name == "relaxed") return Solver::RelaxedMax;
  if (name == "greedy") return Solver::Greedy;
  return std::nullopt;
}

Eigen::MatrixXd gather_rows(const SentenceVocabulary& vocab, const EmbeddingMatrix& emb) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(vocab.size()), emb.cols());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    const Eigen::Index row = vocab.entries[i].emb_row;
    if (row < 0 || row >= emb.rows())
      throw InputError("embedding row " + std::to_string(row) + " out of range");
    out.row(static_cast<Eigen::Index>(i)) = emb.row(row).cast<double>();
  }
  return out;
}

CostMatrix cost_matrix(const SentenceVocabulary& src_vocab,
                       const SentenceVocabulary& tgt_vocab, const EmbeddingMatrix& emb) {
  return pairwise_euclidean<double>(gather_rows(src_vocab, emb), gather_rows(tgt_vocab, emb));
}

}  // namespace smd
