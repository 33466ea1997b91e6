#include "smd/matching.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "smd/errors.hpp"
#include "smd/parallel.hpp"

namespace smd {

std::string_view to_string(Scorer scorer) {
  switch (scorer) {
    case Scorer::DE: return "de";
    case Scorer::SA: return "sa";
    case Scorer::SMD: return "smd";
  }
  return "?";
}

std::optional<Scorer> parse_scorer(std::string_view name) {
  if (name == "de") return Scorer::DE;
  if (name == "sa") return Scorer::SA;
  if (name == "smd") return Scorer::SMD;
  return std::nullopt;
}

bool scored_pair_less(const ScoredPair& a, const ScoredPair& b) {
  if (a.distance != b.distance) return a.distance < b.distance;
  if (a.src_id != b.src_id) return a.src_id < b.src_id;
  return a.tgt_id < b.tgt_id;
}

double Alignment::total_distance() const {
  double total = 0;
  for (const auto& p : pairs) total += p.distance;
  return total;
}

DomainScorer::DomainScorer(const DomainCorpus& domain, ScorerConfig config)
    : domain_(domain), config_(config) {
  std::optional<DomainIdf> idf;
  if (config_.scorer == Scorer::SMD && (config_.scheme == WeightingScheme::IDF ||
                                        config_.scheme == WeightingScheme::SLIDF))
    idf = build_domain_idf(domain_);
  const DomainIdf* idf_ptr = idf ? &*idf : nullptr;
  for (const auto& d : domain_.source_docs) sources_.push_back(prepare(d, idf_ptr));
  for (const auto& d : domain_.target_docs) targets_.push_back(prepare(d, idf_ptr));
}

DomainScorer::Prepared DomainScorer::prepare(const Document& doc,
                                             const DomainIdf* idf) const {
  Prepared p;
  p.doc = &doc;
  const auto& emb = domain_.emb();
  switch (config_.scorer) {
    case Scorer::SMD: {
      const SentenceVocabulary vocab = build_vocabulary(doc);
      p.vectors = gather_rows(vocab, emb);
      p.mass = weights(vocab, config_.scheme, idf);
      break;
    }
    case Scorer::SA:
      p.doc_vector = sa_embedding(doc, emb);
      break;
    case Scorer::DE:
      // Missing direct embeddings surface when the pair is scored.
      if (doc.doc_emb_row) p.doc_vector = de_embedding(doc, emb);
      break;
  }
  return p;
}

double DomainScorer::smd(std::size_t s, std::size_t t, Solver solver) const {
  const Prepared& a = sources_.at(s);
  const Prepared& b = targets_.at(t);
  if (config_.scorer != Scorer::SMD) throw InputError("scorer is not SMD");
  const CostMatrix cost = pairwise_euclidean<double>(a.vectors, b.vectors);
  return solve_smd(solver, cost, a.mass, b.mass).distance;
}

double DomainScorer::score(std::size_t s, std::size_t t) const {
  if (config_.scorer == Scorer::SMD) return smd(s, t, config_.solver);
  const Prepared& a = sources_.at(s);
  const Prepared& b = targets_.at(t);
  if (!a.doc_vector) throw InputError("document " + a.doc->doc_id + " has no direct embedding");
  if (!b.doc_vector) throw InputError("document " + b.doc->doc_id + " has no direct embedding");
  return cosine_distance(*a.doc_vector, *b.doc_vector);
}

namespace {

template <typename E>
[[noreturn]] void rethrow_with_context(const E& e, const std::string& context) {
  throw E(context + ": " + e.what());
}

}  // namespace

std::vector<ScoredPair> score_all_pairs(const DomainCorpus& domain,
                                        const ScorerConfig& config, int threads) {
  const std::string where = "domain " + domain.domain_id;
  if (domain.source_docs.empty() || domain.target_docs.empty())
    throw InputError(where + ": needs documents on both sides");

  std::optional<DomainScorer> scorer;
  try {
    scorer.emplace(domain, config);
  } catch (const InputError& e) {
    rethrow_with_context(e, where);
  } catch (const InvariantError& e) {
    rethrow_with_context(e, where);
  }

  const std::size_t n_tgt = domain.target_docs.size();
  std::vector<ScoredPair> pairs(domain.source_docs.size() * n_tgt);
  parallel_for(pairs.size(), threads, [&](std::size_t k) {
    const std::size_t s = k / n_tgt;
    const std::size_t t = k % n_tgt;
    ScoredPair& p = pairs[k];
    p.src_id = domain.source_docs[s].doc_id;
    p.tgt_id = domain.target_docs[t].doc_id;
    const std::string context = where + ", pair (" + p.src_id + ", " + p.tgt_id + ")";
    try {
      p.distance = scorer->score(s, t);
    } catch (const InputError& e) {
      rethrow_with_context(e, context);
    } catch (const InvariantError& e) {
      rethrow_with_context(e, context);
    }
    if (!std::isfinite(p.distance)) throw InvariantError(context + ": non-finite distance");
  });
  return pairs;
}

Alignment competitive_match(std::vector<ScoredPair> pairs) {
  std::sort(pairs.begin(), pairs.end(), scored_pair_less);
  std::unordered_set<std::string> used_src;
  std::unordered_set<std::string> used_tgt;
  Alignment aligned;
  for (auto& p : pairs) {
    if (used_src.count(p.src_id) || used_tgt.count(p.tgt_id)) continue;
    used_src.insert(p.src_id);
    used_tgt.insert(p.tgt_id);
    aligned.pairs.push_back(std::move(p));
  }
  return aligned;
}

void write_alignment(std::ostream& os, const Alignment& alignment) {
  std::vector<ScoredPair> sorted = alignment.pairs;
  std::sort(sorted.begin(), sorted.end(), scored_pair_less);
  char buf[64];
  for (const auto& p : sorted) {
    std::snprintf(buf, sizeof buf, "%.6f", p.distance);
    os << p.src_id << '\t' << p.tgt_id << '\t' << buf << '\n';
  }
}

Alignment parse_alignment(std::istream& is) {
  Alignment alignment;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, '\t')) fields.push_back(field);
    if (fields.size() != 3)
      throw InputError("alignment line " + std::to_string(line_no) +
                       ": expected 3 fields, got " + std::to_string(fields.size()));
    ScoredPair p{trim(fields[0]), trim(fields[1]), 0.0};
    try {
      std::size_t used = 0;
      p.distance = std::stod(fields[2], &used);
    } catch (const std::exception&) {
      throw InputError("alignment line " + std::to_string(line_no) + ": bad distance \"" +
                       fields[2] + "\"");
    }
    alignment.pairs.push_back(std::move(p));
  }
  return alignment;
}

Alignment load_alignment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open alignment file " + path.string());
  return parse_alignment(in);
}

}  // namespace smd
