#include "smd/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "smd/errors.hpp"

namespace smd {

namespace {

std::string format_id(const char* pattern, int a, int b = 0, int c = 0) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

// Placeholder sentence text with the requested number of tokens.
std::string sentence_text(const std::string& key, int tokens) {
  std::string text = key;
  for (int k = 1; k < tokens; ++k) text += " w" + std::to_string(k);
  return text;
}

struct SentenceSeed {
  std::vector<float> vec;
  int tokens;
  std::string key;  // text stem, without language prefix
};

}  // namespace

SyntheticCorpus generate_synthetic(const SynthSpec& spec) {
  if (spec.n_domains < 1 || spec.docs_per_side < 1 || spec.min_sentences < 1 ||
      spec.max_sentences < spec.min_sentences || spec.dim < 2 || spec.noise_sigma < 0 ||
      spec.boilerplate_fraction < 0)
    throw InputError("invalid synthetic corpus spec");

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> sentence_count(spec.min_sentences, spec.max_sentences);
  std::uniform_int_distribution<int> token_count(3, 25);
  const int boilerplate =
      static_cast<int>(std::lround(spec.boilerplate_fraction * spec.min_sentences));

  std::vector<float> rows;
  auto push_row = [&](const std::vector<float>& v) {
    rows.insert(rows.end(), v.begin(), v.end());
    return static_cast<Eigen::Index>(rows.size() / spec.dim - 1);
  };
  auto gaussian = [&] {
    std::vector<float> v(spec.dim);
    for (auto& x : v) x = static_cast<float>(unit(rng));
    return v;
  };
  auto perturbed = [&](const std::vector<float>& v) {
    std::vector<float> out = v;
    if (spec.noise_sigma > 0)
      for (auto& x : out) x = static_cast<float>(x + spec.noise_sigma * unit(rng));
    return out;
  };
  auto mean_of = [&](const std::vector<SentenceRef>& sentences) {
    std::vector<double> acc(spec.dim, 0.0);
    for (const auto& s : sentences)
      for (int k = 0; k < spec.dim; ++k) acc[k] += rows[s.emb_row * spec.dim + k];
    std::vector<float> out(spec.dim);
    for (int k = 0; k < spec.dim; ++k) out[k] = static_cast<float>(acc[k] / sentences.size());
    return out;
  };

  struct Pending {
    std::string domain_id;
    std::vector<Document> source;
    std::vector<Document> target;
  };
  std::vector<Pending> pending;
  SyntheticCorpus out;

  for (int d = 0; d < spec.n_domains; ++d) {
    Pending dom;
    dom.domain_id = format_id("dom%03d", d);

    std::vector<SentenceSeed> shared;
    for (int b = 0; b < boilerplate; ++b)
      shared.push_back({gaussian(), token_count(rng), format_id("d%03d-boiler%02d", d, b)});
    // The translated boilerplate is one fixed vector per domain, as an
    // encoder would produce for a repeated sentence.
    std::vector<std::vector<float>> shared_tgt;
    for (const auto& s : shared) shared_tgt.push_back(perturbed(s.vec));

    std::vector<int> planted(spec.docs_per_side);
    std::iota(planted.begin(), planted.end(), 0);
    std::shuffle(planted.begin(), planted.end(), rng);

    std::vector<std::vector<SentenceSeed>> contents(spec.docs_per_side);
    for (int k = 0; k < spec.docs_per_side; ++k) {
      const int n = sentence_count(rng);
      for (int i = 0; i < n; ++i)
        contents[k].push_back({gaussian(), token_count(rng), format_id("d%03d-doc%03d-s%03d", d, k, i)});
    }

    std::vector<Eigen::Index> shared_src_rows;
    std::vector<Eigen::Index> shared_tgt_rows;
    for (std::size_t b = 0; b < shared.size(); ++b) {
      shared_src_rows.push_back(push_row(shared[b].vec));
      shared_tgt_rows.push_back(push_row(shared_tgt[b]));
    }

    for (int k = 0; k < spec.docs_per_side; ++k) {
      Document src;
      src.doc_id = format_id("d%03d-src%03d", d, k);
      src.domain_id = dom.domain_id;
      src.lang = "xx";
      for (std::size_t b = 0; b < shared.size(); ++b)
        src.sentences.push_back({sentence_text("xx-" + shared[b].key, shared[b].tokens),
                                 shared_src_rows[b], shared[b].tokens});
      for (const auto& s : contents[k])
        src.sentences.push_back({sentence_text("xx-" + s.key, s.tokens), push_row(s.vec), s.tokens});
      src.doc_emb_row = push_row(perturbed(mean_of(src.sentences)));

      const int t = planted[k];
      Document tgt;
      tgt.doc_id = format_id("d%03d-tgt%03d", d, t);
      tgt.domain_id = dom.domain_id;
      tgt.lang = "yy";
      for (std::size_t b = 0; b < shared.size(); ++b)
        tgt.sentences.push_back({sentence_text("yy-" + shared[b].key, shared[b].tokens),
                                 shared_tgt_rows[b], shared[b].tokens});
      for (const auto& s : contents[k])
        tgt.sentences.push_back(
            {sentence_text("yy-" + s.key, s.tokens), push_row(perturbed(s.vec)), s.tokens});
      std::shuffle(tgt.sentences.begin(), tgt.sentences.end(), rng);
      tgt.doc_emb_row = push_row(perturbed(mean_of(tgt.sentences)));

      out.gold.emplace(src.doc_id, tgt.doc_id);
      dom.source.push_back(std::move(src));
      dom.target.push_back(std::move(tgt));
    }
    auto by_id = [](const Document& a, const Document& b) { return a.doc_id < b.doc_id; };
    std::sort(dom.source.begin(), dom.source.end(), by_id);
    std::sort(dom.target.begin(), dom.target.end(), by_id);
    pending.push_back(std::move(dom));
  }

  const Eigen::Index n_rows = static_cast<Eigen::Index>(rows.size() / spec.dim);
  auto emb = std::make_shared<EmbeddingMatrix>(n_rows, spec.dim);
  std::copy(rows.begin(), rows.end(), emb->data());
  std::shared_ptr<const EmbeddingMatrix> shared_emb = std::move(emb);

  for (auto& dom : pending) {
    DomainCorpus dc;
    dc.domain_id = std::move(dom.domain_id);
    dc.source_docs = std::move(dom.source);
    dc.target_docs = std::move(dom.target);
    dc.embeddings = shared_emb;
    out.domains.push_back(std::move(dc));
  }
  return out;
}

}  // namespace smd
