#include "smd/corpus.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "smd/errors.hpp"

namespace smd {

namespace {

constexpr std::array<char, 4> kMagic = {'X', 'E', 'M', 'B'};
constexpr std::uint32_t kVersion = 1;

std::uint32_t decode_u32(const unsigned char* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) |
         (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
}

void encode_u32(std::uint32_t v, unsigned char* p) {
  p[0] = static_cast<unsigned char>(v);
  p[1] = static_cast<unsigned char>(v >> 8);
  p[2] = static_cast<unsigned char>(v >> 16);
  p[3] = static_cast<unsigned char>(v >> 24);
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string line_error(std::size_t line, const std::string& what) {
  return "corpus line " + std::to_string(line) + ": " + what;
}

}  // namespace

bool operator==(const DomainCorpus& a, const DomainCorpus& b) {
  if (a.domain_id != b.domain_id || a.source_docs != b.source_docs ||
      a.target_docs != b.target_docs)
    return false;
  if (!a.embeddings || !b.embeddings) return a.embeddings == b.embeddings;
  const auto& ea = *a.embeddings;
  const auto& eb = *b.embeddings;
  return ea.rows() == eb.rows() && ea.cols() == eb.cols() && ea == eb;
}

long SentenceVocabulary::total_count() const {
  long total = 0;
  for (const auto& e : entries) total += e.count;
  return total;
}

std::string trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return std::string(s);
}

int count_tokens(std::string_view text) {
  int tokens = 0;
  bool in_token = false;
  for (char c : text) {
    if (is_space(c)) {
      in_token = false;
    } else if (!in_token) {
      in_token = true;
      ++tokens;
    }
  }
  return tokens;
}

EmbeddingMatrix read_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open embeddings file " + path.string());

  std::array<unsigned char, 16> header{};
  if (!in.read(reinterpret_cast<char*>(header.data()), header.size()))
    throw InputError("embeddings file " + path.string() + ": truncated header");
  if (std::memcmp(header.data(), kMagic.data(), kMagic.size()) != 0)
    throw InputError("embeddings file " + path.string() + ": bad magic, expected XEMB");
  const std::uint32_t version = decode_u32(header.data() + 4);
  const std::uint32_t rows = decode_u32(header.data() + 8);
  const std::uint32_t dim = decode_u32(header.data() + 12);
  if (version != kVersion)
    throw InputError("embeddings file " + path.string() + ": unsupported version " +
                     std::to_string(version));
  if (dim == 0) throw InputError("embeddings file " + path.string() + ": dim is 0");

  const std::uint64_t n = std::uint64_t(rows) * dim;
  std::vector<unsigned char> payload(n * 4);
  if (!in.read(reinterpret_cast<char*>(payload.data()),
               static_cast<std::streamsize>(payload.size())))
    throw InputError("embeddings file " + path.string() +
                     ": payload shorter than rows x dim floats");
  if (in.peek() != std::char_traits<char>::eof())
    throw InputError("embeddings file " + path.string() +
                     ": payload longer than rows x dim floats (mixed dims?)");

  EmbeddingMatrix emb(rows, dim);
  float* out = emb.data();
  for (std::uint64_t k = 0; k < n; ++k) {
    const std::uint32_t bits = decode_u32(payload.data() + 4 * k);
    const float v = std::bit_cast<float>(bits);
    if (!std::isfinite(v))
      throw InputError("embeddings file " + path.string() + ": non-finite value in row " +
                       std::to_string(k / dim));
    out[k] = v;
  }
  return emb;
}

void write_embeddings(std::ostream& os, const EmbeddingMatrix& emb) {
  std::array<unsigned char, 16> header{};
  std::memcpy(header.data(), kMagic.data(), kMagic.size());
  encode_u32(kVersion, header.data() + 4);
  encode_u32(static_cast<std::uint32_t>(emb.rows()), header.data() + 8);
  encode_u32(static_cast<std::uint32_t>(emb.cols()), header.data() + 12);
  os.write(reinterpret_cast<const char*>(header.data()), header.size());

  std::vector<unsigned char> payload(static_cast<std::size_t>(emb.size()) * 4);
  const float* in = emb.data();
  for (Eigen::Index k = 0; k < emb.size(); ++k)
    encode_u32(std::bit_cast<std::uint32_t>(in[k]), payload.data() + 4 * k);
  os.write(reinterpret_cast<const char*>(payload.data()),
           static_cast<std::streamsize>(payload.size()));
}

void write_embeddings(const std::filesystem::path& path, const EmbeddingMatrix& emb) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write embeddings file " + path.string());
  write_embeddings(out, emb);
  if (!out) throw InputError("failed writing embeddings file " + path.string());
}

std::vector<DomainCorpus> parse_corpus(std::istream& is,
                                       std::shared_ptr<const EmbeddingMatrix> emb) {
  using nlohmann::json;
  const Eigen::Index rows = emb->rows();

  struct Pending {
    std::vector<Document> source;
    std::vector<Document> target;
  };
  std::map<std::string, Pending> by_domain;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (trim(line).empty()) continue;

    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw InputError(line_error(line_no, std::string("malformed JSON: ") + e.what()));
    }

    Document doc;
    std::string role;
    try {
      if (!rec.is_object()) throw InputError(line_error(line_no, "record is not an object"));
      doc.doc_id = rec.at("doc_id").get<std::string>();
      doc.domain_id = rec.at("domain_id").get<std::string>();
      doc.lang = rec.at("lang").get<std::string>();
      role = rec.at("role").get<std::string>();
      if (rec.contains("doc_emb_row") && !rec.at("doc_emb_row").is_null())
        doc.doc_emb_row = rec.at("doc_emb_row").get<std::int64_t>();
      for (const auto& s : rec.at("sentences")) {
        SentenceRef ref;
        ref.text = trim(s.at("text").get<std::string>());
        ref.emb_row = s.at("emb_row").get<std::int64_t>();
        if (s.contains("tokens") && !s.at("tokens").is_null()) {
          ref.token_count = s.at("tokens").get<int>();
        } else {
          ref.token_count = count_tokens(ref.text);
        }
        doc.sentences.push_back(std::move(ref));
      }
    } catch (const json::exception& e) {
      throw InputError(line_error(line_no, std::string("malformed record: ") + e.what()));
    }

    if (role != "source" && role != "target")
      throw InputError(line_error(line_no, "role must be \"source\" or \"target\", got \"" +
                                               role + "\""));
    if (doc.sentences.empty())
      throw InputError(line_error(line_no, "document " + doc.doc_id + " has no sentences"));
    for (const auto& s : doc.sentences) {
      if (s.emb_row < 0 || s.emb_row >= rows)
        throw InputError("document " + doc.doc_id + ": embedding row out of range (row " +
                         std::to_string(s.emb_row) + ", rows " + std::to_string(rows) + ")");
      if (s.token_count < 1)
        throw InputError("document " + doc.doc_id + ": sentence \"" + s.text +
                         "\" has no tokens");
    }
    if (doc.doc_emb_row && (*doc.doc_emb_row < 0 || *doc.doc_emb_row >= rows))
      throw InputError("document " + doc.doc_id +
                       ": embedding row out of range (doc_emb_row " +
                       std::to_string(*doc.doc_emb_row) + ", rows " + std::to_string(rows) +
                       ")");

    auto& pending = by_domain[doc.domain_id];
    (role == "source" ? pending.source : pending.target).push_back(std::move(doc));
  }

  std::vector<DomainCorpus> domains;
  for (auto& [domain_id, pending] : by_domain) {
    DomainCorpus dc;
    dc.domain_id = domain_id;
    dc.source_docs = std::move(pending.source);
    dc.target_docs = std::move(pending.target);
    dc.embeddings = emb;

    auto by_id = [](const Document& a, const Document& b) { return a.doc_id < b.doc_id; };
    std::sort(dc.source_docs.begin(), dc.source_docs.end(), by_id);
    std::sort(dc.target_docs.begin(), dc.target_docs.end(), by_id);

    std::set<std::pair<std::string, std::string>> seen;
    std::set<std::string> source_langs;
    for (const auto* side : {&dc.source_docs, &dc.target_docs}) {
      for (const auto& d : *side) {
        if (!seen.emplace(d.lang, d.doc_id).second)
          throw InputError("domain " + domain_id + ": duplicate doc_id " + d.doc_id +
                           " for lang " + d.lang);
      }
    }
    for (const auto& d : dc.source_docs) source_langs.insert(d.lang);
    for (const auto& d : dc.target_docs) {
      if (source_langs.count(d.lang))
        throw InputError("domain " + domain_id + ": target document " + d.doc_id +
                         " shares language " + d.lang + " with the source side");
    }
    domains.push_back(std::move(dc));
  }
  return domains;
}

std::vector<DomainCorpus> load_corpus(const std::filesystem::path& corpus_path,
                                      const std::filesystem::path& embeddings_path) {
  auto emb = std::make_shared<const EmbeddingMatrix>(read_embeddings(embeddings_path));
  std::ifstream in(corpus_path);
  if (!in) throw InputError("cannot open corpus file " + corpus_path.string());
  return parse_corpus(in, std::move(emb));
}

void write_corpus(std::span<const DomainCorpus> domains, std::ostream& corpus_os,
                  std::ostream& emb_os) {
  using nlohmann::json;

  // Row offset of each distinct backing matrix in the concatenated output.
  std::vector<const EmbeddingMatrix*> matrices;
  std::unordered_map<const EmbeddingMatrix*, Eigen::Index> offset;
  Eigen::Index total_rows = 0;
  Eigen::Index dim = -1;
  for (const auto& d : domains) {
    const EmbeddingMatrix* m = d.embeddings.get();
    if (!m) throw InputError("domain " + d.domain_id + " has no embeddings");
    if (offset.count(m)) continue;
    if (dim >= 0 && m->cols() != dim)
      throw InputError("domain " + d.domain_id + ": mixed embedding dims (" +
                       std::to_string(m->cols()) + " vs " + std::to_string(dim) + ")");
    dim = m->cols();
    offset[m] = total_rows;
    total_rows += m->rows();
    matrices.push_back(m);
  }

  EmbeddingMatrix all(total_rows, dim < 0 ? 1 : dim);
  for (const auto* m : matrices) all.middleRows(offset[m], m->rows()) = *m;
  write_embeddings(emb_os, all);

  auto write_doc = [&](const Document& doc, const char* role, Eigen::Index base) {
    json rec;
    rec["doc_id"] = doc.doc_id;
    rec["domain_id"] = doc.domain_id;
    rec["lang"] = doc.lang;
    rec["role"] = role;
    json sentences = json::array();
    for (const auto& s : doc.sentences)
      sentences.push_back({{"text", s.text}, {"tokens", s.token_count},
                           {"emb_row", s.emb_row + base}});
    rec["sentences"] = std::move(sentences);
    if (doc.doc_emb_row) rec["doc_emb_row"] = *doc.doc_emb_row + base;
    corpus_os << rec.dump() << '\n';
  };
  for (const auto& d : domains) {
    const Eigen::Index base = offset[d.embeddings.get()];
    for (const auto& doc : d.source_docs) write_doc(doc, "source", base);
    for (const auto& doc : d.target_docs) write_doc(doc, "target", base);
  }
}

void write_corpus(std::span<const DomainCorpus> domains,
                  const std::filesystem::path& corpus_path,
                  const std::filesystem::path& embeddings_path) {
  std::ofstream corpus(corpus_path, std::ios::trunc);
  if (!corpus) throw InputError("cannot write corpus file " + corpus_path.string());
  std::ofstream emb(embeddings_path, std::ios::binary | std::ios::trunc);
  if (!emb) throw InputError("cannot write embeddings file " + embeddings_path.string());
  write_corpus(domains, corpus, emb);
  if (!corpus || !emb) throw InputError("failed writing corpus " + corpus_path.string());
}

SentenceVocabulary build_vocabulary(const Document& doc) {
  SentenceVocabulary vocab;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& s : doc.sentences) {
    std::string key = trim(s.text);
    auto [it, inserted] = index.emplace(key, vocab.entries.size());
    if (inserted) {
      vocab.entries.push_back({std::move(key), s.emb_row, 1, s.token_count});
    } else {
      ++vocab.entries[it->second].count;
    }
  }
  return vocab;
}

GoldSet parse_gold(std::istream& is) {
  GoldSet gold;
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
    if (fields.size() != 2)
      throw InputError("gold line " + std::to_string(line_no) + ": expected 2 fields, got " +
                       std::to_string(fields.size()));
    gold.emplace(trim(fields[0]), trim(fields[1]));
  }
  return gold;
}

GoldSet load_gold(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open gold file " + path.string());
  return parse_gold(in);
}

void write_gold(std::ostream& os, const GoldSet& gold) {
  for (const auto& [src, tgt] : gold) os << src << '\t' << tgt << '\n';
}

std::vector<std::string> truncate_documents(DomainCorpus& domain,
                                            std::size_t max_sentences) {
  std::vector<std::string> truncated;
  for (auto* side : {&domain.source_docs, &domain.target_docs}) {
    for (auto& doc : *side) {
      if (doc.sentences.size() > max_sentences) {
        doc.sentences.resize(max_sentences);
        truncated.push_back(doc.doc_id);
      }
    }
  }
  return truncated;
}

}  // namespace smd
