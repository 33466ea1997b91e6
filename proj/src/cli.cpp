#include "smd/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "smd/corpus.hpp"
#include "smd/errors.hpp"
#include "smd/eval.hpp"
#include "smd/matching.hpp"
#include "smd/synthetic.hpp"

namespace smd::cli {

namespace fs = std::filesystem;

namespace {

struct RunConfig {
  std::string scorer = "smd";
  std::string solver = "greedy";
  std::string scheme = "uniform";
  std::string corpus;
  std::string embeddings;
  std::string gold;
  std::string alignment;
  std::string out;
  int threads = 1;
  std::uint64_t seed = 1;
  int max_vocab = 2000;
};

// Stages file contents next to their destinations and renames them into
// place only once every file has been written.
class OutputSet {
 public:
  void add(const fs::path& path, std::string contents) {
    files_.push_back({path, std::move(contents)});
  }

  void commit() {
    std::vector<fs::path> temps;
    for (const auto& [path, contents] : files_) {
      fs::path tmp = path;
      tmp += ".tmp";
      std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
      if (!os) throw InputError("cannot write " + path.string());
      os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
      os.close();
      if (!os) throw InputError("failed writing " + path.string());
      temps.push_back(tmp);
    }
    for (std::size_t k = 0; k < files_.size(); ++k) fs::rename(temps[k], files_[k].first);
  }

 private:
  std::vector<std::pair<fs::path, std::string>> files_;
};

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw InputError(std::string("missing --") + what);
  if (!fs::is_regular_file(path))
    throw InputError(std::string(what) + " file not found: " + path);
}

Scorer checked_scorer(const std::string& name) {
  if (auto s = parse_scorer(name)) return *s;
  throw InputError("unknown scorer \"" + name + "\" (expected de, sa or smd)");
}

Solver checked_solver(const std::string& name) {
  if (auto s = parse_solver(name)) return *s;
  throw InputError("unknown solver \"" + name + "\" (expected exact, relaxed or greedy)");
}

WeightingScheme checked_scheme(const std::string& name) {
  if (auto s = parse_scheme(name)) return *s;
  throw InputError("unknown scheme \"" + name + "\" (expected uniform, sl, idf or slidf)");
}

int cmd_align(const RunConfig& cfg, bool smd_options_given, std::ostream& out,
              std::ostream& err) {
  ScorerConfig scorer{checked_scorer(cfg.scorer), checked_solver(cfg.solver),
                      checked_scheme(cfg.scheme)};
  if (scorer.scorer != Scorer::SMD && smd_options_given)
    throw InputError("--solver and --scheme are only valid with --scorer smd");
  if (cfg.threads < 1) throw InputError("--threads must be positive");
  if (cfg.max_vocab < 1) throw InputError("--max-vocab must be positive");
  require_file(cfg.corpus, "corpus");
  require_file(cfg.embeddings, "embeddings");

  auto domains = load_corpus(cfg.corpus, cfg.embeddings);
  std::ostringstream tsv;
  for (auto& domain : domains) {
    for (const auto& id : truncate_documents(domain, static_cast<std::size_t>(cfg.max_vocab)))
      err << "warning: domain " << domain.domain_id << ": document " << id
          << " truncated to " << cfg.max_vocab << " sentences\n";
    if (domain.source_docs.empty() || domain.target_docs.empty()) {
      err << "warning: domain " << domain.domain_id
          << " has no candidate pairs (one side is empty), skipped\n";
      continue;
    }
    const auto pairs = score_all_pairs(domain, scorer, cfg.threads);
    write_alignment(tsv, competitive_match(pairs));
  }

  if (cfg.out.empty()) {
    out << tsv.str();
  } else {
    OutputSet files;
    files.add(cfg.out, tsv.str());
    files.commit();
  }
  return 0;
}

int cmd_eval(const RunConfig& cfg, std::ostream& out) {
  require_file(cfg.alignment, "alignment");
  require_file(cfg.gold, "gold");
  const Alignment predicted = load_alignment(cfg.alignment);
  const GoldSet gold = load_gold(cfg.gold);
  const std::string report = to_json(recall(predicted, gold)).dump() + "\n";
  out << report;
  if (!cfg.out.empty()) {
    OutputSet files;
    files.add(cfg.out, report);
    files.commit();
  }
  return 0;
}

int cmd_compare_approx(const RunConfig& cfg, std::ostream& out) {
  const WeightingScheme scheme = checked_scheme(cfg.scheme);
  if (cfg.max_vocab < 1) throw InputError("--max-vocab must be positive");
  require_file(cfg.corpus, "corpus");
  require_file(cfg.embeddings, "embeddings");

  const auto domains = load_corpus(cfg.corpus, cfg.embeddings);
  std::vector<std::string> over_cap;
  for (const auto& domain : domains)
    for (const auto* side : {&domain.source_docs, &domain.target_docs})
      for (const auto& doc : *side)
        if (build_vocabulary(doc).size() > static_cast<std::size_t>(cfg.max_vocab))
          over_cap.push_back(doc.doc_id);
  if (!over_cap.empty()) {
    std::string ids;
    for (const auto& id : over_cap) ids += (ids.empty() ? "" : ", ") + id;
    throw InputError("vocabulary cap " + std::to_string(cfg.max_vocab) +
                     " exceeded by documents: " + ids);
  }

  std::vector<DomainCorpus> scored;
  for (const auto& domain : domains)
    if (!domain.source_docs.empty() && !domain.target_docs.empty()) scored.push_back(domain);
  const std::string report = to_json(compare_approximations(scored, scheme)).dump() + "\n";
  out << report;
  if (!cfg.out.empty()) {
    OutputSet files;
    files.add(cfg.out, report);
    files.commit();
  }
  return 0;
}

int cmd_synth(const RunConfig& cfg, SynthSpec spec) {
  if (cfg.corpus.empty() || cfg.embeddings.empty() || cfg.gold.empty())
    throw InputError("synth needs --corpus, --embeddings and --gold output paths");
  spec.seed = cfg.seed;
  const SyntheticCorpus synth = generate_synthetic(spec);

  std::ostringstream corpus;
  std::ostringstream emb;
  std::ostringstream gold;
  write_corpus(synth.domains, corpus, emb);
  write_gold(gold, synth.gold);

  OutputSet files;
  files.add(cfg.corpus, corpus.str());
  files.add(cfg.embeddings, emb.str());
  files.add(cfg.gold, gold.str());
  files.commit();
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cross-lingual document alignment with sentence mover's distance", "smdalign"};
  app.require_subcommand(1);

  RunConfig cfg;
  SynthSpec spec;

  auto* align = app.add_subcommand("align", "Score and align documents per web-domain");
  align->add_option("--corpus", cfg.corpus, "Corpus JSON Lines file")->required();
  align->add_option("--embeddings", cfg.embeddings, "XEMB embedding file")->required();
  align->add_option("--out", cfg.out, "Output alignment TSV (default: stdout)");
  align->add_option("--scorer", cfg.scorer, "de | sa | smd")->capture_default_str();
  auto* solver_opt =
      align->add_option("--solver", cfg.solver, "exact | relaxed | greedy")->capture_default_str();
  auto* scheme_opt = align->add_option("--scheme", cfg.scheme, "uniform | sl | idf | slidf")
                         ->capture_default_str();
  align->add_option("--threads", cfg.threads, "Worker threads")->capture_default_str();
  align->add_option("--seed", cfg.seed, "Random seed (unused by deterministic scorers)");
  align->add_option("--max-vocab", cfg.max_vocab, "Sentences kept per document")
      ->capture_default_str();

  auto* eval = app.add_subcommand("eval", "Recall of an alignment against gold pairs");
  eval->add_option("--alignment", cfg.alignment, "Alignment TSV from `align`")->required();
  eval->add_option("--gold", cfg.gold, "Gold pairs TSV")->required();
  eval->add_option("--out", cfg.out, "Also write the JSON report here");

  auto* compare =
      app.add_subcommand("compare-approx", "Compare relaxed and greedy SMD against exact");
  compare->add_option("--corpus", cfg.corpus, "Corpus JSON Lines file")->required();
  compare->add_option("--embeddings", cfg.embeddings, "XEMB embedding file")->required();
  compare->add_option("--scheme", cfg.scheme, "uniform | sl | idf | slidf")
      ->capture_default_str();
  compare->add_option("--max-vocab", cfg.max_vocab, "Largest allowed document vocabulary")
      ->capture_default_str();
  compare->add_option("--out", cfg.out, "Also write the JSON report here");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic planted-translation corpus");
  synth->add_option("--corpus", cfg.corpus, "Output corpus JSON Lines file")->required();
  synth->add_option("--embeddings", cfg.embeddings, "Output XEMB file")->required();
  synth->add_option("--gold", cfg.gold, "Output gold pairs TSV")->required();
  synth->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  synth->add_option("--domains", spec.n_domains, "Number of web-domains")->capture_default_str();
  synth->add_option("--docs", spec.docs_per_side, "Documents per side")->capture_default_str();
  synth->add_option("--min-sentences", spec.min_sentences)->capture_default_str();
  synth->add_option("--max-sentences", spec.max_sentences)->capture_default_str();
  synth->add_option("--dim", spec.dim, "Embedding dimension")->capture_default_str();
  synth->add_option("--noise", spec.noise_sigma, "Translation noise sigma")
      ->capture_default_str();
  synth->add_option("--boilerplate", spec.boilerplate_fraction,
                    "Shared boilerplate sentences as a fraction of --min-sentences")
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (align->parsed())
      return cmd_align(cfg, solver_opt->count() > 0 || scheme_opt->count() > 0, out, err);
    if (eval->parsed()) return cmd_eval(cfg, out);
    if (compare->parsed()) return cmd_compare_approx(cfg, out);
    if (synth->parsed()) return cmd_synth(cfg, spec);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const InvariantError& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace smd::cli
