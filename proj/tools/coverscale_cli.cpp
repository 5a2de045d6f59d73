// coverscale command line: ingest, synth, index, query, pairs, rerank, eval,
// analyze and run. Exit codes: 0 success, 1 configuration/usage error,
// 2 data error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "coverscale/coverscale.hpp"

namespace cs = coverscale;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitData = 2;

void setup_logging() {
  auto logger = spdlog::stderr_logger_mt("coverscale");
  logger->set_pattern("%^[%l]%$ %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("COVERSCALE_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to "off"; only honour real ones.
    if (level != spdlog::level::off || std::string(env) == "off")
      spdlog::set_level(level);
    else
      spdlog::warn("ignoring COVERSCALE_LOG={}", env);
  }
}

void log_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) spdlog::warn("{}", w);
}

/// Data-source flags shared by the subcommands that load a corpus. Values
/// given on the command line override the config file.
struct DataFlags {
  std::string config;
  std::string tracks;
  std::string shs;
  std::string mxm;
  std::string duplicates;
  std::string codebook;
  std::string query_ids;

  void add_to(CLI::App* cmd, bool with_queries = true) {
    cmd->add_option("--config", config, "experiment config (JSON)");
    cmd->add_option("--tracks", tracks, "tracks.jsonl");
    cmd->add_option("--shs", shs, "SHS clique file (default: clique_id fields)");
    cmd->add_option("--mxm", mxm, "MXM bag-of-words lyrics file");
    cmd->add_option("--duplicates", duplicates, "duplicate track id list");
    cmd->add_option("--codebook", codebook, "codebook file, one keyword per line");
    if (with_queries) cmd->add_option("--queries", query_ids, "query id list (default: all clique members)");
  }

  cs::ExperimentConfig config_or_default() const {
    cs::ExperimentConfig cfg;
    if (!config.empty()) cfg = cs::load_config(config);
    if (!tracks.empty()) cfg.corpus_path = tracks;
    if (!shs.empty()) cfg.shs_path = shs;
    if (!mxm.empty()) cfg.mxm_path = mxm;
    if (!duplicates.empty()) cfg.duplicates_path = duplicates;
    if (!codebook.empty()) cfg.codebook_path = codebook;
    if (!query_ids.empty()) cfg.query_ids_path = query_ids;
    if (cfg.corpus_path.empty()) throw cs::Error(cs::ErrorCode::ConfigError, "--tracks or --config is required");
    return cfg;
  }
};

void write_text(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw cs::Error(cs::ErrorCode::IoError, "cannot write " + path);
}

std::string tsv_hits(const cs::ResultList& list) {
  std::ostringstream out;
  for (const auto& h : list.hits)
    out << h.rank << '\t' << h.track_id << '\t' << cs::detail::format_double(h.score) << '\n';
  return out.str();
}

// -- subcommands ----------------------------------------------------------

struct IngestCmd {
  DataFlags data;
  std::string out;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand("ingest", "validate inputs and write canonical tracks.jsonl");
    data.add_to(cmd, false);
    cmd->add_option("--out,-o", out, "output tracks.jsonl")->required();
    cmd->callback([this] { run(); });
  }

  void run() {
    auto cfg = data.config_or_default();
    cfg.methods = {cs::Method::Title};
    auto loaded = cs::load_experiment_data(cfg);
    log_warnings(loaded.warnings);
    const auto tracks = cs::assign_cliques(loaded.tracks, loaded.cliques);
    cs::write_tracks_jsonl(tracks, out);
    std::size_t with_lyrics = 0;
    std::size_t dups = 0;
    for (const auto& d : tracks) {
      with_lyrics += !d.lyrics.empty();
      dups += d.is_duplicate;
    }
    spdlog::info("wrote {} tracks ({} cliques, {} with lyrics, {} duplicates) to {}", tracks.size(),
                 loaded.cliques.size(), with_lyrics, dups, out);
  }
};

struct SynthCmd {
  cs::SynthParams params;
  std::size_t min_size = 5;
  std::size_t max_size = 5;
  std::string out;
  std::string shs_out;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand("synth", "generate a seeded synthetic corpus");
    cmd->add_option("--seed", params.seed, "PRNG seed")->capture_default_str();
    cmd->add_option("--n-cliques", params.n_cliques)->capture_default_str();
    cmd->add_option("--min-size", min_size)->capture_default_str();
    cmd->add_option("--max-size", max_size)->capture_default_str();
    cmd->add_option("--vocab", params.vocab_size)->capture_default_str();
    cmd->add_option("--parenthetical-rate", params.parenthetical_rate)->capture_default_str();
    cmd->add_option("--lyric-overlap", params.lyric_overlap)->capture_default_str();
    cmd->add_option("--out,-o", out, "output tracks.jsonl")->required();
    cmd->add_option("--shs-out", shs_out, "also write the cliques in SHS format");
    cmd->callback([this] { run(); });
  }

  void run() {
    params.clique_size_range = {min_size, max_size};
    const auto corpus = cs::synth_corpus(params);
    cs::write_tracks_jsonl(corpus.tracks, out);
    if (!shs_out.empty()) {
      std::ostringstream shs;
      cs::write_shs_cliques(corpus.cliques, shs);
      write_text(shs_out, shs.str());
    }
    spdlog::info("wrote {} tracks in {} cliques to {}", corpus.tracks.size(), corpus.cliques.size(), out);
  }
};

struct IndexCmd {
  DataFlags data;
  std::string field = "title";
  std::string out;
  unsigned threads = 1;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand("index", "build an index snapshot over one field");
    data.add_to(cmd, false);
    cmd->add_option("--field", field, "title | pre-title | lyrics")->capture_default_str();
    cmd->add_option("--threads", threads)->check(CLI::PositiveNumber);
    cmd->add_option("--out,-o", out, "snapshot path")->required();
    cmd->callback([this] { run(); });
  }

  void run() {
    const auto f = cs::parse_field(field);
    const auto tracks = load_tracks();
    const auto index = cs::Index::build(tracks, f, threads);
    std::ofstream os(out, std::ios::binary);
    if (!os) throw cs::Error(cs::ErrorCode::IoError, "cannot write " + out);
    index.save(os);
    spdlog::info("indexed {} documents, {} terms ({}) into {}", index.n_docs(), index.n_terms(), cs::to_string(f), out);
  }

  cs::TrackCollection load_tracks() const {
    auto cfg = data.config_or_default();
    cfg.methods = {cs::Method::Title};
    // Lyrics and pre_title come from the same assembly as experiment runs.
    auto tracks = cs::load_tracks_jsonl(cfg.corpus_path);
    if (cfg.mxm_path) tracks = cs::attach_lyrics(tracks, cs::parse_mxm_bow(*cfg.mxm_path));
    const auto codebook = cfg.codebook_path ? cs::load_codebook(*cfg.codebook_path) : cs::default_codebook();
    return tracks.transformed([&](cs::TrackDocument& d) {
      if (!d.pre_title) d.pre_title = cs::preprocess_title(d.title, codebook);
    });
  }
};

struct QueryCmd {
  DataFlags data;
  std::string field = "title";
  std::string snapshot;
  std::string track_id;
  std::string text;
  std::size_t k = 100;
  cs::MltParams mlt;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand("query", "run one ad-hoc query and print the ranked list");
    data.add_to(cmd, false);
    cmd->add_option("--field", field, "title | pre-title | lyrics")->capture_default_str();
    cmd->add_option("--index", snapshot, "index snapshot (instead of indexing --tracks)");
    auto* by_track = cmd->add_option("--track", track_id, "query with this track's field");
    auto* by_text = cmd->add_option("--text", text, "free-text query (title fields)");
    by_track->excludes(by_text);
    cmd->add_option("--k", k)->capture_default_str();
    cmd->add_option("--max-query-terms", mlt.max_query_terms)->capture_default_str();
    cmd->add_option("--min-term-freq", mlt.min_term_freq)->capture_default_str();
    cmd->callback([this] { run(); });
  }

  void run() {
    if (track_id.empty() == text.empty())
      throw cs::Error(cs::ErrorCode::ConfigError, "give exactly one of --track or --text");
    const auto f = cs::parse_field(field);
    std::optional<cs::TrackCollection> tracks;
    const bool need_tracks = snapshot.empty() || !track_id.empty();
    if (need_tracks) {
      IndexCmd loader;
      loader.data = data;
      tracks = loader.load_tracks();
    }
    cs::Index index;
    if (snapshot.empty()) {
      index = cs::Index::build(*tracks, f);
    } else {
      std::ifstream in(snapshot, std::ios::binary);
      if (!in) throw cs::Error(cs::ErrorCode::IoError, "cannot open " + snapshot);
      index = cs::Index::load(in);
      if (index.field() != f)
        throw cs::Error(cs::ErrorCode::ConfigError,
                        "snapshot indexes '" + std::string(cs::to_string(index.field())) + "'");
    }

    cs::ResultList result;
    if (!text.empty()) {
      if (f == cs::Field::Lyrics)
        throw cs::Error(cs::ErrorCode::ConfigError, "--text queries need a title field");
      const auto raw = cs::tokenize(f == cs::Field::PreTitle ? cs::preprocess_title(text, cs::default_codebook()) : text);
      if (raw.empty()) throw cs::Error(cs::ErrorCode::EmptyQuery, "query text has no terms");
      result = cs::search(index, raw, k);
    } else {
      const auto* doc = tracks->find(track_id);
      if (!doc) throw cs::Error(cs::ErrorCode::UnknownQuery, "track " + track_id + " is not in the corpus");
      result = f == cs::Field::Lyrics ? cs::lyrics_query(index, *doc, k, mlt)
                                      : cs::title_query(index, *doc, k, f == cs::Field::PreTitle);
    }
    std::cout << tsv_hits(result);
  }
};

struct PairsCmd {
  std::string run_path;
  std::size_t k = 100;
  std::string out;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand("pairs", "export top-k candidate pairs of a run for audio scoring");
    cmd->add_option("--run", run_path, "run file")->required();
    cmd->add_option("--k", k)->capture_default_str();
    cmd->add_option("--out,-o", out, "pairs.csv")->required();
    cmd->callback([this] { run(); });
  }

  void run() {
    const auto saved = cs::read_run(run_path);
    const auto rows = cs::export_candidate_pairs(saved.results, k, out);
    spdlog::info("wrote {} candidate pairs for {} queries to {}", rows, saved.results.size(), out);
  }
};

struct RerankCmd {
  std::string run_path;
  std::string distances;
  double audio_h = 0.1;
  std::string method;
  std::string out;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand("rerank", "re-rank a saved run with audio distances");
    cmd->add_option("--run", run_path, "input run file")->required();
    cmd->add_option("--distances", distances, "distances.csv")->required();
    cmd->add_option("--audio-h", audio_h, "absolute distance threshold")->capture_default_str();
    cmd->add_option("--method", method, "method name for the output run (default: <input>+audio)");
    cmd->add_option("--out,-o", out, "output run file")->required();
    cmd->callback([this] { run(); });
  }

  void run() {
    if (!(audio_h >= 0.0)) throw cs::Error(cs::ErrorCode::ConfigError, "--audio-h must be >= 0");
    const auto saved = cs::read_run(run_path);
    std::size_t overwritten = 0;
    const auto provider = cs::load_distances_csv(distances, &overwritten);
    if (overwritten) spdlog::warn("{} distance rows overwrote earlier ones", overwritten);
    cs::RunResults reranked;
    for (const auto& [q, list] : saved.results) reranked.emplace(q, cs::audio_rerank(list, provider, audio_h));
    const auto name = method.empty() ? (saved.method.empty() ? std::string("audio") : saved.method + "+audio") : method;
    cs::write_run(reranked, name, out);
    spdlog::info("re-ranked {} queries into {}", reranked.size(), out);
  }
};

struct EvalCmd {
  DataFlags data;
  std::string run_path;
  std::size_t k = 100;
  bool exclude_duplicates = false;
  std::vector<std::size_t> curve;
  std::string json_out;
  std::string per_query_out;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand("eval", "score a saved run with MAP@k");
    data.add_to(cmd);
    cmd->add_option("--run", run_path, "run file")->required();
    cmd->add_option("--k", k)->capture_default_str();
    cmd->add_flag("--exclude-duplicates", exclude_duplicates);
    cmd->add_option("--curve", curve, "comma-separated ks for a MAP@k curve")->delimiter(',');
    cmd->add_option("--json", json_out, "write the EvalReport as JSON");
    cmd->add_option("--per-query", per_query_out, "write per-query AP as CSV");
    cmd->callback([this] { run(); });
  }

  void run() {
    if (k < 1) throw cs::Error(cs::ErrorCode::InvalidK, "k must be >= 1");
    auto cfg = data.config_or_default();
    cfg.methods = {cs::Method::Title};
    const auto loaded = cs::load_experiment_data(cfg);
    log_warnings(loaded.warnings);
    auto results = cs::read_run(run_path).results;
    // Run files omit queries that returned nothing; they still count.
    for (const auto& q : loaded.queries)
      if (!results.count(q)) results.emplace(q, cs::detail::empty_result(q, k));

    if (!curve.empty()) {
      std::cout << "k,map\n";
      for (const auto& [ck, m] : cs::map_curve(results, loaded.cliques, loaded.tracks, curve, exclude_duplicates))
        std::cout << ck << ',' << cs::detail::format_double(m) << '\n';
      return;
    }
    const auto report = cs::evaluate_run(results, loaded.cliques, loaded.tracks, k, exclude_duplicates);
    if (!json_out.empty()) write_text(json_out, cs::to_json(report).dump(2) + "\n");
    if (!per_query_out.empty()) {
      std::ostringstream csv;
      cs::write_per_query_csv(report, csv);
      write_text(per_query_out, csv.str());
    }
    std::cout << "MAP@" << k << " = " << cs::detail::format_double(report.map_at_k) << " over " << report.n_queries
              << " queries\n";
  }
};

struct AnalyzeCmd {
  DataFlags data;
  std::size_t across_sample = 100000;
  std::uint64_t seed = 42;
  std::string out;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand("analyze", "title-similarity histogram within and across cliques");
    data.add_to(cmd, false);
    cmd->add_option("--across-sample", across_sample, "number of sampled across-clique pairs")->capture_default_str();
    cmd->add_option("--seed", seed)->capture_default_str();
    cmd->add_option("--out,-o", out, "histogram CSV (default: stdout)");
    cmd->callback([this] { run(); });
  }

  void run() {
    auto cfg = data.config_or_default();
    std::vector<std::string> warnings;
    const auto tracks = cs::load_tracks_jsonl(cfg.corpus_path);
    const auto cliques =
        cfg.shs_path ? cs::parse_shs_cliques(*cfg.shs_path, &warnings) : cs::cliques_from_tracks(tracks, &warnings);
    log_warnings(warnings);
    const auto hist = cs::clique_similarity_histogram(tracks, cliques, across_sample, seed);
    std::ostringstream csv;
    cs::write_histogram_csv(hist, csv);
    write_text(out, csv.str());
  }
};

struct RunCmd {
  std::string config;
  std::optional<std::size_t> k;
  bool exclude_duplicates = false;
  std::optional<double> relative_h;
  std::optional<double> audio_h;
  std::optional<unsigned> threads;
  std::string output_dir;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand("run", "run a full experiment from a config");
    cmd->add_option("--config", config, "experiment config (JSON)")->required();
    cmd->add_option("--k", k, "override k");
    cmd->add_flag("--exclude-duplicates", exclude_duplicates, "evaluate without duplicate tracks");
    cmd->add_option("--relative-h", relative_h, "relative lyrics threshold (default 0.5)");
    cmd->add_option("--audio-h", audio_h, "absolute audio threshold (default 0.1)");
    cmd->add_option("--threads", threads, "query threads");
    cmd->add_option("--output-dir", output_dir, "override output_dir");
    cmd->callback([this] { run(); });
  }

  void run() {
    auto cfg = cs::load_config(config);
    if (k) cfg.k = *k;
    if (exclude_duplicates) cfg.exclude_duplicates = true;
    if (relative_h) cfg.fusion.relative_h = *relative_h;
    if (audio_h) cfg.fusion.audio_h = *audio_h;
    if (threads) cfg.threads = *threads;
    if (!output_dir.empty()) cfg.output_dir = output_dir;
    std::vector<std::string> warnings;
    const auto outcomes = cs::run_experiment(cfg, &warnings);
    log_warnings(warnings);
    std::cout << cs::summary_markdown(outcomes, cfg.k);
    spdlog::info("reports written to {}", cfg.output_dir);
  }
};

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"coverscale: text-based cover song retrieval and evaluation"};
  app.require_subcommand(1);

  IngestCmd ingest;
  SynthCmd synth;
  IndexCmd index;
  QueryCmd query;
  PairsCmd pairs;
  RerankCmd rerank;
  EvalCmd eval;
  AnalyzeCmd analyze;
  RunCmd run;
  ingest.setup(app);
  synth.setup(app);
  index.setup(app);
  query.setup(app);
  pairs.setup(app);
  rerank.setup(app);
  eval.setup(app);
  analyze.setup(app);
  run.setup(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  } catch (const cs::Error& e) {
    spdlog::error("{}", e.what());
    return cs::is_config_error(e.code()) ? kExitConfig : kExitData;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitData;
  }
  return 0;
}
