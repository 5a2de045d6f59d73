#pragma once

/** \file experiment.hpp
 *  \brief Declarative experiment runs: load the corpus, build the indexes
 *  once, run every requested method over the query set and score it.
 *
 * Methods and their composition:
 *   title               title search
 *   pre-title           preprocessed-title search
 *   mxm-lyr             more-like-this lyrics search
 *   title+mxm-lyr       merge_promote(title, relative_filter(mxm-lyr, relative_h))
 *   pre-title+mxm-lyr   merge_promote(pre-title, relative_filter(mxm-lyr, relative_h))
 *   +audio              audio_rerank(title+mxm-lyr, distances, audio_h),
 *                       reported as "title+mxm-lyr+audio"
 */

#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "coverscale/audiodist.hpp"
#include "coverscale/corpus.hpp"
#include "coverscale/detail/format.hpp"
#include "coverscale/error.hpp"
#include "coverscale/eval.hpp"
#include "coverscale/fusion.hpp"
#include "coverscale/index.hpp"
#include "coverscale/retrieval.hpp"
#include "coverscale/runfile.hpp"
#include "coverscale/textnorm.hpp"

namespace coverscale {

enum class Method { Title, PreTitle, Lyrics, TitleLyrics, PreTitleLyrics, Audio };

inline constexpr Method kAllMethods[] = {Method::Title,       Method::PreTitle,       Method::Lyrics,
                                         Method::TitleLyrics, Method::PreTitleLyrics, Method::Audio};

/// Name used in configs.
constexpr std::string_view method_key(Method m) noexcept {
  switch (m) {
    case Method::Title: return "title";
    case Method::PreTitle: return "pre-title";
    case Method::Lyrics: return "mxm-lyr";
    case Method::TitleLyrics: return "title+mxm-lyr";
    case Method::PreTitleLyrics: return "pre-title+mxm-lyr";
    case Method::Audio: return "+audio";
  }
  return "?";
}

/// Name used for reports, run files and output file names.
constexpr std::string_view method_name(Method m) noexcept {
  return m == Method::Audio ? std::string_view("title+mxm-lyr+audio") : method_key(m);
}

inline Method parse_method(std::string_view key) {
  for (auto m : kAllMethods)
    if (method_key(m) == key || method_name(m) == key) return m;
  throw Error(ErrorCode::ConfigError, "unknown method '" + std::string(key) + "'");
}

inline bool uses_lyrics(Method m) {
  return m == Method::Lyrics || m == Method::TitleLyrics || m == Method::PreTitleLyrics || m == Method::Audio;
}

struct ExperimentConfig {
  std::string corpus_path;
  std::optional<std::string> shs_path;
  std::optional<std::string> mxm_path;
  std::optional<std::string> duplicates_path;
  std::optional<std::string> codebook_path;
  std::optional<std::string> query_ids_path;  // unset: all clique members
  std::vector<Method> methods{Method::Title};
  std::size_t k = 100;
  FusionParams fusion;
  MltParams mlt;
  std::optional<std::string> distances_path;
  bool exclude_duplicates = false;
  std::string output_dir = "out";
  unsigned threads = 1;

  /// Checks the invariants that do not need the data.
  void validate() const {
    if (corpus_path.empty()) throw Error(ErrorCode::ConfigError, "corpus_path is required");
    if (methods.empty()) throw Error(ErrorCode::ConfigError, "no methods requested");
    if (k < 1) throw Error(ErrorCode::ConfigError, "k must be >= 1");
    if (threads < 1) throw Error(ErrorCode::ConfigError, "threads must be >= 1");
    try {
      fusion.validate();
      mlt.validate();
    } catch (const Error& e) {
      throw Error(ErrorCode::ConfigError, e.what());
    }
    if (std::find(methods.begin(), methods.end(), Method::Audio) != methods.end() && !distances_path)
      throw Error(ErrorCode::ConfigError, "'+audio' requires distances_path");
  }
};

/// Reads a JSON config. Relative paths are resolved against `base_dir`.
inline ExperimentConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {}) {
  static const std::set<std::string> known = {
      "corpus_path", "shs_path", "mxm_path", "duplicates_path", "codebook_path", "query_set",
      "methods",     "k",        "fusion",   "mlt",             "distances_path", "exclude_duplicates",
      "output_dir",  "threads"};
  if (!j.is_object()) throw Error(ErrorCode::ConfigError, "config must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw Error(ErrorCode::ConfigError, "unknown config key '" + key + "'");

  const auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return (path.is_absolute() || base_dir.empty() ? path : base_dir / path).string();
  };
  ExperimentConfig cfg;
  try {
    cfg.corpus_path = resolve(j.at("corpus_path").get<std::string>());
    const auto opt_path = [&](const char* key, std::optional<std::string>& dest) {
      if (j.contains(key) && !j[key].is_null()) dest = resolve(j[key].get<std::string>());
    };
    opt_path("shs_path", cfg.shs_path);
    opt_path("mxm_path", cfg.mxm_path);
    opt_path("duplicates_path", cfg.duplicates_path);
    opt_path("codebook_path", cfg.codebook_path);
    opt_path("distances_path", cfg.distances_path);
    if (j.contains("query_set")) {
      const auto& qs = j["query_set"];
      if (qs.is_string() && qs.get<std::string>() == "all-clique-members") {
        // default
      } else if (qs.is_object() && qs.contains("id_list")) {
        cfg.query_ids_path = resolve(qs["id_list"].get<std::string>());
      } else {
        throw Error(ErrorCode::ConfigError, "query_set must be \"all-clique-members\" or {\"id_list\": path}");
      }
    }
    if (j.contains("methods")) {
      cfg.methods.clear();
      for (const auto& m : j["methods"]) {
        const auto method = parse_method(m.get<std::string>());
        if (std::find(cfg.methods.begin(), cfg.methods.end(), method) == cfg.methods.end())
          cfg.methods.push_back(method);
      }
    }
    if (j.contains("k")) {
      if (!j["k"].is_number_integer() || j["k"].get<long long>() < 1)
        throw Error(ErrorCode::ConfigError, "k must be a positive integer");
      cfg.k = j["k"].get<std::size_t>();
    }
    if (j.contains("fusion")) {
      const auto& f = j["fusion"];
      cfg.fusion.relative_h = f.value("relative_h", cfg.fusion.relative_h);
      cfg.fusion.audio_h = f.value("audio_h", cfg.fusion.audio_h);
    }
    if (j.contains("mlt")) {
      const auto& m = j["mlt"];
      cfg.mlt.max_query_terms = m.value("max_query_terms", cfg.mlt.max_query_terms);
      cfg.mlt.min_term_freq = m.value("min_term_freq", cfg.mlt.min_term_freq);
    }
    cfg.exclude_duplicates = j.value("exclude_duplicates", false);
    if (j.contains("output_dir")) cfg.output_dir = resolve(j["output_dir"].get<std::string>());
    cfg.threads = j.value("threads", 1u);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j, std::filesystem::path(path).parent_path());
}

// ---------------------------------------------------------------------------

struct ExperimentData {
  TrackCollection tracks;
  CliqueMap cliques;
  std::vector<std::string> queries;
  std::optional<DistanceProvider> distances;
  std::vector<std::string> warnings;
};

/// Assembles the corpus: tracks, cliques (SHS file or clique_id fields),
/// MXM lyrics, duplicate flags, pre_title for tracks lacking one, and the
/// query set.
inline ExperimentData load_experiment_data(const ExperimentConfig& cfg) {
  ExperimentData data;
  data.tracks = load_tracks_jsonl(cfg.corpus_path);
  data.cliques = cfg.shs_path ? parse_shs_cliques(*cfg.shs_path, &data.warnings)
                              : cliques_from_tracks(data.tracks, &data.warnings);
  if (cfg.mxm_path) {
    std::size_t attached = 0;
    data.tracks = attach_lyrics(data.tracks, parse_mxm_bow(*cfg.mxm_path), &attached);
    if (attached == 0) data.warnings.push_back("no MXM lyrics matched a corpus track");
  }
  if (cfg.duplicates_path) {
    std::size_t unknown = 0;
    data.tracks = apply_duplicate_flags(data.tracks, load_id_list(*cfg.duplicates_path), &unknown);
    if (unknown > 0)
      data.warnings.push_back(std::to_string(unknown) + " duplicate ids are not in the corpus");
  }
  const Codebook codebook = cfg.codebook_path ? load_codebook(*cfg.codebook_path) : default_codebook();
  data.tracks = data.tracks.transformed([&](TrackDocument& d) {
    if (!d.pre_title) d.pre_title = preprocess_title(d.title, codebook);
  });

  if (cfg.query_ids_path) {
    for (const auto& id : load_id_list(*cfg.query_ids_path)) {
      if (!data.tracks.find(id)) throw Error(ErrorCode::UnknownQuery, "query " + id + " is not in the corpus");
      data.queries.push_back(id);
    }
  } else {
    for (const auto& doc : data.tracks)
      if (data.cliques.clique_of(doc.track_id)) data.queries.push_back(doc.track_id);
    std::sort(data.queries.begin(), data.queries.end());
  }
  if (data.queries.empty()) throw Error(ErrorCode::NoQueries, "query set is empty");

  const bool any_lyrics =
      std::any_of(data.tracks.begin(), data.tracks.end(), [](const TrackDocument& d) { return !d.lyrics.empty(); });
  for (auto m : cfg.methods)
    if (uses_lyrics(m) && !any_lyrics)
      throw Error(ErrorCode::ConfigError,
                  "method '" + std::string(method_key(m)) + "' needs lyrics but no track has any");
  if (cfg.distances_path) data.distances = load_distances_csv(*cfg.distances_path);
  return data;
}

namespace detail {

/// Runs `query_fn` for every query on up to `threads` workers; results are
/// stored by query position, so output is independent of the thread count.
template <class QueryFn>
RunResults run_queries(const std::vector<std::string>& queries, unsigned threads, QueryFn query_fn) {
  std::vector<ResultList> slots(queries.size());
  std::vector<std::exception_ptr> errors(queries.size());
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(queries.size())));
  const auto work = [&](unsigned w) {
    for (std::size_t i = w; i < queries.size(); i += workers) {
      try {
        slots[i] = query_fn(queries[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  RunResults out;
  for (std::size_t i = 0; i < queries.size(); ++i) out.emplace(queries[i], std::move(slots[i]));
  return out;
}

inline ResultList empty_result(const std::string& query, std::size_t k) {
  ResultList r;
  r.query_id = query;
  r.k_requested = k;
  return r;
}

}  // namespace detail

/// Result lists of every requested method (plus the ones they are built
/// from), keyed by method.
inline std::map<Method, RunResults> run_methods(const ExperimentData& data, const ExperimentConfig& cfg) {
  const auto wants = [&](Method m) { return std::find(cfg.methods.begin(), cfg.methods.end(), m) != cfg.methods.end(); };
  const bool need_audio = wants(Method::Audio);
  const bool need_title_lyrics = wants(Method::TitleLyrics) || need_audio;
  const bool need_pre_lyrics = wants(Method::PreTitleLyrics);
  const bool need_title = wants(Method::Title) || need_title_lyrics;
  const bool need_pre = wants(Method::PreTitle) || need_pre_lyrics;
  const bool need_lyrics = wants(Method::Lyrics) || need_title_lyrics || need_pre_lyrics;

  const auto k = cfg.k;
  const auto doc_of = [&](const std::string& id) -> const TrackDocument& { return *data.tracks.find(id); };
  std::map<Method, RunResults> runs;

  const auto title_run = [&](Field field) {
    const auto index = Index::build(data.tracks, field, cfg.threads);
    return detail::run_queries(data.queries, cfg.threads, [&](const std::string& q) {
      try {
        return title_query(index, doc_of(q), k, field == Field::PreTitle);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::EmptyQuery) throw;
        return detail::empty_result(q, k);
      }
    });
  };
  if (need_title) runs[Method::Title] = title_run(Field::Title);
  if (need_pre) runs[Method::PreTitle] = title_run(Field::PreTitle);
  if (need_lyrics) {
    const auto index = Index::build(data.tracks, Field::Lyrics, cfg.threads);
    runs[Method::Lyrics] = detail::run_queries(data.queries, cfg.threads, [&](const std::string& q) {
      try {
        return lyrics_query(index, doc_of(q), k, cfg.mlt);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoLyrics) throw;
        return detail::empty_result(q, k);
      }
    });
  }
  const auto fuse = [&](const RunResults& primary) {
    RunResults out;
    const auto& lyrics = runs.at(Method::Lyrics);
    for (const auto& [q, list] : primary)
      out.emplace(q, merge_promote(list, relative_filter(lyrics.at(q), cfg.fusion.relative_h)));
    return out;
  };
  if (need_title_lyrics) runs[Method::TitleLyrics] = fuse(runs.at(Method::Title));
  if (need_pre_lyrics) runs[Method::PreTitleLyrics] = fuse(runs.at(Method::PreTitle));
  if (need_audio) {
    RunResults out;
    for (const auto& [q, list] : runs.at(Method::TitleLyrics))
      out.emplace(q, audio_rerank(list, *data.distances, cfg.fusion.audio_h));
    runs[Method::Audio] = std::move(out);
  }
  return runs;
}

struct MethodOutcome {
  Method method;
  EvalReport report;
  std::optional<double> map_at_10;  // set when k > 10
};

inline std::string summary_markdown(const std::vector<MethodOutcome>& outcomes, std::size_t k) {
  const auto fixed3 = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return std::string(buf);
  };
  const bool with10 = k > 10;
  std::string md = "| method |";
  if (with10) md += " MAP@10 |";
  md += " MAP@" + std::to_string(k) + " | queries |\n|---|";
  if (with10) md += "---|";
  md += "---|---|\n";
  for (const auto& o : outcomes) {
    md += "| " + std::string(method_name(o.method)) + " |";
    if (with10) md += " " + fixed3(*o.map_at_10) + " |";
    md += " " + fixed3(o.report.map_at_k) + " | " + std::to_string(o.report.n_queries) + " |\n";
  }
  return md;
}

inline std::string summary_csv(const std::vector<MethodOutcome>& outcomes, std::size_t k) {
  const bool with10 = k > 10;
  std::string csv = "method,";
  if (with10) csv += "map_at_10,";
  csv += "map_at_" + std::to_string(k) + ",n_queries,excluded_duplicates\n";
  for (const auto& o : outcomes) {
    csv += std::string(method_name(o.method)) + ",";
    if (with10) csv += detail::format_double(*o.map_at_10) + ",";
    csv += detail::format_double(o.report.map_at_k) + "," + std::to_string(o.report.n_queries) + "," +
           (o.report.excluded_duplicates ? "true" : "false") + "\n";
  }
  return csv;
}

/// Scores the requested methods, in request order.
inline std::vector<MethodOutcome> evaluate_methods(const ExperimentData& data, const ExperimentConfig& cfg,
                                                   const std::map<Method, RunResults>& runs) {
  std::vector<MethodOutcome> outcomes;
  for (auto m : cfg.methods) {
    MethodOutcome o{m, evaluate_run(runs.at(m), data.cliques, data.tracks, cfg.k, cfg.exclude_duplicates), {}};
    if (cfg.k > 10)
      o.map_at_10 = evaluate_run(runs.at(m), data.cliques, data.tracks, 10, cfg.exclude_duplicates).map_at_k;
    outcomes.push_back(std::move(o));
  }
  return outcomes;
}

/// Full experiment. Writes into cfg.output_dir, per method: <name>.run,
/// <name>.json (EvalReport) and <name>.perquery.csv; plus summary.md and
/// summary.csv.
inline std::vector<MethodOutcome> run_experiment(const ExperimentConfig& cfg,
                                                 std::vector<std::string>* warnings = nullptr) {
  cfg.validate();
  auto data = load_experiment_data(cfg);
  if (warnings) warnings->insert(warnings->end(), data.warnings.begin(), data.warnings.end());
  const auto runs = run_methods(data, cfg);
  auto outcomes = evaluate_methods(data, cfg, runs);

  const std::filesystem::path dir(cfg.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
  const auto write_file = [](const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  };
  for (const auto& o : outcomes) {
    const std::string name(method_name(o.method));
    write_run(runs.at(o.method), name, (dir / (name + ".run")).string());
    write_file(dir / (name + ".json"), to_json(o.report).dump(2) + "\n");
    std::ostringstream per_query;
    write_per_query_csv(o.report, per_query);
    write_file(dir / (name + ".perquery.csv"), per_query.str());
  }
  write_file(dir / "summary.md", summary_markdown(outcomes, cfg.k));
  write_file(dir / "summary.csv", summary_csv(outcomes, cfg.k));
  return outcomes;
}

}  // namespace coverscale
