// Loads the sample corpus, looks up covers of one track by title and by
// lyrics, fuses the two lists and scores every method against the cliques.
//
//   quickstart [path/to/config.json]

#include <cstdio>
#include <string>

#include "coverscale/coverscale.hpp"

namespace cs = coverscale;

static void print(const char* label, const cs::ResultList& r, const cs::TrackCollection& tracks) {
  std::printf("%s\n", label);
  for (const auto& h : r.hits)
    std::printf("  %2zu  %-8s %-42s %.4f\n", h.rank, h.track_id.c_str(), tracks.find(h.track_id)->title.c_str(),
                h.score);
}

int main(int argc, char** argv) {
  const std::string config_path = argc > 1 ? argv[1] : COVERSCALE_SAMPLE_CONFIG;
  try {
    const auto cfg = cs::load_config(config_path);
    const auto data = cs::load_experiment_data(cfg);
    for (const auto& w : data.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());

    const auto title_index = cs::Index::build(data.tracks, cs::Field::Title);
    const auto lyrics_index = cs::Index::build(data.tracks, cs::Field::Lyrics);
    const auto& query = *data.tracks.find("TRSMP08");
    std::printf("query: %s \"%s\"\n\n", query.track_id.c_str(), query.title.c_str());

    const auto by_title = cs::title_query(title_index, query, 5, false);
    const auto by_lyrics = cs::lyrics_query(lyrics_index, query, 5);
    print("title", by_title, data.tracks);
    print("lyrics", by_lyrics, data.tracks);
    print("title+lyrics", cs::merge_promote(by_title, cs::relative_filter(by_lyrics, cfg.fusion.relative_h)),
          data.tracks);

    const auto outcomes = cs::evaluate_methods(data, cfg, cs::run_methods(data, cfg));
    std::printf("\n%s", cs::summary_markdown(outcomes, cfg.k).c_str());
  } catch (const cs::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
