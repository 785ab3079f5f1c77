// gw_toy_corpus: writes one of the synthetic corpora as game lines.

#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gw/core/error.hpp"
#include "gw/data/records.hpp"
#include "gw/toy/toy_world.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Synthetic game corpora with known answer rules."};
  std::string kind = "self-play";
  std::string out;
  std::size_t n = 200;
  std::uint64_t seed = 0;
  app.add_option("--kind", kind, "oracle, guesser or self-play")
      ->capture_default_str()
      ->check(CLI::IsMember({"oracle", "guesser", "self-play"}));
  app.add_option("--n", n, "Number of games")->capture_default_str();
  app.add_option("--seed", seed, "Generator seed")->capture_default_str();
  app.add_option("--out", out, "Output file")->required();
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << nlohmann::json{{"error", "usage"}, {"message", e.what()}}.dump() << std::endl;
    return 2;
  }
  try {
    const auto games = kind == "oracle"    ? gw::toy::oracle_corpus(n, seed)
                       : kind == "guesser" ? gw::toy::guesser_corpus(n, seed)
                                           : gw::toy::self_play_corpus(n, seed);
    gw::data::save_games(games, out);
    std::cout << nlohmann::json{{"kind", kind}, {"games", games.size()}, {"path", out}}.dump() << "\n";
  } catch (const gw::Error& e) {
    std::cerr << nlohmann::json{{"error", e.kind()}, {"message", e.what()}}.dump() << std::endl;
    return 1;
  }
  return 0;
}
