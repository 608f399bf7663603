#ifndef HOTCOLD_CONFIG_HPP_
#define HOTCOLD_CONFIG_HPP_

#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hotcold/experiments.hpp"
#include "hotcold/simulation.hpp"

namespace hotcold {

constexpr int kConfigVersion = 1;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Everything a CLI invocation needs. `world.tracker` is the single-run
/// tracker; `grid.base` mirrors `world` and the tracker sections.
struct ExperimentConfig {
  int version = kConfigVersion;
  WorldConfig world;
  HotColdConfig hotcold;
  TrilaterationConfig trilateration;
  ExperimentGrid grid;
  int scenario_iterations = 4;
  double scenario_sigma_db = kScenarioDefaultSigmaDb;
};

/// Defaults: the reference simulation settings with Hot-Cold (SWS 4, 137 deg).
ExperimentConfig defaultConfig();

/// Parses an INI-style document (sections of `key = value`). Overrides are
/// `section.key=value` strings applied on top of the document. Unknown
/// sections or keys and malformed values raise ConfigError.
ExperimentConfig parseConfig(std::istream& in, const std::vector<std::string>& overrides = {});
ExperimentConfig loadConfig(const std::filesystem::path& path,
                            const std::vector<std::string>& overrides = {});

/// Applies overrides to the defaults without a file.
ExperimentConfig configFromOverrides(const std::vector<std::string>& overrides);

/// Fully commented config file listing every key with its default.
std::string defaultConfigText();

}  // namespace hotcold

#endif  // HOTCOLD_CONFIG_HPP_
