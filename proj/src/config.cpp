#include "hotcold/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace hotcold {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& knownKeys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"world",
       {"width_m", "height_m", "duration_s", "cycle_period_s", "robot_speed_kmh",
        "target_speed_kmh", "halt_distance_m", "halt_threshold_dbm", "seed", "robot_x", "robot_y",
        "robot_heading_deg", "mobility", "target_x", "target_y", "path", "obstacles"}},
      {"channel",
       {"tx_power_dbm", "tx_gain_dbi", "rx_gain_dbi", "frequency_hz", "path_loss_exponent",
        "shadowing_sigma_db", "rx_sensitivity_dbm"}},
      {"tracker", {"type"}},
      {"hotcold",
       {"sws", "rotation_angle_deg", "rotation_direction", "halt_threshold_dbm", "step_size_m"}},
      {"trilateration",
       {"k_observations", "min_spacing_m", "condition_threshold", "probe_turn_deg",
        "halt_threshold_dbm", "step_size_m"}},
      {"grid", {"sws_values", "sigma_values", "trackers", "runs_per_point", "master_seed", "workers"}},
      {"scenario", {"iterations", "sigma_db"}},
  };
  return keys;
}

std::string trimmed(std::string s) {
  boost::algorithm::trim(s);
  return s;
}

double toDouble(const std::string& key, const std::string& text) {
  const std::string s = trimmed(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value))
    throw ConfigError("config: '" + key + "' expects a number, got '" + text + "'");
  return value;
}

long long toInteger(const std::string& key, const std::string& text) {
  const std::string s = trimmed(text);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError("config: '" + key + "' expects an integer, got '" + text + "'");
  return value;
}

std::uint64_t toUnsigned(const std::string& key, const std::string& text) {
  const std::string s = trimmed(text);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError("config: '" + key + "' expects a non-negative integer, got '" + text + "'");
  return value;
}

std::vector<std::string> splitList(const std::string& text, const char* sep) {
  std::vector<std::string> parts;
  const std::string s = trimmed(text);
  if (s.empty()) return parts;
  boost::algorithm::split(parts, s, boost::algorithm::is_any_of(sep));
  for (auto& p : parts) p = trimmed(p);
  return parts;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  std::optional<std::string> raw(const std::string& key) const {
    if (auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'))) return *v;
    return std::nullopt;
  }

  void number(const std::string& key, double& out) const {
    if (auto v = raw(key)) out = toDouble(key, *v);
  }
  void integer(const std::string& key, int& out) const {
    if (auto v = raw(key)) out = static_cast<int>(toInteger(key, *v));
  }
  void seed(const std::string& key, std::uint64_t& out) const {
    if (auto v = raw(key)) out = toUnsigned(key, *v);
  }

 private:
  const pt::ptree& tree_;
};

void checkKeys(const pt::ptree& tree) {
  for (const auto& [name, child] : tree) {
    if (name == "version" && child.empty()) continue;
    const auto section = knownKeys().find(name);
    if (section == knownKeys().end())
      throw ConfigError("config: unknown section or key '" + name + "'");
    for (const auto& [key, value] : child) {
      if (!section->second.count(key))
        throw ConfigError("config: unknown key '" + name + "." + key + "'");
    }
  }
}

void applyOverride(pt::ptree& tree, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("config: override '" + assignment + "' is not key=value");
  const std::string key = trimmed(assignment.substr(0, eq));
  const std::string value = trimmed(assignment.substr(eq + 1));
  if (key != "version" && key.find('.') == std::string::npos)
    throw ConfigError("config: override key '" + key + "' must be section.key");
  tree.put(pt::ptree::path_type(key, '.'), value);
}

ExperimentConfig fromTree(const pt::ptree& tree) {
  checkKeys(tree);
  const Reader r(tree);
  ExperimentConfig cfg = defaultConfig();

  if (auto v = r.raw("version")) {
    cfg.version = static_cast<int>(toInteger("version", *v));
    if (cfg.version != kConfigVersion)
      throw ConfigError("config: unsupported version " + std::to_string(cfg.version));
  }

  WorldConfig& w = cfg.world;
  r.number("world.width_m", w.width_m);
  r.number("world.height_m", w.height_m);
  r.number("world.duration_s", w.duration_s);
  r.number("world.cycle_period_s", w.cycle_period_s);
  r.number("world.robot_speed_kmh", w.robot_speed_kmh);
  r.number("world.target_speed_kmh", w.target_speed_kmh);
  r.number("world.halt_distance_m", w.halt_distance_m);
  r.seed("world.seed", w.seed);

  double robot_x = w.width_m / 2.0, robot_y = w.height_m / 2.0, heading_deg = 0.0;
  r.number("world.robot_x", robot_x);
  r.number("world.robot_y", robot_y);
  r.number("world.robot_heading_deg", heading_deg);
  w.robot_start = Pose2d(robot_x, robot_y, deg2rad(heading_deg));

  std::optional<double> target_x, target_y;
  if (auto v = r.raw("world.target_x")) target_x = toDouble("world.target_x", *v);
  if (auto v = r.raw("world.target_y")) target_y = toDouble("world.target_y", *v);
  if (target_x.has_value() != target_y.has_value())
    throw ConfigError("config: world.target_x and world.target_y go together");

  const std::string mobility = trimmed(r.raw("world.mobility").value_or("random_waypoint"));
  if (mobility == "random_waypoint") {
    w.mobility = RandomWaypointMobility{};
    if (target_x) w.target_start = Vec2(*target_x, *target_y);
  } else if (mobility == "static") {
    w.mobility = StaticMobility{target_x ? Vec2(*target_x, *target_y)
                                         : Vec2(w.width_m / 2.0, w.height_m / 2.0)};
  } else if (mobility == "path") {
    FixedPathMobility path;
    const auto text = r.raw("world.path");
    if (!text) throw ConfigError("config: world.mobility = path requires world.path");
    for (const auto& item : splitList(*text, ";")) {
      const auto fields = splitList(item, ":");
      if (fields.size() != 3)
        throw ConfigError("config: world.path entries are time:x:y, got '" + item + "'");
      path.waypoints.push_back({toDouble("world.path", fields[0]),
                                Vec2(toDouble("world.path", fields[1]),
                                     toDouble("world.path", fields[2]))});
    }
    w.mobility = std::move(path);
  } else {
    throw ConfigError("config: unknown world.mobility '" + mobility + "'");
  }

  if (auto text = r.raw("world.obstacles")) {
    for (const auto& item : splitList(*text, ";")) {
      const auto f = splitList(item, ":");
      if (f.size() != 4)
        throw ConfigError("config: world.obstacles entries are x0:y0:x1:y1, got '" + item + "'");
      w.obstacles.push_back({Vec2(toDouble("world.obstacles", f[0]), toDouble("world.obstacles", f[1])),
                             Vec2(toDouble("world.obstacles", f[2]), toDouble("world.obstacles", f[3]))});
    }
  }

  ChannelParams& ch = w.channel;
  r.number("channel.tx_power_dbm", ch.tx_power_dbm);
  r.number("channel.tx_gain_dbi", ch.tx_gain_dbi);
  r.number("channel.rx_gain_dbi", ch.rx_gain_dbi);
  r.number("channel.frequency_hz", ch.frequency_hz);
  r.number("channel.path_loss_exponent", ch.path_loss_exponent);
  r.number("channel.shadowing_sigma_db", ch.shadowing_sigma_db);
  r.number("channel.rx_sensitivity_dbm", ch.rx_sensitivity_dbm);

  // Halt threshold and step size are shared by both trackers so that
  // comparisons stay like-for-like; they live on the world.
  std::optional<double> threshold;
  for (const char* key :
       {"world.halt_threshold_dbm", "hotcold.halt_threshold_dbm", "trilateration.halt_threshold_dbm"}) {
    if (auto v = r.raw(key)) {
      const double value = toDouble(key, *v);
      if (threshold && *threshold != value)
        throw ConfigError("config: conflicting halt thresholds across sections");
      threshold = value;
    }
  }
  w.halt_threshold_dbm = threshold;

  std::optional<double> step;
  for (const char* key : {"hotcold.step_size_m", "trilateration.step_size_m"}) {
    if (auto v = r.raw(key)) {
      const double value = toDouble(key, *v);
      if (step && *step != value) throw ConfigError("config: conflicting robot step sizes");
      step = value;
    }
  }
  if (step) w.robot_speed_kmh = *step / w.cycle_period_s * 3.6;

  HotColdConfig& hc = cfg.hotcold;
  r.integer("hotcold.sws", hc.sws);
  r.number("hotcold.rotation_angle_deg", hc.rotation_angle_deg);
  if (auto v = r.raw("hotcold.rotation_direction")) {
    const std::string dir = boost::algorithm::to_lower_copy(trimmed(*v));
    if (dir == "ccw") {
      hc.rotation_direction = RotationDirection::kCcw;
    } else if (dir == "cw") {
      hc.rotation_direction = RotationDirection::kCw;
    } else {
      throw ConfigError("config: hotcold.rotation_direction must be ccw or cw");
    }
  }

  TrilaterationConfig& tc = cfg.trilateration;
  r.integer("trilateration.k_observations", tc.k_observations);
  r.number("trilateration.min_spacing_m", tc.min_spacing_m);
  r.number("trilateration.condition_threshold", tc.condition_threshold);
  r.number("trilateration.probe_turn_deg", tc.probe_turn_deg);

  const std::string type = trimmed(r.raw("tracker.type").value_or("hotcold"));
  try {
    switch (parseTrackerKind(type)) {
      case TrackerKind::kHotCold:
        w.tracker = hc;
        break;
      case TrackerKind::kTrilateration:
        w.tracker = tc;
        break;
      case TrackerKind::kControl:
        w.tracker = StaticControl{};
        break;
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: tracker.type: ") + e.what());
  }

  ExperimentGrid& g = cfg.grid;
  if (auto v = r.raw("grid.sws_values")) {
    g.sws_values.clear();
    for (const auto& item : splitList(*v, ","))
      g.sws_values.push_back(static_cast<int>(toInteger("grid.sws_values", item)));
  }
  if (auto v = r.raw("grid.sigma_values")) {
    g.sigma_values.clear();
    for (const auto& item : splitList(*v, ",")) g.sigma_values.push_back(toDouble("grid.sigma_values", item));
  }
  if (auto v = r.raw("grid.trackers")) {
    g.trackers.clear();
    for (const auto& item : splitList(*v, ",")) {
      try {
        g.trackers.push_back(parseTrackerKind(item));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: grid.trackers: ") + e.what());
      }
    }
  }
  r.integer("grid.runs_per_point", g.runs_per_point);
  r.seed("grid.master_seed", g.master_seed);
  int workers = static_cast<int>(g.workers);
  r.integer("grid.workers", workers);
  if (workers < 0) throw ConfigError("config: grid.workers must be >= 0");
  g.workers = static_cast<unsigned>(workers);
  g.base = w;
  g.hotcold = hc;
  g.trilateration = tc;

  r.integer("scenario.iterations", cfg.scenario_iterations);
  r.number("scenario.sigma_db", cfg.scenario_sigma_db);

  try {
    w.validate();
    hc.validate();
    tc.validate();
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (cfg.scenario_iterations < 1) throw ConfigError("config: scenario.iterations must be >= 1");
  if (!(cfg.scenario_sigma_db >= 0.0)) throw ConfigError("config: scenario.sigma_db must be >= 0");
  return cfg;
}

}  // namespace

ExperimentConfig defaultConfig() {
  ExperimentConfig cfg;
  cfg.world.tracker = cfg.hotcold;
  cfg.grid.base = cfg.world;
  cfg.grid.hotcold = cfg.hotcold;
  cfg.grid.trilateration = cfg.trilateration;
  return cfg;
}

ExperimentConfig parseConfig(std::istream& in, const std::vector<std::string>& overrides) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (const auto& o : overrides) applyOverride(tree, o);
  return fromTree(tree);
}

ExperimentConfig loadConfig(const std::filesystem::path& path,
                            const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  return parseConfig(in, overrides);
}

ExperimentConfig configFromOverrides(const std::vector<std::string>& overrides) {
  pt::ptree tree;
  for (const auto& o : overrides) applyOverride(tree, o);
  return fromTree(tree);
}

std::string defaultConfigText() {
  return R"(# hotcold experiment configuration
version = 1

[world]
# simulation space, metres; the target stays inside, the robot may leave
width_m = 100
height_m = 100
duration_s = 1000
cycle_period_s = 0.5
robot_speed_kmh = 7.2
target_speed_kmh = 3.6
halt_distance_m = 3
# halt_threshold_dbm defaults to the noise-free RSSI at halt_distance_m
# halt_threshold_dbm = -51.41
seed = 1
robot_x = 50
robot_y = 50
robot_heading_deg = 0
# random_waypoint | static | path
mobility = random_waypoint
# target_x = 50
# target_y = 50
# path = 0:5:5;28:50:35            (time_s:x:y entries)
# obstacles = 10:10:12:20          (x0:y0:x1:y1 rectangles, ';' separated)

[channel]
tx_power_dbm = 0
tx_gain_dbi = 0
rx_gain_dbi = 2
frequency_hz = 2.4e9
path_loss_exponent = 2.8
shadowing_sigma_db = 0
rx_sensitivity_dbm = -94

[tracker]
# hotcold | trilateration | control
type = hotcold

[hotcold]
sws = 4
rotation_angle_deg = 137
rotation_direction = ccw

[trilateration]
k_observations = 3
min_spacing_m = 0.5
condition_threshold = 1e6
probe_turn_deg = 90

[grid]
sws_values = 3,4,5,6,7
sigma_values = 0,1,2,3,4,5,6
trackers = hotcold,trilateration,control
runs_per_point = 5
master_seed = 1
# 0 = one worker per hardware thread
workers = 0

[scenario]
iterations = 4
sigma_db = 2
)";
}

}  // namespace hotcold
