#include "rovctl/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "rovctl/errors.hpp"
#include "rovctl/report.hpp"

namespace rovctl {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(const std::string& key, std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw ConfigError(key, "expected a real number, got '" + std::string(text) + "'");
  return v;
}

std::uint64_t parse_uint(const std::string& key, std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw ConfigError(key, "expected a non-negative integer, got '" + std::string(text) + "'");
  return v;
}

int parse_int(const std::string& key, std::string_view text) {
  text = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw ConfigError(key, "expected an integer, got '" + std::string(text) + "'");
  return v;
}

bool parse_bool(const std::string& key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "on" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "off" || text == "no" || text == "0") return false;
  throw ConfigError(key, "expected true or false, got '" + std::string(text) + "'");
}

std::vector<double> parse_list(const std::string& key, std::string_view text, std::size_t n) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = text.find(',', pos);
    out.push_back(parse_real(key, text.substr(pos, comma == std::string_view::npos
                                                       ? std::string_view::npos
                                                       : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (out.size() != n)
    throw ConfigError(key, "expected " + std::to_string(n) + " comma-separated values, got " +
                               std::to_string(out.size()));
  return out;
}

template <class E>
E parse_enum(const std::string& key, std::string_view text,
             std::initializer_list<std::pair<std::string_view, E>> names) {
  text = trim(text);
  std::string allowed;
  for (const auto& [name, value] : names) {
    if (name == text) return value;
    allowed += allowed.empty() ? std::string(name) : "|" + std::string(name);
  }
  throw ConfigError(key, "expected one of " + allowed + ", got '" + std::string(text) + "'");
}

template <class E>
std::string enum_name(E value, std::initializer_list<std::pair<std::string_view, E>> names) {
  for (const auto& [name, v] : names)
    if (v == value) return std::string(name);
  return "?";
}

const std::initializer_list<std::pair<std::string_view, Scenario>> kScenarios{
    {"sim1", Scenario::sim1}, {"sim2", Scenario::sim2}, {"sim3", Scenario::sim3},
    {"custom", Scenario::custom}};
const std::initializer_list<std::pair<std::string_view, TrajectoryKind>> kTrajectories{
    {"harmonic", TrajectoryKind::harmonic}, {"constant", TrajectoryKind::constant}};
const std::initializer_list<std::pair<std::string_view, GainForm>> kGainForms{
    {"as_printed", GainForm::as_printed}, {"normalized", GainForm::inertia_normalized}};
const std::initializer_list<std::pair<std::string_view, ControlHold>> kHolds{
    {"stage", ControlHold::stage}, {"zoh", ControlHold::zoh}};
const std::initializer_list<std::pair<std::string_view, Axis>> kAxes{{"z", kHeave},
                                                                     {"yaw", kYaw}};
const std::initializer_list<std::pair<std::string_view, UncertaintyMode>> kUncertainty{
    {"fixed", UncertaintyMode::fixed}, {"random", UncertaintyMode::random}};
const std::initializer_list<std::pair<std::string_view, DisturbanceKind>> kDisturbances{
    {"none", DisturbanceKind::none},
    {"constant", DisturbanceKind::constant},
    {"sinusoid", DisturbanceKind::sinusoid},
    {"filtered_noise", DisturbanceKind::filtered_noise}};

std::string join(std::initializer_list<double> values) {
  std::string out;
  for (double v : values) out += (out.empty() ? "" : ",") + format_double(v);
  return out;
}

std::string join4(const Vec4& v) { return join({v[0], v[1], v[2], v[3]}); }

Vec4 to_vec4(const std::vector<double>& v) { return {v[0], v[1], v[2], v[3]}; }

struct KeyHandler {
  std::function<void(SimConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const SimConfig&)> get;
};

using Schema = std::vector<std::pair<std::string, KeyHandler>>;

#define ROV_REAL(KEY, FIELD)                                                                   \
  {KEY,                                                                                        \
   {[](SimConfig& c, const std::string& k, const std::string& v) { c.FIELD = parse_real(k, v); }, \
    [](const SimConfig& c) { return format_double(c.FIELD); }}}

#define ROV_VEC4(KEY, FIELD)                                                           \
  {KEY,                                                                                \
   {[](SimConfig& c, const std::string& k, const std::string& v) {                     \
      c.FIELD = to_vec4(parse_list(k, v, 4));                                          \
    },                                                                                 \
    [](const SimConfig& c) { return join4(c.FIELD); }}}

#define ROV_ENUM(KEY, FIELD, TABLE)                                                                \
  {KEY,                                                                                            \
   {[](SimConfig& c, const std::string& k, const std::string& v) { c.FIELD = parse_enum(k, v, TABLE); }, \
    [](const SimConfig& c) { return enum_name(c.FIELD, TABLE); }}}

#define ROV_SEED(KEY, FIELD)                                                                    \
  {KEY,                                                                                         \
   {[](SimConfig& c, const std::string& k, const std::string& v) { c.FIELD = parse_uint(k, v); }, \
    [](const SimConfig& c) { return std::to_string(c.FIELD); }}}

#define ROV_BOOL(KEY, FIELD)                                                                    \
  {KEY,                                                                                         \
   {[](SimConfig& c, const std::string& k, const std::string& v) { c.FIELD = parse_bool(k, v); }, \
    [](const SimConfig& c) { return std::string(c.FIELD ? "true" : "false"); }}}

#define ROV_INT(KEY, FIELD)                                                                    \
  {KEY,                                                                                        \
   {[](SimConfig& c, const std::string& k, const std::string& v) { c.FIELD = parse_int(k, v); }, \
    [](const SimConfig& c) { return std::to_string(c.FIELD); }}}

const Schema& schema() {
  static const Schema s{
      ROV_ENUM("scenario", scenario, kScenarios),
      ROV_REAL("dt", dt),
      ROV_REAL("duration", duration),
      ROV_SEED("seed", seed),
      ROV_ENUM("trajectory.kind", trajectory.kind, kTrajectories),
      ROV_REAL("trajectory.amplitude", trajectory.amplitude),
      ROV_REAL("trajectory.omega", trajectory.omega),
      ROV_REAL("control.lambda", lambda),
      ROV_REAL("control.kappa", kappa),
      ROV_ENUM("control.gain_form", gain_form, kGainForms),
      ROV_ENUM("control.hold", hold, kHolds),
      ROV_ENUM("control.dof", dof, kAxes),
      ROV_REAL("plant.mass", plant.mass_rb),
      ROV_REAL("plant.inertia_z", plant.inertia_z),
      ROV_VEC4("plant.cm", plant.cm),
      ROV_VEC4("plant.cd", plant.cd),
      ROV_REAL("plant.rho", plant.rho),
      ROV_REAL("plant.volume", plant.volume),
      ROV_ENUM("uncertainty.mode", uncertainty.mode, kUncertainty),
      ROV_REAL("uncertainty.mass", uncertainty.mass),
      ROV_REAL("uncertainty.damping", uncertainty.damping),
      ROV_REAL("uncertainty.bound", uncertainty.bound),
      ROV_REAL("uncertainty.limit", uncertainty.limit),
      {"initial_error",
       {[](SimConfig& c, const std::string& k, const std::string& v) {
          const auto l = parse_list(k, v, 2);
          c.initial_error = {l[0], l[1]};
        },
        [](const SimConfig& c) { return join({c.initial_error[0], c.initial_error[1]}); }}},
      ROV_BOOL("ann.enabled", ann_enabled),
      ROV_INT("ann.hidden", ann.hidden_dim),
      ROV_REAL("ann.learning_rate", ann.learning_rate),
      ROV_REAL("ann.start_time", ann.start_time),
      ROV_REAL("ann.init_scale", ann.init_scale),
      ROV_SEED("ann.seed", ann.seed),
      ROV_BOOL("ann.bias", ann.use_bias),
      {"ann.input_scale",
       {[](SimConfig& c, const std::string& k, const std::string& v) {
          const auto l = parse_list(k, v, 3);
          c.input_scale = {l[0], l[1], l[2]};
        },
        [](const SimConfig& c) {
          return join({c.input_scale[0], c.input_scale[1], c.input_scale[2]});
        }}},
      ROV_INT("ann.snapshot_every", snapshot_every),
      ROV_ENUM("disturbance.kind", disturbance.kind, kDisturbances),
      ROV_VEC4("disturbance.amplitude", disturbance.amplitude),
      ROV_REAL("disturbance.frequency", disturbance.frequency),
      ROV_REAL("disturbance.corner_freq", disturbance.corner_freq),
      ROV_SEED("disturbance.seed", disturbance.seed),
      ROV_ENUM("noise.kind", noise.kind, kDisturbances),
      ROV_VEC4("noise.amplitude", noise.amplitude),
      ROV_REAL("noise.frequency", noise.frequency),
      ROV_REAL("noise.corner_freq", noise.corner_freq),
      ROV_SEED("noise.seed", noise.seed),
      ROV_REAL("metrics.tail_window", tail_window),
  };
  return s;
}

#undef ROV_REAL
#undef ROV_VEC4
#undef ROV_ENUM
#undef ROV_SEED
#undef ROV_BOOL
#undef ROV_INT

const KeyHandler& handler(const std::string& key) {
  const Schema& s = schema();
  const auto it = std::find_if(s.begin(), s.end(), [&](const auto& e) { return e.first == key; });
  if (it == s.end()) throw ConfigError(key, "unknown configuration key");
  return it->second;
}

// splitmix64 finalizer; decorrelates component streams drawn from one master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct Entry {
  std::string key;
  std::string value;
};

std::vector<Entry> parse_entries(std::string_view text) {
  std::vector<Entry> out;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("", "line " + std::to_string(line_no) + ": expected 'key = value'");
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    handler(key);  // rejects unknown keys
    if (!seen.insert(key).second)
      throw ConfigError(key, "duplicate key on line " + std::to_string(line_no));
    out.push_back({std::move(key), std::move(value)});
  }
  return out;
}

}  // namespace

std::pair<std::string, std::string> parse_assignment(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos)
    throw ConfigError(std::string(trim(text)), "override must have the form KEY=VALUE");
  return {std::string(trim(text.substr(0, eq))), std::string(trim(text.substr(eq + 1)))};
}

SimConfig resolve_config(std::string_view text, const ConfigOverrides& overrides) {
  const std::vector<Entry> entries = parse_entries(text);
  for (const auto& [key, value] : overrides.set) handler(key);

  Scenario scenario = Scenario::custom;
  for (const Entry& e : entries)
    if (e.key == "scenario") scenario = parse_enum(e.key, e.value, kScenarios);
  for (const auto& [key, value] : overrides.set)
    if (key == "scenario") scenario = parse_enum(key, value, kScenarios);

  SimConfig cfg = scenario_preset(scenario);
  std::set<std::string> explicit_keys;
  for (const Entry& e : entries) {
    handler(e.key).set(cfg, e.key, e.value);
    explicit_keys.insert(e.key);
  }
  for (const auto& [key, value] : overrides.set) {
    handler(key).set(cfg, key, value);
    explicit_keys.insert(key);
  }
  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.no_ann) cfg.ann_enabled = false;

  if (!explicit_keys.contains("ann.seed")) cfg.ann.seed = derive_seed(cfg.seed, 0);
  if (!explicit_keys.contains("disturbance.seed")) cfg.disturbance.seed = derive_seed(cfg.seed, 1);
  if (!explicit_keys.contains("noise.seed")) cfg.noise.seed = derive_seed(cfg.seed, 2);

  try {
    cfg.validate();
  } catch (const InvalidParameter& e) {
    const std::string msg = e.what();
    std::string key;
    for (const auto& [k, h] : schema())
      if (msg.rfind(k + " ", 0) == 0 && k.size() > key.size()) key = k;
    if (key.empty()) throw ConfigError("", msg);
    throw ConfigError(key, msg.substr(key.size() + 1));
  }
  return cfg;
}

SimConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return resolve_config(text.str(), overrides);
}

std::string dump_config(const SimConfig& cfg) {
  std::string out;
  for (const auto& [key, h] : schema()) out += key + " = " + h.get(cfg) + "\n";
  return out;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [key, h] : schema()) k.push_back(key);
    return k;
  }();
  return keys;
}

}  // namespace rovctl
