#include "sns/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace sns {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_real(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

bool parse_integer(const std::string& s, std::int64_t& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool valid_key(const std::string& key) {
  if (key.empty() || key.front() == '.' || key.back() == '.') return false;
  for (char c : key) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-')) return false;
  }
  return key.find("..") == std::string::npos;
}

ConfigValue parse_value(const std::string& raw, int line) {
  if (raw.empty()) throw ParseError(line, "missing value");
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"') throw ParseError(line, "unterminated string");
    const std::string body = raw.substr(1, raw.size() - 2);
    if (body.find('"') != std::string::npos) throw ParseError(line, "stray quote in string");
    return body;
  }
  if (raw.front() == '[') {
    if (raw.back() != ']') throw ParseError(line, "unterminated list");
    std::vector<double> items;
    const std::string body = trim(raw.substr(1, raw.size() - 2));
    if (body.empty()) return items;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      double v = 0.0;
      if (!parse_real(trim(item), v)) throw ParseError(line, "list item '" + trim(item) + "' is not a number");
      items.push_back(v);
    }
    return items;
  }
  if (raw == "true") return true;
  if (raw == "false") return false;
  std::int64_t i = 0;
  if (parse_integer(raw, i)) return i;
  double d = 0.0;
  if (parse_real(raw, d)) return d;
  throw ParseError(line, "cannot parse value '" + raw + "'");
}

// Typed access that records violations instead of throwing, so every problem is reported.
class Reader {
 public:
  Reader(const std::map<std::string, ConfigEntry>& entries, std::vector<std::string>& violations)
      : entries_(entries), violations_(violations) {}

  const ConfigEntry* find(const std::string& key) {
    used_.insert(key);
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  void read(const std::string& key, double& out) {
    const auto* e = find(key);
    if (!e) return;
    if (auto* d = std::get_if<double>(&e->value)) out = *d;
    else if (auto* i = std::get_if<std::int64_t>(&e->value)) out = static_cast<double>(*i);
    else complain(key, *e, "a number");
  }
  void read(const std::string& key, int& out) {
    const auto* e = find(key);
    if (!e) return;
    auto* i = std::get_if<std::int64_t>(&e->value);
    if (i && *i >= INT32_MIN && *i <= INT32_MAX) out = static_cast<int>(*i);
    else complain(key, *e, "an integer");
  }
  void read(const std::string& key, std::uint64_t& out) {
    const auto* e = find(key);
    if (!e) return;
    auto* i = std::get_if<std::int64_t>(&e->value);
    if (i && *i >= 0) out = static_cast<std::uint64_t>(*i);
    else complain(key, *e, "a nonnegative integer");
  }
  void read(const std::string& key, bool& out) {
    const auto* e = find(key);
    if (!e) return;
    if (auto* b = std::get_if<bool>(&e->value)) out = *b;
    else complain(key, *e, "true or false");
  }
  void read(const std::string& key, std::string& out) {
    const auto* e = find(key);
    if (!e) return;
    if (auto* s = std::get_if<std::string>(&e->value)) out = *s;
    else complain(key, *e, "a quoted string");
  }
  /// Lists; a bare number is accepted as a one-element list.
  void read(const std::string& key, std::vector<double>& out) {
    const auto* e = find(key);
    if (!e) return;
    if (auto* v = std::get_if<std::vector<double>>(&e->value)) out = *v;
    else if (auto* d = std::get_if<double>(&e->value)) out = {*d};
    else if (auto* i = std::get_if<std::int64_t>(&e->value)) out = {static_cast<double>(*i)};
    else complain(key, *e, "a list of numbers");
  }

  void report_unknown() {
    for (const auto& [key, entry] : entries_) {
      if (!used_.count(key)) violations_.push_back("line " + std::to_string(entry.line) + ": unknown key '" + key + "'");
    }
  }

 private:
  void complain(const std::string& key, const ConfigEntry& e, const char* expected) {
    violations_.push_back("line " + std::to_string(e.line) + ": " + key + " must be " + expected);
  }

  const std::map<std::string, ConfigEntry>& entries_;
  std::vector<std::string>& violations_;
  std::set<std::string> used_;
};

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += "\n  - " + s;
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : ConfigError("invalid configuration:" + join(violations)), violations_(std::move(violations)) {}

std::map<std::string, ConfigEntry> parse_config_text(const std::string& text) {
  std::map<std::string, ConfigEntry> out;
  std::istringstream is(text);
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    // Strip a comment that starts outside a string.
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') in_string = !in_string;
      if (line[i] == '#' && !in_string) {
        line.resize(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(number, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (!valid_key(key)) throw ParseError(number, "invalid key '" + key + "'");
    if (out.count(key)) throw ParseError(number, "duplicate key '" + key + "'");
    out[key] = ConfigEntry{parse_value(trim(line.substr(eq + 1)), number), number};
  }
  return out;
}

ExperimentConfig parse_config(const std::string& text) {
  const auto entries = parse_config_text(text);
  std::vector<std::string> v;
  Reader r(entries, v);
  ExperimentConfig c;

  r.read("grid.n", c.grid_n);
  r.read("grid.length", c.grid_length);
  r.read("gamma", c.gamma);

  int channel_count = 0;
  r.read("noise.channels", channel_count);
  if (channel_count < 0) v.push_back("noise.channels must be nonnegative");
  for (int i = 0; i < channel_count; ++i) {
    const std::string p = "noise.channel." + std::to_string(i) + ".";
    ChannelSpec ch;
    std::string type = "gaussian";
    double amplitude = 1.0;
    double sigma = 1.0;
    if (!r.find(p + "lambda")) v.push_back(p + "lambda is required");
    r.read(p + "lambda", ch.lambda);
    r.read(p + "kernel", type);
    r.read(p + "amplitude", amplitude);
    r.read(p + "sigma", sigma);
    if (type == "gaussian") {
      if (sigma > 0.0) ch.kernel = KernelSpec::gaussian(amplitude, sigma);
      else v.push_back(p + "sigma must be positive");
    } else if (type == "zero") {
      ch.kernel = KernelSpec::zero();
    } else {
      v.push_back(p + "kernel must be \"gaussian\" or \"zero\", got \"" + type + "\"");
    }
    c.channels.push_back(ch);
  }

  r.read("time.horizon", c.horizon);
  r.read("time.steps", c.steps);
  r.read("picard.steps", c.picard_steps);
  r.read("picard.tol", c.picard_tol);
  r.read("picard.max_iter", c.picard_max_iter);
  r.read("search.t_probe_max", c.t_probe_max);
  r.read("search.levels", c.levels);
  r.read("search.refine", c.refine);
  r.read("monte_carlo.num_paths", c.num_paths);
  r.read("monte_carlo.base_seed", c.base_seed);
  r.read("monte_carlo.dump_paths", c.dump_paths);
  r.read("initial_data.field", c.initial_field);
  r.read("initial_data.amplitudes", c.amplitudes);
  r.read("initial_data.seed", c.initial_seed);
  r.read("initial_data.snapshot", c.snapshot_path);
  r.read("calibrate.t_ladder", c.t_ladder);
  r.read("calibrate.ensemble_size", c.ensemble_size);
  r.read("calibrate.steps", c.calibrate_steps);
  r.read("calibrate.file", c.calibration_file);
  r.read("simulate.time", c.simulate_time);
  r.read("output.dir", c.output_dir);
  r.read("verify.partition_tolerance", c.partition_tolerance);
  r.report_unknown();

  if (c.grid_n < 8 || c.grid_n % 2 != 0) v.push_back("grid.n must be even and >= 8");
  if (!(c.grid_length > 0.0)) v.push_back("grid.length must be positive");
  if (!(c.gamma > 0.0 && c.gamma < 1.0)) v.push_back("gamma must lie in (0, 1)");
  if (!(c.horizon > 0.0)) v.push_back("time.horizon must be positive");
  if (c.steps < 2) v.push_back("time.steps must be >= 2");
  if (c.picard_steps < 1) v.push_back("picard.steps must be >= 1");
  if (!(c.picard_tol > 0.0)) v.push_back("picard.tol must be positive");
  if (c.picard_max_iter < 1) v.push_back("picard.max_iter must be >= 1");
  if (!(c.t_probe_max > 0.0)) v.push_back("search.t_probe_max must be positive");
  if (c.t_probe_max > c.horizon) v.push_back("search.t_probe_max must not exceed time.horizon");
  if (c.levels < 1) v.push_back("search.levels must be >= 1");
  if (c.refine < 0) v.push_back("search.refine must be >= 0");
  if (c.num_paths < 1) v.push_back("monte_carlo.num_paths must be >= 1");
  static const std::set<std::string> fields{"taylor-green", "shear-wave", "random", "snapshot"};
  if (!fields.count(c.initial_field)) v.push_back("initial_data.field must be taylor-green, shear-wave, random or snapshot");
  if (c.initial_field == "snapshot" && c.snapshot_path.empty()) v.push_back("initial_data.snapshot is required for field = snapshot");
  if (c.amplitudes.empty()) v.push_back("initial_data.amplitudes must not be empty");
  for (double a : c.amplitudes) {
    if (!(a >= 0.0)) v.push_back("initial_data.amplitudes must be nonnegative");
  }
  if (c.t_ladder.empty()) v.push_back("calibrate.t_ladder must not be empty");
  for (double t : c.t_ladder) {
    if (!(t > 0.0)) v.push_back("calibrate.t_ladder entries must be positive");
  }
  if (c.ensemble_size < 1) v.push_back("calibrate.ensemble_size must be >= 1");
  if (c.calibrate_steps < 1) v.push_back("calibrate.steps must be >= 1");
  if (!(c.simulate_time > 0.0) || c.simulate_time > c.horizon) v.push_back("simulate.time must lie in (0, time.horizon]");

  // Admissibility of every channel, reported together with everything else.
  bool kernels_ok = true;
  for (const auto& ch : c.channels) kernels_ok = kernels_ok && static_cast<bool>(ch.kernel.symbol);
  if (kernels_ok) {
    for (auto& msg : noise_violations(c.channels)) v.push_back(std::move(msg));
  }
  if (!v.empty()) throw ValidationError(std::move(v));
  c.noise = validate_noise(c.channels);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string canonical_config(const ExperimentConfig& c) {
  std::ostringstream os;
  auto list = [](const std::vector<double>& xs) {
    std::string s = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + fmt(xs[i]);
    return s + "]";
  };
  os << "calibrate.ensemble_size = " << c.ensemble_size << "\n";
  os << "calibrate.steps = " << c.calibrate_steps << "\n";
  os << "calibrate.t_ladder = " << list(c.t_ladder) << "\n";
  os << "gamma = " << fmt(c.gamma) << "\n";
  os << "grid.length = " << fmt(c.grid_length) << "\n";
  os << "grid.n = " << c.grid_n << "\n";
  os << "initial_data.amplitudes = " << list(c.amplitudes) << "\n";
  os << "initial_data.field = \"" << c.initial_field << "\"\n";
  os << "initial_data.seed = " << c.initial_seed << "\n";
  os << "initial_data.snapshot = \"" << c.snapshot_path << "\"\n";
  os << "monte_carlo.base_seed = " << c.base_seed << "\n";
  os << "monte_carlo.num_paths = " << c.num_paths << "\n";
  os << "noise.channels = " << c.channels.size() << "\n";
  for (std::size_t i = 0; i < c.channels.size(); ++i) {
    const auto& ch = c.channels[i];
    const std::string p = "noise.channel." + std::to_string(i) + ".";
    os << p << "amplitude = " << fmt(ch.kernel.amplitude) << "\n";
    os << p << "kernel = \"" << ch.kernel.type << "\"\n";
    os << p << "lambda = " << fmt(ch.lambda) << "\n";
    os << p << "sigma = " << fmt(ch.kernel.sigma) << "\n";
  }
  os << "picard.max_iter = " << c.picard_max_iter << "\n";
  os << "picard.steps = " << c.picard_steps << "\n";
  os << "picard.tol = " << fmt(c.picard_tol) << "\n";
  os << "search.levels = " << c.levels << "\n";
  os << "search.refine = " << c.refine << "\n";
  os << "search.t_probe_max = " << fmt(c.t_probe_max) << "\n";
  os << "simulate.time = " << fmt(c.simulate_time) << "\n";
  os << "time.horizon = " << fmt(c.horizon) << "\n";
  os << "time.steps = " << c.steps << "\n";
  os << "verify.partition_tolerance = " << fmt(c.partition_tolerance) << "\n";
  return os.str();
}

std::string config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_config(cfg)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sns
