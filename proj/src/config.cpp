#include "betax/config.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "betax/io.hpp"

namespace betax::config {

namespace {

std::string join_i64(const std::vector<std::int64_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

std::string join_f64(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += io::format_double(v[i]);
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::int64_t parse_i64(const std::string& s, const std::string& key) {
  try {
    std::size_t pos = 0;
    const std::int64_t v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer for '" + key + "': " + s);
  }
}

double parse_f64(const std::string& s, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for '" + key + "': " + s);
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  static const char* kSubcommands[] = {"verify-sum", "simulate-ppp",
                                       "eigen-scaling", "bounds-check"};
  if (std::find(std::begin(kSubcommands), std::end(kSubcommands), subcommand) ==
      std::end(kSubcommands))
    throw std::invalid_argument("config: unknown subcommand '" + subcommand + "'");
  regime.validate();
  if (n_ladder.empty())
    throw std::invalid_argument("config: n_ladder must be nonempty");
  for (std::size_t i = 0; i < n_ladder.size(); ++i) {
    if (n_ladder[i] < 16)
      throw std::invalid_argument("config: every n must be >= 16");
    if (i > 0 && n_ladder[i] <= n_ladder[i - 1])
      throw std::invalid_argument("config: n_ladder must be strictly increasing");
  }
  if (replicas < 1) throw std::invalid_argument("config: replicas must be >= 1");
  if (x_grid.empty()) throw std::invalid_argument("config: x_grid must be nonempty");
  for (std::size_t i = 1; i < x_grid.size(); ++i)
    if (x_grid[i] <= x_grid[i - 1])
      throw std::invalid_argument("config: x_grid must be strictly increasing");
  if (bin_edges.size() < 2)
    throw std::invalid_argument("config: bins need at least two edges");
  for (std::size_t i = 1; i < bin_edges.size(); ++i)
    if (bin_edges[i] <= bin_edges[i - 1])
      throw std::invalid_argument("config: bin edges must be strictly increasing");
  if (bin_edges.front() < window_min)
    throw std::invalid_argument("config: bins must lie inside the window");
  if (format != "csv" && format != "json")
    throw std::invalid_argument("config: format must be csv or json");
  if (threads < 0) throw std::invalid_argument("config: threads must be >= 0");
  if (samples < 1) throw std::invalid_argument("config: samples must be >= 1");
}

std::string ExperimentConfig::to_kv_text() const {
  // experiment-defining keys only; out/threads are execution environment
  // and must not leak into artifacts, which are byte-identical across runs
  std::ostringstream out;
  out << "subcommand = " << subcommand << '\n';
  out << "regime = " << scaling::regime_name(regime.regime) << '\n';
  out << "n = " << regime.n << '\n';
  out << "beta_exponent = " << io::format_double(regime.beta_exponent) << '\n';
  out << "loglog_exponent = " << io::format_double(regime.loglog_exponent) << '\n';
  out << "gamma = " << io::format_double(regime.gamma) << '\n';
  out << "n_ladder = " << join_i64(n_ladder) << '\n';
  out << "replicas = " << replicas << '\n';
  out << "seed = " << master_seed << '\n';
  out << "x_grid = " << join_f64(x_grid) << '\n';
  out << "bins = " << join_f64(bin_edges) << '\n';
  out << "window_min = " << io::format_double(window_min) << '\n';
  out << "format = " << format << '\n';
  out << "samples = " << samples << '\n';
  return out.str();
}

ExperimentConfig ExperimentConfig::from_kv_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key = value, got: " + line);
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key == "subcommand") {
      cfg.subcommand = value;
    } else if (key == "regime") {
      cfg.regime.regime = scaling::regime_from_name(value);
    } else if (key == "n") {
      cfg.regime.n = parse_i64(value, key);
    } else if (key == "beta_exponent") {
      cfg.regime.beta_exponent = parse_f64(value, key);
    } else if (key == "loglog_exponent") {
      cfg.regime.loglog_exponent = parse_f64(value, key);
    } else if (key == "gamma") {
      cfg.regime.gamma = parse_f64(value, key);
    } else if (key == "n_ladder") {
      cfg.n_ladder.clear();
      for (const auto& part : split(value, ','))
        cfg.n_ladder.push_back(parse_i64(trim(part), key));
    } else if (key == "replicas") {
      cfg.replicas = parse_i64(value, key);
    } else if (key == "seed") {
      cfg.master_seed = static_cast<std::uint64_t>(parse_i64(value, key));
    } else if (key == "x_grid") {
      cfg.x_grid.clear();
      for (const auto& part : split(value, ','))
        cfg.x_grid.push_back(parse_f64(trim(part), key));
    } else if (key == "bins") {
      cfg.bin_edges.clear();
      for (const auto& part : split(value, ','))
        cfg.bin_edges.push_back(parse_f64(trim(part), key));
    } else if (key == "window_min") {
      cfg.window_min = parse_f64(value, key);
    } else if (key == "out") {
      cfg.out_dir = value;
    } else if (key == "format") {
      cfg.format = value;
    } else if (key == "threads") {
      cfg.threads = static_cast<int>(parse_i64(value, key));
    } else if (key == "samples") {
      cfg.samples = parse_i64(value, key);
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  return cfg;
}

}  // namespace betax::config
