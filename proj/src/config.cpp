#include "relaybc/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace relaybc {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    return s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> items;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

double parse_double(const std::string& s, int line) {
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line) + ": not a number: " + s);
  }
  if (pos != s.size())
    throw ParseError("line " + std::to_string(line) +
                     ": trailing characters in number: " + s);
  return value;
}

long long parse_int(const std::string& s, int line) {
  std::size_t pos = 0;
  long long value = 0;
  try {
    value = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line) +
                     ": not an integer: " + s);
  }
  if (pos != s.size())
    throw ParseError("line " + std::to_string(line) +
                     ": trailing characters in integer: " + s);
  return value;
}

std::vector<double> parse_double_list(const std::string& s, int line) {
  std::vector<double> values;
  for (const auto& item : split_list(s)) values.push_back(parse_double(item, line));
  return values;
}

bool parse_bool(const std::string& s, int line) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ParseError("line " + std::to_string(line) + ": not a boolean: " + s);
}

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

void validate(const ExperimentConfig& config) {
  std::string problems;
  const auto add = [&](const std::string& p) {
    if (!problems.empty()) problems += "; ";
    problems += p;
  };
  if (config.realizations < 1) add("realizations must be >= 1");
  if (config.power_db.empty()) add("power_db sweep must be nonempty");
  if (config.t_values.empty()) add("t sweep must be nonempty");
  for (double t : config.t_values)
    if (!(t > 0.0 && t < 1.0)) add("t must lie in (0, 1)");
  if (config.variants.empty()) add("variant list must be nonempty");
  if (config.n_init.empty()) add("n_init list must be nonempty");
  for (int n : config.n_init)
    if (n < 1) add("n_init entries must be >= 1");
  if (config.parallel < 1) add("parallel must be >= 1");
  if (config.options.max_iter_hop < 1) add("max_iter must be >= 1");
  if (config.options.max_iter_power_control < 1)
    add("max_iter_power_control must be >= 1");
  if (!(config.options.tol > 0.0)) add("tol must be positive");
  if (!problems.empty()) throw ValidationError(problems);
  validate(config.system);
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig config;
  bool saw_system = false;

  std::stringstream stream(text);
  std::string raw;
  int line = 0;
  while (std::getline(stream, raw)) {
    ++line;
    const auto comment = raw.find('#');
    if (comment != std::string::npos) raw = raw.substr(0, comment);
    raw = trim(raw);
    if (raw.empty()) continue;

    const auto eq = raw.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(line) +
                       ": expected key = value");
    const std::string key = trim(raw.substr(0, eq));
    const std::string value = unquote(trim(raw.substr(eq + 1)));
    if (key.empty() || value.empty())
      throw ParseError("line " + std::to_string(line) +
                       ": empty key or value");

    if (key == "system") {
      config.system = parse_system_spec(value);
      saw_system = true;
    } else if (key == "power_db") {
      config.power_db = parse_double_list(value, line);
    } else if (key == "t") {
      config.t_values = parse_double_list(value, line);
    } else if (key == "realizations") {
      config.realizations = static_cast<int>(parse_int(value, line));
    } else if (key == "seed") {
      config.seed = static_cast<std::uint64_t>(parse_int(value, line));
    } else if (key == "variants") {
      config.variants.clear();
      for (const auto& item : split_list(value)) {
        const auto v = parse_variant(item);
        if (!v)
          throw ParseError("line " + std::to_string(line) +
                           ": unknown variant: " + item);
        config.variants.push_back(*v);
      }
    } else if (key == "n_init") {
      config.n_init.clear();
      for (const auto& item : split_list(value))
        config.n_init.push_back(static_cast<int>(parse_int(item, line)));
    } else if (key == "parallel") {
      config.parallel = static_cast<int>(parse_int(value, line));
    } else if (key == "out") {
      config.out_dir = value;
    } else if (key == "relay_offset_db") {
      config.relay_offset_db = parse_double(value, line);
    } else if (key == "max_iter") {
      config.options.max_iter_hop = static_cast<int>(parse_int(value, line));
    } else if (key == "max_iter_power_control") {
      config.options.max_iter_power_control =
          static_cast<int>(parse_int(value, line));
    } else if (key == "tol") {
      config.options.tol = parse_double(value, line);
    } else if (key == "traces") {
      config.write_traces = parse_bool(value, line);
    } else {
      throw ParseError("line " + std::to_string(line) +
                       ": unknown key: " + key);
    }
  }

  if (!saw_system) throw ValidationError("config is missing `system`");
  validate(config);
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config_text(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

}  // namespace relaybc
