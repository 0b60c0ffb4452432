#include "glab/config.hpp"

#include "glab/errors.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>

#include <sstream>

namespace glab {

namespace {

std::size_t parse_size(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(text, &used);
    if (used != text.size() || v < 0) throw InvalidInput("");
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw InvalidInput("config key '" + key + "' must be a non-negative integer, got '" + text + "'");
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  ExperimentConfig c;
  try {
    boost::property_tree::ini_parser::read_ini(path, c.tree_);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw InvalidInput("cannot read config: " + std::string(e.what()));
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::from_string(const std::string& ini_text) {
  ExperimentConfig c;
  std::istringstream in(ini_text);
  try {
    boost::property_tree::ini_parser::read_ini(in, c.tree_);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw InvalidInput("cannot parse config: " + std::string(e.what()));
  }
  c.validate();
  return c;
}

bool ExperimentConfig::has(const std::string& key) const { return tree_.get_optional<std::string>(key).has_value(); }

std::string ExperimentConfig::get(const std::string& key, const std::string& fallback) const {
  auto v = tree_.get_optional<std::string>(key);
  return v ? boost::algorithm::trim_copy(*v) : fallback;
}

std::size_t ExperimentConfig::get_size(const std::string& key, std::size_t fallback) const {
  return has(key) ? parse_size(key, get(key, "")) : fallback;
}

bool ExperimentConfig::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  auto v = boost::algorithm::to_lower_copy(get(key, ""));
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InvalidInput("config key '" + key + "' must be a boolean");
}

std::optional<Rational> ExperimentConfig::get_rational(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return parse_rational(get(key, ""));
}

std::vector<std::size_t> ExperimentConfig::get_sizes(const std::string& key) const {
  std::vector<std::size_t> out;
  if (!has(key)) return out;
  std::vector<std::string> parts;
  const auto text = get(key, "");
  boost::algorithm::split(parts, text, boost::algorithm::is_any_of(","));
  for (auto& p : parts) {
    boost::algorithm::trim(p);
    if (!p.empty()) out.push_back(parse_size(key, p));
  }
  return out;
}

void ExperimentConfig::validate() {
  const auto n = get_size("scale.n", 2);
  if (n < 2 || n > 10) throw InvalidInput("scale.n must lie in 2..10, got " + std::to_string(n));
  alphabet = static_cast<unsigned>(n);
  depth = get_size("scale.depth", 1);
  window_radius = get_size("scale.window_radius", 1);
  twist_radius = get_size("scale.twist_radius", 1);
  if (depth < 1 || window_radius < 1 || twist_radius < 1) {
    throw InvalidInput("scale bounds (depth, window_radius, twist_radius) must be >= 1");
  }
  group = GroupSpec::parse(get("group.spec", "free2"));
  test_set = has("group.test_set") ? FiniteSubset::parse(group, get("group.test_set", ""))
                                   : symmetric_generators(group);
  if (test_set.empty()) throw InvalidInput("group.test_set is empty");
  fiber_family = get("fibers.family", "random");
  fiber_count = get_size("fibers.count", 100);
  if (has("run.seed")) {
    try {
      std::size_t used = 0;
      const auto text = get("run.seed", "");
      seed = std::stoull(text, &used);
      if (used != text.size() || text.starts_with('-')) throw InvalidInput("");
    } catch (const std::exception&) {
      throw InvalidInput("run.seed must be an unsigned 64-bit integer");
    }
  }
  out = get("run.out", "");
}

}  // namespace glab
