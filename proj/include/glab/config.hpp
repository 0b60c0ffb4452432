#pragma once

#include "glab/group_words.hpp"
#include "glab/rational.hpp"

#include <boost/property_tree/ptree.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace glab {

/// Experiment settings read from an INI file:
///
///   [run]     seed, out
///   [scale]   n, depth, window_radius, twist_radius
///   [group]   spec, test_set
///   [fibers]  family, count
///
/// Subcommand-specific keys live in their own sections and are read through get().
class ExperimentConfig {
 public:
  /// Throws InvalidInput on unreadable files, bad values, or bounds below 1.
  static ExperimentConfig load(const std::string& path);
  static ExperimentConfig from_string(const std::string& ini_text);

  unsigned alphabet = 2;
  std::size_t depth = 1;
  std::size_t window_radius = 1;
  std::size_t twist_radius = 1;
  GroupSpec group = GroupSpec::free(2);
  FiniteSubset test_set;
  std::string fiber_family = "random";
  std::size_t fiber_count = 100;
  std::uint64_t seed = 0;
  std::string out;

  bool has(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  std::size_t get_size(const std::string& key, std::size_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::optional<Rational> get_rational(const std::string& key) const;
  /// Comma-separated list of non-negative integers.
  std::vector<std::size_t> get_sizes(const std::string& key) const;

  const boost::property_tree::ptree& tree() const noexcept { return tree_; }

 private:
  void validate();
  boost::property_tree::ptree tree_;
};

}  // namespace glab
