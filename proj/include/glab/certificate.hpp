#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace glab {

inline constexpr std::string_view kToolVersion = "0.3.0";

enum class Verdict { Pass, Fail, Vacuous };

std::string to_string(Verdict v);
/// Throws InvalidInput on anything but "pass", "fail", "vacuous".
Verdict parse_verdict(std::string_view text);

/// Machine-readable verdict emitted by every auditor.
///
/// Serialized as one JSON object: the fixed fields below plus every key of
/// `details` merged at top level. Keys are sorted, there is no timestamp, and all
/// exact values are "p/q" strings, so equal inputs give byte-identical output.
struct Certificate {
  std::string property;
  nlohmann::json parameters = nlohmann::json::object();
  Verdict verdict = Verdict::Pass;
  nlohmann::json witnesses = nlohmann::json::object();
  nlohmann::json details = nlohmann::json::object();
  std::optional<std::uint64_t> seed;

  nlohmann::json to_json() const;
  /// Throws InvalidInput when a required field is missing or mistyped.
  static Certificate from_json(const nlohmann::json& j);
};

}  // namespace glab
