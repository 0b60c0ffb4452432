#include "glab/certificate.hpp"

#include "glab/errors.hpp"

namespace glab {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Vacuous:
      return "vacuous";
  }
  return "fail";
}

Verdict parse_verdict(std::string_view text) {
  if (text == "pass") return Verdict::Pass;
  if (text == "fail") return Verdict::Fail;
  if (text == "vacuous") return Verdict::Vacuous;
  throw InvalidInput("unknown verdict '" + std::string(text) + "'");
}

namespace {
constexpr const char* kFixed[] = {"property", "parameters", "verdict", "witnesses", "tool_version", "seed"};

bool is_fixed(const std::string& key) {
  for (const char* k : kFixed) {
    if (key == k) return true;
  }
  return false;
}
}  // namespace

nlohmann::json Certificate::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (auto it = details.begin(); it != details.end(); ++it) {
    if (!is_fixed(it.key())) j[it.key()] = it.value();
  }
  j["property"] = property;
  j["parameters"] = parameters;
  j["verdict"] = to_string(verdict);
  j["witnesses"] = witnesses;
  j["tool_version"] = std::string(kToolVersion);
  j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
  return j;
}

Certificate Certificate::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidInput("certificate must be a JSON object");
  auto require = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) throw InvalidInput(std::string("certificate lacks field '") + key + "'");
    return j.at(key);
  };
  Certificate c;
  const auto& property = require("property");
  const auto& verdict = require("verdict");
  if (!property.is_string() || !verdict.is_string()) throw InvalidInput("certificate property/verdict must be strings");
  c.property = property.get<std::string>();
  c.verdict = parse_verdict(verdict.get<std::string>());
  c.parameters = require("parameters");
  if (j.contains("witnesses")) c.witnesses = j.at("witnesses");
  if (j.contains("seed") && !j.at("seed").is_null()) {
    if (!j.at("seed").is_number_unsigned()) throw InvalidInput("certificate seed must be an unsigned integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!is_fixed(it.key())) c.details[it.key()] = it.value();
  }
  return c;
}

}  // namespace glab
