#include "glab/serialization.hpp"

#include "glab/errors.hpp"

namespace glab {

namespace {

nlohmann::json coordinate_words(const std::map<GroupElement, Word>& words) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [t, w] : words) out[t.to_string()] = w.str();
  return out;
}

const nlohmann::json& field(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string string_field(const nlohmann::json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_string()) throw InvalidInput(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

nlohmann::json to_json(const Rational& r) { return to_string(r); }

nlohmann::json to_json(const ClopenSet& s) { return s.to_strings(); }

nlohmann::json to_json(const ProductCylinder& p) { return coordinate_words(p.assignment()); }

nlohmann::json to_json(const SftArrow& g) {
  return {{"y", g.target().str()}, {"x", g.source().str()}, {"k", g.tail_bound()}};
}

nlohmann::json to_json(const PrefixBisection& sigma) { return {{"u", sigma.from().str()}, {"v", sigma.to().str()}}; }

nlohmann::json to_json(const UnitPoint& x) {
  return {{"coordinates", coordinate_words(x.coordinates())}, {"depth", x.depth()}, {"n", x.alphabet()}};
}

nlohmann::json to_json(const SupportedArrow& p) {
  nlohmann::json support = nlohmann::json::object();
  std::map<GroupElement, Word> units;
  for (const auto& [t, g] : p.entries()) {
    if (g.is_unit()) {
      units.emplace(t, g.source());
    } else {
      support[t.to_string()] = to_json(g);
    }
  }
  return {{"support", support},
          {"units", coordinate_words(units)},
          {"gamma", p.twist().to_string()},
          {"depth", p.depth()},
          {"n", p.alphabet()}};
}

nlohmann::json to_json(const BasisSet& s) {
  nlohmann::json constraints = nlohmann::json::object();
  for (const auto& [t, c] : s.constraints()) {
    if (const auto* sigma = std::get_if<PrefixBisection>(&c)) {
      constraints[t.to_string()] = to_json(*sigma);
    } else {
      constraints[t.to_string()] = {{"units", to_json(std::get<ClopenSet>(c))}};
    }
  }
  return {{"constraints", constraints}, {"gamma", s.twist().to_string()}, {"n", s.alphabet()}};
}

nlohmann::json to_json(const FiniteSubset& k) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& g : k) out.push_back(g.to_string());
  return out;
}

SftArrow sft_arrow_from_json(const nlohmann::json& j, unsigned alphabet) {
  SftArrow g(Word(string_field(j, "y"), alphabet), Word(string_field(j, "x"), alphabet));
  if (j.contains("k") && j.at("k") != g.tail_bound()) {
    throw InvalidInput("arrow tail bound " + j.at("k").dump() + " does not match its words");
  }
  return g;
}

PrefixBisection bisection_from_json(const nlohmann::json& j, unsigned alphabet) {
  return PrefixBisection(Word(string_field(j, "u"), alphabet), Word(string_field(j, "v"), alphabet));
}

SupportedArrow supported_arrow_from_json(const nlohmann::json& j, const GroupSpec& group) {
  const auto& n_field = field(j, "n");
  const auto& d_field = field(j, "depth");
  if (!n_field.is_number_unsigned() || !d_field.is_number_unsigned()) {
    throw InvalidInput("arrow n and depth must be unsigned integers");
  }
  const auto alphabet = n_field.get<unsigned>();
  const auto depth = d_field.get<std::size_t>();
  std::map<GroupElement, SftArrow> entries;
  if (j.contains("support")) {
    for (const auto& [key, value] : j.at("support").items()) {
      entries.emplace(GroupElement::parse(group, key), sft_arrow_from_json(value, alphabet));
    }
  }
  if (j.contains("units")) {
    for (const auto& [key, value] : j.at("units").items()) {
      if (!value.is_string()) throw InvalidInput("unit entries must be words");
      auto t = GroupElement::parse(group, key);
      if (entries.contains(t)) throw InvalidInput("coordinate " + key + " listed twice");
      entries.emplace(std::move(t), SftArrow::unit(Word(value.get<std::string>(), alphabet)));
    }
  }
  return SupportedArrow(alphabet, depth, GroupElement::parse(group, string_field(j, "gamma")), std::move(entries));
}

}  // namespace glab
