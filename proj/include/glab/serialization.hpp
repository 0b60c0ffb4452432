#pragma once

#include "glab/cantor_algebra.hpp"
#include "glab/group_words.hpp"
#include "glab/rational.hpp"
#include "glab/sft_groupoid.hpp"
#include "glab/twisted_groupoid.hpp"

#include <json.hpp>

// JSON forms of the domain types. Rationals are "p/q" strings, words are digit
// strings, group elements use their letter or integer spelling.

namespace glab {

nlohmann::json to_json(const Rational& r);
nlohmann::json to_json(const ClopenSet& s);
nlohmann::json to_json(const ProductCylinder& p);
/// {"y": ..., "x": ..., "k": ...}
nlohmann::json to_json(const SftArrow& g);
/// {"u": ..., "v": ...}
nlohmann::json to_json(const PrefixBisection& sigma);
nlohmann::json to_json(const UnitPoint& x);
/// {"support": {t: arrow}, "units": {t: word}, "gamma": ..., "depth": d, "n": n}
nlohmann::json to_json(const SupportedArrow& p);
nlohmann::json to_json(const BasisSet& s);
nlohmann::json to_json(const FiniteSubset& k);

SftArrow sft_arrow_from_json(const nlohmann::json& j, unsigned alphabet);
PrefixBisection bisection_from_json(const nlohmann::json& j, unsigned alphabet);
SupportedArrow supported_arrow_from_json(const nlohmann::json& j, const GroupSpec& group);

}  // namespace glab
