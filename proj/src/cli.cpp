#include "glab/cli.hpp"

#include "glab/af_audit.hpp"
#include "glab/errors.hpp"
#include "glab/invariant_measure.hpp"
#include "glab/random.hpp"
#include "glab/serialization.hpp"
#include "glab/twisted_groupoid.hpp"

#include <CLI11.hpp>
#include <boost/algorithm/string.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

namespace glab::cli {

namespace {

using Runner = std::function<Certificate(const ExperimentConfig&)>;

std::vector<std::string> split_list(const std::string& text, const char* separators = ",") {
  std::vector<std::string> parts;
  if (boost::algorithm::trim_copy(text).empty()) return parts;
  boost::algorithm::split(parts, text, boost::algorithm::is_any_of(separators));
  for (auto& p : parts) boost::algorithm::trim(p);
  return parts;
}

nlohmann::json values_json(const MeasureVector& v) {
  nlohmann::json out = nlohmann::json::object();
  for (std::size_t i = 0; i < v.values.size(); ++i) {
    std::string name;
    for (const auto& w : v.layout.cell(i)) name += (name.empty() ? "" : "|") + w.str();
    out[name] = to_json(v.values[i]);
  }
  return out;
}

nlohmann::json solve_json(const SolveResult& r) {
  nlohmann::json j = {{"result", to_string(r.kind)}};
  if (r.kind == SolveResult::Kind::Infeasible) {
    nlohmann::json m = nlohmann::json::array();
    for (const auto& x : r.multipliers) m.push_back(to_json(x));
    j["multipliers"] = m;
    return j;
  }
  j["values"] = values_json(r.solution);
  j["dimension"] = r.dimension;
  if (r.kind == SolveResult::Kind::Space) {
    nlohmann::json reps = nlohmann::json::array();
    for (const auto& rep : r.representatives) reps.push_back(values_json(rep));
    j["representatives"] = reps;
  }
  return j;
}

ClopenSet parse_clopen(const std::string& text, unsigned n) {
  if (text == "*") return ClopenSet::full(n);
  return ClopenSet::parse(n, split_list(text));
}

/// "e:01, a:1" -> {e -> 01, a -> 1}; "*" or "" is the whole space.
ProductCylinder parse_product(const std::string& text, unsigned n, const GroupSpec& group) {
  std::map<GroupElement, Word> assignment;
  if (text != "*") {
    for (const auto& item : split_list(text)) {
      auto colon = item.find(':');
      if (colon == std::string::npos) throw InvalidInput("product cell '" + item + "' needs the form t:word");
      auto t = GroupElement::parse(group, boost::algorithm::trim_copy(item.substr(0, colon)));
      if (!assignment.emplace(t, Word(boost::algorithm::trim_copy(item.substr(colon + 1)), n)).second) {
        throw InvalidInput("coordinate listed twice in '" + text + "'");
      }
    }
  }
  return ProductCylinder(n, std::move(assignment));
}

Word random_word(SplitMix64& rng, unsigned n, std::size_t length) {
  std::string digits;
  for (std::size_t i = 0; i < length; ++i) digits.push_back(static_cast<char>('0' + rng.below(n)));
  return Word(digits, n);
}

UnitPoint random_point(SplitMix64& rng, const ExperimentConfig& c, const std::vector<GroupElement>& window) {
  std::map<GroupElement, Word> coords;
  for (const auto& t : window) coords.emplace(t, random_word(rng, c.alphabet, c.depth));
  return UnitPoint(c.alphabet, c.depth, std::move(coords));
}

Truncation truncation(const ExperimentConfig& c) {
  Truncation t;
  t.alphabet = c.alphabet;
  t.depth = c.depth;
  t.group = c.group;
  t.twist_radius = c.twist_radius;
  t.window_cap_radius = c.get_size("audit.window_cap", 3);
  return t;
}

nlohmann::json scale_json(const ExperimentConfig& c) {
  return {{"n", c.alphabet},
          {"depth", c.depth},
          {"window_radius", c.window_radius},
          {"twist_radius", c.twist_radius},
          {"group", c.group.to_string()}};
}

// ------------------------------------------------------------ subcommands

Certificate measure_solve(const ExperimentConfig& c) {
  ConstraintSystem system = full_bisection_system(c.alphabet, c.depth, c.get_bool("measure.symmetry_reduced", true));
  if (c.has("measure.constraints")) {
    system = ConstraintSystem{MeasureLayout::plain(c.alphabet, c.depth), {}, {}};
    for (const auto& item : split_list(c.get("measure.constraints", ""), ";")) {
      auto arrow = item.find('>');
      if (arrow == std::string::npos) throw InvalidInput("constraint '" + item + "' needs the form A>B");
      auto lhs = boost::algorithm::trim_copy(item.substr(0, arrow));
      auto rhs = boost::algorithm::trim_copy(item.substr(arrow + 1));
      system.add(parse_clopen(lhs, c.alphabet), parse_clopen(rhs, c.alphabet), item);
    }
  }
  SolveResult r = unique_measure_solve(system);
  const bool uniform = r.kind == SolveResult::Kind::Unique &&
                       r.solution.values == MeasureVector::product(system.layout).values;
  Certificate cert;
  cert.property = "unique_invariant_measure";
  cert.parameters = {{"n", c.alphabet}, {"depth", c.depth}, {"constraints", system.equalities.size()}};
  cert.verdict = uniform ? Verdict::Pass : Verdict::Fail;
  cert.details = solve_json(r);
  cert.details["equals_uniform"] = uniform;
  if (r.kind == SolveResult::Kind::Infeasible) cert.witnesses = {{"multipliers", cert.details["multipliers"]}};
  return cert;
}

Certificate twisted_measure_solve(const ExperimentConfig& c) {
  const auto window_size = c.get_size("twisted.window_size", 2);
  TwistedSolve s = twisted_unique_measure_solve(c.alphabet, c.depth, window_size, c.twist_radius, c.group);
  Certificate cert;
  cert.property = "twisted_unique_invariant_measure";
  nlohmann::json window = nlohmann::json::array();
  for (const auto& t : s.result.solution.layout.window) window.push_back(t.to_string());
  cert.parameters = scale_json(c);
  cert.parameters["window_size"] = window_size;
  cert.verdict = s.equals_product ? Verdict::Pass : Verdict::Fail;
  cert.details = solve_json(s.result);
  cert.details["constraints"] = s.constraints;
  cert.details["window"] = window;
  cert.details["equals_product_measure"] = s.equals_product;
  return cert;
}

Certificate invariance_check(const ExperimentConfig& c) {
  InvarianceScale scale;
  scale.alphabet = c.alphabet;
  scale.depth = c.depth;
  scale.group = c.group;
  scale.window_radius = c.window_radius;
  scale.twist_radius = c.twist_radius;
  scale.max_constraints = c.get_size("invariance.max_constraints", 1);
  scale.symmetry_reduced = c.get_bool("invariance.symmetry_reduced", true);
  return measure_invariance_check(scale).to_certificate();
}

FolnerResult folner_from(const ExperimentConfig& c, const std::string& section, const GroupSpec& group,
                         const FiniteSubset& test_set) {
  const auto family = c.get(section + ".family", group.is_free() ? "exhaustive" : "intervals");
  if (family == "exhaustive") {
    return folner_audit(group, test_set,
                        exhaustive_family(ball(group, c.get_size(section + ".radius", 2)),
                                          c.get_size(section + ".max_size", 6)));
  }
  if (family == "intervals") {
    if (group.is_free()) throw InvalidInput("interval families need the integers");
    return folner_audit(group, test_set, interval_family(c.get_size(section + ".max_length", 100)));
  }
  if (family == "explicit") {
    std::vector<FiniteSubset> members;
    for (const auto& s : split_list(c.get(section + ".sets", ""), ";")) members.push_back(FiniteSubset::parse(group, s));
    return folner_audit(group, test_set, explicit_family(std::move(members)));
  }
  throw InvalidInput("unknown family '" + family + "'");
}

Certificate folner(const ExperimentConfig& c) {
  FolnerResult r = folner_from(c, "folner", c.group, c.test_set);
  Certificate cert;
  cert.property = "folner_deficiency";
  cert.parameters = {{"group", c.group.to_string()},
                     {"test_set", to_json(c.test_set)},
                     {"family", c.get("folner.family", c.group.is_free() ? "exhaustive" : "intervals")}};
  const auto floor = c.get_rational("folner.expect_at_least");
  if (!r.min_deficiency) {
    cert.verdict = Verdict::Vacuous;
  } else {
    cert.verdict = floor && *r.min_deficiency < *floor ? Verdict::Fail : Verdict::Pass;
  }
  cert.witnesses = {{"minimizer", to_json(r.witness)}};
  cert.details = {{"family_size", r.family_size},
                  {"min_deficiency", r.min_deficiency ? to_json(*r.min_deficiency) : nlohmann::json(nullptr)},
                  {"expected_at_least", floor ? to_json(*floor) : nlohmann::json(nullptr)},
                  {"nonamenable_builtin", c.group.is_nonamenable()}};
  return cert;
}

Certificate af(const ExperimentConfig& c) {
  AfAuditInput input;
  input.scale = truncation(c);
  input.window_radius = c.window_radius;
  input.test_set = TestSet{c.test_set};
  input.delta = c.get_rational("audit.delta");
  if (!input.delta && c.get("audit.delta_from", "") == "folner") {
    const auto free2 = GroupSpec::free(2);
    input.delta = folner_from(c, "audit_folner", free2, symmetric_generators(free2)).min_deficiency;
  }

  FiberFamily family;
  const auto& kind = c.fiber_family;
  if (kind == "random") {
    family = random_mixture_family(input.scale, c.window_radius, c.fiber_count, c.seed);
  } else if (kind == "ek_product") {
    std::vector<GroupElement> coords;
    for (const auto& s : split_list(c.get("fibers.coordinates", "e"))) coords.push_back(GroupElement::parse(c.group, s));
    SplitMix64 rng(c.seed);
    const auto window = ball(c.group, c.window_radius).elements();
    std::vector<UnitPoint> bases;
    for (std::size_t i = 0; i < c.fiber_count; ++i) bases.push_back(random_point(rng, c, window));
    family = ek_product_family(std::move(bases), c.get_size("fibers.k", 2), std::move(coords));
  } else if (kind == "shift_orbit") {
    if (c.group.is_free()) throw InvalidInput("shift_orbit fibers need the integers");
    auto lengths = c.get_sizes("fibers.lengths");
    if (lengths.empty()) {
      for (std::size_t m = c.get_size("fibers.min_length", 2); m <= c.get_size("fibers.max_length", 50); ++m) {
        lengths.push_back(m);
      }
    }
    family = shift_orbit_family(c.alphabet, c.depth, std::move(lengths));
  } else if (kind == "empty") {
    family = [](const FiberVisitor&) {};
  } else {
    throw InvalidInput("unknown fiber family '" + kind + "'");
  }
  Certificate cert = af_audit(input, family).to_certificate(input);
  cert.parameters["family"] = kind;
  return cert;
}

Certificate pi_obstruct(const ExperimentConfig& c) {
  const auto measure = c.get("pi.measure", "plain");
  if (measure == "odometer") {
    QuotientChain chain = chain_from_config(c);
    Certificate cert;
    cert.property = "not_purely_infinite";
    cert.parameters = {{"measure", "odometer uniform"}, {"levels", chain.length()}};
    nlohmann::json levels = nlohmann::json::array();
    bool all = true;
    for (std::size_t i = 1; i <= chain.length(); ++i) {
      Obstruction o = odometer_pi_obstruction(chain, i);
      all = all && o.obstructed;
      levels.push_back(o.certificate.to_json());
    }
    cert.verdict = all ? Verdict::Pass : Verdict::Vacuous;
    cert.details = {{"levels", levels}};
    return cert;
  }
  if (measure == "plain") {
    ClopenSet u = parse_clopen(c.get("pi.U", "*"), c.alphabet);
    ClopenSet v = parse_clopen(c.get("pi.V", "0"), c.alphabet);
    const std::size_t depth = std::max({c.depth, u.max_length(), v.max_length(), std::size_t{1}});
    SolveResult r = unique_measure_solve(full_bisection_system(c.alphabet, depth));
    if (r.kind != SolveResult::Kind::Unique) throw InvalidInput("no unique invariant measure at this depth");
    return pi_obstruction(r.solution, u, v).certificate;
  }
  if (measure == "product") {
    ProductCylinder u = parse_product(c.get("pi.U", "*"), c.alphabet, c.group);
    ProductCylinder v = parse_product(c.get("pi.V", "e:0"), c.alphabet, c.group);
    std::set<GroupElement> coords;
    std::size_t depth = 1;
    for (const auto* p : {&u, &v}) {
      for (const auto& [t, w] : p->assignment()) {
        coords.insert(t);
        depth = std::max(depth, w.size());
      }
    }
    if (coords.empty()) coords.insert(GroupElement::identity(c.group));
    MeasureLayout layout{c.alphabet, depth, std::vector<GroupElement>(coords.begin(), coords.end())};
    return pi_obstruction(MeasureVector::product(layout), u, v).certificate;
  }
  throw InvalidInput("pi.measure must be plain, product, or odometer");
}

bool agrees_on(const UnitPoint& outer, const UnitPoint& inner) {
  for (const auto& [t, w] : inner.coordinates()) {
    const Word* v = outer.at(t);
    if (v == nullptr || *v != w) return false;
  }
  return true;
}

Certificate witness_minimal(const ExperimentConfig& c) {
  const auto count = c.get_size("witness.count", 100);
  const auto window = ball(c.group, c.window_radius).elements();
  const auto twists = ball(c.group, c.twist_radius).elements();
  SplitMix64 rng(c.seed);
  nlohmann::json failures = nlohmann::json::array();
  nlohmann::json sample;
  for (std::size_t i = 0; i < count; ++i) {
    UnitPoint x = random_point(rng, c, window);
    std::map<GroupElement, Word> goal;
    for (const auto& t : window) {
      if (rng.coin()) goal.emplace(t, random_word(rng, c.alphabet, 1 + rng.below(c.depth)));
    }
    ProductCylinder target(c.alphabet, goal);
    const GroupElement& gamma = twists[rng.below(twists.size())];
    SupportedArrow p = minimality_witness(x, target, gamma);
    const bool ok = p.twist() == gamma && agrees_on(source(p), x) && range(p).in(target);
    if (i == 0) sample = {{"x", to_json(x)}, {"target", to_json(target)}, {"witness", to_json(p)}};
    if (!ok) failures.push_back({{"instance", i}, {"x", to_json(x)}, {"target", to_json(target)}, {"witness", to_json(p)}});
  }
  Certificate cert;
  cert.property = "minimality_witness";
  cert.parameters = scale_json(c);
  cert.parameters["count"] = count;
  cert.verdict = count == 0 ? Verdict::Vacuous : failures.empty() ? Verdict::Pass : Verdict::Fail;
  cert.witnesses = {{"failures", failures}};
  cert.details = {{"instances", count}, {"failure_count", failures.size()}, {"sample", sample}};
  return cert;
}

Certificate witness_effective(const ExperimentConfig& c) {
  const auto count = c.get_size("witness.count", 100);
  // Smallest m with n^m >= 3: room for an alternative besides the current entry and s(p)(t0).
  const std::size_t spare = c.alphabet >= 3 ? 1 : 2;
  if (c.depth < spare) throw InvalidInput("depth too small for an alternative entry");
  const auto window = ball(c.group, c.window_radius).elements();
  std::vector<GroupElement> twists;
  for (const auto& g : ball(c.group, std::min(c.twist_radius, c.window_radius))) {
    if (!g.is_identity()) twists.push_back(g);
  }
  SplitMix64 rng(c.seed);
  nlohmann::json failures = nlohmann::json::array();
  nlohmann::json sample;
  for (std::size_t i = 0; i < count; ++i) {
    const GroupElement& gamma = twists[rng.below(twists.size())];
    std::map<GroupElement, BasisConstraint> constraints;
    std::map<GroupElement, SftArrow> entries;
    for (const auto& t : window) {
      const auto roll = rng.below(3);
      const Word tail_free = random_word(rng, c.alphabet, c.depth);
      if (roll == 1 && c.depth > spare) {
        const std::size_t len = 1 + rng.below(c.depth - spare);
        Word u = random_word(rng, c.alphabet, len);
        Word v = random_word(rng, c.alphabet, len);
        constraints.emplace(t, PrefixBisection(u, v));
        Word tail = tail_free.drop(len);
        entries.emplace(t, SftArrow(v + tail, u + tail));
      } else if (roll == 2) {
        Word prefix = random_word(rng, c.alphabet, rng.below(c.depth - spare + 1));
        constraints.emplace(t, ClopenSet::cylinder(prefix));
        entries.emplace(t, SftArrow::unit(prefix + tail_free.drop(prefix.size())));
      } else {
        entries.emplace(t, SftArrow::unit(tail_free));
      }
    }
    BasisSet neighborhood(c.alphabet, constraints, gamma);
    SupportedArrow p(c.alphabet, c.depth, gamma, entries);
    nlohmann::json record = {{"instance", i}, {"p", to_json(p)}, {"neighborhood", to_json(neighborhood)}};
    try {
      SupportedArrow q = effectiveness_witness(p, neighborhood);
      std::size_t changed = 0;
      for (const auto& [t, g] : q.entries()) changed += (p.at(t) == nullptr || !(*p.at(t) == g)) ? 1 : 0;
      const bool ok = neighborhood.contains(q) && !is_isotropic(q) && changed == 1 && q.window() == p.window();
      record["witness"] = to_json(q);
      if (i == 0) sample = record;
      if (!ok) failures.push_back(record);
    } catch (const DepthInsufficient& e) {
      record["error"] = e.what();
      failures.push_back(record);
    }
  }
  Certificate cert;
  cert.property = "effectiveness_witness";
  cert.parameters = scale_json(c);
  cert.parameters["count"] = count;
  cert.verdict = count == 0 ? Verdict::Vacuous : failures.empty() ? Verdict::Pass : Verdict::Fail;
  cert.witnesses = {{"failures", failures}};
  cert.details = {{"instances", count}, {"failure_count", failures.size()}, {"sample", sample}};
  return cert;
}

Certificate diagonal(const ExperimentConfig& c) {
  const auto t = GroupElement::parse(c.group, c.get("diagonal.t", "e"));
  const auto t_prime = GroupElement::parse(c.group, c.get("diagonal.t_prime", c.group.is_free() ? "a" : "1"));
  const auto max_depth = c.get_size("diagonal.max_depth", c.depth);
  nlohmann::json values = nlohmann::json::object();
  nlohmann::json violations = nlohmann::json::array();
  for (std::size_t d = 1; d <= max_depth; ++d) {
    Rational m = diagonal_measure(t, t_prime, d, c.alphabet);
    values[std::to_string(d)] = to_json(m);
    if (m != inverse_power(c.alphabet, d)) violations.push_back({{"depth", d}, {"value", to_json(m)}});
  }

  // Constant points are isotropic for every twist; a one-coordinate perturbation is not.
  const auto window = ball(c.group, c.window_radius);
  nlohmann::json isotropy = nlohmann::json::array();
  for (const auto& gamma : ball(c.group, c.twist_radius)) {
    UnitPoint bar = UnitPoint::constant(window, Word::zeros(c.depth, c.alphabet));
    SupportedArrow p = SupportedArrow::units_with_twist(bar, gamma);
    nlohmann::json entry = {{"gamma", gamma.to_string()}, {"constant_isotropic", is_isotropic(p)}};
    if (!is_isotropic(p)) violations.push_back({{"gamma", gamma.to_string()}, {"reason", "constant point not isotropic"}});
    if (!gamma.is_identity() && c.alphabet * c.depth >= 2) {
      SupportedArrow q = effectiveness_witness(p, BasisSet(c.alphabet, {}, gamma));
      entry["perturbed_isotropic"] = is_isotropic(q);
      if (is_isotropic(q)) violations.push_back({{"gamma", gamma.to_string()}, {"reason", "perturbation kept isotropy"}});
    }
    isotropy.push_back(entry);
  }

  Certificate cert;
  cert.property = "essentially_principal";
  cert.parameters = scale_json(c);
  cert.parameters["t"] = t.to_string();
  cert.parameters["t_prime"] = t_prime.to_string();
  cert.parameters["max_depth"] = max_depth;
  cert.verdict = violations.empty() ? Verdict::Pass : Verdict::Fail;
  cert.witnesses = {{"violations", violations}};
  cert.details = {{"diagonal_measure", values}, {"isotropy", isotropy}};
  return cert;
}

Certificate odometer_check(const ExperimentConfig& c) {
  QuotientChain chain = chain_from_config(c);
  nlohmann::json levels = nlohmann::json::array();
  nlohmann::json violations = nlohmann::json::array();
  std::size_t previous_index = 0;
  for (std::size_t i = 1; i <= chain.length(); ++i) {
    const auto& lv = chain.level(i);
    nlohmann::json entry = {{"level", i}, {"index", lv.degree}};
    bool stabilizers = true;
    for (std::uint32_t p = 0; p < lv.degree; ++p) {
      StabilizerDescriptor d = stabilizer_level(chain, point_from_level(chain, i, p), i);
      if (p == 0) entry["stabilizer"] = d.description;
      stabilizers = stabilizers && d.equals_kernel();
    }
    entry["stabilizer_equals_kernel"] = stabilizers;
    if (!stabilizers) violations.push_back({{"level", i}, {"reason", "stabilizer differs from kernel"}});

    const auto index = intersection_index(chain, i);
    entry["intersection_index"] = index;
    if (index != lv.degree || index <= previous_index) {
      violations.push_back({{"level", i}, {"reason", "intersection index"}, {"value", index}});
    }
    previous_index = index;

    auto tables = translation_tables(chain, i);
    const std::string corrupt = c.get("chain.corrupt", "");
    if (!corrupt.empty()) {
      auto parts = c.get_sizes("chain.corrupt");
      if (parts.size() != 4) throw InvalidInput("chain.corrupt needs level,generator,point,value");
      if (parts[0] == i) tables.at(parts[1]).at(parts[2]) = static_cast<std::uint32_t>(parts[3]);
    }
    Certificate u = uniform_invariance_check(tables, lv.degree, std::to_string(i));
    entry["uniform_invariance"] = to_string(u.verdict);
    if (u.verdict != Verdict::Pass) violations.push_back({{"level", i}, {"uniform_invariance", u.witnesses["violations"]}});

    entry["pi_obstruction"] = odometer_pi_obstruction(chain, i).obstructed;
    levels.push_back(entry);
  }
  Certificate cert;
  cert.property = "odometer_chain";
  cert.parameters = {{"group", chain.group().to_string()}, {"levels", chain.length()}};
  cert.verdict = violations.empty() ? Verdict::Pass : Verdict::Fail;
  cert.witnesses = {{"violations", violations}};
  cert.details = {{"level_reports", levels}};
  return cert;
}

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> table = {
      {"measure-solve", measure_solve},     {"twisted-measure-solve", twisted_measure_solve},
      {"invariance-check", invariance_check}, {"folner-audit", folner},
      {"af-audit", af},                     {"pi-obstruct", pi_obstruct},
      {"witness-minimal", witness_minimal}, {"witness-effective", witness_effective},
      {"diagonal", diagonal},               {"odometer-check", odometer_check},
  };
  return table;
}

std::string one_line(const nlohmann::json& j, std::size_t limit = 240) {
  std::string s = j.dump();
  if (s.size() > limit) s = s.substr(0, limit) + "...";
  return s;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, runner] : runners()) out.push_back(name);
    return out;
  }();
  return names;
}

int exit_code(Verdict v) { return v == Verdict::Fail ? 1 : 0; }

Certificate run_subcommand(const std::string& name, const ExperimentConfig& config) {
  auto it = runners().find(name);
  if (it == runners().end()) throw InvalidInput("unknown subcommand '" + name + "'");
  Certificate c = it->second(config);
  c.seed = config.seed;
  return c;
}

QuotientChain chain_from_config(const ExperimentConfig& c) {
  const auto group = GroupSpec::parse(c.get("chain.group", c.group.to_string()));
  ChainLimits limits{c.get_size("chain.max_order", 120), c.get_size("chain.max_levels", 5)};
  if (!group.is_free()) {
    auto moduli = c.get_sizes("chain.moduli");
    if (moduli.empty()) moduli = {2, 4, 8, 16};
    std::vector<LevelSpec> specs;
    for (auto m : moduli) {
      if (m < 1) throw InvalidInput("modulus must be >= 1");
      Permutation shift(m);
      for (std::size_t i = 0; i < m; ++i) shift[i] = static_cast<std::uint32_t>((i + 1) % m);
      specs.push_back({LevelSpec::Mode::Cosets, {shift}});
    }
    return build_chain(group, specs, limits);
  }
  if (c.get("chain.builtin", "") == "symmetric") return free_symmetric_chain(c.get_size("chain.levels", 2));
  const auto count = c.get_size("chain.levels", 0);
  if (count == 0) throw InvalidInput("chain.levels must be >= 1");
  std::vector<LevelSpec> specs;
  for (std::size_t i = 1; i <= count; ++i) {
    const std::string prefix = "chain.level" + std::to_string(i) + "_";
    LevelSpec spec;
    const auto mode = c.get(prefix + "mode", "cosets");
    if (mode == "regular") {
      spec.mode = LevelSpec::Mode::Regular;
    } else if (mode != "cosets") {
      throw InvalidInput("unknown level mode '" + mode + "'");
    }
    for (int g = 0; g < group.rank(); ++g) {
      const std::string key = prefix + std::string(1, static_cast<char>('a' + g));
      if (!c.has(key)) throw InvalidInput("missing " + key);
      const auto text = c.get(key, "");
      spec.images.push_back(text.find('(') != std::string::npos ? parse_cycles(text, c.get_size(prefix + "degree", 0))
                                                                : parse_permutation(text));
    }
    specs.push_back(std::move(spec));
  }
  return build_chain(group, specs, limits);
}

std::string report(const Certificate& c) {
  std::ostringstream out;
  std::string verdict = to_string(c.verdict);
  boost::algorithm::to_upper(verdict);
  out << "property: " << c.property << "\n";
  out << "verdict:  " << verdict << "\n";
  if (c.details.contains("scale")) {
    out << "scale:    " << one_line(c.details["scale"]) << "\n";
  }
  out << "params:   " << one_line(c.parameters) << "\n";
  if (c.seed) out << "seed:     " << *c.seed << "\n";
  if (c.details.contains("min_deficiency") && !c.details["min_deficiency"].is_null()) {
    out << "min deficiency: " << c.details["min_deficiency"].get<std::string>() << "\n";
  }
  if (c.details.contains("delta") && !c.details["delta"].is_null()) {
    out << "delta:    " << c.details["delta"].get<std::string>() << "\n";
  }
  if (c.details.contains("checked")) out << "checked:  " << c.details["checked"].dump() << "\n";
  if (c.verdict == Verdict::Vacuous) {
    const bool empty_family = (c.details.contains("fiber_count") && c.details["fiber_count"] == 0) ||
                              (c.details.contains("family_size") && c.details["family_size"] == 0) ||
                              (c.details.contains("instances") && c.details["instances"] == 0);
    out << (empty_family ? "note:     empty family, nothing was audited\n" : "note:     no obstruction at this pair\n");
  }
  if (c.witnesses.contains("extremal_fiber")) {
    out << "extremal fiber: " << one_line(c.witnesses["extremal_fiber"]) << "\n";
  }
  if (c.verdict == Verdict::Fail) {
    for (const char* key : {"below_delta", "mismatches", "violations", "failures", "multipliers"}) {
      if (c.witnesses.contains(key) && !c.witnesses[key].empty()) {
        out << "witness (" << key << "): " << one_line(c.witnesses[key]) << "\n";
      }
    }
  } else if (c.witnesses.contains("minimizer")) {
    out << "minimizer: " << one_line(c.witnesses["minimizer"]) << "\n";
  }
  return out.str();
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"groupoid-lab: exact audits for ample groupoids over the full shift"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::string certificate_path;

  for (const auto& name : subcommands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path)->required();
    sub->add_option("--out", out_path);
    sub->add_option("--seed", seed);
  }
  auto* rep = app.add_subcommand("report", "summarize a certificate");
  rep->add_option("--certificate", certificate_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (rep->parsed()) {
      std::ifstream in(certificate_path);
      if (!in) throw InvalidInput("cannot open " + certificate_path);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed certificate: ") + e.what());
      }
      out << report(Certificate::from_json(j));
      return 0;
    }
    const std::string name = app.get_subcommands().front()->get_name();
    ExperimentConfig config = ExperimentConfig::load(config_path);
    if (seed) config.seed = *seed;
    Certificate c = run_subcommand(name, config);
    const std::string text = c.to_json().dump(2) + "\n";
    const std::string target = out_path.empty() ? config.out : out_path;
    if (target.empty()) {
      out << text;
    } else {
      std::ofstream file(target);
      if (!file) throw InvalidInput("cannot write " + target);
      file << text;
    }
    err << report(c);
    return exit_code(c.verdict);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace glab::cli
