#pragma once

#include <filesystem>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ceerlab/dark.hpp"
#include "ceerlab/dot.hpp"
#include "ceerlab/io.hpp"
#include "ceerlab/reductions.hpp"
#include "ceerlab/spectra.hpp"
#include "ceerlab/suites.hpp"
#include "ceerlab/transversals.hpp"

namespace ceerlab::cli {

using io::Json;

/// Exit statuses.
inline constexpr int kPass = 0;
inline constexpr int kCheckFailure = 1;
inline constexpr int kInputError = 2;

struct Check {
  std::string name;
  bool passed = true;
  std::optional<Nat> stage;
  std::string detail;
};

/// Everything one invocation produced: files keyed by name, plus the summary material.
struct Artifacts {
  std::string title;
  std::vector<std::pair<std::string, std::string>> facts;
  std::vector<Check> checks;
  std::vector<std::string> log;
  std::vector<std::pair<std::string, std::string>> files;  // (file name, contents)
  std::string json_view;
  std::string dot_view;

  bool passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }
  void fact(std::string key, std::string value) { facts.emplace_back(std::move(key), std::move(value)); }
  void fact(std::string key, Nat value) { fact(std::move(key), std::to_string(value)); }
};

/// Deterministic plain-text summary. Failed checks are the only lines starting "FAIL".
inline std::string report(const Artifacts& a) {
  std::ostringstream out;
  out << a.title << "\n";
  for (const auto& [k, v] : a.facts) out << "  " << k << ": " << v << "\n";
  for (const auto& line : a.log) out << "  " << line << "\n";
  Nat failed = 0;
  for (const Check& c : a.checks) {
    if (c.passed) {
      out << "ok   " << c.name << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
    } else {
      ++failed;
      out << "FAIL " << c.name << (c.stage ? " at stage " + std::to_string(*c.stage) : "")
          << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
    }
  }
  out << (failed == 0 ? "all " + std::to_string(a.checks.size()) + " checks passed"
                      : std::to_string(failed) + " of " + std::to_string(a.checks.size()) + " checks failed")
      << "\n";
  return out.str();
}

namespace detail {

inline constexpr Nat kMaxSupport = Nat{1} << 20;
inline constexpr Nat kMaxStages = Nat{1} << 24;
inline constexpr Nat kMaxDepth = 24;
inline constexpr Nat kMaxLevels = 16;

inline void bounded(Nat value, Nat most, const char* what) {
  if (value > most) {
    throw Error(ErrorKind::RangeError,
                std::string(what) + " " + std::to_string(value) + " exceeds the limit " + std::to_string(most));
  }
}

inline Check from(const CheckResult& c) { return {c.name, c.passed, c.stage, c.detail}; }

inline FiniteSet parse_members(const std::string& csv) {
  std::vector<Nat> out;
  std::stringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw Error(ErrorKind::SchemaError, "'" + item + "' is not a natural number");
    out.push_back(v);
  }
  return make_set(std::move(out));
}

/// Reads a snapshot; a traced snapshot becomes staged and is held fixed after its stage.
struct LoadedCeer {
  FrozenCeer frozen;
  std::optional<StagedCeer> staged;
};

inline LoadedCeer load_ceer(const std::string& path) {
  const Json j = io::read_file(path);
  LoadedCeer out{io::frozen_from_json(j), std::nullopt};
  if (j.contains("trace")) out.staged = io::staged_from_json(j);
  return out;
}

// ---------------------------------------------------------------------------

struct DarkOptions {
  Nat stages = 5000;
  Nat support = 256;
  std::optional<Nat> requirements;
  std::string replay;
};

inline Artifacts dark_run(const DarkOptions& o) {
  bounded(o.support, kMaxSupport, "support");
  bounded(o.stages, kMaxStages, "stages");
  DarkConstruction d = o.replay.empty() ? ceerlab::dark_run(o.support, o.stages, o.requirements)
                                        : io::dark_from_json(io::read_file(o.replay));
  const AuditReport audit = ceerlab::audit(d);
  Artifacts a;
  a.title = o.replay.empty() ? "dark-run" : "dark-run (replayed)";
  a.fact("support", d.support());
  a.fact("stages", d.stage());
  a.fact("requirement limit", d.requirement_limit() ? std::to_string(*d.requirement_limit()) : "none");
  Nat collapses = 0, vacuous = 0;
  for (const StageRecord& r : d.trace()) {
    if (r.action == ActionKind::None) continue;
    (r.action == ActionKind::Collapse ? collapses : vacuous) += 1;
    a.log.push_back("stage " + std::to_string(r.stage) + ": P_" + std::to_string(r.requirement) + " " +
                    std::string(to_string(r.action)) + " (" + std::to_string(r.pair->first) + "," +
                    std::to_string(r.pair->second) + ")");
  }
  a.fact("collapses", collapses);
  a.fact("vacuous settles", vacuous);
  a.fact("singletons", d.relation().freeze(d.support(), d.stage()).singleton_count(d.support()));
  for (const auto& c : audit.checks) a.checks.push_back(from(c));
  const Json trace = io::to_json(d);
  const Json audit_json = io::to_json(audit);
  const FrozenCeer final_relation(d.relation().current());
  a.files.emplace_back("dark_trace.json", io::dump(trace));
  a.files.emplace_back("dark_audit.json", io::dump(audit_json));
  a.files.emplace_back("dark_relation.dot", dot::partition(final_relation, "dark"));
  a.json_view = io::dump(audit_json);
  a.dot_view = dot::partition(final_relation, "dark");
  return a;
}

struct TreeOptions {
  std::string ceer;
  Nat depth = 3;
  bool pruned = false;
};

inline Artifacts tree(const TreeOptions& o) {
  bounded(o.depth, kMaxDepth, "depth");
  LoadedCeer loaded = load_ceer(o.ceer);
  std::optional<TransversalTree> t;
  if (loaded.staged) {
    StagedCeer& s = *loaded.staged;
    s.advance_to(std::max(s.stage(), o.depth));
    t.emplace(s, o.depth, o.pruned);
  } else {
    t.emplace(loaded.frozen, o.pruned);
  }
  const auto nodes = t->level(o.depth);
  const auto leftmost = t->leftmost(o.depth);
  Artifacts a;
  a.title = "tree";
  a.fact("support", t->support());
  a.fact("depth", o.depth);
  a.fact("pruned", o.pruned ? "yes" : "no");
  a.fact("nodes", nodes.size());
  a.fact("leftmost", leftmost ? bits_to_string(*leftmost) : "none");
  Json level = io::level_json(o.depth, nodes);
  level["leftmost"] = leftmost ? Json(bits_to_string(*leftmost)) : Json(nullptr);
  a.files.emplace_back("tree_level.json", io::dump(level));
  a.files.emplace_back("tree.dot", dot::tree(*t, o.depth));
  a.json_view = io::dump(level);
  a.dot_view = dot::tree(*t, o.depth);
  return a;
}

struct VerifyOptions {
  std::string source, target, reduction;
  std::optional<Nat> stage;
};

inline Artifacts verify(const VerifyOptions& o) {
  LoadedCeer r = load_ceer(o.source);
  LoadedCeer s = load_ceer(o.target);
  const ReductionCandidate f = io::reduction_from_json(io::read_file(o.reduction));
  Verdict v;
  if (o.stage) {
    if (!r.staged || !s.staged) throw Error(ErrorKind::SchemaError, "--stage needs traced snapshots for both relations");
    r.staged->advance_to(std::max(r.staged->stage(), *o.stage));
    s.staged->advance_to(std::max(s.staged->stage(), *o.stage));
    v = monotone_check(*r.staged, *s.staged, f, r.staged->support(), *o.stage);
  } else {
    v = verify_frozen(r.frozen, s.frozen, f);
  }
  Artifacts a;
  a.title = "verify";
  a.fact("source support", r.frozen.support());
  a.fact("target support", s.frozen.support());
  a.fact("reduction", std::string(to_string(f.kind())) + (f.name().empty() ? "" : " " + f.name()));
  a.fact("verdict", std::string(to_string(v.kind)));
  std::string witness;
  if (v.witness) witness = "witness (" + std::to_string(v.witness->first) + "," + std::to_string(v.witness->second) + ")";
  a.checks.push_back({"reduction", v.ok(), v.stage, witness});
  const Json j = io::to_json(v);
  a.files.emplace_back("verdict.json", io::dump(j));
  a.json_view = io::dump(j);
  return a;
}

struct EncodeOptions {
  std::string bases;
  std::optional<Nat> limit;
};

inline Artifacts encode_x(const EncodeOptions& o) {
  const auto bases = io::bases_from_json(io::read_file(o.bases));
  const Nat bound = completeness_bound(bases);
  const EncodedSet x = build_X(bases, o.limit.value_or(bound));
  Artifacts a;
  a.title = "encode-x";
  a.fact("tables", bases.size());
  a.fact("completeness bound", x.completeness_bound);
  a.fact("limit", x.limit);
  a.fact("fragment size", x.fragment.size());
  Json j = io::to_json(x);
  Json columns = Json::array();
  if (x.limit > 0) {
    const FrozenCeer s = generated_complement(x, x.limit - 1);
    for (Nat c = 0; c < bases.size(); ++c) {
      auto domain = column_domain(c, bases, x.limit);
      if (!domain) continue;
      const Verdict v = verify_frozen(id_ceer(*domain), s, column_reduction(c, bases, *domain));
      a.checks.push_back({"h_" + std::to_string(c), v.ok(), std::nullopt,
                          "domain {0.." + std::to_string(*domain) + "}: " + std::string(to_string(v.kind))});
      columns.push_back({{"j", c}, {"domain_bound", *domain}, {"verdict", io::to_json(v)}});
    }
  }
  j["columns"] = columns;
  a.files.emplace_back("encoded_x.json", io::dump(j));
  a.json_view = io::dump(j);
  return a;
}

struct NobasisOptions {
  std::string b;
  std::string w_members = "0,1,2,3,4,5,6,7,8,9,10,11,12,13,14,15";
  std::optional<Nat> w_program;
  Nat depth = 3;
  Nat k_cut = 8;
  Nat support = 840;
  Nat stages = 120;
};

inline Artifacts nobasis_build(const NobasisOptions& o) {
  bounded(o.support, kMaxSupport, "support");
  bounded(o.stages, kMaxStages, "stages");
  bounded(o.depth, kMaxLevels, "depth");
  const OracleTable b = io::oracle_from_json(io::read_file(o.b));
  const EnumerableSet w = o.w_program ? EnumerableSet::program(*o.w_program) : EnumerableSet::constant(parse_members(o.w_members));
  NobasisPair p = build_nobasis_pair(chain(w, o.depth), b, o.k_cut, o.support);
  p.r.advance_to(o.stages);
  p.s.advance_to(o.stages);
  const FrozenCeer r(p.r.current()), s(p.s.current());

  Check discrete{"column-0-discrete", true, std::nullopt, ""};
  Check cliques{"collapsed-columns-cliques", true, std::nullopt, ""};
  Check columns{"no-cross-column-relations", true, std::nullopt, ""};
  for (Nat u = 0; u <= o.support; ++u) {
    const auto [i, x] = unpair(u);
    const Nat rs = s.representative(u), rr = r.representative(u);
    if (unpair(rs).first != i || unpair(rr).first != i) {
      if (columns.passed) columns = {columns.name, false, o.stages, "class of " + std::to_string(u) + " leaves column " + std::to_string(i)};
    }
    if (i == 0 && rs != u && discrete.passed) discrete = {discrete.name, false, o.stages, "element " + std::to_string(u) + " is not a singleton"};
    if (i > 0 && !b.contains(i) && o.stages >= i + 1 && rs != pair(i, 0) && cliques.passed) {
      cliques = {cliques.name, false, o.stages, "column " + std::to_string(i) + " is not one class"};
    }
  }
  Artifacts a;
  a.title = "nobasis-build";
  a.fact("support", o.support);
  a.fact("stages", o.stages);
  a.fact("chain depth", o.depth);
  a.fact("k cut", o.k_cut);
  a.fact("W", w.describe());
  a.fact("R classes", r.class_count());
  a.fact("S classes", s.class_count());
  a.checks = {discrete, cliques, columns};
  const Json rj = io::to_json(p.r), sj = io::to_json(p.s);
  a.files.emplace_back("nobasis_R.json", io::dump(rj));
  a.files.emplace_back("nobasis_S.json", io::dump(sj));
  a.json_view = io::dump({{"R", rj}, {"S", sj}});
  a.dot_view = dot::partition(s, "S");
  return a;
}

struct FamilyOptions {
  std::string bases;
  Nat levels = 1;
  Nat index_cut = 1;
};

inline Artifacts bi_family(const FamilyOptions& o) {
  bounded(o.levels, kMaxLevels, "levels");
  const auto bases = io::bases_from_json(io::read_file(o.bases));
  const auto levels = family_levels(o.levels, bases, o.index_cut);
  Artifacts a;
  a.title = "bi-family";
  a.fact("levels", o.levels);
  a.fact("index cut", o.index_cut);
  Check sizes{"member-size-is-level-plus-one", true, std::nullopt, ""};
  for (const auto& l : levels) {
    std::set<Nat> seen;
    for (const auto& m : l.members) seen.insert(m.size());
    std::string list;
    for (Nat v : seen) list += (list.empty() ? "" : ",") + std::to_string(v);
    a.fact("level " + std::to_string(l.n), std::to_string(l.members.size()) + " members of size " + list);
    for (Nat v : seen) {
      if (v != l.n + 1 && sizes.passed) {
        sizes = {sizes.name, false, std::nullopt, "level " + std::to_string(l.n) + " has size " + std::to_string(v)};
      }
    }
  }
  Check disjoint{"members-pairwise-disjoint", true, std::nullopt, ""};
  std::vector<const FiniteSet*> all;
  for (const auto& l : levels) {
    for (const auto& m : l.members) all.push_back(&m);
  }
  for (std::size_t p = 0; p < all.size() && disjoint.passed; ++p) {
    for (std::size_t q = p + 1; q < all.size(); ++q) {
      const auto common = set_intersection(*all[p], *all[q]);
      if (!common.empty()) {
        disjoint = {disjoint.name, false, std::nullopt, "two members share " + std::to_string(common.front())};
        break;
      }
    }
  }
  Check corners{"corners-outside-f-ranges", true, std::nullopt, ""};
  for (std::size_t l = 0; l + 1 < levels.size(); ++l) {
    for (const auto& m : levels[l].members) {
      if (in_range_fi(corner(m, bases), bases, o.index_cut) && corners.passed) {
        corners = {corners.name, false, std::nullopt, "corner " + std::to_string(corner(m, bases))};
      }
    }
  }
  a.checks = {sizes, disjoint, corners};
  if (levels.size() >= 2) {
    const Nat domain = certified_domain(levels);
    Nat top = 0;
    for (const FiniteSet* m : all) top = std::max(top, m->back());
    for (Nat i = 0; i < o.index_cut; ++i) {
      for (Nat x = 0; x <= domain; ++x) top = std::max(top, f_value(i, bases, x));
    }
    const BiPair pair = build_bi_pair(levels, top);
    for (Nat i = 0; i < o.index_cut; ++i) {
      const ReductionCandidate f = fi_reduction(i, bases, domain);
      const Verdict forward = verify_frozen(pair.r.restrict_to(domain), pair.s, f);
      const Verdict backward = verify_frozen(pair.s.restrict_to(domain), pair.r, f);
      a.checks.push_back({"f_" + std::to_string(i) + " R->S", forward.ok(), std::nullopt,
                          "on {0.." + std::to_string(domain) + "}: " + std::string(to_string(forward.kind))});
      a.checks.push_back({"f_" + std::to_string(i) + " S->R", backward.ok(), std::nullopt,
                          "on {0.." + std::to_string(domain) + "}: " + std::string(to_string(backward.kind))});
    }
  }
  const Json j = io::to_json(levels);
  a.files.emplace_back("family.json", io::dump(j));
  a.json_view = io::dump(j);
  return a;
}

struct SuiteOptions {
  std::string name = "all";
  Nat seed = 1;
};

inline Artifacts suite(const SuiteOptions& o) {
  Artifacts a;
  a.title = "suite";
  a.fact("seed", o.seed);
  Json results = Json::array();
  bool matched = false;
  for (const auto& s : suites::all()) {
    if (o.name != "all" && o.name != s.slug && o.name != std::to_string(s.number)) continue;
    matched = true;
    const suites::SuiteResult r = s.run(o.seed);
    a.checks.push_back({std::to_string(r.number) + " " + s.slug, r.passed, std::nullopt, r.detail});
    results.push_back({{"criterion", r.number}, {"name", s.slug}, {"passed", r.passed}, {"detail", r.detail}});
  }
  if (!matched) throw Error(ErrorKind::RangeError, "no suite named '" + o.name + "'");
  const Json j = {{"seed", o.seed}, {"results", results}};
  a.files.emplace_back("suite_report.json", io::dump(j));
  a.json_view = io::dump(j);
  return a;
}

}  // namespace detail

/// Runs one command line (without the program name). Artifacts go to --out when given;
/// the --format view goes to `out`; errors go to `err` as JSON.
inline int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ceerlab: finite-stage experiments on computably enumerable equivalence relations"};
  app.require_subcommand(1);
  std::string out_dir, format = "text";
  Nat seed = 1;
  app.add_option("--out", out_dir, "directory for artifacts");
  app.add_option("--format", format, "stdout view")->check(CLI::IsMember({"json", "dot", "text"}));
  app.add_option("--seed", seed, "seed for randomised suites");

  detail::DarkOptions dark;
  Nat requirements = 0;
  auto* dark_cmd = app.add_subcommand("dark-run", "run the dark construction and audit it");
  dark_cmd->add_option("--stages", dark.stages);
  dark_cmd->add_option("--support", dark.support);
  auto* req_opt = dark_cmd->add_option("--requirements", requirements, "only P_e with e below this act");
  dark_cmd->add_option("--replay", dark.replay, "audit a stored trace instead of running");

  detail::TreeOptions tree;
  auto* tree_cmd = app.add_subcommand("tree", "dump a level of the transversal tree");
  tree_cmd->add_option("--ceer", tree.ceer)->required();
  tree_cmd->add_option("--depth", tree.depth);
  tree_cmd->add_flag("--pruned", tree.pruned, "prune by the strong array");

  detail::VerifyOptions verify;
  Nat verify_stage = 0;
  auto* verify_cmd = app.add_subcommand("verify", "check a candidate reduction");
  verify_cmd->add_option("--source", verify.source)->required();
  verify_cmd->add_option("--target", verify.target)->required();
  verify_cmd->add_option("--reduction", verify.reduction)->required();
  auto* stage_opt = verify_cmd->add_option("--stage", verify_stage, "monotone check at this stage");

  detail::EncodeOptions encode;
  Nat limit = 0;
  auto* encode_cmd = app.add_subcommand("encode-x", "build the interleaved encoding X");
  encode_cmd->add_option("--bases", encode.bases)->required();
  auto* limit_opt = encode_cmd->add_option("--limit", limit, "codes below this (default: completeness bound)");

  detail::NobasisOptions nobasis;
  Nat w_program = 0;
  auto* nobasis_cmd = app.add_subcommand("nobasis-build", "build the pair without a basis");
  nobasis_cmd->add_option("--b", nobasis.b, "oracle table for B")->required();
  nobasis_cmd->add_option("--w-members", nobasis.w_members, "comma-separated finite W");
  auto* w_opt = nobasis_cmd->add_option("--w-program", w_program, "use W_e for this program code");
  nobasis_cmd->add_option("--depth", nobasis.depth, "chain depth");
  nobasis_cmd->add_option("--k-cut", nobasis.k_cut);
  nobasis_cmd->add_option("--support", nobasis.support);
  nobasis_cmd->add_option("--stages", nobasis.stages);

  detail::FamilyOptions family;
  auto* family_cmd = app.add_subcommand("bi-family", "generate the family C_n and check it");
  family_cmd->add_option("--bases", family.bases)->required();
  family_cmd->add_option("--levels", family.levels);
  family_cmd->add_option("--index-cut", family.index_cut);

  detail::SuiteOptions suite;
  auto* suite_cmd = app.add_subcommand("suite", "run acceptance suites");
  suite_cmd->add_option("--name", suite.name, "suite slug, number, or all");

  // Flags may appear before or after the subcommand.
  for (auto* sub : {dark_cmd, tree_cmd, verify_cmd, encode_cmd, nobasis_cmd, family_cmd, suite_cmd}) {
    sub->fallthrough();
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << Json{{"error", "usage-error"}, {"message", e.what()}}.dump() << "\n";
    return kInputError;
  }

  try {
    Artifacts a;
    if (*dark_cmd) {
      if (*req_opt) dark.requirements = requirements;
      a = detail::dark_run(dark);
    } else if (*tree_cmd) {
      a = detail::tree(tree);
    } else if (*verify_cmd) {
      if (*stage_opt) verify.stage = verify_stage;
      a = detail::verify(verify);
    } else if (*encode_cmd) {
      if (*limit_opt) encode.limit = limit;
      a = detail::encode_x(encode);
    } else if (*nobasis_cmd) {
      if (*w_opt) nobasis.w_program = w_program;
      a = detail::nobasis_build(nobasis);
    } else if (*family_cmd) {
      a = detail::bi_family(family);
    } else {
      suite.seed = seed;
      a = detail::suite(suite);
    }
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      for (const auto& [name, contents] : a.files) io::write_file((std::filesystem::path(out_dir) / name).string(), contents);
      io::write_file((std::filesystem::path(out_dir) / "report.txt").string(), report(a));
    }
    if (format == "json") {
      out << (a.json_view.empty() ? "{}\n" : a.json_view);
    } else if (format == "dot") {
      if (a.dot_view.empty()) throw Error(ErrorKind::SchemaError, "this subcommand has no DOT view");
      out << a.dot_view;
    } else {
      out << report(a);
    }
    return a.passed() ? kPass : kCheckFailure;
  } catch (const Error& e) {
    err << io::error_json(e).dump() << "\n";
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    err << Json{{"error", "schema-error"}, {"message", e.what()}}.dump() << "\n";
    return kInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << Json{{"error", "io-error"}, {"message", e.what()}}.dump() << "\n";
    return kInputError;
  }
}

}  // namespace ceerlab::cli
