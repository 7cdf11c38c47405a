#pragma once

// Command-line front end: turns argv into an ExperimentSpec and runs the library
// operation and writes JSON or CSV. Exit 0 = success/certified, 1 = a finding
// (falsified, NotCovered, mislocated stop), 2 = usage or computation error.

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "zstab/zstab.hpp"

namespace zstab::cli {

using io::Json;

enum class Format { json, csv };

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Comma-separated, header row, LF endings. Fields never contain commas here
/// except where quoted.
inline std::string render_csv(const Table& t) {
  auto cell = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cell(cells[i]);
    out += "\n";
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out;
}

/// One-row table from the scalar top-level fields of an object.
inline Table flatten(const Json& j) {
  Table t;
  t.rows.emplace_back();
  for (const auto& [k, v] : j.items()) {
    if (v.is_structured()) continue;
    t.header.push_back(k);
    t.rows.back().push_back(v.is_string() ? v.get<std::string>() : v.dump());
  }
  return t;
}

struct Outcome {
  Json json;
  std::optional<Table> table;  // CSV form when it differs from flatten(json)
  int exit_code = 0;
};

/// Parsed command line. Unknown commands and flags are rejected by the parser
/// before anything runs.
struct ExperimentSpec {
  std::string command;
  std::map<std::string, std::string> params;
  std::uint64_t seed = 7;
  std::string output;
  Format format = Format::json;

  bool has(const std::string& k) const { return params.count(k) != 0; }
  const std::string& get(const std::string& k) const {
    auto it = params.find(k);
    if (it == params.end()) fail(Errc::precondition, "missing --" + k);
    return it->second;
  }
  Rational rational(const std::string& k) const { return parse_rational(get(k)); }
  Rational rational_or(const std::string& k, const Rational& def) const { return has(k) ? rational(k) : def; }
  Rational positive(const std::string& k) const {
    Rational v = rational(k);
    require(v > 0, Errc::precondition, "--" + k + " must be positive");
    return v;
  }
  Rational positive_or(const std::string& k, const Rational& def) const { return has(k) ? positive(k) : def; }
  std::uint64_t count(const std::string& k, std::uint64_t def) const {
    if (!has(k)) return def;
    const auto& s = get(k);
    require(!s.empty() && s.size() < 19 && std::all_of(s.begin(), s.end(), ::isdigit), Errc::parse,
            "--" + k + " must be a nonnegative integer");
    return std::stoull(s);
  }
};

// ---------------------------------------------------------------------------
// Shared helpers

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

inline std::pair<long, long> int_range(const std::string& s) {
  const auto colon = s.find(':');
  require(colon != std::string::npos, Errc::parse, "range must be lo:hi");
  try {
    return {std::stol(s.substr(0, colon)), std::stol(s.substr(colon + 1))};
  } catch (const std::exception&) {
    fail(Errc::parse, "malformed range '" + s + "'");
  }
}

inline RatInterval rational_range(const std::string& s) {
  const auto colon = s.find(':');
  require(colon != std::string::npos, Errc::parse, "interval must be lo:hi");
  return {parse_rational(s.substr(0, colon)), parse_rational(s.substr(colon + 1))};
}

/// Family parameters taken from --params k=v,... and the dedicated flags.
inline std::map<std::string, std::string> family_params(const ExperimentSpec& spec, const std::string& family) {
  std::map<std::string, std::string> p;
  if (spec.has("params")) {
    for (const auto& kv : split(spec.get("params"), ',')) {
      const auto eq = kv.find('=');
      require(eq != std::string::npos, Errc::parse, "--params entries must be key=value");
      p[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
  }
  for (const auto& fam : corpus_families())
    if (fam.name == family)
      for (const auto& key : fam.params)
        if (spec.has(key)) p[key] = spec.get(key);
  return p;
}

struct Subject {
  RealFunc function;
  std::optional<LocatedZeroSet> zeros;
  std::string label;
};

inline std::optional<LocatedZeroSet> zeros_flag(const ExperimentSpec& spec) {
  if (!spec.has("zeros")) return std::nullopt;
  const auto& z = spec.get("zeros");
  if (z == "reciprocal") return reciprocal_zeros();
  std::vector<Rational> pts;
  for (const auto& s : split(z, ',')) pts.push_back(parse_rational(s));
  return LocatedZeroSet::finite(std::move(pts));
}

/// The function under study: --function file.json or --family with parameters.
inline Subject load_subject(const ExperimentSpec& spec) {
  std::optional<LocatedZeroSet> zeros = zeros_flag(spec);
  if (spec.has("function")) {
    std::ifstream in(spec.get("function"));
    require(static_cast<bool>(in), Errc::precondition, "cannot read " + spec.get("function"));
    Json j = Json::parse(in);
    RealFunc f = io::function_from(j.contains("function") ? j.at("function") : j);
    if (!zeros && j.contains("metadata") && j.at("metadata").contains("known_zeros") &&
        !j.at("metadata").at("known_zeros").is_null())
      zeros = io::zero_set_from(j.at("metadata").at("known_zeros"));
    return {std::move(f), std::move(zeros), spec.get("function")};
  }
  const std::string family = spec.get("family");
  CorpusMember m = make_member(family, family_params(spec, family));
  if (!zeros && m.known_zeros) zeros = LocatedZeroSet::finite(m.known_zeros->points, m.known_zeros->multiplicities);
  return {std::move(m.function), std::move(zeros), family};
}

inline const LocatedZeroSet& need_zeros(const Subject& s) {
  require(s.zeros.has_value(), Errc::precondition, "no zero set known for " + s.label + "; pass --zeros");
  return *s.zeros;
}

inline Rational default_tau() { return pow2(-20); }

// ---------------------------------------------------------------------------
// Commands

inline Outcome cmd_corpus(const ExperimentSpec& spec) {
  const std::string action = spec.get("action");
  if (action == "list") {
    Json arr = Json::array();
    Table t{{"family", "params", "description"}, {}};
    for (const auto& f : corpus_families()) {
      std::string ps;
      for (const auto& p : f.params) ps += (ps.empty() ? "" : ";") + p;
      arr.push_back({{"family", f.name}, {"params", f.params}, {"description", f.description}});
      t.rows.push_back({f.name, ps, f.description});
    }
    return {arr, t, 0};
  }
  if (action == "export") {
    const std::string family = spec.get("family");
    return {io::to_json(make_member(family, family_params(spec, family))), std::nullopt, 0};
  }
  fail(Errc::precondition, "corpus action must be list or export");
}

inline Outcome cmd_modulus(const ExperimentSpec& spec) {
  const Rational eps = spec.positive("eps");
  const Rational tau = spec.positive_or("tau", default_tau());
  if (spec.has("sweep")) {
    // Sweeps the family's integer parameter; one row per value.
    const std::string family = spec.get("family");
    const std::string key = family == "cubic" ? "k" : (family == "spike-barrier" ? "K" : "n");
    const auto [lo, hi] = int_range(spec.get("sweep"));
    Table t{{key, "eps", "delta", "inf_lower", "inf_upper"}, {}};
    Json rows = Json::array();
    for (long v = lo; v <= hi; ++v) {
      ExperimentSpec s = spec;
      s.params.erase("sweep");
      if (family == "cubic") s.params["a"] = to_string(pow2(-v));
      else s.params[key] = std::to_string(v);
      const Subject subj = load_subject(s);
      const auto cert = uniform_modulus(subj.function, need_zeros(subj), eps, tau);
      const std::string delta = cert.vacuous ? "inf" : to_string(cert.delta);
      t.rows.push_back({std::to_string(v), to_string(eps), delta, to_string(cert.inf_bracket.lower),
                        to_string(cert.inf_bracket.upper)});
      rows.push_back({{key, v}, {"certificate", io::to_json(cert)}});
    }
    return {rows, t, 0};
  }
  const Subject subj = load_subject(spec);
  const auto cert = uniform_modulus(subj.function, need_zeros(subj), eps, tau);
  return {io::to_json(cert), std::nullopt, 0};
}

inline Outcome cmd_polybound(const ExperimentSpec& spec) {
  if (spec.has("trials")) {
    PolyboundOptions opt;
    opt.trials = spec.count("trials", 200);
    opt.seed = spec.seed;
    opt.hits_per_instance = spec.count("hits", 1000);
    if (spec.has("eps")) opt.eps_values = {spec.positive("eps")};
    const auto s = run_polybound_trials(opt);
    Json j{{"trials", opt.trials},     {"seed", opt.seed},   {"instances", s.instances}, {"samples", s.samples},
           {"hits", s.hits},           {"min_hits", s.min_hits}, {"violations", s.violations}};
    Table t{{"trials", "seed", "instances", "samples", "hits", "min_hits", "violations"},
            {{std::to_string(opt.trials), std::to_string(opt.seed), std::to_string(s.instances),
              std::to_string(s.samples), std::to_string(s.hits), std::to_string(s.min_hits),
              std::to_string(s.violations)}}};
    return {j, t, s.violations == 0 ? 0 : 1};
  }
  std::vector<ComplexRational> roots;
  for (const auto& r : split(spec.get("roots"), ';')) {
    const auto parts = split(r, ',');
    require(parts.size() == 2, Errc::parse, "--roots entries must be re,im");
    roots.push_back({parse_rational(parts[0]), parse_rational(parts[1])});
  }
  const Rational gamma = spec.positive_or("gamma", Rational(1));
  const Rational eps = spec.positive("eps");
  const Rational delta = poly_uniform_modulus(roots, gamma, eps);
  Json rs = Json::array();
  for (const auto& z : roots) rs.push_back(Json::array({io::to_json(z.re), io::to_json(z.im)}));
  Json j{{"rule", "gamma*(eps/2)^m"},
         {"m", roots.size()},
         {"gamma", io::to_json(gamma)},
         {"eps", io::to_json(eps)},
         {"delta", io::to_json(delta)},
         {"roots", rs},
         {"modulus", io::to_json(poly_modulus({roots, gamma}))}};
  return {j, std::nullopt, 0};
}

inline Outcome cmd_falsify(const ExperimentSpec& spec) {
  const Subject subj = load_subject(spec);
  const Rational eps = spec.positive("eps");
  const Rational delta = spec.positive("delta");
  const auto r = falsify_uniform(subj.function, need_zeros(subj), eps, delta, spec.count("budget", 1u << 16));
  Json j;
  j["status"] = std::string(to_string(r.status));
  j["points_evaluated"] = r.points_evaluated;
  if (r.witness) {
    j["witness"] = io::to_json(*r.witness);
    Table t{{"status", "x", "fx_abs", "dist_lower", "delta", "eps"},
            {{"found", to_string(r.witness->x), to_string(r.witness->fx_abs), to_string(r.witness->dist_lower),
              to_string(delta), to_string(eps)}}};
    return {j, t, 1};
  }
  return {j, std::nullopt, 0};
}

inline Outcome cmd_bisect(const ExperimentSpec& spec) {
  const Subject subj = load_subject(spec);
  const Rational eps = spec.positive("eps");
  const Rational lo = spec.rational_or("lo", subj.function.domain().lo());
  const Rational hi = spec.rational_or("hi", subj.function.domain().hi());
  const std::string kind = spec.has("stopper") ? spec.get("stopper") : "none";
  Stopper stopper = NoStopper{};
  if (kind == "pointwise") stopper = PointwiseStopper{need_zeros(subj)};
  else if (kind == "uniform")
    stopper = CertificateStopper{uniform_modulus(subj.function, need_zeros(subj), eps,
                                                 spec.positive_or("tau", default_tau()))};
  else require(kind == "none", Errc::precondition, "--stopper must be none, pointwise or uniform");
  const auto r = zstable_bisect(subj.function, lo, hi, eps, stopper);
  return {io::to_json(r), std::nullopt, 0};
}

inline Outcome cmd_coverage(const ExperimentSpec& spec) {
  const Subject subj = load_subject(spec);
  std::vector<Rational> S;
  if (spec.has("S")) {
    for (const auto& s : split(spec.get("S"), ',')) S.push_back(parse_rational(s));
  } else {
    const auto* fz = need_zeros(subj).finite_zeros();
    require(fz != nullptr, Errc::precondition, "coverage needs a finite reference set; pass --S");
    S = fz->points;
  }
  const auto r = sublevel_coverage(subj.function, spec.positive("delta"), S, spec.positive("eps"),
                                   spec.positive_or("tau", default_tau()));
  return {io::to_json(r), std::nullopt, r.verdict == CoverageVerdict::not_covered ? 1 : 0};
}

inline Outcome cmd_isolate(const ExperimentSpec& spec) {
  if (spec.has("family") || spec.has("function")) {
    const Subject subj = load_subject(spec);
    const auto roots = isolate_real_roots(subj.function, spec.positive_or("width", pow2(-30)));
    Json arr = Json::array();
    Table t{{"kind", "lo", "hi", "multiplicity"}, {}};
    for (const auto& r : roots) {
      arr.push_back(io::to_json(r));
      t.rows.push_back({r.exact() ? "exact_zero" : "bracket", to_string(r.lo), to_string(r.hi),
                        std::to_string(r.multiplicity)});
    }
    return {Json{{"roots", arr}}, t, 0};
  }
  const auto zeros = zeros_flag(spec);
  require(zeros && zeros->enumerated_zeros(), Errc::precondition, "isolate needs --zeros reciprocal (or --family)");
  const auto cert = finite_intersection_rank(*zeros, rational_range(spec.get("X")));
  return {io::to_json(cert), std::nullopt, 0};
}

/// Naive |f| < tol stop versus the certified operations on the plateau family.
inline Outcome cmd_demo_stopping(const ExperimentSpec& spec) {
  const auto n = static_cast<unsigned>(spec.count("n", 12));
  require(n >= 3, Errc::precondition, "--n must be at least 3");
  const Rational tol = spec.positive_or("tol", pow2(-static_cast<long>(n) + 1));
  const Rational grid = spec.positive_or("grid", pow2(-12));
  const Rational eps = spec.positive_or("eps", make_rational(1, 4));
  const Rational tau = spec.positive_or("tau", default_tau());
  const RealFunc f = plateau(n);
  const RealFunc g = plateau_signed(n);
  const auto Z = LocatedZeroSet::finite({Rational(1)});

  Json j;
  j["family"] = "plateau";
  j["n"] = n;
  j["zero_set"] = io::to_json(Z);
  j["eps"] = io::to_json(eps);

  Json scan{{"tol", io::to_json(tol)}, {"grid", io::to_json(grid)}};
  bool mislocated = false;
  if (auto x = tolerance_scan(f, tol, grid)) {
    const Rational err = finite_distance({Rational(1)}, *x);
    mislocated = err >= eps;
    scan["point"] = io::to_json(*x);
    scan["fx_abs"] = io::to_json(abs(eval_exact(f, *x)));
    scan["localization_error"] = io::to_json(err);
  } else {
    scan["point"] = nullptr;
  }
  scan["mislocated"] = mislocated;
  j["tolerance_scan"] = scan;

  // Certified counterparts; a Localized result must stay within its radius.
  bool certified_sound = true;
  Rational worst = 0;
  auto check_localized = [&](const RootResult& r) {
    if (auto* loc = r.localized()) {
      const Rational err = finite_distance({Rational(1)}, loc->center);
      worst = std::max(worst, err);
      if (err >= eps) certified_sound = false;
    }
  };
  const auto cert = uniform_modulus(f, Z, eps, tau);
  Json certified;
  certified["uniform_certificate"] = io::to_json(cert);
  if (auto x = tolerance_scan(f, cert.delta, grid)) {
    const Rational err = finite_distance({Rational(1)}, *x);
    if (err >= eps) certified_sound = false;
    worst = std::max(worst, err);
    certified["certified_scan"] = {{"point", io::to_json(*x)}, {"localization_error", io::to_json(err)}};
  }
  const Rational lo = 0, hi = g.domain().hi();
  const auto pointwise = zstable_bisect(g, lo, hi, eps, PointwiseStopper{Z});
  const auto by_cert = zstable_bisect(g, lo, hi, eps, CertificateStopper{uniform_modulus(g, Z, eps, tau)});
  check_localized(pointwise);
  check_localized(by_cert);
  certified["bisect_pointwise"] = io::to_json(pointwise);
  certified["bisect_certificate"] = io::to_json(by_cert);
  certified["worst_localization_error"] = io::to_json(worst);
  certified["sound"] = certified_sound;
  j["certified"] = certified;

  Table t{{"n", "tol", "scan_point", "scan_error", "mislocated", "certified_delta", "certified_worst_error",
           "certified_sound"},
          {{std::to_string(n), to_string(tol), scan.contains("localization_error") ? scan["point"].get<std::string>() : "",
            scan.contains("localization_error") ? scan["localization_error"].get<std::string>() : "",
            mislocated ? "true" : "false", to_string(cert.delta), to_string(worst),
            certified_sound ? "true" : "false"}}};
  if (!certified_sound) return {j, t, 2};
  return {j, t, mislocated ? 1 : 0};
}

// ---------------------------------------------------------------------------
// Entry point

inline Outcome dispatch(const ExperimentSpec& spec) {
  static const std::map<std::string, std::function<Outcome(const ExperimentSpec&)>> commands{
      {"corpus", cmd_corpus},     {"modulus", cmd_modulus},   {"polybound", cmd_polybound},
      {"falsify", cmd_falsify},   {"bisect", cmd_bisect},     {"coverage", cmd_coverage},
      {"isolate", cmd_isolate},   {"demo-stopping", cmd_demo_stopping},
  };
  return commands.at(spec.command)(spec);
}

inline std::string render(const Outcome& o, Format format) {
  if (format == Format::json) return o.json.dump(2) + "\n";
  return render_csv(o.table ? *o.table : flatten(o.json));
}

/// Parses argv into an ExperimentSpec (nullopt with an exit code on --help or
/// a usage error).
inline std::variant<ExperimentSpec, int> parse(int argc, const char* const* argv, std::ostream& out,
                                               std::ostream& err) {
  CLI::App app{"Certified zero localization: moduli, certificates, falsifiers"};
  app.require_subcommand(1, 1);
  ExperimentSpec spec;
  std::string format = "json";

  struct Flag {
    const char* name;
    const char* help;
  };
  const std::map<std::string, std::vector<Flag>> flags{
      {"corpus", {{"family", "corpus family"}, {"params", "k=v,... family parameters"}, {"n", "plateau n"},
                  {"a", "cubic a (p/q)"}, {"K", "spike-barrier K"}}},
      {"modulus", {{"family", "corpus family"}, {"function", "function JSON file"}, {"zeros", "p/q,... zero set"},
                   {"params", "k=v,..."}, {"n", "plateau n"}, {"a", "cubic a"}, {"K", "spike-barrier K"},
                   {"eps", "tolerance eps"}, {"tau", "inf bracket gap"}, {"sweep", "lo:hi integer sweep"}}},
      {"polybound", {{"roots", "re,im;re,im;..."}, {"gamma", "lower bound on |cofactor|"}, {"eps", "tolerance eps"},
                     {"trials", "random root multisets"}, {"hits", "sub-delta samples per instance"}}},
      {"falsify", {{"family", "corpus family"}, {"function", "function JSON file"}, {"zeros", "p/q,..."},
                   {"params", "k=v,..."}, {"n", "plateau n"}, {"a", "cubic a"}, {"K", "spike-barrier K"},
                   {"eps", "claimed eps"}, {"delta", "claimed delta"}, {"budget", "max points evaluated"}}},
      {"bisect", {{"family", "corpus family"}, {"function", "function JSON file"}, {"zeros", "p/q,..."},
                  {"params", "k=v,..."}, {"n", "plateau n"}, {"a", "cubic a"}, {"K", "spike-barrier K"},
                  {"lo", "left end"}, {"hi", "right end"}, {"eps", "localization radius"},
                  {"stopper", "none|pointwise|uniform"}, {"tau", "inf bracket gap for uniform"}}},
      {"coverage", {{"family", "corpus family"}, {"function", "function JSON file"}, {"zeros", "p/q,..."},
                    {"params", "k=v,..."}, {"n", "plateau n"}, {"a", "cubic a"}, {"K", "spike-barrier K"},
                    {"delta", "sublevel threshold"}, {"S", "p/q,... reference points"}, {"eps", "tolerance eps"},
                    {"tau", "bracket width"}}},
      {"isolate", {{"zeros", "reciprocal"}, {"X", "lo:hi"}, {"family", "polynomial family"},
                   {"function", "function JSON file"}, {"params", "k=v,..."}, {"a", "cubic a"},
                   {"width", "bracket width"}}},
      {"demo-stopping", {{"n", "plateau n"}, {"tol", "naive tolerance"}, {"grid", "scan step"},
                         {"eps", "tolerance eps"}, {"tau", "inf bracket gap"}}},
  };

  std::map<std::string, std::map<std::string, std::string>> values;
  std::string corpus_action;
  for (const auto& [name, list] : flags) {
    CLI::App* sub = app.add_subcommand(name);
    if (name == "corpus") sub->add_option("action", corpus_action, "list | export")->required();
    for (const auto& f : list) {
      sub->add_option_function<std::string>(std::string("--") + f.name,
                                            [&values, name = name, key = std::string(f.name)](const std::string& v) {
                                              values[name][key] = v;
                                            },
                                            f.help);
    }
    sub->add_option("--seed", spec.seed, "random seed")->default_val(7);
    sub->add_option("--output", spec.output, "output path (stdout if omitted)");
    sub->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}))->default_val("json");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }
  spec.command = app.get_subcommands().front()->get_name();
  spec.params = values[spec.command];
  if (spec.command == "corpus") spec.params["action"] = corpus_action;
  spec.format = format == "csv" ? Format::csv : Format::json;
  return spec;
}

inline int run(const ExperimentSpec& spec, std::ostream& out, std::ostream& err) {
  Outcome o;
  try {
    o = dispatch(spec);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  }
  const std::string text = render(o, spec.format);
  if (spec.output.empty()) {
    out << text;
  } else {
    std::ofstream file(spec.output, std::ios::binary);
    if (!file) {
      err << "cannot write " << spec.output << "\n";
      return 2;
    }
    file << text;
  }
  return o.exit_code;
}

inline int main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  auto parsed = parse(argc, argv, out, err);
  if (auto* code = std::get_if<int>(&parsed)) return *code;
  return run(std::get<ExperimentSpec>(parsed), out, err);
}

}  // namespace zstab::cli
