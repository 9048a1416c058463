#include "halfder/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "halfder/errors.hpp"
#include "halfder/halfderiv.hpp"
#include "halfder/tpa.hpp"

namespace halfder {

namespace {

constexpr std::size_t kMaxWitnesses = 100;

Degree parse_degree(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ConfigError("degree \"" + text + "\" must look like m1,m2");
  try {
    std::size_t p1 = 0, p2 = 0;
    const std::string s1 = text.substr(0, comma), s2 = text.substr(comma + 1);
    const int m1 = std::stoi(s1, &p1), m2 = std::stoi(s2, &p2);
    if (p1 != s1.size() || p2 != s2.size()) throw std::invalid_argument(text);
    return {m1, m2};
  } catch (const std::logic_error&) {
    throw ConfigError("degree \"" + text + "\" must look like m1,m2");
  }
}

/// "m1,m2=value" entries into a degree -> scalar map.
std::map<Degree, Scalar> parse_assignments(const ScalarField& f, const std::vector<std::string>& items) {
  std::map<Degree, Scalar> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("expected m1,m2=value, got \"" + item + "\"");
    out[parse_degree(item.substr(0, eq))] = f.parse(item.substr(eq + 1));
  }
  return out;
}

int interior_of(const RunConfig& cfg) {
  const int m = cfg.interior >= 0 ? cfg.interior : std::max(1, cfg.window - 2);
  if (m < 1 || m >= cfg.window)
    throw InvalidInterior("interior size " + std::to_string(m) + " must satisfy 1 <= M < N = " +
                          std::to_string(cfg.window));
  return m;
}

int shifts_of(const RunConfig& cfg, const AlgebraSpec& spec) {
  if (cfg.shifts >= 0) return cfg.shifts;
  return spec.is_root() ? spec.t() : 2;
}

Window window_of(const RunConfig& cfg) {
  if (cfg.window < 1) throw ConfigError("window size must be at least 1");
  return Window(cfg.window);
}

nlohmann::json basis_json(const BasisElem& b) {
  return {{"degree", degree_to_json(b.degree)}, {"tag", std::string(1, tag_char(b.tag))}};
}

nlohmann::json config_json(const RunConfig& cfg, const AlgebraSpec& spec) {
  nlohmann::json j{{"algebra", spec.to_json()}, {"window", cfg.window}};
  if (cfg.command == "solve" || cfg.command == "tpa-probe") {
    j["interior"] = interior_of(cfg);
    j["shifts"] = shifts_of(cfg, spec);
  }
  if (cfg.expect_dim) j["expectDim"] = *cfg.expect_dim;
  return j;
}

Report start(const RunConfig& cfg, const AlgebraSpec& spec) {
  Report r;
  r.canonical = {{"tool", "halfder"},
                 {"toolVersion", kToolVersion},
                 {"command", cfg.command},
                 {"config", config_json(cfg, spec)},
                 {"results", nlohmann::json::object()},
                 {"violations", nlohmann::json::array()}};
  return r;
}

void add_violation(Report& r, nlohmann::json v) {
  auto& list = r.canonical["violations"];
  if (list.size() < kMaxWitnesses) list.push_back(std::move(v));
}

void check_expectation(const RunConfig& cfg, Report& r, std::size_t actual) {
  if (!cfg.expect_dim) return;
  const bool match = static_cast<long long>(actual) == *cfg.expect_dim;
  r.canonical["results"]["expectDimMatched"] = match;
  if (!match) r.exit_code = 1;
}

void require_no_expectation(const RunConfig& cfg) {
  if (cfg.expect_dim) throw ConfigError("--expect-dim applies to solve and tpa probe only");
}

LinearMap build_candidate(const RunConfig& cfg, const AlgebraSpec& spec, nlohmann::json& params) {
  const ScalarField& f = spec.field();
  const std::string& name = cfg.candidate;
  if (name == "identity") return identity_map();
  if (name == "thmF") {
    if (spec.variant() != Variant::VirasoroRoot) throw ConfigError("candidate thmF needs --algebra virasoro-root");
    const Degree shift = parse_degree(cfg.shift);
    const Scalar kappa = f.parse(cfg.kappa);
    const Scalar base = f.parse(cfg.center);
    const auto overrides = parse_assignments(f, cfg.center_at);
    params = {{"shift", degree_to_json(shift)}, {"kappa", f.format(kappa)}, {"center", f.format(base)}};
    for (const auto& [d, s] : overrides) params["centerAt"].push_back({{"degree", degree_to_json(d)}, {"value", f.format(s)}});
    return thmF_family(spec.t(), shift, kappa, [base, overrides](Degree d) {
      auto it = overrides.find(d);
      return it == overrides.end() ? base : it->second;
    });
  }
  if (name == "thmH") {
    if (spec.variant() != Variant::TorusRoot) throw ConfigError("candidate thmH needs --algebra torus-root");
    const Scalar a = f.parse(cfg.a), c = f.parse(cfg.c);
    params = {{"a", f.format(a)}, {"c", f.format(c)}};
    return thmH_family(spec.t(), a, c);
  }
  if (name == "torus-generic") {
    if (spec.variant() != Variant::TorusGeneric) throw ConfigError("candidate torus-generic needs --algebra torus-generic");
    const Scalar c = f.parse(cfg.c), d = f.parse(cfg.d);
    params = {{"c", f.format(c)}, {"d", f.format(d)}};
    return torus_generic_family(c, d);
  }
  throw ConfigError("unknown candidate \"" + name + "\" (identity, thmF, thmH, torus-generic)");
}

void report_axioms(Report& r, const ScalarField& f, const AxiomReport& ax) {
  auto& res = r.canonical["results"];
  res["commutative"] = ax.commutativity_ok;
  res["associativityChecked"] = ax.associativity_checked;
  res["associativityViolations"] = ax.associativity_violations.size();
  res["compatibilityChecked"] = ax.compatibility_checked;
  res["compatibilityViolations"] = ax.compatibility_violations.size();
  if (!ax.commutativity_ok) add_violation(r, {{"check", "commutativity"}});
  for (const auto& v : ax.associativity_violations)
    add_violation(r, {{"check", "associativity"},
                      {"x", basis_json(v.x)}, {"y", basis_json(v.y)}, {"z", basis_json(v.z)},
                      {"residual", element_to_json(f, v.residual)}});
  for (const auto& v : ax.compatibility_violations)
    add_violation(r, {{"check", "compatibility"},
                      {"x", basis_json(v.x)}, {"y", basis_json(v.y)}, {"z", basis_json(v.z)},
                      {"residual", element_to_json(f, v.residual)}});
  r.csv = {{"check", "checked", "violations"},
           {"commutativity", "1", ax.commutativity_ok ? "0" : "1"},
           {"associativity", std::to_string(ax.associativity_checked), std::to_string(ax.associativity_violations.size())},
           {"compatibility", std::to_string(ax.compatibility_checked), std::to_string(ax.compatibility_violations.size())}};
  if (!ax.ok()) r.exit_code = 1;
}

void report_thmG(Report& r, const ThmGReport& g) {
  nlohmann::json conds = nlohmann::json::array();
  for (const auto& c : g.conditions) {
    conds.push_back({{"name", c.name}, {"checked", c.checked}, {"violations", c.violations.size()}});
    for (const auto& v : c.violations) add_violation(r, {{"check", c.name}, {"witness", v}});
    r.csv.push_back({c.name, std::to_string(c.checked), std::to_string(c.violations.size())});
  }
  r.canonical["results"]["productConditions"] = conds;
  if (!g.ok()) r.exit_code = 1;
}

}  // namespace

AlgebraSpec make_spec(const RunConfig& cfg) {
  if (cfg.algebra.empty()) throw ConfigError("--algebra is required");
  const Variant v = parse_variant(cfg.algebra);
  if (v == Variant::VirasoroRoot || v == Variant::TorusRoot) return AlgebraSpec(v, ScalarField::cyclotomic(cfg.t));
  return AlgebraSpec(v, ScalarField::generic(parse_rational(cfg.q)));
}

Report cmd_jacobi(const RunConfig& cfg) {
  require_no_expectation(cfg);
  const AlgebraSpec spec = make_spec(cfg);
  Report r = start(cfg, spec);
  const JacobiReport jr = jacobi_check(spec, window_of(cfg));
  auto& res = r.canonical["results"];
  res["pairsChecked"] = jr.pairs_checked;
  res["triplesChecked"] = jr.triples_checked;
  res["antisymmetryViolations"] = jr.antisymmetry_violations.size();
  res["jacobiViolations"] = jr.jacobi_violations.size();
  for (const auto& v : jr.antisymmetry_violations)
    add_violation(r, {{"check", "antisymmetry"}, {"a", basis_json(v.a)}, {"b", basis_json(v.b)},
                      {"residual", element_to_json(spec.field(), v.residual)}});
  for (const auto& v : jr.jacobi_violations)
    add_violation(r, {{"check", "jacobi"}, {"a", basis_json(v.a)}, {"b", basis_json(v.b)}, {"c", basis_json(v.c)},
                      {"residual", element_to_json(spec.field(), v.residual)}});
  r.csv = {{"check", "checked", "violations"},
           {"antisymmetry", std::to_string(jr.pairs_checked), std::to_string(jr.antisymmetry_violations.size())},
           {"jacobi", std::to_string(jr.triples_checked), std::to_string(jr.jacobi_violations.size())}};
  if (!jr.ok()) r.exit_code = 1;
  return r;
}

Report cmd_solve(const RunConfig& cfg) {
  const AlgebraSpec spec = make_spec(cfg);
  const Window w = window_of(cfg);
  const int m = interior_of(cfg);
  const int bound = shifts_of(cfg, spec);
  Report r = start(cfg, spec);

  std::vector<Degree> shifts;
  for (int a = -bound; a <= bound; ++a)
    for (int b = -bound; b <= bound; ++b) shifts.push_back({a, b});

  nlohmann::json per_shift = nlohmann::json::array();
  std::size_t total_interior = 0;
  r.csv = {{"shift1", "shift2", "fullDim", "interiorDim"}};
  if (!cfg.emit_basis) {
    for (const auto& [s, dims] : shift_sweep(spec, w, bound, m)) {
      per_shift.push_back({{"shift", degree_to_json(s)}, {"fullDim", dims.full_dim}, {"interiorDim", dims.interior_dim}});
      total_interior += dims.interior_dim;
      r.csv.push_back({std::to_string(s.m1), std::to_string(s.m2), std::to_string(dims.full_dim),
                       std::to_string(dims.interior_dim)});
    }
  } else {
    for (Degree s : shifts) {
      UnknownLayout layout(spec, w, s);
      const NullspaceBasis nb = solve_kernel(spec, w, layout);
      const std::size_t idim = nb.dim() ? interior_dimension(nb, layout, m) : 0;
      nlohmann::json vecs = nlohmann::json::array();
      for (const auto& v : nb.vectors) {
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& [col, x] : v)
          terms.push_back({{"source", basis_json(layout.entry(col).source)},
                           {"target", basis_json(layout.target_of(col))},
                           {"coeff", spec.field().format(x)}});
        vecs.push_back(std::move(terms));
      }
      per_shift.push_back({{"shift", degree_to_json(s)}, {"fullDim", nb.dim()}, {"interiorDim", idim}, {"basis", vecs}});
      total_interior += idim;
      r.csv.push_back({std::to_string(s.m1), std::to_string(s.m2), std::to_string(nb.dim()), std::to_string(idim)});
    }
  }
  r.canonical["results"]["shifts"] = per_shift;
  r.canonical["results"]["interiorDimTotal"] = total_interior;
  check_expectation(cfg, r, total_interior);
  return r;
}

Report cmd_verify(const RunConfig& cfg) {
  require_no_expectation(cfg);
  const AlgebraSpec spec = make_spec(cfg);
  const Window w = window_of(cfg);
  if (cfg.candidate.empty()) throw ConfigError("--candidate is required");
  Report r = start(cfg, spec);
  nlohmann::json params = nlohmann::json::object();
  const LinearMap phi = build_candidate(cfg, spec, params);
  r.canonical["config"]["candidate"] = {{"name", cfg.candidate}, {"params", params}};
  const CandidateReport cr = verify_candidate(spec, w, phi);
  r.canonical["results"]["constraintsChecked"] = cr.constraints_checked;
  r.canonical["results"]["violations"] = cr.violations.size();
  for (const auto& v : cr.violations)
    add_violation(r, {{"a", basis_json(v.a)}, {"b", basis_json(v.b)},
                      {"residual", element_to_json(spec.field(), v.residual)}});
  r.csv = {{"candidate", "constraintsChecked", "violations"},
           {cfg.candidate, std::to_string(cr.constraints_checked), std::to_string(cr.violations.size())}};
  if (!cr.ok()) r.exit_code = 1;
  return r;
}

Report cmd_relations(const RunConfig& cfg) {
  require_no_expectation(cfg);
  const AlgebraSpec spec = make_spec(cfg);
  Report r = start(cfg, spec);
  nlohmann::json rels = nlohmann::json::array();
  r.csv = {{"relation", "holds"}};
  bool all = true;
  for (const auto& rel : lemma41_relations(spec)) {
    rels.push_back({{"relation", rel.name},
                    {"lhs", element_to_json(spec.field(), rel.lhs)},
                    {"rhs", element_to_json(spec.field(), rel.rhs)},
                    {"holds", rel.holds}});
    r.csv.push_back({rel.name, rel.holds ? "true" : "false"});
    if (!rel.holds) {
      all = false;
      add_violation(r, {{"relation", rel.name}});
    }
  }
  r.canonical["results"]["relations"] = rels;
  if (!all) r.exit_code = 1;
  return r;
}

Report cmd_tpa(const RunConfig& cfg) {
  const AlgebraSpec spec = make_spec(cfg);
  const Window w = window_of(cfg);
  const ScalarField& f = spec.field();

  if (cfg.command == "tpa-verify") {
    require_no_expectation(cfg);
    if (cfg.product.empty()) throw ConfigError("--product is required");
    std::ifstream in(cfg.product);
    if (!in) throw ConfigError("cannot read product file " + cfg.product);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("product file is not valid JSON: ") + e.what());
    }
    const ProductTable p = ProductTable::from_json(spec, j);
    Report r = start(cfg, spec);
    r.canonical["results"]["entries"] = p.entries().size();
    report_axioms(r, f, verify_axioms(spec, w, p));
    if (spec.variant() == Variant::VirasoroRoot) report_thmG(r, thmG_check(spec, w, p));
    return r;
  }

  if (cfg.command == "tpa-example") {
    require_no_expectation(cfg);
    CenterFunctional tau;
    tau.coeffs = cfg.tau.empty() ? std::map<Degree, Scalar>{{{3, 0}, Scalar(1)}} : parse_assignments(f, cfg.tau);
    const Degree v = parse_degree(cfg.v);
    const ProductTable p = rank_one_center_product(spec, tau, v);
    Report r = start(cfg, spec);
    nlohmann::json tj = nlohmann::json::array();
    for (const auto& [d, s] : tau.coeffs) tj.push_back({{"degree", degree_to_json(d)}, {"value", f.format(s)}});
    r.canonical["config"]["tau"] = tj;
    r.canonical["config"]["v"] = degree_to_json(v);
    r.canonical["results"]["product"] = p.to_json(f);
    report_axioms(r, f, verify_axioms(spec, w, p));
    report_thmG(r, thmG_check(spec, w, p));
    return r;
  }

  if (cfg.command == "tpa-probe") {
    const int m = interior_of(cfg);
    ProbeOptions opts;
    opts.shift_bound = shifts_of(cfg, spec);
    const ProbeResult pr = triviality_probe(spec, w, m, opts);
    Report r = start(cfg, spec);
    auto& res = r.canonical["results"];
    res["fullDim"] = pr.full_dim;
    res["interiorDim"] = pr.interior_dim;
    res["nonzeroInteriorProduct"] = pr.interior_dim > 0;
    nlohmann::json per = nlohmann::json::array();
    r.csv = {{"shift1", "shift2", "fullDim", "interiorDim"}};
    for (const auto& [s, d] : pr.per_shift) {
      per.push_back({{"shift", degree_to_json(s)}, {"fullDim", d.full_dim}, {"interiorDim", d.interior_dim}});
      r.csv.push_back({std::to_string(s.m1), std::to_string(s.m2), std::to_string(d.full_dim),
                       std::to_string(d.interior_dim)});
    }
    res["shifts"] = per;
    res["associativityFailures"] = pr.associativity_failures.size();
    res["gamma2InteriorNonzero"] = pr.gamma2_nonzero.size();
    for (std::size_t k : pr.gamma2_nonzero)
      add_violation(r, {{"check", "gamma2-gamma2 product nonzero"}, {"basisIndex", k},
                        {"shift", degree_to_json(pr.basis_shift[k])}});
    if (cfg.emit_basis) {
      nlohmann::json tables = nlohmann::json::array();
      for (std::size_t k = 0; k < pr.basis.size(); ++k)
        tables.push_back({{"shift", degree_to_json(pr.basis_shift[k])}, {"product", pr.basis[k].to_json(f)}});
      res["basis"] = tables;
    }
    check_expectation(cfg, r, pr.interior_dim);
    return r;
  }
  throw ConfigError("unknown tpa subcommand " + cfg.command);
}

Report run(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  Report r;
  if (cfg.command == "jacobi")
    r = cmd_jacobi(cfg);
  else if (cfg.command == "solve")
    r = cmd_solve(cfg);
  else if (cfg.command == "verify")
    r = cmd_verify(cfg);
  else if (cfg.command == "relations")
    r = cmd_relations(cfg);
  else if (cfg.command.rfind("tpa-", 0) == 0)
    r = cmd_tpa(cfg);
  else
    throw ConfigError("unknown command \"" + cfg.command + "\"");
  r.wall_clock_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  r.canonical["results"]["pass"] = r.exit_code == 0;
  return r;
}

std::string canonical_dump(const Report& r) { return r.canonical.dump(2) + "\n"; }

std::string render(const Report& r, const std::string& format) {
  if (format == "csv") {
    std::ostringstream os;
    for (const auto& row : r.csv) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        const bool quote = row[i].find_first_of(",\"") != std::string::npos;
        if (i) os << ',';
        if (quote) {
          os << '"';
          for (char ch : row[i]) os << (ch == '"' ? "\"\"" : std::string(1, ch));
          os << '"';
        } else {
          os << row[i];
        }
      }
      os << '\n';
    }
    return os.str();
  }
  nlohmann::json full = r.canonical;
  full["timing"] = {{"wallClockMs", static_cast<long long>(r.wall_clock_ms)}};
  return full.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

namespace {

void add_common(CLI::App* sub, RunConfig& cfg, bool dims) {
  sub->add_option("--algebra", cfg.algebra, "virasoro-generic | virasoro-root | torus-generic | torus-root")->required();
  sub->add_option("--q", cfg.q, "rational q0 for generic variants");
  sub->add_option("--t", cfg.t, "root-of-unity order for root variants");
  sub->add_option("--window", cfg.window, "window size N");
  sub->add_option("--format", cfg.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--out", cfg.out, "write the report here instead of stdout");
  if (dims) {
    sub->add_option("--interior", cfg.interior, "interior subwindow M (default N - 2)");
    sub->add_option("--shifts", cfg.shifts, "shift bound (default t or 2)");
    sub->add_option("--expect-dim", cfg.expect_dim, "exit 1 unless the interior dimension equals this");
    sub->add_flag("--basis", cfg.emit_basis, "include solution bases in the report");
  }
}

std::string one_line(std::string s) {
  for (char& ch : s)
    if (ch == '\n' || ch == '\r') ch = ' ';
  return s;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Exact 1/2-derivations and transposed Poisson structures on Z^2-graded Lie algebras", "halfder"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  auto* jacobi = app.add_subcommand("jacobi", "check antisymmetry and the Jacobi identity on a window");
  add_common(jacobi, cfg, false);
  auto* solve = app.add_subcommand("solve", "per-shift 1/2-derivation dimensions");
  add_common(solve, cfg, true);
  auto* verify = app.add_subcommand("verify", "check a closed-form candidate map");
  add_common(verify, cfg, false);
  verify->add_option("--candidate", cfg.candidate, "identity | thmF | thmH | torus-generic")->required();
  verify->add_option("--a", cfg.a);
  verify->add_option("--c", cfg.c);
  verify->add_option("--d", cfg.d);
  verify->add_option("--kappa", cfg.kappa);
  verify->add_option("--shift", cfg.shift, "m1,m2");
  verify->add_option("--center", cfg.center, "value on every Gamma1 degree");
  verify->add_option("--center-at", cfg.center_at, "m1,m2=value override (repeatable)");
  auto* relations = app.add_subcommand("relations", "relations of the generic quantum-torus Lie algebra");
  add_common(relations, cfg, false);

  auto* tpa = app.add_subcommand("tpa", "transposed Poisson structures");
  tpa->require_subcommand(1);
  auto* tverify = tpa->add_subcommand("verify", "check a product table read from JSON");
  add_common(tverify, cfg, false);
  tverify->add_option("--product", cfg.product, "product table JSON file")->required();
  auto* texample = tpa->add_subcommand("example", "rank-one center product L_a.L_b = tau(a)tau(b)L_v");
  add_common(texample, cfg, false);
  texample->add_option("--tau", cfg.tau, "m1,m2=value (repeatable; default 3,0=1)");
  texample->add_option("--v", cfg.v, "m1,m2");
  auto* tprobe = tpa->add_subcommand("probe", "all compatible products by linear solving");
  add_common(tprobe, cfg, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "halfder: error: " << one_line(e.what()) << '\n';
    return 2;
  }

  if (jacobi->parsed()) cfg.command = "jacobi";
  else if (solve->parsed()) cfg.command = "solve";
  else if (verify->parsed()) cfg.command = "verify";
  else if (relations->parsed()) cfg.command = "relations";
  else if (tverify->parsed()) cfg.command = "tpa-verify";
  else if (texample->parsed()) cfg.command = "tpa-example";
  else cfg.command = "tpa-probe";

  Report r;
  try {
    r = run(cfg);
  } catch (const Error& e) {
    err << "halfder: error: " << one_line(e.what()) << '\n';
    return 2;
  }

  const std::string text = render(r, cfg.format);
  if (cfg.out.empty()) {
    out << text;
  } else {
    std::ofstream f(cfg.out);
    if (!f) {
      err << "halfder: error: cannot write " << cfg.out << '\n';
      return 2;
    }
    f << text;
  }
  return r.exit_code;
}

}  // namespace halfder
