#include "cli.hpp"

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "closedexact/closedexact.hpp"

namespace closedexact::cli {
namespace {

struct VerificationFailure {};

std::string num(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::string point_text(const LatticePoint& z) {
  std::ostringstream os;
  os << z;
  return os.str();
}

std::ifstream open_input(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw ParseError(std::string("cannot read ") + what + " file '" + path + "'");
  return in;
}

/// A readable file wins; otherwise the file stem (".field" dropped) may name a built-in field.
std::pair<VectorField, std::string> load_field(const std::string& name_or_path) {
  if (name_or_path.empty()) throw PreconditionError("--field is required");
  std::filesystem::path p(name_or_path);
  if (std::filesystem::is_regular_file(p)) {
    auto in = open_input(name_or_path, "field");
    return {read_vector_field(in), p.stem().string()};
  }
  std::string name = p.filename().string();
  if (p.extension() == ".field") name = p.stem().string();
  if (auto f = builtin_field<double>(name)) return {*f, name};
  throw ParseError("no field file or built-in field named '" + name_or_path + "'");
}

CoefficientField load_coeffs(const std::string& path) {
  auto in = open_input(path, "coefficient");
  return read_coefficient_field(in);
}

std::string expansion_text(const HermiteExpansion& e) {
  std::string s;
  for (const auto& [I, c] : e.terms()) s += (s.empty() ? "" : ";") + to_text(I) + "@" + num(c);
  return s.empty() ? "0" : s;
}

// ---- subcommands ----------------------------------------------------------

void cmd_orbits(const RunConfig& cfg, std::ostream& os, bool machine) {
  const auto pts = enumerate_orbits(cfg.degree.value(), cfg.bound.value());
  for (const auto& z : pts) os << (machine ? "point=" : "") << point_text(z) << '\n';
  os << (machine ? "count=" : "count: ") << pts.size() << '\n';
}

void cmd_region(const RunConfig& cfg, std::ostream& os, bool machine) {
  const auto r = region_P(cfg.truncate.value(), cfg.degree.value());
  if (!machine) {
    write_region(os, r);
    return;
  }
  os << "N=" << r.dim() << " kind=P i=" << r.index() << " count=" << r.size() << '\n';
  for (const auto& z : r.points()) os << "point=" << point_text(z) << '\n';
}

void cmd_check_closed(const RunConfig& cfg, std::ostream& os, bool machine) {
  auto [field, name] = load_field(cfg.field);
  if (!cfg.coeffs.empty()) {
    auto xi = load_coeffs(cfg.coeffs);
    if (cfg.window) xi = xi.with_window(*cfg.window);
    const auto rep = is_closed_coeffs(field, xi, cfg.tol.value_or(1e-9));
    if (machine) {
      os << "field=" << name << '\n'
         << "closed=" << (rep.closed() ? "true" : "false") << '\n'
         << "relations_checked=" << rep.relations_checked << '\n'
         << "window=" << rep.window << '\n'
         << "violations=" << rep.violations.size() << '\n';
      for (const auto& v : rep.violations)
        os << "violation n=" << v.n << " I=" << to_text(v.I) << " lhs=" << num(v.lhs) << " rhs=" << num(v.rhs)
           << '\n';
    } else {
      os << "field: " << name << '\n'
         << "relations checked: " << rep.relations_checked << " (window " << rep.window << ", shifts "
         << rep.n_min << ".." << rep.n_max << ")\n"
         << "closed: " << (rep.closed() ? "yes" : "no") << '\n';
      for (const auto& v : rep.violations)
        os << "  violation at n=" << v.n << ", I=" << to_text(v.I) << ": " << num(v.lhs) << " != " << num(v.rhs)
           << '\n';
    }
    if (!rep.closed()) throw VerificationFailure{};
    return;
  }
  if (cfg.expansion.empty()) throw PreconditionError("check-closed needs --coeffs or --expansion");
  auto in = open_input(cfg.expansion, "expansion");
  const auto e = read_expansion(in);
  const int range = cfg.range.value_or(sufficient_range(field, e));
  const auto rep = is_closed_symbolic(field, e, range, cfg.tol.value_or(1e-12));
  if (machine) {
    os << "field=" << name << '\n'
       << "closed=" << (rep.closed ? "true" : "false") << '\n'
       << "range=" << rep.range << '\n'
       << "pairs_checked=" << rep.pairs_checked << '\n'
       << "violations=" << rep.violations.size() << '\n';
    for (const auto& v : rep.violations)
      os << "violation n=" << v.n << " m=" << v.m << " difference=" << expansion_text(v.difference) << '\n';
  } else {
    os << "field: " << name << '\n'
       << "pairs checked: " << rep.pairs_checked << " (|n|, |m| <= " << rep.range << ")\n"
       << "closed: " << (rep.closed ? "yes" : "no") << '\n';
    for (const auto& v : rep.violations)
      os << "  D_" << v.n << "(tau^" << v.m << " xi) - D_" << v.m << "(tau^" << v.n
         << " xi) = " << expansion_text(v.difference) << '\n';
  }
  if (!rep.closed) throw VerificationFailure{};
}

void cmd_gen_exact(const RunConfig& cfg, std::ostream& os, bool machine) {
  auto [field, name] = load_field(cfg.field);
  auto in = open_input(cfg.orbit_fn, "orbit function");
  const auto c = read_orbit_function(in);
  if (c.degree() == 0) {
    const double v = c(LatticePoint{}) * gen_exact_degree0(field);
    os << (machine ? "constant=" : "constant: ") << num(v) << '\n';
    return;
  }
  const auto xi = gen_exact(field, c, cfg.window);
  const auto sym = gen_exact_symbolic(field, c);
  bool agree = true;
  for (const auto& [I, v] : sym.terms())
    if (std::abs(xi.value(I) - v) > 1e-12) agree = false;
  for (const auto& [z, v] : xi.values())
    if (std::abs(sym.coefficient(decode(z)) - v) > 1e-12) agree = false;
  if (machine) {
    os << "degree=" << xi.degree() << '\n' << "window=" << xi.window() << '\n';
    for (const auto& [z, v] : xi.values()) os << "coefficient point=" << point_text(z) << " value=" << num(v) << '\n';
    os << "crosscheck=" << (agree ? "ok" : "mismatch") << '\n';
  } else {
    write_coefficient_field(os, xi);
    os << "# symbolic cross-check: " << (agree ? "ok" : "MISMATCH") << '\n';
  }
  if (!agree) throw VerificationFailure{};
}

std::string complex_text(std::complex<double> z) {
  double re = std::abs(z.real()) < 1e-12 ? 0.0 : z.real();
  double im = std::abs(z.imag()) < 1e-12 ? 0.0 : z.imag();
  if (im == 0.0) return num(re);
  std::string s = re == 0.0 ? "" : num(re);
  s += (im < 0 ? "-" : (s.empty() ? "" : "+")) + num(std::abs(im)) + "i";
  return s;
}

void cmd_roots(const RunConfig& cfg, std::ostream& os, bool machine) {
  auto [field, name] = load_field(cfg.field);
  const auto roots = unit_circle_roots(field, cfg.tol.value_or(1e-9));
  if (machine) {
    os << "field=" << name << '\n' << "count=" << roots.size() << '\n';
    for (const auto& r : roots) {
      auto z = std::polar(1.0, r.phase);
      os << "root phase=" << num(r.phase) << " multiplicity=" << r.multiplicity << " re=" << num(z.real())
         << " im=" << num(z.imag()) << '\n';
    }
    return;
  }
  os << "field: " << name << '\n' << "unit-circle roots of p:\n";
  if (roots.empty()) os << "none\n";
  for (const auto& r : roots)
    os << complex_text(std::polar(1.0, r.phase)) << " (multiplicity " << r.multiplicity << ")  phase=" << num(r.phase)
       << '\n';
}

std::vector<ScheduleStage> parse_schedule(const std::string& text, int N) {
  if (text.empty() || text == "default") return default_schedule(N);
  std::vector<ScheduleStage> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    ScheduleStage s;
    char c1 = 0, c2 = 0;
    std::istringstream ss(item);
    std::string rest;
    if (!(ss >> s.n_mask >> c1 >> s.grid >> c2 >> s.i_trunc) || c1 != ':' || c2 != ':' || (ss >> rest))
      throw ParseError("schedule stage '" + item + "' is not n:M:i");
    out.push_back(s);
  }
  if (out.empty()) throw ParseError("empty schedule");
  return out;
}

void cmd_approximate(const RunConfig& cfg, std::ostream& os, bool machine) {
  auto [field, name] = load_field(cfg.field);
  const auto xi = load_coeffs(cfg.coeffs);
  std::vector<ScheduleStage> schedule;
  if (cfg.mask || cfg.grid || cfg.truncate) {
    if (!cfg.schedule.empty()) throw PreconditionError("use either --schedule or --mask/--grid/--truncate");
    if (!cfg.mask || !cfg.grid || !cfg.truncate)
      throw PreconditionError("--mask, --grid and --truncate must be given together");
    schedule.push_back({*cfg.mask, *cfg.grid, *cfg.truncate});
  } else {
    schedule = parse_schedule(cfg.schedule, xi.degree());
  }
  const auto stages = approximate_exact_sequence(field, xi, schedule);
  bool decreasing = true;
  for (std::size_t s = 1; s < stages.size(); ++s)
    if (!(stages[s].residual < stages[s - 1].residual)) decreasing = false;

  if (machine) {
    os << "field=" << name << '\n';
    for (std::size_t s = 0; s < stages.size(); ++s) {
      const auto& st = stages[s];
      os << "stage index=" << s + 1 << " n_mask=" << st.stage.n_mask << " grid=" << st.stage.grid
         << " i_trunc=" << st.stage.i_trunc << " residual_l2=" << num(st.residual)
         << " mask_fraction=" << num(st.diagnostics.mask_fraction)
         << " spectral_residual=" << num(st.diagnostics.spectral_residual)
         << " torus_residual=" << num(st.diagnostics.torus_residual)
         << " invariance_defect=" << num(st.diagnostics.invariance_defect) << '\n';
    }
    os << "decreasing=" << (decreasing ? "true" : "false") << '\n';
  } else {
    os << "field: " << name << '\n';
    os << std::left << std::setw(6) << "stage" << std::setw(8) << "n_mask" << std::setw(8) << "M" << std::setw(7)
       << "i" << std::setw(20) << "residual_l2" << std::setw(16) << "mask_fraction" << std::setw(20)
       << "spectral_residual" << "invariance_defect\n";
    for (std::size_t s = 0; s < stages.size(); ++s) {
      const auto& st = stages[s];
      os << std::setw(6) << s + 1 << std::setw(8) << st.stage.n_mask << std::setw(8) << st.stage.grid
         << std::setw(7) << st.stage.i_trunc << std::setw(20) << num(st.residual) << std::setw(16)
         << num(st.diagnostics.mask_fraction) << std::setw(20) << num(st.diagnostics.spectral_residual)
         << num(st.diagnostics.invariance_defect) << '\n';
    }
    if (stages.size() > 1) os << "residuals strictly decreasing: " << (decreasing ? "yes" : "no") << '\n';
  }
  if (!decreasing) throw VerificationFailure{};
}

void cmd_graph(const RunConfig& cfg, std::ostream& os, bool machine) {
  auto g = build(cfg.degree.value(), cfg.bound.value());
  const bool weighted = !cfg.coeffs.empty();
  if (weighted) g = assign_weights(g, load_coeffs(cfg.coeffs));
  const bool bijective = edge_bijection_check(g, cfg.window.value_or(g.bound));
  bool ok = bijective;
  if (machine) {
    for (const auto& e : g.edges) {
      os << "edge src=" << point_text(e.src) << " dst=" << point_text(e.dst) << " label=" << to_text(e.label);
      if (e.weight) os << " weight=" << num(*e.weight);
      os << '\n';
    }
  } else {
    write_graph(os, g);
  }
  os << "vertices=" << g.vertices.size() << '\n' << "edges=" << g.edges.size() << '\n';
  os << "bijection=" << (bijective ? "true" : "false") << '\n';
  if (weighted) {
    const auto rep = cycle_check(g, cfg.tol.value_or(1e-9));
    os << "component=" << rep.components << '\n'
       << "cycles_checked=" << rep.cycles_checked << '\n'
       << "max_abs_cycle_sum=" << num(rep.max_abs_cycle_sum) << '\n'
       << "ok=" << (rep.ok ? "true" : "false") << '\n';
    if (!rep.ok) {
      os << "worst_sum=" << num(rep.worst_sum) << '\n' << "worst_cycle=";
      for (std::size_t i = 0; i < rep.worst_cycle.size(); ++i)
        os << (i ? "->" : "") << point_text(rep.worst_cycle[i]);
      os << '\n';
    }
    ok = ok && rep.ok;
  } else {
    os << "component=" << component_count(g) << '\n';
  }
  if (!ok) throw VerificationFailure{};
}

// ---- validate ---------------------------------------------------------------

struct SuiteResult {
  std::string name;
  bool pass;
  std::string detail;
};

std::vector<SuiteResult> run_suites(const std::vector<std::pair<VectorField, std::string>>& fields, int max_degree) {
  std::vector<SuiteResult> out;
  std::mt19937 rng(20240611);

  {
    bool pass = true;
    for (int N = 2; N <= std::max(2, max_degree); ++N) pass = pass && verify_group_relations(N, 500).ok();
    out.push_back({"group-relations", pass, "2<=N<=" + std::to_string(std::max(2, max_degree))});
  }
  {
    double worst = 0;
    const std::vector<MultiIndex> basis{MultiIndex{},         MultiIndex::delta(0),    MultiIndex::delta(1, 2),
                                        MultiIndex::delta(0, 3), parse_multiindex("0:1,1:1"),
                                        parse_multiindex("0:2,2:2")};
    for (const auto& I : basis)
      for (const auto& J : basis) {
        double expect = 0;
        if (I == J) {
          expect = 1;
          for (auto [s, k] : I.entries()) expect /= factorial(k);
        }
        worst = std::max(worst, std::abs(inner_product(HermiteExpansion(I), HermiteExpansion(J)) - expect));
      }
    out.push_back({"hermite-orthogonality", worst <= 1e-10, "max_dev=" + num(worst)});
  }
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::uniform_int_distribution<int> coord(-3, 3);
  for (const auto& [field, name] : fields) {
    double dft = 0, adj = 0;
    for (int N = 1; N <= 2; ++N) {
      LatticeFunction c(N), d(N);
      for (int t = 0; t < 12; ++t) {
        std::vector<int> z(static_cast<std::size_t>(N)), w(static_cast<std::size_t>(N));
        for (auto& x : z) x = coord(rng);
        for (auto& x : w) x = coord(rng);
        c.add(LatticePoint(z), val(rng));
        d.add(LatticePoint(w), val(rng));
      }
      dft = std::max(dft, dft_diagonalization_check(field, c, N == 1 ? 64 : 32));
      adj = std::max(adj, std::abs(inner(apply_T(field, c), d) - inner(c, adjoint_T(field, d))));
    }
    out.push_back({"dft-diagonalization[" + name + "]", dft <= 1e-10, "max_dev=" + num(dft)});
    out.push_back({"adjointness[" + name + "]", adj <= 1e-12, "max_dev=" + num(adj)});

    std::size_t violations = 0, mismatches = 0;
    for (int t = 0; t < 40; ++t) {
      const int N = 1 + t % 2;
      OrbitFunction c(N);
      std::uniform_int_distribution<int> cone(0, 3);
      for (int s = 0; s < 3; ++s) {
        std::vector<int> z(static_cast<std::size_t>(N));
        for (auto& x : z) x = cone(rng);
        c.set(sorted(LatticePoint(z)), val(rng));
      }
      const auto xi = gen_exact(field, c);
      const int W = sufficient_window(field, xi.support_radius());
      violations += is_closed_coeffs(field, xi.with_window(W), 1e-12).violations.size();
      const auto sym = expansion_to_coeffs(gen_exact_symbolic(field, c), N, W);
      for (const auto& z : enumerate_sorted_points(N, -W, W))
        if (std::abs(sym.value_or_zero(z) - xi.value_or_zero(z)) > 1e-12) ++mismatches;
    }
    out.push_back({"exact-is-closed[" + name + "]", violations == 0, "violations=" + std::to_string(violations)});
    out.push_back({"construction-equivalence[" + name + "]", mismatches == 0,
                   "mismatches=" + std::to_string(mismatches)});
  }
  {
    bool pass = true;
    for (int N = 0; N <= std::max(2, max_degree); ++N) {
      auto g = build(N, 4);
      pass = pass && component_count(g) == 1 && edge_bijection_check(g, 3);
    }
    out.push_back({"orbit-graph", pass, "bound=4"});
  }
  return out;
}

void cmd_validate(const RunConfig& cfg, std::ostream& os, bool machine) {
  std::vector<std::pair<VectorField, std::string>> fields;
  if (!cfg.field.empty()) {
    fields.push_back(load_field(cfg.field));
  } else {
    for (const auto& n : builtin_field_names()) fields.emplace_back(*builtin_field<double>(n), n);
  }
  const int max_degree = cfg.degree.value_or(3);
  if (max_degree < 1 || max_degree > 5) throw PreconditionError("validate supports --degree 1..5");
  const auto results = run_suites(fields, max_degree);
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    if (machine)
      os << "suite=" << r.name << " status=" << (r.pass ? "pass" : "fail") << ' ' << r.detail << '\n';
    else
      os << (r.pass ? "PASS " : "FAIL ") << r.name << "  (" << r.detail << ")\n";
  }
  if (!all) throw VerificationFailure{};
}

void dispatch(const RunConfig& cfg, std::ostream& os) {
  const bool machine = cfg.emit == "machine";
  if (cfg.emit != "human" && cfg.emit != "machine") throw ParseError("--emit must be human or machine");
  const std::string& s = cfg.subcommand;
  if (s == "orbits") return cmd_orbits(cfg, os, machine);
  if (s == "region") return cmd_region(cfg, os, machine);
  if (s == "check-closed") return cmd_check_closed(cfg, os, machine);
  if (s == "gen-exact") return cmd_gen_exact(cfg, os, machine);
  if (s == "roots") return cmd_roots(cfg, os, machine);
  if (s == "approximate") return cmd_approximate(cfg, os, machine);
  if (s == "graph") return cmd_graph(cfg, os, machine);
  if (s == "validate") return cmd_validate(cfg, os, machine);
  throw ParseError("unknown subcommand '" + s + "'");
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::ostringstream report;
  int status = kOk;
  try {
    dispatch(config, report);
  } catch (const VerificationFailure&) {
    status = kVerificationFailed;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParseError;
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << '\n';
    return kPreconditionFailed;
  } catch (const std::bad_optional_access&) {
    err << "precondition failed: missing required option\n";
    return kPreconditionFailed;
  }
  if (config.out.empty()) {
    out << report.str();
  } else {
    std::ofstream file(config.out);
    if (!file) {
      err << "precondition failed: cannot write '" << config.out << "'\n";
      return kPreconditionFailed;
    }
    file << report.str();
  }
  return status;
}

}  // namespace closedexact::cli
