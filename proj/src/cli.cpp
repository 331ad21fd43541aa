#include "antilinear/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

#include "antilinear/antidiagonal.hpp"
#include "antilinear/antilinear.hpp"
#include "antilinear/error.hpp"
#include "antilinear/expr.hpp"
#include "antilinear/kernels.hpp"
#include "antilinear/picard.hpp"
#include "antilinear/reductions.hpp"
#include "antilinear/verify.hpp"

namespace antilinear::cli {

namespace {

constexpr cplx kI{0.0, 1.0};

void append_number(std::string& out, double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  out.append(buf, r.ptr);
}

std::string shortest(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void append_row(std::string& out, const Trajectory& t, std::size_t j) {
  append_number(out, t.grid().node_x(j));
  for (std::size_t c = 0; c < t.components(); ++c) {
    const cplx z = t.node(c, j);
    out += ',';
    append_number(out, z.real());
    out += ',';
    append_number(out, z.imag());
  }
  out += '\n';
}

std::string csv_header(std::size_t components) {
  return components == 1 ? "x,re_u1,im_u1" : "x,re_u1,im_u1,re_u2,im_u2";
}

bool has_variable(const expr::Node& n) {
  return std::visit(
      [](const auto& k) -> bool {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, expr::Variable>) return true;
        else if constexpr (std::is_same_v<T, expr::Negate>) return has_variable(*k.operand);
        else if constexpr (std::is_same_v<T, expr::Binary>) return has_variable(*k.lhs) || has_variable(*k.rhs);
        else if constexpr (std::is_same_v<T, expr::Call>) return has_variable(*k.arg);
        else return false;
      },
      n.kind);
}

// Parse failures are reported with the offending flag.
expr::Expression parse_flag(const std::string& flag, const std::string& text) {
  try {
    return expr::parse(text);
  } catch (const ParseError& e) {
    throw InputError("--" + flag + " \"" + text + "\": " + e.what());
  }
}

cplx constant_value(const std::string& flag, const std::string& text) {
  const expr::Expression e = parse_flag(flag, text);
  if (has_variable(e.root())) throw InputError("--" + flag + " must be a constant (it may not depend on x)");
  return e.evaluate(0.0);
}

struct Common {
  double x0 = 1.0;
  std::size_t steps = 1000;
  std::string method = "integrator";
  int order = 15;
  double tol = 1e-16;
  std::string output;
  std::string plot;
  std::string config;
  std::string isa = "auto";
  bool emit_intermediates = false;
  bool fd_derivatives = false;

  Grid grid() const {
    if (steps < 2) throw InputError("--steps must be >= 2");
    return Grid(x0, steps);
  }
  antidiagonal::PairMethod pair_method() const {
    if (method == "integrator") return antidiagonal::PairMethod::integrator;
    if (method == "series") return antidiagonal::PairMethod::series;
    throw InputError("--method must be 'integrator' or 'series'");
  }
  picard::SeriesOptions series() const { return {order, tol}; }
};

// Everything a command produces; written only after the whole computation succeeded.
struct Outcome {
  std::string csv;
  std::vector<std::pair<std::string, std::string>> extra_files;
  std::vector<std::string> notes;
};

class Values {
 public:
  std::string& operator[](const std::string& key) { return values_[key]; }
  const std::string& get(const std::string& key) const { return values_.at(key); }

 private:
  std::map<std::string, std::string> values_;
};

CoefficientFunction coefficient(const std::string& flag, const std::string& text, const std::string& dflag,
                                const std::string& dtext) {
  const expr::Expression value = parse_flag(flag, text);
  if (dtext.empty()) return expr::to_coefficient(value);
  return expr::to_coefficient(value, parse_flag(dflag, dtext));
}

std::string sibling(const std::string& output, std::string_view tag) {
  const std::filesystem::path p(output);
  std::filesystem::path out = p;
  out.replace_filename(p.stem().string() + "." + std::string(tag) + (p.has_extension() ? p.extension().string() : ".csv"));
  return out.string();
}

void note_warnings(Outcome& o, const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) o.notes.push_back("warning: " + w);
}

Outcome solve_antilinear_cmd(const Common& c, Values& v) {
  const Grid grid = c.grid();
  const std::string sign_text = v.get("sign");
  Sign sign;
  if (sign_text == "1" || sign_text == "+1" || sign_text == "+" || sign_text == "plus") sign = Sign::plus;
  else if (sign_text == "-1" || sign_text == "-" || sign_text == "minus") sign = Sign::minus;
  else throw InputError("--sign must be +1 or -1");

  const CoefficientFunction f = expr::to_coefficient(parse_flag("f", v.get("f")));
  std::optional<CoefficientFunction> g;
  if (!v.get("g").empty()) g = expr::to_coefficient(parse_flag("g", v.get("g")));
  const cplx u0 = constant_value("u0", v.get("u0"));
  AntilinearProblem problem = AntilinearProblem::sample(f, g, u0, grid);

  Outcome o;
  if (c.pair_method() == antidiagonal::PairMethod::series) {
    if (g) {
      o.notes.push_back("warning: the series route is homogeneous only; used the integrator");
    } else {
      const Trajectory fs = map(problem.f, [sign](cplx z) { return static_cast<double>(sign) * z; });
      const picard::SeriesKernels k = picard::series_kernels(fs, c.series());
      if (k.slow_convergence) o.notes.push_back("warning: int |f| > 3, series converges slowly");
      Trajectory u(grid, 1);
      for (std::size_t i = 0; i < u.size(); ++i) u[i] = k.c_f[i] * u0 + k.s_f[i] * std::conj(u0);
      o.csv = format_csv(u);
      return o;
    }
  }
  o.csv = format_csv(solve_antilinear(problem, sign));
  return o;
}

Outcome solve_system_cmd(const Common& c, Values& v) {
  const Grid grid = c.grid();
  const auto tab = [&](const char* name) { return expr::to_coefficient(parse_flag(name, v.get(name))).sample(grid, name); };
  const antidiagonal::GeneralSystem system{tab("p"), tab("q"), tab("r"), tab("s"),
                                           {constant_value("u10", v.get("u10")), constant_value("u20", v.get("u20"))}};
  Outcome o;
  const antidiagonal::StrongCheck strong = antidiagonal::check_strong_condition(system);
  if (strong.holds) {
    o.notes.push_back("route: strong condition (explicit cosh/sinh solution)");
    o.csv = format_csv(antidiagonal::solve_strong_explicit(system, *strong.c1));
    return o;
  }
  const antidiagonal::WeakCheck weak = antidiagonal::check_weak_condition(system);
  if (weak.holds) {
    o.notes.push_back("route: weak condition (antidiagonal conjugate form)");
    const antidiagonal::DiagonalRemoval rd = antidiagonal::remove_diagonal(system);
    const antidiagonal::FundamentalPair pair =
        antidiagonal::fundamental_pair(weak.antilinear_form->f, c.pair_method(), c.series());
    note_warnings(o, pair.warnings);
    o.notes.push_back("determinant drift: " + shortest(pair.determinant_drift));
    o.csv = format_csv(antidiagonal::restore_diagonal(rd, antidiagonal::apply_pair(pair, system.u0)));
    return o;
  }
  o.notes.push_back("route: general system (neither condition holds; strong deviation " +
                    shortest(strong.max_deviation) + ", weak deviation " + shortest(weak.max_deviation) +
                    "), reference integrator");
  o.csv = format_csv(antidiagonal::solve_general_reference(system));
  return o;
}

const std::map<reductions::Context, std::set<std::string>>& context_flags() {
  using reductions::Context;
  static const std::map<Context, std::set<std::string>> flags{
      {Context::schrodinger, {"a", "da", "u0", "u1"}},
      {Context::helmholtz, {"alpha", "dalpha", "beta", "dbeta", "source", "u0", "u1"}},
      {Context::zakharov_shabat, {"q", "xi", "v10", "v20"}},
      {Context::kubelka_munk, {"K", "S", "Fp0", "Fm0"}},
  };
  return flags;
}

reductions::ReducedProblem build_reduction(reductions::Context ctx, const Common& c, Values& v, const Grid& grid) {
  using namespace reductions;
  const auto required = [&](const std::string& flag) -> const std::string& {
    const std::string& s = v.get(flag);
    if (s.empty()) throw InputError("--" + flag + " is required for context " + std::string(context_name(ctx)));
    return s;
  };
  const auto value_or = [&](const std::string& flag, const char* fallback) {
    const std::string& s = v.get(flag);
    return constant_value(flag, s.empty() ? fallback : s);
  };
  switch (ctx) {
    case Context::schrodinger:
      return reduce_schrodinger({coefficient("a", required("a"), "da", v.get("da")), value_or("u0", "0"),
                                 value_or("u1", "0"), grid, c.fd_derivatives});
    case Context::helmholtz:
      return reduce_helmholtz({coefficient("alpha", required("alpha"), "dalpha", v.get("dalpha")),
                               coefficient("beta", required("beta"), "dbeta", v.get("dbeta")),
                               coefficient("source", v.get("source").empty() ? "0" : v.get("source"), "", ""),
                               value_or("u0", "0"), value_or("u1", "0"), grid, c.fd_derivatives});
    case Context::zakharov_shabat: {
      const cplx xi = constant_value("xi", required("xi"));
      if (xi.imag() != 0.0) throw InputError("--xi must be real");
      return reduce_zakharov_shabat({coefficient("q", required("q"), "", ""), xi.real(),
                                     {value_or("v10", "1"), value_or("v20", "0")}, grid});
    }
    case Context::kubelka_munk:
      return reduce_kubelka_munk({coefficient("K", required("K"), "", ""), coefficient("S", required("S"), "", ""),
                                  {value_or("Fp0", "1"), value_or("Fm0", "0")}, grid});
  }
  throw InputError("unknown context");
}

Outcome reduce_cmd(const Common& c, Values& v, const CLI::App& sub) {
  const std::optional<reductions::Context> ctx = reductions::parse_context(v.get("context"));
  if (!ctx)
    throw InputError("--context must be one of schrodinger, helmholtz, zakharov-shabat, kubelka-munk");
  for (const auto& [other, flags] : context_flags()) {
    if (other == *ctx) continue;
    for (const std::string& flag : flags)
      if (!context_flags().at(*ctx).count(flag) && sub.count("--" + flag) > 0)
        throw InputError("--" + flag + " does not apply to context " + std::string(reductions::context_name(*ctx)));
  }
  if (c.emit_intermediates && c.output.empty()) throw InputError("--emit-intermediates needs --output");

  const Grid grid = c.grid();
  const reductions::ReducedProblem rp = build_reduction(*ctx, c, v, grid);
  reductions::SolveOptions options;
  options.method = c.pair_method();
  options.series = c.series();
  options.keep_intermediates = c.emit_intermediates;
  const reductions::ReducedSolution s = reductions::solve_reduced(rp, options);

  Outcome o;
  o.csv = format_csv(s.physical);
  const reductions::Diagnostics& d = s.diagnostics;
  if (!std::isnan(d.determinant_drift)) o.notes.push_back("determinant drift: " + shortest(d.determinant_drift));
  if (!std::isnan(d.compatibility_residual))
    o.notes.push_back("compatibility residual: " + shortest(d.compatibility_residual));
  if (!std::isnan(d.consistency_residual))
    o.notes.push_back("consistency residual: " + shortest(d.consistency_residual));
  if (d.derivative_source == reductions::DerivativeSource::finite_difference)
    o.notes.push_back("derivatives: finite differences");
  note_warnings(o, d.warnings);
  if (s.intermediates) {
    o.extra_files.emplace_back(sibling(c.output, "W"), format_csv(s.intermediates->w));
    o.extra_files.emplace_back(sibling(c.output, "V"), format_csv(s.intermediates->v));
    o.extra_files.emplace_back(sibling(c.output, "U"), format_csv(s.intermediates->u));
  }
  return o;
}

Outcome series_cmd(const Common& c, Values& v) {
  const Grid grid = c.grid();
  const Trajectory f = expr::to_coefficient(parse_flag("f", v.get("f"))).sample(grid, "f");
  const picard::SeriesKernels k = picard::series_kernels(f, c.series());
  Trajectory pair(grid, 2);
  for (std::size_t i = 0; i < f.size(); ++i) {
    pair.at(0, i) = k.c_f[i];
    pair.at(1, i) = k.s_f[i];
  }
  Outcome o;
  o.csv = format_csv(pair);
  o.notes.push_back("columns: u1 = C_f, u2 = S_f");
  o.notes.push_back("order: " + std::to_string(k.order) +
                    (k.stopped_by == picard::StopReason::tolerance ? " (tolerance reached)" : " (order cap)"));
  o.notes.push_back("last term sup-norm: " + shortest(k.last_term_norm));
  o.notes.push_back("int |f|: " + shortest(picard::coefficient_mass(f)));
  if (k.slow_convergence) o.notes.push_back("warning: int |f| > 3, series converges slowly");
  return o;
}

Outcome sweep_cmd(const Common& c, Values& v, double xi_min, double xi_max, std::size_t xi_count) {
  if (xi_count < 1) throw InputError("--xi-count must be >= 1");
  if (!std::isfinite(xi_min) || !std::isfinite(xi_max)) throw InputError("--xi-min/--xi-max must be finite");
  if (!c.plot.empty()) throw InputError("--plot is not supported for sweep-xi");
  const Grid grid = c.grid();
  const Vec2 v0{constant_value("v10", v.get("v10")), constant_value("v20", v.get("v20"))};

  std::vector<double> xis(xi_count);
  std::vector<reductions::ReducedProblem> problems;
  for (std::size_t k = 0; k < xi_count; ++k) {
    xis[k] = xi_count == 1 ? xi_min
                           : xi_min + (xi_max - xi_min) * static_cast<double>(k) / static_cast<double>(xi_count - 1);
    const std::string q = substitute_xi(v.get("q"), xis[k]);
    problems.push_back(reductions::reduce_zakharov_shabat({expr::to_coefficient(parse_flag("q", q)), xis[k], v0, grid}));
  }
  reductions::SolveOptions options;
  options.method = c.pair_method();
  options.series = c.series();
  const std::vector<reductions::ReducedSolution> solutions = reductions::solve_reduced_batch(problems, options);

  Outcome o;
  o.csv = "xi," + csv_header(2) + "\n";
  for (std::size_t k = 0; k < xi_count; ++k) {
    for (std::size_t j = 0; j < grid.node_count(); ++j) {
      append_number(o.csv, xis[k]);
      o.csv += ',';
      append_row(o.csv, solutions[k].physical, j);
    }
    note_warnings(o, solutions[k].diagnostics.warnings);
  }
  return o;
}

std::vector<std::string> config_arguments(const std::string& path, const std::string& command) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read config file " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("config file " + path + ": " + e.what());
  }
  if (!j.is_object()) throw InputError("config file must hold a JSON object");
  std::vector<std::string> args;
  for (const auto& [key, value] : j.items()) {
    if (key == "command") {
      if (!value.is_string() || value.get<std::string>() != command)
        throw InputError("config file is for command '" + value.dump() + "', not '" + command + "'");
      continue;
    }
    if (key == "config") throw InputError("config files cannot nest");
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back("--" + key);
    } else if (value.is_string()) {
      args.push_back("--" + key);
      args.push_back(value.get<std::string>());
    } else if (value.is_number_integer()) {
      args.push_back("--" + key);
      args.push_back(std::to_string(value.get<long long>()));
    } else if (value.is_number()) {
      args.push_back("--" + key);
      args.push_back(shortest(value.get<double>()));
    } else {
      throw InputError("config key '" + key + "' must be a string, number or boolean");
    }
  }
  return args;
}

// Config values go in front of the command-line flags; with take-last semantics the flags win.
std::vector<std::string> merge_config(const std::vector<std::string>& args) {
  if (args.empty()) return args;
  std::optional<std::string> path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (!path) return args;
  std::vector<std::string> merged{args.front()};
  const std::vector<std::string> extra = config_arguments(*path, args.front());
  merged.insert(merged.end(), extra.begin(), extra.end());
  merged.insert(merged.end(), args.begin() + 1, args.end());
  return merged;
}

void add_common(CLI::App& sub, Common& c) {
  sub.add_option("--x0", c.x0, "Interval end (solves on [0, x0])")->capture_default_str();
  sub.add_option("--steps", c.steps, "Number of steps n (>= 2)")->capture_default_str();
  sub.add_option("--method", c.method, "integrator | series")->capture_default_str();
  sub.add_option("--order", c.order, "Series order cap")->capture_default_str();
  sub.add_option("--tol", c.tol, "Series term tolerance")->capture_default_str();
  sub.add_option("--output", c.output, "CSV path (stdout when omitted)");
  sub.add_option("--plot", c.plot, "Also write a gnuplot script for the CSV");
  sub.add_option("--config", c.config, "JSON file whose keys are long flag names");
  sub.add_option("--isa", c.isa, "Kernel selection: auto | scalar | avx2")->capture_default_str();
  sub.add_flag("--emit-intermediates", c.emit_intermediates, "Write the W, V, U trajectories next to --output");
  sub.add_flag("--fd-derivatives", c.fd_derivatives, "Allow finite-difference coefficient derivatives");
}

void apply_isa(const std::string& isa) {
  if (isa == "auto") return kernels::force_isa(std::nullopt);
  for (kernels::Isa i : {kernels::Isa::scalar, kernels::Isa::avx2}) {
    if (isa == kernels::isa_name(i)) {
      if (!kernels::isa_supported(i)) throw InputError("--isa " + isa + " is not supported on this machine");
      return kernels::force_isa(i);
    }
  }
  throw InputError("--isa must be auto, scalar or avx2");
}

}  // namespace

std::string format_csv(const Trajectory& t) {
  t.require_finite("output trajectory");
  std::string out = csv_header(t.components()) + "\n";
  out.reserve(out.size() + t.grid().node_count() * 24 * (1 + 2 * t.components()));
  for (std::size_t j = 0; j < t.grid().node_count(); ++j) append_row(out, t, j);
  return out;
}

std::string format_plot_script(std::string_view csv_path, std::string_view csv_header) {
  std::vector<std::string> columns;
  std::stringstream ss{std::string(csv_header)};
  for (std::string col; std::getline(ss, col, ',');) {
    if (!col.empty() && col.back() == '\r') col.pop_back();
    columns.push_back(col);
  }
  std::size_t x_col = 0;
  while (x_col < columns.size() && columns[x_col] != "x") ++x_col;
  if (x_col == columns.size()) throw InputError("CSV header has no x column");

  std::string path;
  for (char ch : csv_path) {
    if (ch == '\'') path += "''";
    else path += ch;
  }
  std::string out = "set datafile separator ','\nset key outside\nset xlabel 'x'\nset grid\n";
  std::vector<std::string> curves;
  for (std::size_t col = x_col + 1; col + 1 < columns.size(); col += 2) {
    const std::string name = columns[col].substr(columns[col].rfind('_') + 1);
    const std::string x = std::to_string(x_col + 1), re = std::to_string(col + 1), im = std::to_string(col + 2);
    curves.push_back("'" + path + "' every ::1 using " + x + ":" + re + " with lines title 'Re " + name + "'");
    curves.push_back("'" + path + "' every ::1 using " + x + ":" + im + " with lines title 'Im " + name + "'");
    curves.push_back("'" + path + "' every ::1 using " + x + ":(sqrt($" + re + "**2 + $" + im +
                     "**2)) with lines title '|" + name + "|'");
  }
  if (curves.empty()) throw InputError("CSV header has no data columns");
  out += "plot ";
  for (std::size_t i = 0; i < curves.size(); ++i) out += (i ? ", \\\n     " : "") + curves[i];
  out += "\n";
  return out;
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot open " + path.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw InputError("failed writing " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw InputError("cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

void emit_csv(const Trajectory& t, const std::filesystem::path& path) { write_file(path, format_csv(t)); }

void emit_plot_script(const std::string& csv_path, const std::filesystem::path& out) {
  std::ifstream in(csv_path);
  std::string header;
  if (!in || !std::getline(in, header)) throw InputError("cannot read CSV header from " + csv_path);
  write_file(out, format_plot_script(csv_path, header));
}

std::string substitute_xi(std::string_view text, double xi) {
  const auto ident = [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; };
  std::string value = "(";
  append_number(value, xi);
  value += ")";
  std::string out;
  for (std::size_t i = 0; i < text.size();) {
    if (text.compare(i, 2, "xi") == 0 && (i == 0 || !ident(text[i - 1])) &&
        (i + 2 >= text.size() || !ident(text[i + 2]))) {
      out += value;
      i += 2;
    } else {
      out += text[i++];
    }
  }
  return out;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  Common c;
  Values v;
  std::string suite = "all";
  double xi_min = -2.0, xi_max = 2.0;
  std::size_t xi_count = 41;

  CLI::App app{"Antilinear ODE solver: u' = f conj(u) + g and its reductions"};
  app.name("antilinear");
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  CLI::App* solve = app.add_subcommand("solve-antilinear", "Solve u' = f conj(u) (+ g)");
  add_common(*solve, c);
  solve->add_option("--f", v["f"], "Coefficient f(x)")->required();
  solve->add_option("--g", v["g"], "Forcing g(x)");
  solve->add_option("--u0", v["u0"] = "1", "Initial value");
  solve->add_option("--sign", v["sign"] = "1", "Solve with +f or -f");

  CLI::App* system = app.add_subcommand("solve-system", "Solve U' = [[p, r], [s, q]] U");
  add_common(*system, c);
  for (const char* name : {"p", "q", "r", "s"})
    system->add_option(std::string("--") + name, v[name] = "0", std::string("Matrix entry ") + name + "(x)");
  system->add_option("--u10", v["u10"] = "1", "U1(0)");
  system->add_option("--u20", v["u20"] = "0", "U2(0)");

  CLI::App* reduce = app.add_subcommand("reduce", "Solve a physical system through its antidiagonal reduction");
  add_common(*reduce, c);
  reduce->add_option("--context", v["context"], "schrodinger | helmholtz | zakharov-shabat | kubelka-munk")->required();
  const std::pair<const char*, const char*> reduce_flags[] = {
      {"a", "Schrodinger: a(x) > 0"},         {"da", "Schrodinger: a'(x)"},
      {"alpha", "Helmholtz: alpha(x) > 0"},   {"dalpha", "Helmholtz: alpha'(x)"},
      {"beta", "Helmholtz: beta(x) > 0"},     {"dbeta", "Helmholtz: beta'(x)"},
      {"source", "Helmholtz: source(x)"},     {"u0", "u(0)"},
      {"u1", "u'(0)"},                        {"q", "Zakharov-Shabat: q(x)"},
      {"xi", "Zakharov-Shabat: xi"},          {"v10", "Zakharov-Shabat: v1(0)"},
      {"v20", "Zakharov-Shabat: v2(0)"},      {"K", "Kubelka-Munk: absorption K(x) >= 0"},
      {"S", "Kubelka-Munk: scattering S(x) >= 0"}, {"Fp0", "Kubelka-Munk: F+(0)"},
      {"Fm0", "Kubelka-Munk: F-(0)"}};
  for (const auto& [name, help] : reduce_flags)
    reduce->add_option(std::string("--") + name, v[std::string("r:") + name], help);

  CLI::App* series = app.add_subcommand("series", "Picard-series kernels C_f, S_f");
  add_common(*series, c);
  series->add_option("--f", v["f"], "Coefficient f(x)")->required();

  CLI::App* verify = app.add_subcommand("verify", "Run the built-in invariant suites");
  verify->add_option("--suite", suite, "all | antilinear | picard | antidiagonal | reductions")->capture_default_str();
  verify->add_option("--isa", c.isa, "Kernel selection: auto | scalar | avx2")->capture_default_str();

  CLI::App* sweep = app.add_subcommand("sweep-xi", "Zakharov-Shabat solutions over a range of xi");
  add_common(*sweep, c);
  sweep->add_option("--q", v["q"], "Potential q(x); may mention xi")->required();
  sweep->add_option("--xi-min", xi_min, "Smallest xi")->capture_default_str();
  sweep->add_option("--xi-max", xi_max, "Largest xi")->capture_default_str();
  sweep->add_option("--xi-count", xi_count, "Number of evenly spaced xi values")->capture_default_str();
  sweep->add_option("--v10", v["v10"] = "1", "v1(0)");
  sweep->add_option("--v20", v["v20"] = "0", "v2(0)");

  try {
    std::vector<std::string> args = merge_config(raw_args);
    std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    apply_isa(c.isa);
    if (verify->parsed()) {
      const std::vector<verify::CheckResult> results = verify::run_suite(suite);
      out << verify::format_table(results);
      const bool all = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
      out << (all ? "all checks passed\n" : "some checks FAILED\n");
      return all ? 0 : 2;
    }

    Outcome o;
    if (solve->parsed()) {
      o = solve_antilinear_cmd(c, v);
    } else if (system->parsed()) {
      o = solve_system_cmd(c, v);
    } else if (reduce->parsed()) {
      Values rv;
      rv["context"] = v.get("context");
      for (const auto& [ctx, flags] : context_flags())
        for (const std::string& flag : flags) rv[flag] = v[std::string("r:") + flag];
      o = reduce_cmd(c, rv, *reduce);
    } else if (series->parsed()) {
      o = series_cmd(c, v);
    } else {
      o = sweep_cmd(c, v, xi_min, xi_max, xi_count);
    }

    if (c.emit_intermediates && o.extra_files.empty())
      o.notes.push_back("note: --emit-intermediates only applies to reduce");
    if (!c.plot.empty() && c.output.empty()) throw InputError("--plot needs --output (the script references the CSV)");

    for (const std::string& n : o.notes) err << "# " << n << "\n";
    if (c.output.empty()) {
      out << o.csv;
    } else {
      write_file(c.output, o.csv);
      for (const auto& [path, contents] : o.extra_files) write_file(path, contents);
      if (!c.plot.empty()) write_file(c.plot, format_plot_script(c.output, o.csv.substr(0, o.csv.find('\n'))));
    }
    return 0;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace antilinear::cli
