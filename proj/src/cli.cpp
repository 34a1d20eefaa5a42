#include "sphera/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

#include <unistd.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "sphera/kernels.hpp"

namespace sphera::cli {

using nlohmann::json;

namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Outcome {
  json result;
  Table table;
  bool converged = true;
  bool verify_failed = false;
  std::function<void(std::ostream&)> csv;  // overrides the generic CSV rendering
};

struct Options {
  // setup
  int k = 2;
  double R = 1.0;
  double r = 0.5;
  // output and tolerances
  std::string format = "table";
  std::string out;
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  long max_evals = 10'000'000;
  // exponent
  double xi = 1.0;
  double zeta = 0.0;
  int deriv = 0;
  // omega
  std::string x, y;
  double theta = kUnset;
  // integrate
  std::string integrand = "omega";
  // verify
  std::string identity = "suite";
  std::string suite = "default";
  double b = 1.0;
  int m = 0;
  double p_re = 0.5, p_im = 0.3;
  double trig_a = 3.0, trig_b = 1.0;
  // solve
  double nu = kUnset;
  // trace
  double a = kUnset, seed_b = kUnset;
  double step = 0.05;
  // taylor
  int M = 8;
  double eval_xi = kUnset, eval_zeta = 0.0;
  // signmap
  double xi_min = -1.0, xi_max = 3.0, zeta_min = kUnset, zeta_max = kUnset;
  int n_xi = 9, n_zeta = 9;
  // limits
  std::string variant = "tangent_sphere";
  double delta = 1.0;
  std::string side = "away";
  double gamma0 = kPi / 4;
  int samples = 40;
  // picard
  double beta_re = 1.0, beta_im = 0.0, rho = 40.0;
  int starts = 16;
  // replay
  std::string replay_file;
};

std::string fmt(double v) { return format_double(v); }
std::string fmt(long v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }

json complex_json(std::complex<double> z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json extended_json(const ExtendedReal& e) {
  if (e.is_finite()) return e.value();
  return {{"finite", false}, {"sign", e.sign()}};
}

std::string extended_text(const ExtendedReal& e) {
  return e.is_finite() ? fmt(e.value()) : (e.sign() > 0 ? "inf" : "-inf");
}

json quad_json(const QuadResult& q) {
  return {{"value", complex_json(q.value)},
          {"abs_error", q.abs_error},
          {"abs_error_re", q.abs_error_re},
          {"abs_error_im", q.abs_error_im},
          {"evals", q.evals},
          {"converged", q.converged}};
}

json setup_json(const SphereSetup& s) {
  return {{"k", s.k()},
          {"R", s.R()},
          {"r", s.r()},
          {"upsilon", s.upsilon()},
          {"strip_halfwidth", extended_json(s.strip_halfwidth())},
          {"sigma_km1", s.sigma_km1()},
          {"sigma_k", s.sigma_k()}};
}

Table key_values(const std::vector<std::pair<std::string, std::string>>& kv) {
  Table t{{"quantity", "value"}, {}};
  for (const auto& [k, v] : kv) t.rows.push_back({k, v});
  return t;
}

Point parse_point(const std::string& text) {
  Point p;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    const char* first = item.data();
    const char* last = item.data() + item.size();
    while (first < last && *first == ' ') ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) throw CLI::ValidationError("point", "cannot parse '" + text + "'");
    p.push_back(v);
  }
  return p;
}

QuadConfig quad_config(const Options& o) {
  QuadConfig c;
  c.abs_tol = o.abs_tol;
  c.rel_tol = o.rel_tol;
  c.max_evals = o.max_evals;
  c.validate();
  return c;
}

SphereSetup setup_of(const Options& o) { return SphereSetup::make(o.k, o.R, o.r); }

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

Outcome cmd_omega(const Options& o) {
  Outcome res;
  if (!o.x.empty() || !o.y.empty()) {
    if (o.x.empty() || o.y.empty()) throw DomainError("omega: give both --x and --y");
    const auto b = ratio_from_points(parse_point(o.x), parse_point(o.y));
    res.result = {{"x", b.x},           {"y", b.y}, {"x_star", b.x_star}, {"y_star", b.y_star},
                  {"l", b.l},           {"q", b.q}, {"omega", b.omega}};
    res.table = key_values({{"l", fmt(b.l)}, {"q", fmt(b.q)}, {"omega", fmt(b.omega)}});
    return res;
  }
  if (std::isnan(o.theta)) throw DomainError("omega: give --x and --y, or --theta");
  const auto s = setup_of(o);
  const double w = omega_theta(s, o.theta);
  res.result = {{"setup", setup_json(s)}, {"theta", o.theta}, {"omega", w}};
  res.table = key_values({{"theta", fmt(o.theta)}, {"upsilon", fmt(s.upsilon())}, {"omega", fmt(w)}});
  return res;
}

Outcome cmd_integrate(const Options& o) {
  const auto s = setup_of(o);
  const auto cfg = quad_config(o);
  const ComplexExponent alpha{o.xi, o.zeta};
  QuadResult q;
  if (o.integrand == "area") {
    q = integrate_sphere(s, [](double) { return 1.0; }, cfg);
  } else if (o.integrand == "omega") {
    q = integrate_sphere(s, [](double w) { return w; }, cfg);
  } else if (o.integrand == "power") {
    q = F_derivative(s, alpha, 0, cfg);
  } else {
    q = integrate_distance_power(s, alpha, cfg);
  }
  Outcome res;
  res.converged = q.converged;
  res.result = {{"setup", setup_json(s)}, {"integrand", o.integrand}, {"quad", quad_json(q)}};
  res.table = key_values({{"re", fmt(q.real())},
                          {"im", fmt(q.imag())},
                          {"abs_error", fmt(q.abs_error)},
                          {"evals", fmt(q.evals)},
                          {"converged", fmt(q.converged)}});
  return res;
}

Outcome cmd_f(const Options& o) {
  const auto s = setup_of(o);
  const auto cfg = quad_config(o);
  const auto q = F_derivative(s, {o.xi, o.zeta}, o.deriv, cfg);
  Outcome res;
  res.converged = q.converged;
  res.result = {{"setup", setup_json(s)},
                {"alpha", complex_json({o.xi, o.zeta})},
                {"derivative", o.deriv},
                {"W", q.real()},
                {"I", q.imag()},
                {"W_error", q.abs_error_re},
                {"I_error", q.abs_error_im},
                {"evals", q.evals},
                {"converged", q.converged}};
  res.table = Table{{"xi", "zeta", "n", "W", "I", "W_error", "I_error", "evals", "converged"},
                    {{fmt(o.xi), fmt(o.zeta), fmt(o.deriv), fmt(q.real()), fmt(q.imag()),
                      fmt(q.abs_error_re), fmt(q.abs_error_im), fmt(q.evals), fmt(q.converged)}}};
  return res;
}

json report_json(const VerificationReport& r) {
  json params = json::object();
  for (const auto& [k, v] : r.parameters) params[k] = v;
  return {{"identity", r.identity},
          {"parameters", params},
          {"lhs", complex_json(r.lhs)},
          {"rhs", complex_json(r.rhs)},
          {"residual_abs", r.residual_abs},
          {"residual_rel", r.residual_rel},
          {"tolerance", r.tolerance},
          {"pass", r.pass},
          {"inconclusive", r.inconclusive},
          {"quad_error", r.quad_error},
          {"evals", r.evals}};
}

Outcome cmd_verify(const Options& o) {
  const auto cfg = quad_config(o);
  std::vector<VerificationReport> reports;
  if (o.identity == "k1_trig") {
    reports.push_back(verify_k1_trig({o.p_re, o.p_im}, o.trig_a, o.trig_b, cfg));
  } else {
    const auto s = setup_of(o);
    if (o.identity == "suite") {
      if (o.suite != "default") throw DomainError("verify: unknown suite '" + o.suite + "'");
      reports = default_suite(s, cfg);
    } else if (o.identity == "reflection") {
      reports.push_back(verify_reflection(s, {o.xi, o.zeta}, cfg));
    } else if (o.identity == "imag_vanishing") {
      reports.push_back(verify_imag_vanishing(s, o.b, o.m, cfg));
    } else if (o.identity == "distance") {
      reports.push_back(verify_distance_identity(s, {o.xi, o.zeta}, cfg));
    } else {
      reports.push_back(closed_form_k2(s, o.b, cfg));
    }
  }
  Outcome res;
  res.result = {{"reports", json::array()}, {"all_pass", true}};
  res.table.header = {"identity", "pass", "residual_abs", "tolerance", "lhs_re", "lhs_im", "rhs_re", "rhs_im"};
  for (const auto& r : reports) {
    res.result["reports"].push_back(report_json(r));
    res.table.rows.push_back({r.identity, r.inconclusive ? "inconclusive" : fmt(r.pass), fmt(r.residual_abs),
                              fmt(r.tolerance), fmt(r.lhs.real()), fmt(r.lhs.imag()), fmt(r.rhs.real()),
                              fmt(r.rhs.imag())});
    if (r.inconclusive) res.converged = false;
    if (!r.pass && !r.inconclusive) res.verify_failed = true;
  }
  res.result["all_pass"] = res.converged && !res.verify_failed;
  return res;
}

Outcome cmd_solve(const Options& o) {
  if (std::isnan(o.nu)) throw DomainError("solve: --nu is required");
  const auto s = setup_of(o);
  const auto cfg = quad_config(o);
  const auto roots = solve_real(s, o.nu, cfg);
  Outcome res;
  res.result = {{"setup", setup_json(s)},   {"nu", o.nu},
                {"roots", roots.roots},     {"F_min", roots.F_min},
                {"double_root", roots.double_root}, {"iterations", roots.iterations}};
  res.table.header = {"root"};
  for (double x : roots.roots) res.table.rows.push_back({fmt(x)});
  return res;
}

Outcome cmd_trace(const Options& o) {
  if (std::isnan(o.a) || std::isnan(o.seed_b)) throw DomainError("trace: --a and --b are required");
  const auto s = setup_of(o);
  const auto cfg = quad_config(o);
  TraceOptions topt;
  topt.step = o.step;
  const auto curve = trace_level_curve(s, o.a, o.seed_b, topt, cfg);
  const auto prof = imag_along_curve(curve, s, cfg);
  Outcome res;
  res.converged = curve.ok;
  json pts = json::array();
  for (const auto& p : curve.points)
    pts.push_back({{"t", p.t}, {"v", p.v}, {"W_residual", p.W_residual}, {"I", p.I}});
  res.result = {{"setup", setup_json(s)},
                {"level", curve.level},
                {"seed", {curve.seed_a, curve.seed_b}},
                {"start", {curve.a0, curve.b0}},
                {"end", {curve.a1, curve.p}},
                {"degenerate", curve.degenerate},
                {"ok", curve.ok},
                {"failure", curve.failure},
                {"points", pts},
                {"I_strictly_increasing", prof.strictly_increasing},
                {"I_min_increment", prof.min_increment},
                {"uniqueness", prof.uniqueness}};
  res.table.header = {"t", "v", "W_residual", "I"};
  for (const auto& p : curve.points)
    res.table.rows.push_back({fmt(p.t), fmt(p.v), fmt(p.W_residual), fmt(p.I)});
  res.csv = [curve](std::ostream& os) { emit_curve_csv(curve, os); };
  return res;
}

Outcome cmd_taylor(const Options& o) {
  const auto s = setup_of(o);
  const auto cfg = quad_config(o);
  const auto series = taylor(s, o.M, cfg);
  Outcome res;
  res.result = {{"setup", setup_json(s)}, {"center", series.center}, {"M", series.M},
                {"coeffs", series.coeffs}, {"errors", series.errors}};
  res.table.header = {"power", "coeff", "error"};
  for (std::size_t m = 0; m < series.coeffs.size(); ++m)
    res.table.rows.push_back({fmt(static_cast<int>(2 * m)), fmt(series.coeffs[m]), fmt(series.errors[m])});
  if (!std::isnan(o.eval_xi)) {
    const ComplexExponent alpha{o.eval_xi, o.eval_zeta};
    const auto approx = series(alpha.value());
    const auto direct = evaluate_F(s, alpha, cfg);
    res.converged = direct.quad.converged;
    res.result["evaluation"] = {{"alpha", complex_json(alpha.value())},
                                {"series", complex_json(approx)},
                                {"direct", complex_json(direct.value())},
                                {"rel_diff", std::abs(approx - direct.value()) / std::abs(direct.value())}};
  }
  return res;
}

Outcome cmd_signmap(const Options& o) {
  const auto s = setup_of(o);
  const auto cfg = quad_config(o);
  const auto strip = s.strip_halfwidth();
  const double p = strip.is_finite() ? strip.value() : 1.0;
  GridSpec g{o.xi_min, o.xi_max, o.n_xi, std::isnan(o.zeta_min) ? -p : o.zeta_min,
             std::isnan(o.zeta_max) ? p : o.zeta_max, o.n_zeta};
  const auto grid = sign_map_I(s, g, cfg);
  Outcome res;
  json nodes = json::array();
  res.table.header = {"xi", "zeta", "W", "I", "I_error", "sign"};
  for (std::size_t iz = 0; iz < grid.zeta.size(); ++iz) {
    for (std::size_t ix = 0; ix < grid.xi.size(); ++ix) {
      const std::size_t i = iz * grid.xi.size() + ix;
      nodes.push_back({{"xi", grid.xi[ix]}, {"zeta", grid.zeta[iz]}, {"W", grid.W[i]},
                       {"I", grid.I[i]}, {"I_error", grid.I_error[i]}, {"sign", grid.sign[i]}});
      res.table.rows.push_back({fmt(grid.xi[ix]), fmt(grid.zeta[iz]), fmt(grid.W[i]), fmt(grid.I[i]),
                                fmt(grid.I_error[i]), fmt(grid.sign[i])});
    }
  }
  res.result = {{"setup", setup_json(s)},
                {"grid", {{"xi_min", g.xi_min}, {"xi_max", g.xi_max}, {"n_xi", g.n_xi},
                          {"zeta_min", g.zeta_min}, {"zeta_max", g.zeta_max}, {"n_zeta", g.n_zeta}}},
                {"nodes", nodes}};
  return res;
}

Outcome cmd_limits(const Options& o) {
  const auto s = setup_of(o);
  PathSpec spec;
  spec.y = Point(static_cast<std::size_t>(o.k + 1), 0.0);
  spec.y[0] = o.R;
  spec.samples = o.samples;
  const TangentSide side = o.side == "toward" ? TangentSide::toward_origin : TangentSide::away_from_origin;
  if (o.variant == "on_sphere") {
    spec.variant = path::OnSphere{};
  } else if (o.variant == "tangent_plane") {
    spec.variant = path::TangentPlane{};
  } else if (o.variant == "tangent_sphere") {
    spec.variant = path::TangentSphere{o.delta, side};
  } else {
    spec.variant = path::StraightLine{o.gamma0};
  }
  const auto lim = path_limit(spec, s);
  Outcome res;
  json samples = json::array();
  res.table.header = {"s", "omega", "l", "q"};
  for (const auto& p : lim.samples) {
    samples.push_back({{"s", p.s}, {"omega", p.omega}, {"l", p.l}, {"q", p.q}});
    res.table.rows.push_back({fmt(p.s), fmt(p.omega), fmt(p.l), fmt(p.q)});
  }
  res.result = {{"variant", o.variant},
                {"y", spec.y},
                {"limit", extended_json(lim.limit)},
                {"monotone_tail", lim.monotone_tail},
                {"samples", samples}};
  if (o.variant == "tangent_sphere") {
    const double level = tangent_sphere_level(s, o.delta, side);
    const auto pts = sample_tangent_sphere(spec.y, o.delta, side, 100, 1);
    std::vector<double> w;
    for (const auto& x : pts) w.push_back(ratio_from_points(x, spec.y).omega);
    const double mean = std::accumulate(w.begin(), w.end(), 0.0) / w.size();
    double var = 0.0;
    for (double v : w) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / (w.size() - 1));
    res.result["tangent_sphere"] = {{"level", level}, {"sampled_mean", mean}, {"sampled_std", sd}, {"points", w.size()}};
  }
  res.table.rows.push_back({"limit", extended_text(lim.limit), "", ""});
  return res;
}

Outcome cmd_picard(const Options& o) {
  const auto s = setup_of(o);
  const auto cfg = quad_config(o);
  PicardOptions popt;
  popt.starts = o.starts;
  const auto pr = picard_search(s, {o.beta_re, o.beta_im}, o.rho, popt, cfg);
  Outcome res;
  json roots = json::array();
  res.table.header = {"kind", "xi", "zeta", "residual", "iterations"};
  for (const auto& r : pr.roots) {
    const char* kind = r.kind == RootKind::given ? "given" : r.kind == RootKind::reflected ? "reflected" : "extra";
    roots.push_back({{"alpha", complex_json(r.alpha.value())}, {"residual", r.residual},
                     {"kind", kind}, {"iterations", r.iterations}});
    res.table.rows.push_back({kind, fmt(r.alpha.xi), fmt(r.alpha.zeta), fmt(r.residual), fmt(r.iterations)});
  }
  res.result = {{"setup", setup_json(s)},        {"beta", complex_json(pr.beta.value())},
                {"F_beta", complex_json(pr.F_beta)}, {"rho", pr.rho},
                {"roots", roots},                {"starts_converged", pr.starts_converged},
                {"partial", pr.partial}};
  return res;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

void render_table(const Table& t, std::ostream& os) {
  std::vector<std::size_t> width(t.header.size(), 0);
  for (std::size_t j = 0; j < t.header.size(); ++j) width[j] = t.header[j].size();
  for (const auto& row : t.rows)
    for (std::size_t j = 0; j < row.size() && j < width.size(); ++j) width[j] = std::max(width[j], row[j].size());
  const auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t j = 0; j < cells.size(); ++j) {
      os << std::left << std::setw(static_cast<int>(width[j])) << cells[j];
      if (j + 1 < cells.size()) os << "  ";
    }
    os << '\n';
  };
  line(t.header);
  for (const auto& row : t.rows) line(row);
}

void render_csv(const Table& t, std::ostream& os) {
  const auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t j = 0; j < cells.size(); ++j) os << (j ? "," : "") << cells[j];
    os << '\n';
  };
  line(t.header);
  for (const auto& row : t.rows) line(row);
}

json typed_value(const std::string& s) {
  long iv = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), iv);
  if (r.ec == std::errc() && r.ptr == s.data() + s.size()) return iv;
  double dv = 0.0;
  auto d = std::from_chars(s.data(), s.data() + s.size(), dv);
  if (d.ec == std::errc() && d.ptr == s.data() + s.size() && std::isfinite(dv)) return dv;
  return s;
}

std::string value_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long>());
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  throw DomainError("replay: unsupported input value " + v.dump());
}

json echo_inputs(const CLI::App& sub) {
  json inputs = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "format" || name == "out" || opt->get_positional()) continue;
    const std::string value = opt->count() ? opt->results().front() : opt->get_default_str();
    if (value.empty()) continue;
    inputs[name] = typed_value(value);
  }
  return inputs;
}

std::optional<double> env_tolerance() {
  const char* env = std::getenv("SPHERA_TOL");
  if (env == nullptr || *env == '\0') return std::nullopt;
  const std::string s(env);
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size() || !(v > 0.0))
    throw CLI::ValidationError("SPHERA_TOL", "expected a positive decimal, got '" + s + "'");
  return v;
}

int run_replay(const std::string& file, std::ostream& out, std::ostream& err);

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

void emit_curve_csv(const LevelCurve& curve, std::ostream& os) {
  os << "t,v,W_residual,I\n";
  for (const auto& p : curve.points)
    os << format_double(p.t) << ',' << format_double(p.v) << ',' << format_double(p.W_residual) << ','
       << format_double(p.I) << '\n';
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw OutputError("cannot write " + path.string());
    f << content;
    f.flush();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw OutputError("cannot write " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw OutputError("cannot write " + path.string());
  }
}

void write_curve_csv(const LevelCurve& curve, const std::filesystem::path& path) {
  std::ostringstream os;
  emit_curve_csv(curve, os);
  write_atomically(path, os.str());
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Spherical ratio transform: evaluate, verify and invert.", "sphera"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  try {
    if (const auto tol = env_tolerance()) o.abs_tol = o.rel_tol = *tol;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  const auto common = [&](CLI::App* sub, bool with_setup, bool with_quad) {
    if (with_setup) {
      sub->add_option("--k", o.k, "sphere dimension k >= 1")->capture_default_str();
      sub->add_option("--R", o.R, "sphere radius")->capture_default_str();
      sub->add_option("--r", o.r, "distance |x| of the fixed point")->capture_default_str();
    }
    if (with_quad) {
      sub->add_option("--abs-tol", o.abs_tol, "absolute quadrature tolerance")->capture_default_str();
      sub->add_option("--rel-tol", o.rel_tol, "relative quadrature tolerance")->capture_default_str();
      sub->add_option("--max-evals", o.max_evals, "integrand evaluation budget")->capture_default_str();
    }
    sub->add_option("--format", o.format, "json, csv or table")
        ->check(CLI::IsMember({"json", "csv", "table"}))
        ->capture_default_str();
    sub->add_option("--out", o.out, "write the result here instead of stdout");
  };
  const auto exponent = [&](CLI::App* sub) {
    sub->add_option("--xi", o.xi, "real part of alpha")->capture_default_str();
    sub->add_option("--zeta", o.zeta, "imaginary part of alpha")->capture_default_str();
  };

  std::map<std::string, std::function<Outcome(const Options&)>> handlers;

  auto* omega = app.add_subcommand("omega", "spherical ratio of two points, or omega(theta)");
  common(omega, true, false);
  omega->add_option("--x", o.x, "first point, comma separated");
  omega->add_option("--y", o.y, "second point, comma separated");
  omega->add_option("--theta", o.theta, "angle pi - <xOy> in [0, pi]");
  handlers["omega"] = cmd_omega;

  auto* integrate = app.add_subcommand("integrate", "sphere integrals of functions of omega or |x-y|");
  common(integrate, true, true);
  integrate->add_option("--integrand", o.integrand, "area, omega, power (omega^alpha) or distance (|x-y|^-alpha)")
      ->check(CLI::IsMember({"area", "omega", "power", "distance"}))
      ->capture_default_str();
  exponent(integrate);
  handlers["integrate"] = cmd_integrate;

  auto* f = app.add_subcommand("f", "F(alpha) = W + iI, or its n-th derivative");
  common(f, true, true);
  exponent(f);
  f->add_option("--deriv", o.deriv, "derivative order")->check(CLI::NonNegativeNumber)->capture_default_str();
  handlers["f"] = cmd_f;

  auto* verify = app.add_subcommand("verify", "numerical identity checks");
  common(verify, true, true);
  verify->add_option("--suite", o.suite, "named suite (default)")->capture_default_str();
  verify->add_option("--identity", o.identity, "suite or a single identity")
      ->check(CLI::IsMember({"suite", "reflection", "imag_vanishing", "distance", "k1_trig", "closed_form_k2"}))
      ->capture_default_str();
  exponent(verify);
  verify->add_option("--b", o.b, "frequency b")->capture_default_str();
  verify->add_option("--m", o.m, "moment index m")->capture_default_str();
  verify->add_option("--p-re", o.p_re, "k1_trig exponent, real part")->capture_default_str();
  verify->add_option("--p-im", o.p_im, "k1_trig exponent, imaginary part")->capture_default_str();
  verify->add_option("--trig-a", o.trig_a, "k1_trig parameter a")->capture_default_str();
  verify->add_option("--trig-b", o.trig_b, "k1_trig parameter b")->capture_default_str();
  handlers["verify"] = cmd_verify;

  auto* solve = app.add_subcommand("solve", "real lambda with F(lambda) = nu");
  common(solve, true, true);
  solve->add_option("--nu", o.nu, "target value")->required();
  handlers["solve"] = cmd_solve;

  auto* trace = app.add_subcommand("trace", "level curve of W through a seed in the quadrant");
  common(trace, true, true);
  trace->add_option("--a", o.a, "seed xi >= k/2")->required();
  trace->add_option("--b", o.seed_b, "seed zeta in [0, p]")->required();
  trace->add_option("--step", o.step, "continuation arc length")->capture_default_str();
  handlers["trace"] = cmd_trace;

  auto* tay = app.add_subcommand("taylor", "even Taylor coefficients of F about k/2");
  common(tay, true, true);
  tay->add_option("--M", o.M, "truncation order")->capture_default_str();
  tay->add_option("--eval-xi", o.eval_xi, "compare the series with F at this xi");
  tay->add_option("--eval-zeta", o.eval_zeta, "... and this zeta")->capture_default_str();
  handlers["taylor"] = cmd_taylor;

  auto* signmap = app.add_subcommand("signmap", "sign of I on a grid over the strip");
  common(signmap, true, true);
  signmap->add_option("--xi-min", o.xi_min)->capture_default_str();
  signmap->add_option("--xi-max", o.xi_max)->capture_default_str();
  signmap->add_option("--n-xi", o.n_xi)->capture_default_str();
  signmap->add_option("--zeta-min", o.zeta_min, "defaults to -p");
  signmap->add_option("--zeta-max", o.zeta_max, "defaults to p");
  signmap->add_option("--n-zeta", o.n_zeta)->capture_default_str();
  handlers["signmap"] = cmd_signmap;

  auto* limits = app.add_subcommand("limits", "limit of omega(x, y) as x -> y along a path");
  common(limits, true, false);
  limits->add_option("--variant", o.variant)
      ->check(CLI::IsMember({"on_sphere", "tangent_plane", "tangent_sphere", "straight_line"}))
      ->capture_default_str();
  limits->add_option("--delta", o.delta, "tangent sphere radius")->capture_default_str();
  limits->add_option("--side", o.side)->check(CLI::IsMember({"away", "toward"}))->capture_default_str();
  limits->add_option("--gamma0", o.gamma0, "straight line angle to Oy")->capture_default_str();
  limits->add_option("--samples", o.samples)->capture_default_str();
  handlers["limits"] = cmd_limits;

  auto* picard = app.add_subcommand("picard", "search for further alpha with F(alpha) = F(beta)");
  common(picard, true, true);
  picard->add_option("--beta-re", o.beta_re)->capture_default_str();
  picard->add_option("--beta-im", o.beta_im)->capture_default_str();
  picard->add_option("--rho", o.rho, "radius of the start ring about k/2")->capture_default_str();
  picard->add_option("--starts", o.starts)->capture_default_str();
  handlers["picard"] = cmd_picard;

  auto* replay = app.add_subcommand("replay", "rerun a saved JSON result and compare");
  replay->add_option("file", o.replay_file, "JSON output of an earlier run")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (sub == replay) return run_replay(o.replay_file, out, err);

  Outcome res;
  try {
    res = handlers.at(sub->get_name())(o);
  } catch (const NoSolutionError& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  const int code = !res.converged ? kNumerical : res.verify_failed ? kVerifyFailed : kOk;
  std::ostringstream text;
  if (o.format == "json") {
    const json envelope = {{"schema_version", kSchemaVersion},
                           {"version", kVersion},
                           {"command", sub->get_name()},
                           {"inputs", echo_inputs(*sub)},
                           {"status", code == kOk ? "ok" : code == kNumerical ? "not_converged" : "verify_failed"},
                           {"result", res.result}};
    text << envelope.dump(2) << '\n';
  } else if (o.format == "csv") {
    if (res.csv)
      res.csv(text);
    else
      render_csv(res.table, text);
  } else {
    render_table(res.table, text);
  }

  if (o.out.empty()) {
    out << text.str();
  } else {
    try {
      write_atomically(o.out, text.str());
    } catch (const OutputError& e) {
      err << "error: " << e.what() << '\n';
      return kNumerical;
    }
  }
  if (code == kNumerical) err << "warning: a quadrature or continuation did not converge\n";
  return code;
}

namespace {

int run_replay(const std::string& file, std::ostream& out, std::ostream& err) {
  std::ifstream in(file);
  if (!in) {
    err << "error: cannot read " << file << '\n';
    return kUsage;
  }
  json saved;
  try {
    saved = json::parse(in);
  } catch (const json::exception& e) {
    err << "error: " << file << " is not JSON: " << e.what() << '\n';
    return kUsage;
  }
  if (saved.value("schema_version", 0) != kSchemaVersion || !saved.contains("command") || !saved.contains("inputs")) {
    err << "error: " << file << " is not a schema_version " << kSchemaVersion << " result\n";
    return kUsage;
  }
  std::vector<std::string> args{saved["command"].get<std::string>()};
  try {
    for (const auto& [name, value] : saved["inputs"].items()) {
      args.push_back("--" + name);
      args.push_back(value_text(value));
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  args.insert(args.end(), {"--format", "json"});

  std::ostringstream fresh_text;
  const int code = run(args, fresh_text, err);
  if (fresh_text.str().empty()) return code;
  const json fresh = json::parse(fresh_text.str());
  const bool identical = fresh["result"] == saved["result"] && fresh["inputs"] == saved["inputs"];
  out << json{{"replayed", saved["command"]}, {"args", args}, {"identical", identical}, {"exit_code", code}}.dump(2)
      << '\n';
  return identical ? code : kNumerical;
}

}  // namespace

}  // namespace sphera::cli
