#include "sphera/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

namespace sphera {

namespace {

// 15-point Kronrod abscissae/weights and the embedded 7-point Gauss weights (QUADPACK qk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();
constexpr int kPanelEvals = 15;

struct PanelState {
  double lo = 0.0;
  double hi = 0.0;
  std::complex<double> value;
  double err_re = 0.0;
  double err_im = 0.0;
  double err = 0.0;
  bool refinable = true;
};

struct ComponentEstimate {
  double value = 0.0;
  double err = 0.0;
  double floor = 0.0;
};

template <class Part>
ComponentEstimate estimate(const std::complex<double>& fc,
                           const std::array<std::complex<double>, 7>& fv1,
                           const std::array<std::complex<double>, 7>& fv2, double hlgth,
                           Part part) {
  const double c = part(fc);
  double resg = c * kWg[3];
  double resk = c * kWgk[7];
  double resabs = std::abs(c) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double f1 = part(fv1[j]);
    const double f2 = part(fv2[j]);
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(c - reskh);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::abs(part(fv1[j]) - reskh) + std::abs(part(fv2[j]) - reskh));

  ComponentEstimate out;
  out.value = resk * hlgth;
  resabs *= hlgth;
  resasc *= hlgth;
  double err = std::abs((resk - resg) * hlgth);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  out.floor = 50.0 * kEps * resabs;
  if (resabs > kTiny / (50.0 * kEps)) err = std::max(out.floor, err);
  out.err = err;
  return out;
}

template <class F>
PanelState gk15(const F& f, double lo, double hi) {
  const double centr = 0.5 * (lo + hi);
  const double hlgth = 0.5 * (hi - lo);
  const std::complex<double> fc = f(centr);
  std::array<std::complex<double>, 7> fv1;
  std::array<std::complex<double>, 7> fv2;
  for (int j = 0; j < 7; ++j) {
    const double absc = hlgth * kXgk[j];
    fv1[j] = f(centr - absc);
    fv2[j] = f(centr + absc);
  }
  const auto re = estimate(fc, fv1, fv2, hlgth, [](const std::complex<double>& z) { return z.real(); });
  const auto im = estimate(fc, fv1, fv2, hlgth, [](const std::complex<double>& z) { return z.imag(); });

  PanelState p;
  p.lo = lo;
  p.hi = hi;
  p.value = {re.value, im.value};
  p.err_re = re.err;
  p.err_im = im.err;
  p.err = std::hypot(re.err, im.err);
  const double mid = 0.5 * (lo + hi);
  // Once the estimate sits on its rounding floor, bisection cannot improve it.
  p.refinable = p.err > 1.5 * std::hypot(re.floor, im.floor) && mid > lo && mid < hi;
  return p;
}

// Breakpoints in u = pi - theta, increasing from 0 to pi.
std::vector<double> u_breakpoints(const SphereSetup& setup, double zeta, const QuadConfig& config) {
  std::vector<double> b{0.0, kPi};
  const double y = setup.upsilon();
  if (y > 0.0) {
    const double omu = setup.one_minus_upsilon();
    const double lmax = setup.log_ratio();  // ln(omega) at u = 0; -lmax at u = pi
    const double total = 2.0 * lmax;
    const double per_panel = config.oscillation_cap / std::max(std::abs(zeta), 1.0);
    const long n = std::max(1L, static_cast<long>(std::ceil(total / per_panel)));
    for (long j = 1; j < n; ++j) {
      const double logw = lmax - total * static_cast<double>(j) / static_cast<double>(n);
      // invert omega(u) = (1 - Y^2) / ((1 - Y)^2 + 4 Y sin^2(u/2))
      const double den = omu * (1.0 + y) * std::exp(-logw);
      const double s2 = std::clamp((den - omu * omu) / (4.0 * y), 0.0, 1.0);
      b.push_back(2.0 * std::asin(std::sqrt(s2)));
    }
    if (y > 0.9) {
      for (double w = 0.5 * kPi; w >= 1e-14 * kPi; w *= 0.5) b.push_back(w);
    }
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

AxialNode make_node(const SphereSetup& setup, double u, double log_c) {
  const double y = setup.upsilon();
  const double omu = setup.one_minus_upsilon();
  const double s = std::sin(0.5 * u);
  const double s2 = s * s;
  const double den = omu * omu + 4.0 * y * s2;
  AxialNode n;
  n.u = u;
  n.omega = omu * (1.0 + y) / den;
  n.log_omega = log_c - std::log(den);
  const double dR = setup.R() - setup.r();
  n.dist2 = dR * dR + 4.0 * setup.R() * setup.r() * s2;
  n.cos_theta = 2.0 * s2 - 1.0;
  return n;
}

double int_pow(double x, int n) {
  double out = 1.0;
  for (int i = 0; i < n; ++i) out *= x;
  return out;
}

// Neumaier-compensated sum.
struct CompensatedSum {
  double sum = 0.0;
  double c = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      c += (sum - t) + v;
    else
      c += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

}  // namespace

void QuadConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw DomainError("QuadConfig: tolerances must be positive");
  if (max_evals < 100) throw DomainError("QuadConfig: max_evals must be >= 100");
  if (!(oscillation_cap > 0.0)) throw DomainError("QuadConfig: oscillation_cap must be positive");
}

std::vector<Panel> adaptive_segments(const SphereSetup& setup, double zeta, const QuadConfig& config) {
  config.validate();
  const auto b = u_breakpoints(setup, zeta, config);
  std::vector<Panel> out;
  out.reserve(b.size() - 1);
  for (std::size_t i = b.size() - 1; i > 0; --i) out.push_back({kPi - b[i], kPi - b[i - 1]});
  return out;
}

QuadResult integrate_axial(const SphereSetup& setup, const AxialIntegrand& h, double zeta,
                           const QuadConfig& config) {
  config.validate();
  const int km1 = setup.k() - 1;
  const double prefactor = setup.sigma_km1() * std::pow(setup.R(), setup.k());
  const double log_c = std::log(setup.one_minus_upsilon()) + std::log1p(setup.upsilon());
  const auto f = [&](double u) -> std::complex<double> {
    return h(make_node(setup, u, log_c)) * int_pow(std::sin(u), km1);
  };

  const auto breaks = u_breakpoints(setup, zeta, config);
  std::vector<PanelState> panels;
  panels.reserve(2 * breaks.size());
  long evals = 0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    panels.push_back(gk15(f, breaks[i], breaks[i + 1]));
    evals += kPanelEvals;
  }

  // Max-heap on (error, index); deterministic tie-breaking by index.
  std::priority_queue<std::pair<double, std::size_t>> heap;
  std::complex<double> total;
  double total_err = 0.0;
  const auto resum = [&] {
    total = {};
    total_err = 0.0;
    for (const auto& p : panels) {
      total += p.value;
      total_err += p.err;
    }
  };
  resum();
  for (std::size_t i = 0; i < panels.size(); ++i)
    if (panels[i].refinable) heap.emplace(panels[i].err, i);

  const auto target = [&] {
    return std::max(config.abs_tol / prefactor, config.rel_tol * std::abs(total));
  };

  long iteration = 0;
  while (true) {
    if (total_err <= target()) {
      resum();
      if (total_err <= target()) break;
    }
    if (heap.empty() || evals + 2 * kPanelEvals > config.max_evals) break;
    const std::size_t idx = heap.top().second;
    heap.pop();
    const PanelState parent = panels[idx];
    const double mid = 0.5 * (parent.lo + parent.hi);
    panels[idx] = gk15(f, parent.lo, mid);
    panels.push_back(gk15(f, mid, parent.hi));
    evals += 2 * kPanelEvals;
    const std::size_t right = panels.size() - 1;
    total += panels[idx].value + panels[right].value - parent.value;
    total_err += panels[idx].err + panels[right].err - parent.err;
    if (panels[idx].refinable) heap.emplace(panels[idx].err, idx);
    if (panels[right].refinable) heap.emplace(panels[right].err, right);
    if (++iteration % 512 == 0) resum();
  }

  // Fixed summation order: panels by position.
  std::sort(panels.begin(), panels.end(),
            [](const PanelState& a, const PanelState& b) { return a.lo < b.lo; });
  CompensatedSum re, im;
  double err_re = 0.0;
  double err_im = 0.0;
  for (const auto& p : panels) {
    re.add(p.value.real());
    im.add(p.value.imag());
    err_re += p.err_re;
    err_im += p.err_im;
  }

  QuadResult out;
  out.value = prefactor * std::complex<double>(re.value(), im.value());
  out.abs_error_re = prefactor * err_re;
  out.abs_error_im = prefactor * err_im;
  out.abs_error = std::hypot(out.abs_error_re, out.abs_error_im);
  out.evals = evals;
  out.converged = out.abs_error <= std::max(config.abs_tol, config.rel_tol * std::abs(out.value));
  return out;
}

QuadResult integrate_sphere(const SphereSetup& setup, const std::function<double(double)>& g,
                            const QuadConfig& config) {
  return integrate_axial(
      setup, [&](const AxialNode& n) { return std::complex<double>(g(n.omega), 0.0); }, 0.0,
      config);
}

QuadResult integrate_sphere_complex(const SphereSetup& setup,
                                    const std::function<std::complex<double>(double)>& g,
                                    double zeta, const QuadConfig& config) {
  return integrate_axial(setup, [&](const AxialNode& n) { return g(n.omega); }, zeta, config);
}

QuadResult integrate_distance_power(const SphereSetup& setup, ComplexExponent alpha,
                                    const QuadConfig& config) {
  // |x - y|^{-alpha} = exp(-(alpha / 2) ln |x - y|^2); ln|x - y|^2 spans the same range as
  // ln(omega), so the phase per unit of ln(omega) is zeta / 2.
  const std::complex<double> half = -0.5 * alpha.value();
  return integrate_axial(
      setup, [&](const AxialNode& n) { return std::exp(half * std::log(n.dist2)); },
      0.5 * alpha.zeta, config);
}

}  // namespace sphera
