#include "nlch/kernel.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "nlch/error.hpp"

namespace nlch {

namespace {

constexpr double pi = std::numbers::pi;

// |S^{d-1}|: 2 in 1D (two points), 2 pi in 2D.
double sphere_measure(int dim) { return dim == 1 ? 2.0 : 2.0 * pi; }

// Integral over the support ball of a radial function: |S^{d-1}| int_0^delta f(r) r^{d-1} dr.
double radial_integral(const KernelSpec& spec, const std::function<double(double)>& f) {
  const int d = spec.dim;
  auto integrand = [&](double r) { return f(r) * std::pow(r, d - 1); };
  return sphere_measure(d) * integrate(integrand, 0.0, spec.delta);
}

}  // namespace

double KernelSpec::amplitude() const {
  const double s = scale();
  return 4.0 * epsilon2 / (std::pow(pi, dim / 2.0) * std::pow(s, dim + 2));
}

KernelSpec make_kernel(int dim, double epsilon2, double delta) {
  if (dim != 1 && dim != 2) throw ConfigError("kernel dimension must be 1 or 2");
  if (!(epsilon2 >= 0.0) || !std::isfinite(epsilon2)) throw ConfigError("epsilon2 must be >= 0");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ConfigError("delta must be > 0");
  return KernelSpec{dim, epsilon2, delta};
}

double eval(const KernelSpec& spec, double r) {
  if (r > spec.delta) return 0.0;
  const double s = spec.scale();
  return spec.amplitude() * std::exp(-(r * r) / (s * s));
}

double c_gamma_analytic(const KernelSpec& spec) {
  return 36.0 * spec.epsilon2 / (spec.delta * spec.delta);
}

double c_gamma_quadrature(const KernelSpec& spec) {
  return radial_integral(spec, [&](double r) { return eval(spec, r); });
}

double second_moment(const KernelSpec& spec) {
  return 0.5 * radial_integral(spec, [&](double r) { return eval(spec, r) * r * r; });
}

double grad_l1_norm(const KernelSpec& spec) {
  const double s = spec.scale();
  // |gamma'(r)| = 2 r / s^2 gamma(r) on (0, delta)
  const double smooth =
      radial_integral(spec, [&](double r) { return 2.0 * r / (s * s) * eval(spec, r); });
  const double jump = eval(spec, spec.delta) * sphere_measure(spec.dim) *
                      std::pow(spec.delta, spec.dim - 1);
  return smooth + jump;
}

double recommended_tau(const KernelSpec& spec, double xi_min, NonlocalCase which,
                       std::optional<double> poincare_c) {
  if (!(xi_min >= 0.0)) throw ConfigError("xi_min must be >= 0");
  const double c_hat = grad_l1_norm(spec);
  if (c_hat == 0.0) throw ConfigError("kernel has zero gradient norm; no time-step bound");
  const double case2 = 4.0 * xi_min / (c_hat * c_hat);
  if (which == NonlocalCase::regional) return case2;
  if (!poincare_c) throw ConfigError("Case 1 time-step bound needs the nonlocal Poincare constant");
  const double cp = *poincare_c;
  const double big_c = c_gamma_analytic(spec);
  return case2 / (1.0 + std::pow(cp, 4) * big_c * big_c);
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 int max_levels) {
  using rule = boost::math::quadrature::gauss<double, 20>;
  auto composite = [&](std::size_t panels) {
    const double w = (b - a) / static_cast<double>(panels);
    double sum = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
      const double lo = a + w * static_cast<double>(p);
      sum += rule::integrate(f, lo, lo + w);
    }
    return sum;
  };
  std::size_t panels = 1;
  double prev = composite(panels);
  for (int level = 0; level < max_levels; ++level) {
    panels *= 2;
    const double cur = composite(panels);
    if (std::abs(cur - prev) <= rel_tol * std::abs(cur)) return cur;
    prev = cur;
  }
  throw SolverError("quadrature did not converge to relative tolerance " + std::to_string(rel_tol));
}

}  // namespace nlch
