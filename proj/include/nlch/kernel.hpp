#pragma once

#include <functional>
#include <optional>

namespace nlch {

enum class NonlocalCase { neumann = 1, regional = 2 };

/// Truncated scaled Gaussian
///   gamma(r) = 4 eps^2 / (pi^{d/2} s^{d+2}) exp(-r^2/s^2),  s = delta/3,
/// set to zero for r > delta.
struct KernelSpec {
  int dim = 1;
  double epsilon2 = 0.0;
  double delta = 0.0;

  double scale() const { return delta / 3.0; }
  double amplitude() const;
};

/// Validates and returns a kernel spec; epsilon2 >= 0, delta > 0, dim in {1,2}.
KernelSpec make_kernel(int dim, double epsilon2, double delta);

double eval(const KernelSpec& spec, double r);

/// Untruncated full-space integral 36 eps^2 / delta^2.
double c_gamma_analytic(const KernelSpec& spec);

/// Integral of the truncated kernel over its support ball, by quadrature.
double c_gamma_quadrature(const KernelSpec& spec);

/// One half of the second moment of the truncated kernel.
double second_moment(const KernelSpec& spec);

/// Total variation ||grad gamma||_{L^1} of the truncated kernel, including
/// the jump of height gamma(delta) across the sphere |z| = delta.
double grad_l1_norm(const KernelSpec& spec);

/// Advisory time step below which the implicit step has a unique solution.
/// Case 1 requires the nonlocal Poincare constant.
double recommended_tau(const KernelSpec& spec, double xi_min, NonlocalCase which,
                       std::optional<double> poincare_c = std::nullopt);

/// Composite Gauss-Legendre rule on [a,b]; the number of panels is doubled
/// until two successive values agree to `rel_tol`. Throws SolverError when
/// that does not happen within `max_levels` doublings.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12, int max_levels = 20);

}  // namespace nlch
