#pragma once

#include <string>

namespace nlch {

enum class Scheme { implicit, imex };

struct SchemeConfig {
  double tau = 0.0;
  Scheme scheme = Scheme::implicit;
  double c_pdas = 1.0;
  double lin_tol = 1e-12;
  int max_pdas_iters = 50;

  /// Throws ConfigError unless tau > 0, lin_tol > 0, c_pdas > 0, max_pdas_iters >= 1.
  void validate() const;
};

Scheme parse_scheme(const std::string& s);
std::string to_string(Scheme s);

}  // namespace nlch
