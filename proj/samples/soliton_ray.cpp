// Laplacian flow on n(1,1): the bracket flow moves along the ray c(t) mu_0
// with c(t) = (1 - e c t)^{-1/e}, e the scaling exponent of the flow.
#include "hflow/hflow.hpp"

#include <cmath>
#include <cstdio>

int main() {
  using namespace hflow;
  const auto e = catalog_entry("n_xy");
  const FlowSpec F = laplacian_g2_flow();
  const auto cert = soliton_solve(e.mu, e.gamma, F);
  std::printf("c = %.6f  kind = %s  residual = %.2e\n", cert.c, to_string(cert.kind), cert.residual);

  IntegratorControls ctl;
  ctl.stride = 250;
  const auto traj = integrate_bracket_flow(e.mu, e.gamma, F, 3.0, ctl);
  std::printf("%6s %14s %14s %12s\n", "t", "c(t) numeric", "closed form", "off-ray");
  for (const auto& s : traj.samples) {
    const RayPoint r = nearest_on_ray(s.mu, e.mu);
    const double e_exp = F.scaling_exponent();
    const double closed = std::pow(1.0 - e_exp * cert.c * s.t, -1.0 / e_exp);
    std::printf("%6.2f %14.10f %14.10f %12.2e\n", s.t, r.c, closed, r.distance);
  }
}
