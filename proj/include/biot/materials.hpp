#pragma once

#include <stdexcept>

namespace biot {

// Poroelastic coefficient set. Primitive inputs are stored; everything else
// (Lame constants, the composite flux weight kappa = alpha^2/(dt*k) and the
// pressure-storage weight xi = S/alpha^2) is recomputed on demand so the
// derived values can never go stale.
struct MaterialParams {
  double E = 3e4;      // Young's modulus
  double nu = 0.2;     // Poisson ratio, in [0, 0.5)
  double alpha = 1.0;  // Biot-Willis constant
  double k = 1.0;      // fluid mobility
  double S = 0.0;      // storage coefficient
  double dt = 1.0;     // time step

  double mu() const { return E / (2.0 * (1.0 + nu)); }
  double lambda() const { return nu * E / ((1.0 + nu) * (1.0 - 2.0 * nu)); }
  double kappa() const { return alpha * alpha / (dt * k); }
  double xi() const { return S / (alpha * alpha); }

  void validate() const {
    if (!(E > 0)) throw std::invalid_argument("MaterialParams: E must be positive");
    if (!(nu >= 0 && nu < 0.5)) throw std::invalid_argument("MaterialParams: nu must be in [0, 0.5)");
    if (!(alpha > 0)) throw std::invalid_argument("MaterialParams: alpha must be positive");
    if (!(k > 0)) throw std::invalid_argument("MaterialParams: k must be positive");
    if (!(S >= 0)) throw std::invalid_argument("MaterialParams: S must be non-negative");
    if (!(dt > 0)) throw std::invalid_argument("MaterialParams: dt must be positive");
  }

  // Footing-benchmark convention: alpha = dt = 1, S = 0, so kappa = 1/k is
  // dialed in directly.
  static MaterialParams footing(double E, double nu, double kappa) {
    MaterialParams p;
    p.E = E;
    p.nu = nu;
    p.k = 1.0 / kappa;
    p.validate();
    return p;
  }
};

}  // namespace biot
