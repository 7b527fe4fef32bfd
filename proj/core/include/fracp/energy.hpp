// Gagliardo energy a(u), potential energies b = b1 - b2, and their first
// variations on radial profiles.
#pragma once

#include <vector>

#include "fracp/angular_kernel.hpp"
#include "fracp/nonlinearity.hpp"
#include "fracp/params.hpp"
#include "fracp/radial_profile.hpp"

namespace fracp {

struct EnergyReport {
  double a_value = 0;
  double b_value = 0;
  double b1_value = 0;
  double b2_value = 0;
  double diag_band_estimate = 0;  // near-diagonal share of the double sum
  double quad_residual = 0;       // |fine - coarse| refinement delta
};

// a(u) = C_{N,s,p}/(2p) * double integral of |u(x)-u(y)|^p |x-y|^{-(N+sp)},
// zero-extension tail included. Throws KernelMismatch on a foreign grid.
double gagliardo_energy(const RadialProfile& u, const Params& params,
                        const AngularKernel& kernel);

// Same evaluation with the diagnostic fields filled (b fields left zero).
EnergyReport gagliardo_energy_report(const RadialProfile& u, const Params& params,
                                     const AngularKernel& kernel);

// <a'(u), v> = C/2 * double integral of phi_p(u(x)-u(y)) (v(x)-v(y)) kernel;
// equals d/dt a(u + t v) at t = 0 on the same quadrature points.
double gagliardo_first_variation(const RadialProfile& u, const RadialProfile& v,
                                 const Params& params, const AngularKernel& kernel);

// Exact nodal gradient of the discrete a: grad[i] = d a / d u_i.
std::vector<double> gagliardo_gradient(const RadialProfile& u, const Params& params,
                                       const AngularKernel& kernel);

// b, b1, b2 by radial shell quadrature; b_value is b1 - b2 by construction.
EnergyReport potential_energy(const RadialProfile& u, const Nonlinearity& nl,
                              const Params& params);

double potential_b(const RadialProfile& u, const Nonlinearity& nl,
                   const Params& params);

// <b'(u), v> = integral of g(u) v.
double potential_first_variation(const RadialProfile& u, const RadialProfile& v,
                                 const Nonlinearity& nl, const Params& params);

// Exact nodal gradient of the discrete b.
std::vector<double> potential_gradient(const RadialProfile& u, const Nonlinearity& nl,
                                       const Params& params);

}  // namespace fracp
