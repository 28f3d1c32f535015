#pragma once

// Channeling efficiency beta of a dipole emitter into a Gaussian resonator
// mode, computed two ways: the small-angle analytic law and a far-field
// overlap quadrature over the sphere.

#include "cqed/common.hpp"

namespace cqed {

struct OverlapConfig {
    double w0_over_lambda = 1.0;  // beam waist in units of the wavelength
    int theta_points = 128;       // Gauss-Legendre order over theta in [0, pi]
    int phi_points = 64;          // uniform (trapezoid) points over phi in [0, 2pi)

    void validate() const;
};

// beta = 3/(2 pi^2) (lambda/w0)^2.  Small-angle result; warns for w0 < lambda.
double beta_analytic(double w0_over_lambda, Warnings* warnings = nullptr);

struct BetaNumericResult {
    double beta = 0.0;
    double beta_coarse = 0.0;       // value at the requested orders (pre-doubling)
    double dipole_norm_error = 0.0; // |quadrature - 8 pi/3| / (8 pi/3)
    double gauss_norm_change = 0.0; // self-overlap change on doubling, relative
    int theta_points_used = 0;
    int phi_points_used = 0;
};

// Vector far-field overlap:
//   E_G = N_G e^{-theta^2/theta0^2} e_G(theta, phi),  theta0 = lambda/(pi w0)
//   E_D = N_D (e_r x e_D) x e_r   (dipole axis e_D = x, transverse to z)
// with e_G transported over the sphere as cos(phi) theta_hat - sin(phi) phi_hat
// (the x-polarized paraxial beam; e_G(0, phi) = e_D).  Both fields are
// normalized numerically to unit integrated intensity, then
//   beta = 2 |integral E_G . E_D*|^2,
// the factor 2 counting both propagation directions of the standing-wave
// resonator mode (beta1 = beta2 = beta/2).
//
// Result is evaluated at the requested orders and at doubled orders; if the
// two differ by more than 1e-6 an AccuracyError is thrown, otherwise the
// doubled-order value is returned.
BetaNumericResult beta_numeric(const OverlapConfig& config);

// Exposed for the convergence tests: self-overlap integrals at given orders.
double dipole_self_overlap(int theta_points, int phi_points);
double gauss_self_overlap(double theta0, int theta_points, int phi_points);

}  // namespace cqed
