#pragma once

#include <complex>
#include <vector>

#include "wavelab/grid.hpp"

namespace wavelab {

// Periodic-grid spectral calculus. All functions are pure; FFT plans are
// cached per grid size behind a mutex so concurrent workers stay safe.

// real -> half-complex spectrum (length n/2+1), unnormalized
std::vector<std::complex<double>> rfft(const Field& f);
// half-complex spectrum -> real field (normalizes by 1/n)
Field irfft(const GridSpec& grid, const std::vector<std::complex<double>>& spec);

// spectral d^order/dx^order; Nyquist mode zeroed for odd orders
Field deriv(const Field& f, int order = 1);

// (1 - d^2/dx^2)^{-1}, symbol 1/(1+k^2)
Field helmholtz_inv(const Field& f);

// (1 - d^2/dx^2)
Field helmholtz_fwd(const Field& f);

// generic Fourier multiplier m(k) applied to f; m given per rfft bin
Field apply_symbol(const Field& f, const std::vector<double>& symbol);

// F(z) = \int_z^L f, anchored to zero at the right edge. Computed as
// mean ramp + spectral antiderivative of the zero-mean part, which is exact
// for band-limited data (plain cumulative trapezoid is only O(dx^2)).
// Sets *right_edge_warning when |f| at the right edge exceeds decay_threshold,
// signalling that the domain is too small for the decay assumption.
Field antideriv_from_right(const Field& f, double decay_threshold = 1e-8,
                           bool* right_edge_warning = nullptr);

// spectral derivative of a field whose derivatives decay at both edges but
// whose values may differ (bounded, non-periodic tail): the value jump is
// carried by an explicit linear bridge so the seam does not ring
Field deriv_nonperiodic(const Field& f, int order = 1);

// f(. - delta) by phase shift; exact for band-limited fields
Field shift(const Field& f, double delta);
FieldPair shift(const FieldPair& p, double delta);

// 2/3-rule dealiasing: zero modes with index > n/3
Field dealias_23(const Field& f);

// quadrature of a single field, dx * sum
double integrate(const Field& f);

// <p,q> = \int (p1 q1 + p2 q2)
double inner(const FieldPair& p, const FieldPair& q);
double inner(const Field& f, const Field& g);

// sqrt(\int (eta^2 + eta'^2 + u^2 + u'^2))
double h1h1_norm(const FieldPair& p);

double l2_norm(const Field& f);
double l2_norm(const FieldPair& p);
double sup_norm(const Field& f);
double sup_norm(const FieldPair& p);

// discrete H^s norm via symbol (1+k^2)^{s/2}; used for H^2 x H^2 residuals
double hs_norm(const Field& f, int s);

// sqrt(sum_{j=0..2} ||d^j S||_L2^2) over both components, with the fields
// masked to |x| <= L - margin before taking norms (derivatives first)
double h2h2_norm_interior(const FieldPair& p, double margin);

}  // namespace wavelab
