#pragma once

#include <stdexcept>
#include <string>

namespace wavelab {

// Dispersion constants of the abcd system plus the bottom-coupling pair.
// The evolution code assumes the b = d = 1 normalization.
struct AbcdParams {
    double a = -1.0;
    double b = 1.0;
    double c = -1.0;
    double d = 1.0;
    double a1 = 1.0 / 3.0;
    double c1 = 1.0;

    bool generic_hamiltonian() const { return b == d && b > 0.0 && a < 0.0 && c < 0.0; }
    bool is_chen_case() const { return a == -1.0 && c == -1.0; }
};

// a = (1/2)(theta^2 - 1/3) lambda, etc.; a+b+c+d = 1/3 independent of theta
AbcdParams params_from_theta(double theta, double lambda, double mu);

// subsonic threshold omega* = min{sqrt(ac), 1}; requires a < 0 and c < 0
double sonic_speed(const AbcdParams& p);

enum class BottomKind { Zero, GaussianProduct, Sech2Product };

// Slow bottom h(t,x) = eps * h0(eps t, eps x) with closed-form derivatives.
// h0(s,y) = amplitude * g(k0 (s - s0)) * g(l0 (y - y0)) with g gaussian or sech^2.
struct BottomSpec {
    double epsilon = 0.1;
    double amplitude = 0.25;
    BottomKind kind = BottomKind::GaussianProduct;
    double k0 = 1.0;  // temporal decay rate
    double l0 = 1.0;  // spatial decay rate
    double s0 = 0.0;  // temporal center
    double y0 = 0.0;  // spatial center

    // partial_s^ds partial_y^dy h0(s, y); closed form, ds <= 2, dy <= 3
    double h0(double s, double y, int ds = 0, int dy = 0) const;

    // partial_t^dt partial_x^dx h(t, x) = eps^{1+dt+dx} h0^{(dt,dx)}(eps t, eps x)
    double h(double t, double x, int dt = 0, int dx = 0) const;

    bool is_flat() const { return kind == BottomKind::Zero || amplitude == 0.0; }

    static BottomKind kind_from_string(const std::string& s);
    static std::string kind_to_string(BottomKind k);
};

void validate_epsilon(double epsilon);

// interaction horizon T_eps = eps^{-1-delta0}, capped for desk-scale runs
double interaction_horizon(double epsilon, double delta0 = 0.1, double cap = 2000.0);

}  // namespace wavelab
