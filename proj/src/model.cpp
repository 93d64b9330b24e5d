#include "wavelab/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace wavelab {

AbcdParams params_from_theta(double theta, double lambda, double mu) {
    if (theta < 0.0 || theta > 1.0)
        throw std::invalid_argument("params_from_theta: theta must lie in [0,1]");
    const double t2 = theta * theta;
    AbcdParams p;
    p.a = 0.5 * (t2 - 1.0 / 3.0) * lambda;
    p.b = 0.5 * (t2 - 1.0 / 3.0) * (1.0 - lambda);
    p.c = 0.5 * (1.0 - t2) * mu;
    p.d = 0.5 * (1.0 - t2) * (1.0 - mu);
    p.a1 = 0.5 * ((1.0 - lambda) * (t2 - 1.0 / 3.0) + 1.0 - 2.0 * theta);
    p.c1 = 1.0 - theta;
    return p;
}

double sonic_speed(const AbcdParams& p) {
    if (p.a >= 0.0 || p.c >= 0.0)
        throw std::invalid_argument("sonic_speed: requires a < 0 and c < 0");
    return std::min(std::sqrt(p.a * p.c), 1.0);
}

namespace {

// derivatives of exp(-u^2): d^m/du^m = p_m(u) exp(-u^2), p_{m+1} = p_m' - 2u p_m
double gaussian_deriv(double u, int m) {
    const double e = std::exp(-u * u);
    switch (m) {
        case 0: return e;
        case 1: return -2.0 * u * e;
        case 2: return (4.0 * u * u - 2.0) * e;
        case 3: return (12.0 * u - 8.0 * u * u * u) * e;
        default: throw std::invalid_argument("bottom_eval: derivative order not supported");
    }
}

// derivatives of sech^2(u) as polynomials in T = tanh(u), dT/du = 1 - T^2
double sech2_deriv(double u, int m) {
    const double T = std::tanh(u);
    const double S = 1.0 - T * T;  // sech^2
    switch (m) {
        case 0: return S;
        case 1: return -2.0 * T * S;
        case 2: return S * (6.0 * T * T - 2.0);
        case 3: return 8.0 * S * T * (3.0 * S - 1.0);
        default: throw std::invalid_argument("bottom_eval: derivative order not supported");
    }
}

double profile_deriv(BottomKind kind, double u, int m) {
    switch (kind) {
        case BottomKind::GaussianProduct: return gaussian_deriv(u, m);
        case BottomKind::Sech2Product: return sech2_deriv(u, m);
        case BottomKind::Zero: return 0.0;
    }
    return 0.0;
}

}  // namespace

double BottomSpec::h0(double s, double y, int ds, int dy) const {
    if (ds < 0 || ds > 2 || dy < 0 || dy > 3)
        throw std::invalid_argument("bottom_eval: supported orders are ds <= 2, dy <= 3");
    if (kind == BottomKind::Zero || amplitude == 0.0) return 0.0;
    const double su = k0 * (s - s0);
    const double yu = l0 * (y - y0);
    const double fs = profile_deriv(kind, su, ds) * std::pow(k0, ds);
    const double fy = profile_deriv(kind, yu, dy) * std::pow(l0, dy);
    return amplitude * fs * fy;
}

double BottomSpec::h(double t, double x, int dt, int dx) const {
    if (kind == BottomKind::Zero || amplitude == 0.0) return 0.0;
    return std::pow(epsilon, 1 + dt + dx) * h0(epsilon * t, epsilon * x, dt, dx);
}

BottomKind BottomSpec::kind_from_string(const std::string& s) {
    if (s == "zero") return BottomKind::Zero;
    if (s == "gaussian" || s == "gaussian-in-s-and-y") return BottomKind::GaussianProduct;
    if (s == "sech2" || s == "sech2-product") return BottomKind::Sech2Product;
    throw std::invalid_argument("unknown bottom kind: " + s);
}

std::string BottomSpec::kind_to_string(BottomKind k) {
    switch (k) {
        case BottomKind::Zero: return "zero";
        case BottomKind::GaussianProduct: return "gaussian";
        case BottomKind::Sech2Product: return "sech2";
    }
    return "zero";
}

void validate_epsilon(double epsilon) {
    if (epsilon < 1e-3 || epsilon > 0.5)
        throw std::invalid_argument("epsilon outside supported range [1e-3, 0.5]");
}

double interaction_horizon(double epsilon, double delta0, double cap) {
    validate_epsilon(epsilon);
    return std::min(std::pow(epsilon, -1.0 - delta0), cap);
}

}  // namespace wavelab
