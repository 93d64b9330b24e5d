#include "wavelab/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace wavelab {

namespace {

// One forward/backward plan pair per grid size. Plan creation is not
// thread-safe in FFTW; execution through the new-array interface is.
struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

std::mutex g_plan_mutex;
std::map<int, PlanPair>& plan_registry() {
    static std::map<int, PlanPair> reg;
    return reg;
}

PlanPair get_plans(int n) {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto& reg = plan_registry();
    auto it = reg.find(n);
    if (it != reg.end()) return it->second;
    double* in = fftw_alloc_real(n);
    fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
    PlanPair p;
    // FFTW_ESTIMATE keeps plans deterministic run to run
    p.fwd = fftw_plan_dft_r2c_1d(n, in, out, FFTW_ESTIMATE);
    p.bwd = fftw_plan_dft_c2r_1d(n, out, in, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
    reg[n] = p;
    return p;
}

struct Scratch {
    double* re = nullptr;
    fftw_complex* cx = nullptr;
    int n = 0;
    explicit Scratch(int n_) : n(n_) {
        re = fftw_alloc_real(n);
        cx = fftw_alloc_complex(n / 2 + 1);
    }
    ~Scratch() {
        fftw_free(re);
        fftw_free(cx);
    }
    Scratch(const Scratch&) = delete;
    Scratch& operator=(const Scratch&) = delete;
};

}  // namespace

std::vector<std::complex<double>> rfft(const Field& f) {
    const int n = f.size();
    PlanPair plans = get_plans(n);
    Scratch s(n);
    std::copy(f.v.begin(), f.v.end(), s.re);
    fftw_execute_dft_r2c(plans.fwd, s.re, s.cx);
    std::vector<std::complex<double>> spec(n / 2 + 1);
    for (int j = 0; j <= n / 2; ++j) spec[j] = {s.cx[j][0], s.cx[j][1]};
    return spec;
}

Field irfft(const GridSpec& grid, const std::vector<std::complex<double>>& spec) {
    const int n = grid.n;
    if (static_cast<int>(spec.size()) != n / 2 + 1)
        throw std::invalid_argument("irfft: spectrum length mismatch");
    PlanPair plans = get_plans(n);
    Scratch s(n);
    for (int j = 0; j <= n / 2; ++j) {
        s.cx[j][0] = spec[j].real();
        s.cx[j][1] = spec[j].imag();
    }
    fftw_execute_dft_c2r(plans.bwd, s.cx, s.re);
    Field out(grid);
    const double inv = 1.0 / n;
    for (int i = 0; i < n; ++i) out.v[i] = s.re[i] * inv;
    return out;
}

Field apply_symbol(const Field& f, const std::vector<double>& symbol) {
    auto spec = rfft(f);
    if (symbol.size() != spec.size())
        throw std::invalid_argument("apply_symbol: symbol length mismatch");
    for (size_t j = 0; j < spec.size(); ++j) spec[j] *= symbol[j];
    return irfft(f.grid, spec);
}

Field deriv(const Field& f, int order) {
    if (order < 0) throw std::invalid_argument("deriv: order must be >= 0");
    if (order == 0) return f;
    const int n = f.size();
    auto spec = rfft(f);
    for (int j = 0; j <= n / 2; ++j) {
        const std::complex<double> ik(0.0, f.grid.wavenumber(j));
        spec[j] *= std::pow(ik, order);
    }
    if (order % 2 == 1) spec[n / 2] = 0.0;  // Nyquist carries no sign information
    return irfft(f.grid, spec);
}

Field helmholtz_inv(const Field& f) {
    const int n = f.size();
    auto spec = rfft(f);
    for (int j = 0; j <= n / 2; ++j) {
        const double k = f.grid.wavenumber(j);
        spec[j] /= (1.0 + k * k);
    }
    return irfft(f.grid, spec);
}

Field helmholtz_fwd(const Field& f) {
    Field out = f;
    out -= deriv(f, 2);
    return out;
}

Field antideriv_from_right(const Field& f, double decay_threshold, bool* right_edge_warning) {
    const int n = f.size();
    const double L = f.grid.half_length;
    if (right_edge_warning)
        *right_edge_warning = std::abs(f.v[n - 1]) > decay_threshold;

    auto spec = rfft(f);
    const double mean = spec[0].real() / n;
    spec[0] = 0.0;
    for (int j = 1; j <= n / 2; ++j) {
        const std::complex<double> ik(0.0, f.grid.wavenumber(j));
        spec[j] /= ik;
    }
    spec[n / 2] = 0.0;
    Field g = irfft(f.grid, spec);  // periodic antiderivative of zero-mean part
    // F(z) = mean*(L - z) + G(L) - G(z), G(L) = G(-L) by periodicity
    Field out(f.grid);
    const double gL = g.v[0];
    for (int i = 0; i < n; ++i)
        out.v[i] = mean * (L - f.grid.node(i)) + gL - g.v[i];
    return out;
}

Field deriv_nonperiodic(const Field& f, int order) {
    if (order == 0) return f;
    const int n = f.size();
    const double L = f.grid.half_length;
    // carry the seam jump with a linear bridge s(x) = (L - x) / (2L):
    // s(-L) = 1, s(L-dx) ~ 0, s' = -1/(2L)
    const double jump = f.v[0] - f.v[n - 1];
    Field g = f;
    for (int i = 0; i < n; ++i)
        g.v[i] -= jump * (L - f.grid.node(i)) / (2.0 * L);
    Field out = deriv(g, order);
    if (order == 1) {
        const double slope = -jump / (2.0 * L);
        for (int i = 0; i < n; ++i) out.v[i] += slope;
    }
    return out;
}

Field shift(const Field& f, double delta) {
    const int n = f.size();
    auto spec = rfft(f);
    for (int j = 0; j <= n / 2; ++j) {
        const double k = f.grid.wavenumber(j);
        spec[j] *= std::exp(std::complex<double>(0.0, -k * delta));
    }
    // keep the Nyquist mode real so the result stays real-valued
    spec[n / 2] = spec[n / 2].real() * std::cos(f.grid.wavenumber(n / 2) * delta);
    return irfft(f.grid, spec);
}

FieldPair shift(const FieldPair& p, double delta) {
    return FieldPair(shift(p.eta, delta), shift(p.u, delta));
}

Field dealias_23(const Field& f) {
    const int n = f.size();
    auto spec = rfft(f);
    const int cutoff = n / 3;
    for (int j = cutoff + 1; j <= n / 2; ++j) spec[j] = 0.0;
    return irfft(f.grid, spec);
}

double integrate(const Field& f) {
    double s = 0.0;
    for (double x : f.v) s += x;
    return s * f.grid.dx();
}

double inner(const Field& f, const Field& g) {
    f.check_same_grid(g);
    double s = 0.0;
    for (int i = 0; i < f.size(); ++i) s += f.v[i] * g.v[i];
    return s * f.grid.dx();
}

double inner(const FieldPair& p, const FieldPair& q) {
    if (p.grid() != q.grid()) throw std::invalid_argument("inner: grid mismatch");
    return inner(p.eta, q.eta) + inner(p.u, q.u);
}

double h1h1_norm(const FieldPair& p) {
    const Field de = deriv(p.eta, 1);
    const Field du = deriv(p.u, 1);
    double s = inner(p.eta, p.eta) + inner(de, de) + inner(p.u, p.u) + inner(du, du);
    return std::sqrt(std::max(0.0, s));
}

double l2_norm(const Field& f) { return std::sqrt(std::max(0.0, inner(f, f))); }
double l2_norm(const FieldPair& p) { return std::sqrt(std::max(0.0, inner(p, p))); }

double sup_norm(const Field& f) {
    double m = 0.0;
    for (double x : f.v) m = std::max(m, std::abs(x));
    return m;
}
double sup_norm(const FieldPair& p) { return std::max(sup_norm(p.eta), sup_norm(p.u)); }

double hs_norm(const Field& f, int s) {
    const int n = f.size();
    auto spec = rfft(f);
    // Parseval for rfft: ||f||^2 = (dx/n) * (|c0|^2 + 2 sum_{0<j<n/2} |cj|^2 + |c_{n/2}|^2)
    double acc = 0.0;
    for (int j = 0; j <= n / 2; ++j) {
        const double k = f.grid.wavenumber(j);
        const double w = std::pow(1.0 + k * k, s);
        const double mag2 = std::norm(spec[j]);
        const double mult = (j == 0 || j == n / 2) ? 1.0 : 2.0;
        acc += mult * w * mag2;
    }
    return std::sqrt(acc * f.grid.dx() / n);
}

double h2h2_norm_interior(const FieldPair& p, double margin) {
    const GridSpec& g = p.grid();
    double acc = 0.0;
    for (const Field* comp : {&p.eta, &p.u}) {
        for (int j = 0; j <= 2; ++j) {
            Field d = (j == 0) ? *comp : deriv(*comp, j);
            double s = 0.0;
            for (int i = 0; i < g.n; ++i)
                if (std::abs(g.node(i)) <= g.half_length - margin) s += d.v[i] * d.v[i];
            acc += s * g.dx();
        }
    }
    return std::sqrt(acc);
}

}  // namespace wavelab
