#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "wavelab/io.hpp"
#include "wavelab/spectral.hpp"

using namespace wavelab;

namespace {

Field sample(const GridSpec& g, double (*f)(double)) {
    Field out(g);
    for (int i = 0; i < g.n; ++i) out.v[i] = f(g.node(i));
    return out;
}

double sech2_half(double x) { return 1.0 / std::cosh(0.5 * x) / std::cosh(0.5 * x); }

// cyclic tridiagonal solve of (1 - D2_fd) g = f, second-order stencil
std::vector<double> fd_helmholtz(const std::vector<double>& f, double dx) {
    const int n = static_cast<int>(f.size());
    const double off = -1.0 / (dx * dx);
    const double diag = 1.0 + 2.0 / (dx * dx);
    // Sherman-Morrison for the periodic corners
    std::vector<double> b(n, diag), u(n, 0.0), rhs = f;
    const double gamma = -diag;
    b[0] -= gamma;
    b[n - 1] -= off * off / gamma;
    u[0] = gamma;
    u[n - 1] = off;
    auto thomas = [&](std::vector<double> d, std::vector<double> r) {
        std::vector<double> c(n, off), x(n);
        for (int i = 1; i < n; ++i) {
            const double m = off / d[i - 1];
            d[i] -= m * c[i - 1];
            r[i] -= m * r[i - 1];
        }
        x[n - 1] = r[n - 1] / d[n - 1];
        for (int i = n - 2; i >= 0; --i) x[i] = (r[i] - c[i] * x[i + 1]) / d[i];
        return x;
    };
    std::vector<double> y = thomas(b, rhs);
    std::vector<double> z = thomas(b, u);
    const double vy = y[0] + (off / gamma) * y[n - 1];
    const double vz = 1.0 + z[0] + (off / gamma) * z[n - 1];
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = y[i] - z[i] * vy / vz;
    return x;
}

}  // namespace

TEST_CASE("grid invariants") {
    GridSpec g(1024, 60.0);
    CHECK(g.dx() * g.n == doctest::Approx(2.0 * g.half_length).epsilon(1e-15));
    CHECK_THROWS_AS(GridSpec(12, 60.0), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec(100, 60.0), std::invalid_argument);  // not a power of two
    // real transforms round-trip to identity
    Field f(g);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (auto& x : f.v) x = dist(rng);
    Field back = irfft(g, rfft(f));
    double err = 0.0;
    for (int i = 0; i < g.n; ++i) err = std::max(err, std::abs(back.v[i] - f.v[i]));
    CHECK(err < 1e-12);
}

TEST_CASE("deriv on Fourier eigenfunctions and sech2") {
    GridSpec g(1024, 60.0);
    const double k1 = M_PI / g.half_length;
    Field f(g), expect(g);
    for (int i = 0; i < g.n; ++i) {
        f.v[i] = std::cos(k1 * g.node(i));
        expect.v[i] = -k1 * std::sin(k1 * g.node(i));
    }
    Field d = deriv(f, 1);
    CHECK(sup_norm(d - expect) < 1e-12);

    Field c(g);
    for (auto& x : c.v) x = 3.25;
    CHECK(sup_norm(deriv(c, 1)) < 1e-12);
    CHECK(sup_norm(deriv(c, 4)) < 1e-10);

    Field s = sample(g, sech2_half);
    Field ds = deriv(s, 1);
    Field dref(g);
    for (int i = 0; i < g.n; ++i) {
        const double x = g.node(i);
        dref.v[i] = -sech2_half(x) * std::tanh(0.5 * x);
    }
    CHECK(sup_norm(ds - dref) < 1e-10);
}

TEST_CASE("helmholtz_inv: eigenfunction, constant, FD oracle") {
    GridSpec g(1024, 60.0);
    const double k1 = M_PI / g.half_length;
    Field f(g);
    for (int i = 0; i < g.n; ++i) f.v[i] = std::cos(k1 * g.node(i));
    Field out = helmholtz_inv(f);
    for (int i = 0; i < g.n; i += 117)
        CHECK(out.v[i] == doctest::Approx(f.v[i] / (1.0 + k1 * k1)).epsilon(1e-12));

    Field c(g);
    for (auto& x : c.v) x = -0.7;
    CHECK(sup_norm(helmholtz_inv(c) - c) < 1e-12);

    // fine-grid finite-difference oracle, sampled back at the coarse nodes
    const int fine = 65536;
    GridSpec gf(fine, 60.0);
    std::vector<double> ff(fine);
    for (int i = 0; i < fine; ++i) ff[i] = sech2_half(gf.node(i));
    std::vector<double> oracle = fd_helmholtz(ff, gf.dx());
    Field s = sample(g, sech2_half);
    Field spectral = helmholtz_inv(s);
    const int ratio = fine / g.n;
    double err = 0.0;
    for (int i = 0; i < g.n; ++i)
        err = std::max(err, std::abs(spectral.v[i] - oracle[i * ratio]));
    CHECK(err < 1e-6);

    // g - g'' = f round trip
    CHECK(sup_norm(helmholtz_fwd(spectral) - s) < 1e-10);
}

TEST_CASE("helmholtz_inv preserves positivity") {
    GridSpec g(1024, 60.0);
    Field s = sample(g, sech2_half);  // nonnegative
    Field out = helmholtz_inv(s);
    double min_val = 0.0;
    for (double v : out.v) min_val = std::min(min_val, v);
    CHECK(min_val > -1e-12);
}

TEST_CASE("antideriv_from_right") {
    GridSpec g(2048, 60.0);
    Field s = sample(g, sech2_half);
    Field F = antideriv_from_right(s);
    // int_z^inf sech^2(u/2) du = 2 - 2 tanh(z/2)
    double err = 0.0;
    for (int i = 0; i < g.n; ++i) {
        const double expect = 2.0 * (1.0 - std::tanh(0.5 * g.node(i)));
        err = std::max(err, std::abs(F.v[i] - expect));
    }
    CHECK(err < 1e-8);
    CHECK(std::abs(F.v[g.n - 1]) < 1e-10);  // right anchor

    Field zero(g);
    CHECK(sup_norm(antideriv_from_right(zero)) == 0.0);

    // fundamental theorem, right-anchored: -d/dz ANTI(f) = f
    Field gauss(g);
    for (int i = 0; i < g.n; ++i) gauss.v[i] = std::exp(-g.node(i) * g.node(i));
    Field anti = antideriv_from_right(gauss);
    Field mder = deriv_nonperiodic(anti, 1);
    mder *= -1.0;
    CHECK(sup_norm(mder - gauss) < 1e-8);
    // left edge approximates the full integral sqrt(pi)
    CHECK(anti.v[0] == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-10));

    bool warned = false;
    Field c(g);
    for (auto& x : c.v) x = 1.0;  // no right decay
    antideriv_from_right(c, 1e-8, &warned);
    CHECK(warned);
}

TEST_CASE("inner products and norms") {
    GridSpec g(1024, 60.0);
    Field s = sample(g, sech2_half);
    FieldPair p(s, Field(g));
    // int sech^4(x/2) = 8/3
    CHECK(inner(p, p) == doctest::Approx(8.0 / 3.0).epsilon(1e-10));

    // odd/even parity orthogonality
    Field odd(g);
    for (int i = 0; i < g.n; ++i)
        odd.v[i] = g.node(i) * std::exp(-0.1 * g.node(i) * g.node(i));
    CHECK(std::abs(inner(odd, s)) < 1e-12);

    // bilinearity
    FieldPair q(odd, s);
    CHECK(inner(3.0 * p, q) == doctest::Approx(3.0 * inner(p, q)).epsilon(1e-13));

    // grid mismatch rejected
    GridSpec g2(512, 60.0);
    CHECK_THROWS_AS(inner(Field(g), Field(g2)), std::invalid_argument);

    // h1h1 norm: zero, sine, homogeneity
    CHECK(h1h1_norm(FieldPair(g)) == 0.0);
    const double k1 = M_PI / g.half_length;
    Field sn(g);
    for (int i = 0; i < g.n; ++i) sn.v[i] = std::sin(k1 * g.node(i));
    FieldPair sp(sn, Field(g));
    CHECK(h1h1_norm(sp) ==
          doctest::Approx(std::sqrt((1.0 + k1 * k1) * g.half_length)).epsilon(1e-12));
    CHECK(h1h1_norm(2.0 * sp) == doctest::Approx(2.0 * h1h1_norm(sp)).epsilon(1e-13));
}

TEST_CASE("round trip derivative chain on band-limited fields") {
    GridSpec g(512, 30.0);
    Field f(g);
    for (int i = 0; i < g.n; ++i) {
        const double x = g.node(i);
        f.v[i] = std::sin(2.0 * M_PI / 30.0 * x) + 0.3 * std::cos(8.0 * M_PI / 30.0 * x);
    }
    Field chain = deriv(helmholtz_inv(helmholtz_fwd(f)), 1);
    CHECK(sup_norm(chain - deriv(f, 1)) < 1e-10);
}

TEST_CASE("field serialization round trips") {
    GridSpec g(256, 30.0);
    Field f(g);
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (auto& x : f.v) x = dist(rng);

    const std::string tmp = "/tmp/wavelab_io_test";
    write_field_binary(tmp + ".bin", f);
    Field fb = read_field_binary(tmp + ".bin");
    CHECK(fb.grid == g);
    for (int i = 0; i < g.n; ++i) CHECK(fb.v[i] == f.v[i]);  // bit exact

    write_field_text(tmp + ".tsv", f);
    Field ft = read_field_text(tmp + ".tsv");
    CHECK(ft.grid == g);
    double err = 0.0;
    for (int i = 0; i < g.n; ++i) err = std::max(err, std::abs(ft.v[i] - f.v[i]));
    CHECK(err == 0.0);  // %.17g reproduces doubles exactly

    FieldPair p(f, 2.0 * f);
    write_pair_binary(tmp + "_pair", p);
    FieldPair pb = read_pair_binary(tmp + "_pair");
    CHECK(l2_norm(pb - p) == 0.0);
}

TEST_CASE("spectral shift is exact on band-limited data") {
    GridSpec g(512, 30.0);
    Field f(g);
    const double k = 4.0 * M_PI / 30.0;
    for (int i = 0; i < g.n; ++i) f.v[i] = std::cos(k * g.node(i));
    const double d = 0.37;
    Field shifted = shift(f, d);
    double err = 0.0;
    for (int i = 0; i < g.n; ++i)
        err = std::max(err, std::abs(shifted.v[i] - std::cos(k * (g.node(i) - d))));
    CHECK(err < 1e-12);
}
