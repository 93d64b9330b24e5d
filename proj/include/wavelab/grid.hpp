#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace wavelab {

// Uniform periodic grid on [-L, L) with n points, n a power of two.
// The spatial variable doubles as the moving-frame variable z = x - rho(t);
// code that works in the co-moving frame says so at the call site.
struct GridSpec {
    int n = 0;
    double half_length = 0.0;  // L

    GridSpec() = default;
    GridSpec(int n_, double half_length_) : n(n_), half_length(half_length_) {
        if (n < 16 || (n & (n - 1)) != 0)
            throw std::invalid_argument("GridSpec: n must be a power of two, n >= 16");
        if (!(half_length > 0.0))
            throw std::invalid_argument("GridSpec: half_length must be positive");
    }

    double dx() const { return 2.0 * half_length / n; }
    double node(int i) const { return -half_length + i * dx(); }
    // wavenumber of rfft bin j, j = 0..n/2
    double wavenumber(int j) const { return M_PI * j / half_length; }

    std::vector<double> nodes() const {
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) x[i] = node(i);
        return x;
    }

    bool operator==(const GridSpec& o) const {
        return n == o.n && half_length == o.half_length;
    }
    bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

struct Field {
    GridSpec grid;
    std::vector<double> v;

    Field() = default;
    explicit Field(const GridSpec& g) : grid(g), v(g.n, 0.0) {}
    Field(const GridSpec& g, std::vector<double> values) : grid(g), v(std::move(values)) {
        if (static_cast<int>(v.size()) != g.n)
            throw std::invalid_argument("Field: value count does not match grid");
    }

    int size() const { return grid.n; }
    double& operator[](int i) { return v[i]; }
    double operator[](int i) const { return v[i]; }

    bool all_finite() const {
        for (double x : v)
            if (!std::isfinite(x)) return false;
        return true;
    }

    Field& operator+=(const Field& o) {
        check_same_grid(o);
        for (int i = 0; i < size(); ++i) v[i] += o.v[i];
        return *this;
    }
    Field& operator-=(const Field& o) {
        check_same_grid(o);
        for (int i = 0; i < size(); ++i) v[i] -= o.v[i];
        return *this;
    }
    Field& operator*=(double s) {
        for (double& x : v) x *= s;
        return *this;
    }

    void check_same_grid(const Field& o) const {
        if (grid != o.grid) throw std::invalid_argument("Field: grid mismatch");
    }
};

inline Field operator+(Field a, const Field& b) { a += b; return a; }
inline Field operator-(Field a, const Field& b) { a -= b; return a; }
inline Field operator*(double s, Field a) { a *= s; return a; }

// pointwise product
inline Field hadamard(const Field& a, const Field& b) {
    a.check_same_grid(b);
    Field r(a.grid);
    for (int i = 0; i < a.size(); ++i) r.v[i] = a.v[i] * b.v[i];
    return r;
}

// The PDE state: surface displacement eta and velocity u on one grid.
struct FieldPair {
    Field eta;
    Field u;

    FieldPair() = default;
    explicit FieldPair(const GridSpec& g) : eta(g), u(g) {}
    FieldPair(Field e, Field uu) : eta(std::move(e)), u(std::move(uu)) {
        if (eta.grid != u.grid) throw std::invalid_argument("FieldPair: fields on different grids");
    }

    const GridSpec& grid() const { return eta.grid; }
    bool all_finite() const { return eta.all_finite() && u.all_finite(); }

    FieldPair& operator+=(const FieldPair& o) { eta += o.eta; u += o.u; return *this; }
    FieldPair& operator-=(const FieldPair& o) { eta -= o.eta; u -= o.u; return *this; }
    FieldPair& operator*=(double s) { eta *= s; u *= s; return *this; }
};

inline FieldPair operator+(FieldPair a, const FieldPair& b) { a += b; return a; }
inline FieldPair operator-(FieldPair a, const FieldPair& b) { a -= b; return a; }
inline FieldPair operator*(double s, FieldPair a) { a *= s; return a; }

}  // namespace wavelab
