#include "wavelab/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wavelab {

std::string format_full(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_field_text(const std::string& path, const Field& f) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (int i = 0; i < f.size(); ++i)
        out << format_full(f.grid.node(i)) << '\t' << format_full(f.v[i]) << '\n';
}

Field read_field_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::vector<double> xs, vs;
    double x, v;
    while (in >> x >> v) {
        xs.push_back(x);
        vs.push_back(v);
    }
    if (xs.size() < 16) throw std::runtime_error("field file too short: " + path);
    const int n = static_cast<int>(xs.size());
    const double L = -xs[0];
    Field f(GridSpec(n, L), std::move(vs));
    return f;
}

void write_field_binary(const std::string& path, const Field& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    const int64_t n = f.size();
    const double L = f.grid.half_length;
    out.write(reinterpret_cast<const char*>(&n), sizeof(n));
    out.write(reinterpret_cast<const char*>(&L), sizeof(L));
    out.write(reinterpret_cast<const char*>(f.v.data()), n * sizeof(double));
}

Field read_field_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    int64_t n = 0;
    double L = 0.0;
    in.read(reinterpret_cast<char*>(&n), sizeof(n));
    in.read(reinterpret_cast<char*>(&L), sizeof(L));
    if (!in || n < 16 || n > (1 << 26)) throw std::runtime_error("bad field header: " + path);
    Field f(GridSpec(static_cast<int>(n), L));
    in.read(reinterpret_cast<char*>(f.v.data()), n * sizeof(double));
    if (!in) throw std::runtime_error("truncated field payload: " + path);
    return f;
}

void write_pair_binary(const std::string& path_prefix, const FieldPair& p) {
    write_field_binary(path_prefix + ".eta.bin", p.eta);
    write_field_binary(path_prefix + ".u.bin", p.u);
}

FieldPair read_pair_binary(const std::string& path_prefix) {
    return FieldPair(read_field_binary(path_prefix + ".eta.bin"),
                     read_field_binary(path_prefix + ".u.bin"));
}

void TextTable::add_row(const std::vector<double>& r) {
    if (r.size() != columns.size())
        throw std::invalid_argument("TextTable: row width mismatch");
    rows.push_back(r);
}

void TextTable::write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (size_t j = 0; j < columns.size(); ++j)
        out << columns[j] << (j + 1 < columns.size() ? '\t' : '\n');
    for (const auto& r : rows) {
        for (size_t j = 0; j < r.size(); ++j)
            out << format_full(r[j]) << (j + 1 < r.size() ? '\t' : '\n');
    }
}

}  // namespace wavelab
