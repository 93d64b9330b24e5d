#pragma once

#include <string>
#include <vector>

#include "wavelab/grid.hpp"

namespace wavelab {

// Plain two-column text dump (x, value).
void write_field_text(const std::string& path, const Field& f);
Field read_field_text(const std::string& path);

// Compact binary dump, little-endian: int64 n, double L, then n doubles.
void write_field_binary(const std::string& path, const Field& f);
Field read_field_binary(const std::string& path);

void write_pair_binary(const std::string& path_prefix, const FieldPair& p);
FieldPair read_pair_binary(const std::string& path_prefix);

// Tab-separated table with a header row; cells formatted at full precision.
struct TextTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(const std::vector<double>& r);
    void write(const std::string& path) const;
};

std::string format_full(double x);

}  // namespace wavelab
