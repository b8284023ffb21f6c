#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "starflow/geometry.hpp"

namespace starflow {

/// Time-indexed table of named columns, serialized as CSV with '#' comment
/// lines, one fixed header row, and %.17g data cells (byte-reproducible).
struct QuantitySeries {
    std::vector<std::string> comments;  ///< written as leading '# ' lines
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    int column_index(const std::string& name) const;  ///< -1 when absent
    std::vector<double> column(const std::string& name) const;

    void write_csv(std::ostream& os) const;
    static QuantitySeries read_csv(std::istream& is);
};

/// Columnar snapshot of a geometry state:
/// node, theta, phi, rho, u, omega, kappa_1..kappa_n, H, measure_weight.
void write_snapshot_csv(std::ostream& os, const GeometryFields& f);

/// Flat (node_index, value) table with a header recording grid parameters.
void write_field_csv(std::ostream& os, const SphereGrid& grid, const Eigen::ArrayXd& data);

/// Reads a field written by write_field_csv and verifies it matches `grid`.
Eigen::ArrayXd read_field_csv(std::istream& is, const SphereGrid& grid);

}  // namespace starflow
