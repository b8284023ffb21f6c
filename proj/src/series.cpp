#include "starflow/series.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace starflow {

namespace {

std::string num17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

int QuantitySeries::column_index(const std::string& name) const
{
    for (size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    return -1;
}

std::vector<double> QuantitySeries::column(const std::string& name) const
{
    const int idx = column_index(name);
    if (idx < 0) throw DomainError("series: no column named '" + name + "'");
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[idx]);
    return out;
}

void QuantitySeries::write_csv(std::ostream& os) const
{
    for (const auto& c : comments) os << "# " << c << "\n";
    for (size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << "\n";
    for (const auto& r : rows) {
        for (size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << num17(r[i]);
        os << "\n";
    }
}

QuantitySeries QuantitySeries::read_csv(std::istream& is)
{
    QuantitySeries s;
    std::string line;
    bool have_header = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            s.comments.push_back(line.size() > 2 ? line.substr(2) : "");
            continue;
        }
        std::istringstream ls(line);
        std::string tok;
        if (!have_header) {
            while (std::getline(ls, tok, ',')) s.columns.push_back(tok);
            have_header = true;
            continue;
        }
        std::vector<double> row;
        while (std::getline(ls, tok, ',')) {
            try {
                row.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw DomainError("series: bad numeric cell '" + tok + "'");
            }
        }
        if (row.size() != s.columns.size())
            throw DomainError("series: row width " + std::to_string(row.size()) +
                              " does not match header width " + std::to_string(s.columns.size()));
        s.rows.push_back(std::move(row));
    }
    if (!have_header) throw DomainError("series: missing header row");
    return s;
}

void write_snapshot_csv(std::ostream& os, const GeometryFields& f)
{
    const SphereGrid& g = *f.grid;
    os << "# starflow snapshot\n";
    os << "# dim=" << g.dim << " n_theta=" << g.n_theta << " n_phi=" << g.n_phi
       << " ambient=" << f.ambient.name() << "\n";
    os << "node,theta,phi,rho,u,omega";
    for (int a = 1; a <= g.dim; ++a) os << ",kappa_" << a;
    os << ",H,measure_weight\n";
    for (int idx = 0; idx < g.n_nodes(); ++idx) {
        const double th = (g.dim == 2) ? g.theta(g.row_of(idx)) : 0.0;
        const double ph = g.phi(g.dim == 2 ? g.col_of(idx) : idx);
        os << idx << "," << num17(th) << "," << num17(ph) << "," << num17(f.rho(idx)) << ","
           << num17(f.u(idx)) << "," << num17(f.omega(idx));
        for (int a = 0; a < g.dim; ++a) os << "," << num17(f.kappa(idx, a));
        os << "," << num17(f.mean_H(idx)) << "," << num17(f.measure_weight(idx)) << "\n";
    }
}

void write_field_csv(std::ostream& os, const SphereGrid& grid, const Eigen::ArrayXd& data)
{
    if (static_cast<int>(data.size()) != grid.n_nodes())
        throw DomainError("write_field_csv: field size does not match grid");
    os << "# starflow field\n";
    os << "# dim=" << grid.dim << " n_theta=" << grid.n_theta << " n_phi=" << grid.n_phi << "\n";
    os << "node_index,value\n";
    for (int i = 0; i < grid.n_nodes(); ++i) os << i << "," << num17(data(i)) << "\n";
}

Eigen::ArrayXd read_field_csv(std::istream& is, const SphereGrid& grid)
{
    std::string line;
    Eigen::ArrayXd out(grid.n_nodes());
    int count = 0;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.find("dim=") != std::string::npos) {
                std::ostringstream expect;
                expect << "# dim=" << grid.dim << " n_theta=" << grid.n_theta
                       << " n_phi=" << grid.n_phi;
                if (line != expect.str())
                    throw DomainError("read_field_csv: grid parameters do not match: '" + line +
                                      "'");
            }
            continue;
        }
        if (!header_seen) {
            header_seen = true;  // column header row
            continue;
        }
        const size_t comma = line.find(',');
        if (comma == std::string::npos) throw DomainError("read_field_csv: bad row '" + line + "'");
        const int idx = std::stoi(line.substr(0, comma));
        if (idx < 0 || idx >= grid.n_nodes())
            throw DomainError("read_field_csv: node index out of range");
        out(idx) = std::stod(line.substr(comma + 1));
        ++count;
    }
    if (count != grid.n_nodes())
        throw DomainError("read_field_csv: expected " + std::to_string(grid.n_nodes()) +
                          " rows, got " + std::to_string(count));
    return out;
}

}  // namespace starflow
