#include "aptk/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace aptk {

void GridFunction::validate() const {
    if (values.cols() < 2) throw std::invalid_argument("GridFunction: need at least 2 samples");
    if (values.rows() < 1) throw std::invalid_argument("GridFunction: need dimension >= 1");
    if (!(step > 0)) throw std::invalid_argument("GridFunction: step must be positive");
}

Eigen::VectorXd GridFunction::eval(double x, bool* clipped) const {
    const Eigen::Index n = size();
    const double pos = (x - origin) / step;
    if (clipped) *clipped = false;
    if (pos <= 0) {
        if (clipped && pos < -1e-12) *clipped = true;
        return values.col(0);
    }
    if (pos >= static_cast<double>(n - 1)) {
        if (clipped && pos > static_cast<double>(n - 1) + 1e-12) *clipped = true;
        return values.col(n - 1);
    }
    const Eigen::Index j = static_cast<Eigen::Index>(pos);
    const double w = pos - static_cast<double>(j);
    return (1.0 - w) * values.col(j) + w * values.col(j + 1);
}

void GridFunction::save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("GridFunction: cannot open " + path);
    out << "t";
    for (int i = 0; i < dimension(); ++i) out << ",v" << (i + 1);
    out << "\n";
    char buf[32];
    for (Eigen::Index j = 0; j < size(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", t(j));
        out << buf;
        for (int i = 0; i < dimension(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", values(i, j));
            out << "," << buf;
        }
        out << "\n";
    }
}

GridFunction GridFunction::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("GridFunction: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("GridFunction: empty file " + path);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2) throw std::runtime_error("GridFunction: need at least 2 rows");
    const std::size_t d = rows[0].size() - 1;
    GridFunction g;
    g.origin = rows[0][0];
    g.step = rows[1][0] - rows[0][0];
    g.values.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(rows.size()));
    for (std::size_t j = 0; j < rows.size(); ++j) {
        if (rows[j].size() != d + 1) throw std::runtime_error("GridFunction: ragged CSV");
        for (std::size_t i = 0; i < d; ++i)
            g.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[j][i + 1];
    }
    g.validate();
    return g;
}

}  // namespace aptk
