#pragma once

#include <Eigen/Dense>
#include <string>

namespace aptk {

/// Uniformly sampled vector-valued function of time.
/// values is d x n: column j holds the value at origin + j*step.
struct GridFunction {
    double origin = 0.0;
    double step = 1.0;
    Eigen::MatrixXd values;  // d rows, n >= 2 columns

    int dimension() const { return static_cast<int>(values.rows()); }
    Eigen::Index size() const { return values.cols(); }
    double t(Eigen::Index j) const { return origin + step * static_cast<double>(j); }
    double t_last() const { return t(size() - 1); }

    void validate() const;  // throws std::invalid_argument on bad shape/step

    /// Linear interpolation; constant beyond the span.  clipped is set when the
    /// query needed extrapolation.
    Eigen::VectorXd eval(double x, bool* clipped = nullptr) const;

    /// CSV with header "t,v1,...,vd".
    void save_csv(const std::string& path) const;
    static GridFunction load_csv(const std::string& path);
};

}  // namespace aptk
