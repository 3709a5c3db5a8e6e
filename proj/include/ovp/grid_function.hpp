#pragma once

#include <span>
#include <vector>

namespace ovp {

/// Piecewise-linear function on a 1D grid. Constructed uniform; node
/// insertion (chord endpoints, obstacle crossings) may make it non-uniform,
/// so nodes are stored explicitly. The derivative is constant on each cell.
class GridFunction {
  public:
    GridFunction() = default;

    /// Uniform grid on [a, b] with values.size() >= 2 nodes.
    GridFunction(double a, double b, std::vector<double> values);

    /// Explicit nodes (strictly increasing) and values, sizes equal, >= 2.
    GridFunction(std::vector<double> nodes, std::vector<double> values);

    /// Sample a callable on a uniform grid of n nodes.
    template <class F>
    static GridFunction sample(double a, double b, int n, F&& f) {
        std::vector<double> v(static_cast<size_t>(n));
        const double h = (b - a) / (n - 1);
        for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = f(a + i * h);
        return GridFunction(a, b, std::move(v));
    }

    double a() const { return nodes_.front(); }
    double b() const { return nodes_.back(); }
    size_t size() const { return nodes_.size(); }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& values() const { return values_; }
    double node(size_t i) const { return nodes_[i]; }
    double value(size_t i) const { return values_[i]; }
    double& value(size_t i) { return values_[i]; }
    bool uniform() const { return uniform_; }

    /// Piecewise-linear interpolation; x clamped to [a, b].
    double operator()(double x) const;

    /// Index of the cell containing x (last cell for x == b).
    size_t cell_index(double x) const;

    /// Slope of cell i, i in [0, size()-2].
    double cell_slope(size_t i) const;

    /// All cell slopes.
    std::vector<double> slopes() const;

    /// Copy with extra nodes inserted (values interpolated); duplicates
    /// within tol of an existing node are skipped.
    GridFunction with_nodes(std::span<const double> xs, double tol = 0.0) const;

    /// max_i |values_i|
    double max_abs() const;

    /// Discrete L2 norm of the derivative: sqrt(sum slope^2 * dx).
    double slope_l2_norm() const;

    /// max cell slope magnitude
    double max_abs_slope() const;

  private:
    std::vector<double> nodes_;
    std::vector<double> values_;
    bool uniform_ = true;
    void validate() const;
};

}  // namespace ovp
