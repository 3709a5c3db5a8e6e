#include "ovp/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "ovp/errors.hpp"

namespace ovp {

GridFunction::GridFunction(double a, double b, std::vector<double> values)
    : values_(std::move(values)) {
    if (values_.size() < 2) throw EmptyGridError("grid needs at least 2 nodes");
    if (!(a < b)) throw Error("grid interval requires a < b");
    const size_t n = values_.size();
    nodes_.resize(n);
    const double h = (b - a) / static_cast<double>(n - 1);
    for (size_t i = 0; i < n; ++i) nodes_[i] = a + static_cast<double>(i) * h;
    nodes_.back() = b;
    uniform_ = true;
    validate();
}

GridFunction::GridFunction(std::vector<double> nodes, std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
    if (nodes_.size() < 2) throw EmptyGridError("grid needs at least 2 nodes");
    if (nodes_.size() != values_.size()) throw Error("node/value size mismatch");
    uniform_ = false;
    validate();
}

void GridFunction::validate() const {
    for (size_t i = 0; i + 1 < nodes_.size(); ++i)
        if (!(nodes_[i] < nodes_[i + 1])) throw Error("grid nodes must be strictly increasing");
    for (double v : values_)
        if (!std::isfinite(v)) throw NonFiniteError("grid value not finite");
}

size_t GridFunction::cell_index(double x) const {
    if (x <= nodes_.front()) return 0;
    if (x >= nodes_.back()) return nodes_.size() - 2;
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    return static_cast<size_t>(it - nodes_.begin()) - 1;
}

double GridFunction::operator()(double x) const {
    if (x <= nodes_.front()) return values_.front();
    if (x >= nodes_.back()) return values_.back();
    const size_t i = cell_index(x);
    const double t = (x - nodes_[i]) / (nodes_[i + 1] - nodes_[i]);
    return values_[i] + t * (values_[i + 1] - values_[i]);
}

double GridFunction::cell_slope(size_t i) const {
    return (values_[i + 1] - values_[i]) / (nodes_[i + 1] - nodes_[i]);
}

std::vector<double> GridFunction::slopes() const {
    std::vector<double> s(nodes_.size() - 1);
    for (size_t i = 0; i + 1 < nodes_.size(); ++i) s[i] = cell_slope(i);
    return s;
}

GridFunction GridFunction::with_nodes(std::span<const double> xs, double tol) const {
    std::vector<double> extra(xs.begin(), xs.end());
    std::sort(extra.begin(), extra.end());
    std::vector<double> nn, vv;
    nn.reserve(nodes_.size() + extra.size());
    vv.reserve(nodes_.size() + extra.size());
    size_t j = 0;
    for (size_t i = 0; i < nodes_.size(); ++i) {
        while (j < extra.size() && extra[j] < nodes_[i] - tol) {
            if (extra[j] > a() && extra[j] < b() &&
                (nn.empty() || extra[j] > nn.back() + tol)) {
                nn.push_back(extra[j]);
                vv.push_back((*this)(extra[j]));
            }
            ++j;
        }
        while (j < extra.size() && std::abs(extra[j] - nodes_[i]) <= tol) ++j;
        nn.push_back(nodes_[i]);
        vv.push_back(values_[i]);
    }
    return GridFunction(std::move(nn), std::move(vv));
}

double GridFunction::max_abs() const {
    double m = 0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double GridFunction::slope_l2_norm() const {
    double s = 0;
    for (size_t i = 0; i + 1 < nodes_.size(); ++i) {
        const double sl = cell_slope(i);
        s += sl * sl * (nodes_[i + 1] - nodes_[i]);
    }
    return std::sqrt(s);
}

double GridFunction::max_abs_slope() const {
    double m = 0;
    for (size_t i = 0; i + 1 < nodes_.size(); ++i) m = std::max(m, std::abs(cell_slope(i)));
    return m;
}

}  // namespace ovp
