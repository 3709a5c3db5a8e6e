#include "ovp/taut_string.hpp"

#include <algorithm>
#include <cmath>

#include "ovp/errors.hpp"

namespace ovp {

namespace {

enum class Pin : signed char { free_node = 0, lower = -1, upper = 1 };

// Fill u by straight interpolation between consecutive pinned nodes.
void interpolate_arcs(const std::vector<Pin>& pin, const std::vector<double>& f,
                      const std::vector<double>& g, std::vector<double>& u) {
    const size_t n = u.size();
    size_t left = 0;
    for (size_t i = 1; i < n; ++i) {
        if (pin[i] == Pin::free_node && i + 1 < n) continue;
        // pinned node (or right endpoint); set its value and fill the arc
        if (i + 1 < n || pin[i] != Pin::free_node)
            u[i] = pin[i] == Pin::lower ? f[i] : (pin[i] == Pin::upper ? g[i] : u[i]);
        for (size_t j = left + 1; j < i; ++j) {
            const double t = static_cast<double>(j - left) / static_cast<double>(i - left);
            u[j] = u[left] + t * (u[i] - u[left]);
        }
        left = i;
    }
}

void certify_kkt(const std::vector<Pin>& pin, const std::vector<double>& f,
                 const std::vector<double>& g, const std::vector<double>& u) {
    const size_t n = u.size();
    double scale = 1.0;
    for (size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(u[i]));
    const double tol = 1e-9 * scale;
    for (size_t i = 1; i + 1 < n; ++i) {
        if (u[i] < f[i] - tol || u[i] > g[i] + tol)
            throw Error("taut string certificate: infeasible node");
        const double curv = 2.0 * u[i] - u[i - 1] - u[i + 1];  // ~ gradient sign
        switch (pin[i]) {
            case Pin::free_node:
                if (std::abs(curv) > tol) throw Error("taut string certificate: free node not linear");
                break;
            case Pin::lower:
                if (curv < -tol) throw Error("taut string certificate: lower multiplier negative");
                break;
            case Pin::upper:
                if (curv > tol) throw Error("taut string certificate: upper multiplier negative");
                break;
        }
    }
}

}  // namespace

GridFunction taut_string_oracle(const ObstaclePair& pair, double A, double B, int n) {
    if (n < 2) throw EmptyGridError("taut string needs n >= 2");
    const double a = pair.a(), b = pair.b();
    const double h = (b - a) / (n - 1);
    std::vector<double> x(static_cast<size_t>(n)), f(x.size()), g(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        x[i] = a + static_cast<double>(i) * h;
        f[i] = pair.f()(x[i]);
        g[i] = pair.g()(x[i]);
    }
    x.back() = b;
    if (!(f.front() <= A && A <= g.front() && f.back() <= B && B <= g.back()))
        throw InfeasibleSpecError("taut string: endpoint values outside the band");

    const size_t N = x.size();
    std::vector<Pin> pin(N, Pin::free_node);
    std::vector<double> u(N), target(N);
    u.front() = A;
    u.back() = B;
    // start from the clipped chord
    for (size_t i = 1; i + 1 < N; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(N - 1);
        u[i] = std::min(std::max(A + t * (B - A), f[i]), g[i]);
    }

    const long cap = 40L * static_cast<long>(N) + 200;
    for (long round = 0; round < cap; ++round) {
        // Equality-constrained optimum for the current pin set.
        target = u;
        target.front() = A;
        target.back() = B;
        interpolate_arcs(pin, f, g, target);

        // Step toward it until the first blocking bound.
        double t_max = 1.0;
        size_t blocker = 0;
        Pin blocker_side = Pin::free_node;
        for (size_t i = 1; i + 1 < N; ++i) {
            if (pin[i] != Pin::free_node) continue;
            const double d = target[i] - u[i];
            double t_i = 1.0;
            Pin side = Pin::free_node;
            if (d > 0 && u[i] + d > g[i]) {
                t_i = (g[i] - u[i]) / d;
                side = Pin::upper;
            } else if (d < 0 && u[i] + d < f[i]) {
                t_i = (f[i] - u[i]) / d;
                side = Pin::lower;
            }
            if (t_i < t_max) {
                t_max = t_i;
                blocker = i;
                blocker_side = side;
            }
        }
        if (t_max < 1.0) {
            for (size_t i = 1; i + 1 < N; ++i)
                if (pin[i] == Pin::free_node) u[i] += t_max * (target[i] - u[i]);
            pin[blocker] = blocker_side;
            u[blocker] = blocker_side == Pin::lower ? f[blocker] : g[blocker];
            const double tol = 1e-14 * (1.0 + std::abs(B - A) + pair.M1());
            for (size_t i = 1; i + 1 < N; ++i) {
                if (pin[i] != Pin::free_node) continue;
                if (u[i] <= f[i] + tol) {
                    pin[i] = Pin::lower;
                    u[i] = f[i];
                } else if (u[i] >= g[i] - tol) {
                    pin[i] = Pin::upper;
                    u[i] = g[i];
                }
            }
            continue;
        }
        u = target;

        // Multiplier signs; release the worst violator.
        double worst = 0;
        size_t worst_i = 0;
        for (size_t i = 1; i + 1 < N; ++i) {
            const double curv = 2.0 * u[i] - u[i - 1] - u[i + 1];
            if (pin[i] == Pin::lower && curv < worst) {
                worst = curv;
                worst_i = i;
            } else if (pin[i] == Pin::upper && -curv < worst) {
                worst = -curv;
                worst_i = i;
            }
        }
        const double rel_tol = 1e-13 * (1.0 + std::abs(B - A) + pair.M1());
        if (worst < -rel_tol) {
            pin[worst_i] = Pin::free_node;
            continue;
        }
        certify_kkt(pin, f, g, u);
        return GridFunction(a, b, u);
    }
    throw Error("taut string active-set method did not terminate");
}

GridFunction least_concave_majorant(const std::vector<double>& nodes,
                                    const std::vector<double>& floor_values, double A,
                                    double B) {
    const size_t n = nodes.size();
    if (n < 2 || floor_values.size() != n) throw Error("lcm: bad inputs");
    // Upper convex hull (Andrew chain) over the floor points with the pinned
    // endpoints substituted in.
    std::vector<double> y = floor_values;
    y.front() = A;
    y.back() = B;
    std::vector<size_t> hull;
    for (size_t i = 0; i < n; ++i) {
        while (hull.size() >= 2) {
            const size_t p = hull[hull.size() - 2], q = hull[hull.size() - 1];
            const double cross = (nodes[q] - nodes[p]) * (y[i] - y[p]) -
                                 (nodes[i] - nodes[p]) * (y[q] - y[p]);
            if (cross >= 0) hull.pop_back();  // q below chord p-i: not on the upper hull
            else break;
        }
        hull.push_back(i);
    }
    std::vector<double> u(n);
    for (size_t s = 0; s + 1 < hull.size(); ++s) {
        const size_t p = hull[s], q = hull[s + 1];
        for (size_t i = p; i <= q; ++i) {
            const double t = (nodes[i] - nodes[p]) / (nodes[q] - nodes[p]);
            u[i] = y[p] + t * (y[q] - y[p]);
        }
    }
    return GridFunction(std::vector<double>(nodes), std::move(u));
}

}  // namespace ovp
