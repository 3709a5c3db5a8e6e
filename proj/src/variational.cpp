#include "ovp/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ovp/errors.hpp"
#include "ovp/rng.hpp"

namespace ovp {

ProblemSpec::ProblemSpec(double a_, double b_, double A_, double B_, Lagrangian L,
                         ObstaclePair obs, int n_)
    : a(a_), b(b_), A(A_), B(B_), lagrangian(std::move(L)), obstacles(std::move(obs)), n(n_) {
    if (!(a < b)) throw InfeasibleSpecError("problem requires a < b");
    if (n < 2) throw EmptyGridError("problem grid needs n >= 2");
    const double fa = obstacles.f()(a), ga = obstacles.g()(a);
    const double fb = obstacles.f()(b), gb = obstacles.g()(b);
    if (!(fa <= A && A <= ga) || !(fb <= B && B <= gb))
        throw InfeasibleSpecError("boundary values must lie between the obstacles");
}

double functional(const Lagrangian& L, const GridFunction& u) {
    double acc = 0;
    const auto& x = u.nodes();
    const auto& v = u.values();
    for (size_t i = 0; i + 1 < x.size(); ++i) {
        const double dx = x[i + 1] - x[i];
        const double xm = 0.5 * (x[i] + x[i + 1]);
        const double um = 0.5 * (v[i] + v[i + 1]);
        const double s = (v[i + 1] - v[i]) / dx;
        acc += dx * L.eval(xm, um, s);
    }
    if (!std::isfinite(acc)) throw NonFiniteError("functional evaluated non-finite");
    return acc;
}

double chord_slope(const GridFunction& u, double s, double t) {
    if (!(s < t)) throw DegeneratePairError("chord_slope needs s < t");
    return (u(s) - u(t)) / (s - t);
}

GridFunction linear_replace(const GridFunction& u, double s, double t) {
    if (!(s < t)) throw DegeneratePairError("linear_replace needs s < t");
    const double tol = 1e-12 * (u.b() - u.a());
    const double pts[2] = {s, t};
    GridFunction w = u.with_nodes(pts, tol);
    const double k = chord_slope(u, s, t);
    const double us = u(s);
    auto& nodes = w.nodes();
    for (size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i] > s + tol && nodes[i] < t - tol) w.value(i) = us + k * (nodes[i] - s);
    }
    // Pin the inserted endpoints exactly to u's values.
    for (size_t i = 0; i < nodes.size(); ++i) {
        if (std::abs(nodes[i] - s) <= tol) w.value(i) = us;
        if (std::abs(nodes[i] - t) <= tol) w.value(i) = u(t);
    }
    return w;
}

GridFunction clip_to_admissible(const GridFunction& w, const ObstaclePair& pair) {
    const double tol = 1e-12 * (w.b() - w.a());
    // Crossings of w with f and g: compare piecewise-linear functions on the
    // union of their nodes, solving each cell's linear equation.
    std::vector<double> crossings;
    auto collect = [&](const GridFunction& obs) {
        std::vector<double> merged = w.nodes();
        merged.insert(merged.end(), obs.nodes().begin(), obs.nodes().end());
        std::sort(merged.begin(), merged.end());
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
        for (size_t i = 0; i + 1 < merged.size(); ++i) {
            const double x0 = merged[i], x1 = merged[i + 1];
            if (x1 - x0 <= tol) continue;
            const double d0 = w(x0) - obs(x0);
            const double d1 = w(x1) - obs(x1);
            if ((d0 > 0 && d1 < 0) || (d0 < 0 && d1 > 0)) {
                const double xc = x0 + (x1 - x0) * d0 / (d0 - d1);
                if (xc > w.a() + tol && xc < w.b() - tol) crossings.push_back(xc);
            }
        }
    };
    collect(pair.f());
    collect(pair.g());
    GridFunction out = w.with_nodes(crossings, tol);
    for (size_t i = 0; i < out.size(); ++i) {
        const double x = out.node(i);
        const double lo = pair.f()(x);
        const double hi = pair.g()(x);
        out.value(i) = std::min(std::max(out.value(i), lo), hi);
    }
    return out;
}

namespace {

// Element contributions of the midpoint-rule functional. u-derivatives of L
// come from central differences; v-derivatives use the supplied evaluators.
struct ElementOps {
    const Lagrangian* L;

    double lu(double x, double u, double v) const {
        const double h = 1e-6 * (1.0 + std::abs(u));
        return (L->eval(x, u + h, v) - L->eval(x, u - h, v)) / (2.0 * h);
    }
    double luu(double x, double u, double v) const {
        const double h = 1e-5 * (1.0 + std::abs(u));
        return (L->eval(x, u + h, v) - 2.0 * L->eval(x, u, v) + L->eval(x, u - h, v)) /
               (h * h);
    }
    double luv(double x, double u, double v) const {
        const double h = 1e-6 * (1.0 + std::abs(u));
        return (L->eval_v(x, u + h, v) - L->eval_v(x, u - h, v)) / (2.0 * h);
    }
};

struct WorkingProblem {
    const ProblemSpec* spec;
    std::vector<double> x, f, g;  // nodes and bounds
    double h;

    size_t n() const { return x.size(); }

    double energy(const std::vector<double>& u) const {
        double acc = 0;
        const auto& L = spec->lagrangian;
        for (size_t i = 0; i + 1 < u.size(); ++i) {
            const double xm = 0.5 * (x[i] + x[i + 1]);
            const double um = 0.5 * (u[i] + u[i + 1]);
            const double s = (u[i + 1] - u[i]) / h;
            acc += h * L.eval(xm, um, s);
        }
        return acc;
    }

    void gradient(const std::vector<double>& u, std::vector<double>& grad) const {
        const auto& L = spec->lagrangian;
        ElementOps ops{&L};
        std::fill(grad.begin(), grad.end(), 0.0);
        for (size_t i = 0; i + 1 < u.size(); ++i) {
            const double xm = 0.5 * (x[i] + x[i + 1]);
            const double um = 0.5 * (u[i] + u[i + 1]);
            const double s = (u[i + 1] - u[i]) / h;
            const double lu = ops.lu(xm, um, s);
            const double lv = L.eval_v(xm, um, s);
            grad[i] += 0.5 * h * lu - lv;
            grad[i + 1] += 0.5 * h * lu + lv;
        }
    }

    // Tridiagonal Hessian of the discrete energy.
    void hessian(const std::vector<double>& u, std::vector<double>& diag,
                 std::vector<double>& off) const {
        const auto& L = spec->lagrangian;
        ElementOps ops{&L};
        std::fill(diag.begin(), diag.end(), 0.0);
        std::fill(off.begin(), off.end(), 0.0);
        for (size_t i = 0; i + 1 < u.size(); ++i) {
            const double xm = 0.5 * (x[i] + x[i + 1]);
            const double um = 0.5 * (u[i] + u[i + 1]);
            const double s = (u[i + 1] - u[i]) / h;
            const double luu = ops.luu(xm, um, s);
            const double luv = ops.luv(xm, um, s);
            const double lvv = L.eval_vv(xm, um, s);
            diag[i] += 0.25 * h * luu - luv + lvv / h;
            diag[i + 1] += 0.25 * h * luu + luv + lvv / h;
            off[i] += 0.25 * h * luu - lvv / h;
        }
    }

    void project(std::vector<double>& u) const {
        for (size_t i = 1; i + 1 < u.size(); ++i)
            u[i] = std::min(std::max(u[i], f[i]), g[i]);
        u.front() = spec->A;
        u.back() = spec->B;
    }

    // Projected-gradient KKT residual: || u - P(u - grad) ||_inf over interior.
    double kkt(const std::vector<double>& u, const std::vector<double>& grad) const {
        double r = 0;
        for (size_t i = 1; i + 1 < u.size(); ++i) {
            const double step = std::min(std::max(u[i] - grad[i], f[i]), g[i]);
            r = std::max(r, std::abs(u[i] - step));
        }
        return r;
    }
};

// Thomas solve of the tridiagonal system restricted to `free_idx`; adds
// `damping` to the diagonal. Returns false on a non-positive pivot.
bool solve_free_tridiag(const std::vector<double>& diag, const std::vector<double>& off,
                        const std::vector<double>& rhs, const std::vector<int>& free_idx,
                        double damping, std::vector<double>& out) {
    const size_t m = free_idx.size();
    if (m == 0) return false;
    std::vector<double> d(m), e(m, 0.0), r(m);
    for (size_t j = 0; j < m; ++j) {
        d[j] = diag[static_cast<size_t>(free_idx[j])] + damping;
        r[j] = rhs[static_cast<size_t>(free_idx[j])];
        if (j + 1 < m && free_idx[j + 1] == free_idx[j] + 1)
            e[j] = off[static_cast<size_t>(free_idx[j])];
    }
    for (size_t j = 1; j < m; ++j) {
        if (d[j - 1] <= 0) return false;
        const double w = e[j - 1] / d[j - 1];
        d[j] -= w * e[j - 1];
        r[j] -= w * r[j - 1];
    }
    if (d[m - 1] <= 0) return false;
    out.assign(diag.size(), 0.0);
    std::vector<double> y(m);
    y[m - 1] = r[m - 1] / d[m - 1];
    for (size_t j = m - 1; j-- > 0;) y[j] = (r[j] - e[j] * y[j + 1]) / d[j];
    for (size_t j = 0; j < m; ++j) out[static_cast<size_t>(free_idx[j])] = y[j];
    return true;
}

}  // namespace

SolveResult solve(const ProblemSpec& spec, const SolveOptions& opts) {
    WorkingProblem wp;
    wp.spec = &spec;
    const size_t n = static_cast<size_t>(spec.n);
    wp.x.resize(n);
    wp.f.resize(n);
    wp.g.resize(n);
    wp.h = (spec.b - spec.a) / static_cast<double>(n - 1);
    for (size_t i = 0; i < n; ++i) {
        wp.x[i] = spec.a + static_cast<double>(i) * wp.h;
        wp.f[i] = spec.obstacles.f()(wp.x[i]);
        wp.g[i] = spec.obstacles.g()(wp.x[i]);
        if (wp.f[i] > wp.g[i]) throw InfeasibleSpecError("f > g at a grid node");
    }
    wp.x.back() = spec.b;

    // Feasible start: the boundary chord clipped into the band.
    std::vector<double> u(n);
    for (size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n - 1);
        u[i] = spec.A + t * (spec.B - spec.A);
    }
    wp.project(u);

    std::vector<double> grad(n), diag(n), off(n), step;
    std::vector<double> trial(n);
    std::vector<int> free_idx;
    double J = wp.energy(u);
    double kkt = std::numeric_limits<double>::infinity();
    long iter = 0;
    const auto tol_of = [&](double energy) { return opts.tol * (1.0 + std::abs(energy)); };

    while (iter < opts.max_iter) {
        wp.gradient(u, grad);
        kkt = wp.kkt(u, grad);
        if (kkt <= tol_of(J)) break;
        ++iter;

        // Active set from bound proximity and gradient sign.
        free_idx.clear();
        const double eps_a = 1e-12 * (1.0 + wp.h);
        for (size_t i = 1; i + 1 < n; ++i) {
            const bool at_lower = u[i] <= wp.f[i] + eps_a && grad[i] > 0;
            const bool at_upper = u[i] >= wp.g[i] - eps_a && grad[i] < 0;
            if (!at_lower && !at_upper) free_idx.push_back(static_cast<int>(i));
        }

        bool advanced = false;
        if (!free_idx.empty()) {
            wp.hessian(u, diag, off);
            double damping = 0.0;
            for (int attempt = 0; attempt < 4 && !advanced; ++attempt) {
                if (solve_free_tridiag(diag, off, grad, free_idx, damping, step)) {
                    double t = 1.0;
                    for (int ls = 0; ls < 40; ++ls) {
                        trial = u;
                        for (int i : free_idx)
                            trial[static_cast<size_t>(i)] -= t * step[static_cast<size_t>(i)];
                        wp.project(trial);
                        const double Jt = wp.energy(trial);
                        double dir = 0;  // Armijo decrease along the projected move
                        for (size_t i = 0; i < n; ++i) dir += grad[i] * (trial[i] - u[i]);
                        if (Jt <= J + 1e-4 * dir && Jt < J + 1e-14 * (1.0 + std::abs(J))) {
                            u.swap(trial);
                            J = Jt;
                            advanced = true;
                            break;
                        }
                        t *= 0.5;
                    }
                }
                damping = damping == 0.0 ? 1e-8 + spec.lagrangian.mu / wp.h : damping * 100.0;
            }
        }
        if (!advanced) {
            // Projected-gradient fallback with backtracking.
            double t = 1.0;
            bool moved = false;
            for (int ls = 0; ls < 60; ++ls) {
                trial = u;
                for (size_t i = 1; i + 1 < n; ++i) trial[i] -= t * grad[i];
                wp.project(trial);
                const double Jt = wp.energy(trial);
                double dir = 0;
                for (size_t i = 0; i < n; ++i) dir += grad[i] * (trial[i] - u[i]);
                if (Jt <= J + 1e-4 * dir) {
                    u.swap(trial);
                    J = Jt;
                    moved = true;
                    break;
                }
                t *= 0.5;
            }
            if (!moved) break;  // no descent direction left at this precision
        }
    }

    wp.gradient(u, grad);
    kkt = wp.kkt(u, grad);
    J = wp.energy(u);

    SolveResult res{GridFunction(spec.a, spec.b, u), J, iter, kkt,
                    kkt <= tol_of(J), {}, {}};
    const double act_tol = 1e-10 * (1.0 + std::abs(spec.B - spec.A));
    for (size_t i = 0; i < n; ++i) {
        if (u[i] <= wp.f[i] + act_tol) res.lower_active.push_back(static_cast<int>(i));
        if (u[i] >= wp.g[i] - act_tol) res.upper_active.push_back(static_cast<int>(i));
    }
    return res;
}

bool check_A1(const GridFunction& u, double x_lo, double x_hi, double u_lo, double u_hi) {
    for (size_t i = 0; i < u.size(); ++i) {
        const double x = u.node(i), v = u.value(i);
        if (x < x_lo || x > x_hi || v < u_lo || v > u_hi) return false;
    }
    return true;
}

bool check_A1_band(const GridFunction& u, const ObstaclePair& pair, double slack) {
    for (size_t i = 0; i < u.size(); ++i) {
        const double x = u.node(i), v = u.value(i);
        if (v < pair.f()(x) - slack || v > pair.g()(x) + slack) return false;
    }
    return true;
}

bool check_A2(const GridFunction& u, const Lagrangian& L, double c) {
    return functional(L, u) <= c;
}

A3Report check_A3(const GridFunction& u, const Lagrangian& L, const TwoArgModulus& omega,
                  const A3Plan& plan) {
    A3Report rep;
    rep.j_u = functional(L, u);
    rep.tol_quad = 1e-6 * (1.0 + std::abs(rep.j_u));
    rep.min_slack = std::numeric_limits<double>::infinity();
    rep.beyond_min_slack = std::numeric_limits<double>::infinity();
    SplitMix64 rng(plan.seed);
    const double a = u.a(), b = u.b();
    const double len = b - a;

    auto eval_pair = [&](double s, double t) {
        GridFunction ust = linear_replace(u, s, t);
        const double k = chord_slope(u, s, t);
        return functional(L, ust) + omega(std::abs(k), t - s) * (t - s) - rep.j_u;
    };

    for (int j = 0; j < plan.scales; ++j) {
        const double scale = std::min(plan.delta0 / std::pow(2.0, j), len);
        for (int p = 0; p < plan.pairs_per_scale; ++p) {
            const double s = a + rng.uniform() * (len - scale);
            const double t = s + scale * (0.25 + 0.75 * rng.uniform());
            if (!(t > s) || t > b) continue;
            const double slack = eval_pair(s, t);
            rep.min_slack = std::min(rep.min_slack, slack);
            ++rep.pairs_checked;
            if (slack < -rep.tol_quad) rep.violations.push_back({s, t, slack});
        }
    }
    if (plan.include_beyond_delta0 && plan.delta0 < len) {
        for (int p = 0; p < plan.pairs_per_scale; ++p) {
            const double width = plan.delta0 + (len - plan.delta0) * rng.uniform();
            const double s = a + rng.uniform() * (len - width);
            const double t = s + width;
            if (!(t > s) || t > b) continue;
            rep.beyond_min_slack = std::min(rep.beyond_min_slack, eval_pair(s, t));
            ++rep.beyond_pairs;
        }
    }
    if (rep.pairs_checked == 0) rep.min_slack = 0;
    return rep;
}

}  // namespace ovp
