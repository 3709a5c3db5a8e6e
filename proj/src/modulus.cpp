#include "ovp/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "ovp/errors.hpp"

namespace ovp {

Modulus::Modulus() : lags_{0.0}, values_{0.0} {}

Modulus::Modulus(std::vector<double> lags, std::vector<double> values)
    : lags_(std::move(lags)), values_(std::move(values)) {
    if (lags_.empty() || lags_.front() != 0.0) {
        lags_.insert(lags_.begin(), 0.0);
        values_.insert(values_.begin(), 0.0);
    }
    if (lags_.size() != values_.size()) throw Error("modulus table size mismatch");
    for (size_t i = 0; i + 1 < lags_.size(); ++i) {
        if (!(lags_[i] < lags_[i + 1])) throw Error("modulus lags must increase");
        if (values_[i] > values_[i + 1]) throw Error("modulus values must be nondecreasing");
    }
    if (values_.front() != 0.0) throw Error("modulus must vanish at 0");
}

double Modulus::operator()(double eps) const {
    if (eps <= 0) return 0;
    auto it = std::lower_bound(lags_.begin(), lags_.end(), eps);
    if (it == lags_.end()) return values_.back();
    return values_[static_cast<size_t>(it - lags_.begin())];
}

bool Modulus::is_zero() const {
    for (double v : values_)
        if (v != 0.0) return false;
    return true;
}

Modulus estimate_modulus(const GridFunction& h, std::span<const double> lags) {
    if (h.size() < 2) throw EmptyGridError("estimate_modulus needs n >= 2");
    for (size_t j = 0; j + 1 < lags.size(); ++j)
        if (!(lags[j] > 0) || !(lags[j] < lags[j + 1]))
            throw Error("lags must be positive and ascending");
    if (!lags.empty() && !(lags.front() > 0)) throw Error("lags must be positive");

    const auto& x = h.nodes();
    const auto& v = h.values();
    const size_t n = x.size();
    std::vector<double> out(lags.size(), 0.0);

    // For each lag, slide a window [x_i, x_i + lag]; the max increment within
    // any window equals windowed range (max - min), tracked with monotone deques.
    for (size_t j = 0; j < lags.size(); ++j) {
        const double lag = lags[j];
        std::deque<size_t> maxq, minq;
        size_t right = 0;
        double best = 0;
        for (size_t i = 0; i < n; ++i) {
            while (right < n && x[right] - x[i] <= lag) {
                while (!maxq.empty() && v[maxq.back()] <= v[right]) maxq.pop_back();
                maxq.push_back(right);
                while (!minq.empty() && v[minq.back()] >= v[right]) minq.pop_back();
                minq.push_back(right);
                ++right;
            }
            while (!maxq.empty() && maxq.front() < i) maxq.pop_front();
            while (!minq.empty() && minq.front() < i) minq.pop_front();
            if (!maxq.empty() && !minq.empty())
                best = std::max(best, v[maxq.front()] - v[minq.front()]);
        }
        out[j] = best;
    }
    // Enforce table monotonicity against floating-point wobble.
    for (size_t j = 1; j < out.size(); ++j) out[j] = std::max(out[j], out[j - 1]);
    return Modulus(std::vector<double>(lags.begin(), lags.end()), std::move(out));
}

std::vector<double> log_lag_ladder(double lo, double hi, int per_decade) {
    std::vector<double> lags;
    if (!(lo > 0) || !(hi > lo)) throw Error("bad lag ladder range");
    const double step = std::pow(10.0, 1.0 / per_decade);
    for (double e = lo; e < hi; e *= step) lags.push_back(e);
    lags.push_back(hi);
    return lags;
}

double PowerEnvelope::operator()(double eps) const {
    return eps <= 0 ? 0.0 : c * std::pow(eps, sigma);
}

PowerEnvelope fit_power_envelope(const Modulus& m) {
    PowerEnvelope env;
    if (m.is_zero()) return env;
    std::vector<double> lx, ly;
    for (size_t j = 1; j < m.lags().size(); ++j) {
        if (m.table_values()[j] > 0) {
            lx.push_back(std::log(m.lags()[j]));
            ly.push_back(std::log(m.table_values()[j]));
        }
    }
    double sigma = 1.0;
    if (lx.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (size_t i = 0; i < lx.size(); ++i) {
            sx += lx[i];
            sy += ly[i];
            sxx += lx[i] * lx[i];
            sxy += lx[i] * ly[i];
        }
        const double n = static_cast<double>(lx.size());
        const double den = n * sxx - sx * sx;
        if (den > 0) sigma = (n * sxy - sx * sy) / den;
    }
    sigma = std::clamp(sigma, 0.05, 1.0);
    double c = 0;
    for (size_t j = 1; j < m.lags().size(); ++j)
        c = std::max(c, m.table_values()[j] / std::pow(m.lags()[j], sigma));
    env.c = c;
    env.sigma = sigma;
    return env;
}

TwoArgModulus::TwoArgModulus()
    : fn_([](double, double) { return 0.0; }), desc_("zero") {}

TwoArgModulus::TwoArgModulus(std::function<double(double, double)> fn, std::string desc)
    : fn_(std::move(fn)), desc_(std::move(desc)) {}

TwoArgModulus TwoArgModulus::zero() { return TwoArgModulus(); }

TwoArgModulus TwoArgModulus::from_function(std::function<double(double, double)> fn,
                                           std::string desc) {
    return TwoArgModulus(std::move(fn), std::move(desc));
}

TwoArgModulus TwoArgModulus::obstacle_form(Modulus omega_f, Modulus omega_fp,
                                           Modulus omega_g, Modulus omega_gp, double c0,
                                           double alpha0) {
    if (!(c0 > 0) || !(alpha0 > 0) || alpha0 > 1.0)
        throw Error("obstacle omega needs c0 > 0 and alpha0 in (0,1]");
    auto fn = [omega_f = std::move(omega_f), omega_fp = std::move(omega_fp),
               omega_g = std::move(omega_g), omega_gp = std::move(omega_gp), c0,
               alpha0](double k, double eps) {
        if (eps <= 0) return 0.0;
        const double tf = omega_f(eps) + omega_fp(eps) + k * eps;
        const double tg = omega_g(eps) + omega_gp(eps) + k * eps;
        return c0 * (std::pow(tf, alpha0) + std::pow(tg, alpha0));
    };
    return TwoArgModulus(std::move(fn), "obstacle(C0,alpha0)");
}

bool TwoArgModulus::check_lattice(double k_max, double eps_max, int nk, int ne) const {
    std::vector<std::vector<double>> grid(static_cast<size_t>(nk),
                                          std::vector<double>(static_cast<size_t>(ne)));
    for (int i = 0; i < nk; ++i) {
        const double k = k_max * i / (nk - 1);
        if (fn_(k, 0.0) != 0.0) return false;
        for (int j = 0; j < ne; ++j)
            grid[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                fn_(k, eps_max * j / (ne - 1));
    }
    for (int i = 0; i < nk; ++i)
        for (int j = 0; j < ne; ++j) {
            if (i > 0 && grid[static_cast<size_t>(i)][static_cast<size_t>(j)] <
                             grid[static_cast<size_t>(i - 1)][static_cast<size_t>(j)] - 1e-12)
                return false;
            if (j > 0 && grid[static_cast<size_t>(i)][static_cast<size_t>(j)] <
                             grid[static_cast<size_t>(i)][static_cast<size_t>(j - 1)] - 1e-12)
                return false;
        }
    return true;
}

}  // namespace ovp
