#include "ovp/quadrature.hpp"

#include <cmath>
#include <vector>

#include "ovp/errors.hpp"

namespace ovp {

namespace {

// Simpson over t in [t_lo, t_hi] of m(e^t); panels made even.
double simpson_log(const std::function<double(double)>& m, double t_lo, double t_hi,
                   int panels) {
    if (!(t_hi > t_lo)) return 0;
    int n = panels;
    if (n < 2) n = 2;
    if (n % 2) ++n;
    const double h = (t_hi - t_lo) / n;
    double acc = 0;
    for (int i = 0; i <= n; ++i) {
        const double t = (i == n) ? t_hi : t_lo + i * h;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        const double mi = m(std::exp(t));
        if (!std::isfinite(mi)) throw NonFiniteError("dini integrand not finite");
        acc += w * mi;
    }
    return acc * h / 3.0;
}

}  // namespace

double log_dini_integral(const std::function<double(double)>& m, double upper,
                         const DiniQuadOptions& opt) {
    if (!(upper > 0) || upper <= opt.xi_min) return 0;
    return simpson_log(m, std::log(opt.xi_min), std::log(upper), opt.panels);
}

DiniValue dini_integral_with_tail(const std::function<double(double)>& m, double upper,
                                  const DiniQuadOptions& opt) {
    DiniValue out;
    out.value = log_dini_integral(m, upper, opt);
    if (upper > opt.xi_min) {
        const double t1 = std::log(opt.xi_min);
        out.tail_estimate = simpson_log(m, t1 - std::log(10.0), t1, opt.panels / 8);
    }
    const double scale = std::abs(out.value);
    out.trusted = out.tail_estimate <= opt.tail_trust * scale ||
                  out.tail_estimate <= 1e-15 * (1.0 + scale);
    return out;
}

TruncationProbe probe_truncation(const std::function<double(double)>& m, double upper,
                                 const std::array<double, 3>& xi_ladder,
                                 double ratio_threshold, int panels) {
    TruncationProbe p;
    p.xi_min = xi_ladder;
    for (int i = 0; i < 3; ++i) {
        DiniQuadOptions o;
        o.xi_min = xi_ladder[static_cast<size_t>(i)];
        o.panels = panels;
        p.values[static_cast<size_t>(i)] = log_dini_integral(m, upper, o);
    }
    p.d1 = p.values[1] - p.values[0];
    p.d2 = p.values[2] - p.values[1];
    const double floor = 1e-9 * (1.0 + std::abs(p.values[2]));
    p.ratio = (p.d1 > floor) ? p.d2 / p.d1 : 0.0;
    p.divergent = p.d1 > floor && p.d2 > floor && p.ratio >= ratio_threshold;
    return p;
}

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    LogLogFit f;
    std::vector<double> lx, ly;
    for (size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (x[i] > 0 && y[i] > 0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    f.points = static_cast<int>(lx.size());
    if (f.points < 2) return f;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
        syy += ly[i] * ly[i];
    }
    const double n = static_cast<double>(lx.size());
    const double den = n * sxx - sx * sx;
    if (den <= 0) return f;
    f.slope = (n * sxy - sx * sy) / den;
    const double var_y = syy - sy * sy / n;
    if (var_y <= 0) {
        f.r2 = 1.0;
    } else {
        const double ss_res = var_y - f.slope * (sxy - sx * sy / n);
        f.r2 = 1.0 - ss_res / var_y;
    }
    return f;
}

}  // namespace ovp
