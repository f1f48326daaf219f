#pragma once

// Log-log least squares for decay-rate extraction. When a target bound
// carries a log_2 t factor, the series is divided by log2(t) before fitting.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace wsct {

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    double r_squared = 0.0;
    double window_min = 0.0;
    double window_max = 0.0;
    bool log_corrected = false;
    std::size_t points = 0;
};

inline RateFit fit_rate(const std::vector<double>& t, const std::vector<double>& value,
                        double window_min, double window_max, bool log_correct = false) {
    if (t.size() != value.size()) throw std::invalid_argument("fit_rate: length mismatch");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < window_min || t[i] > window_max) continue;
        double v = value[i];
        if (log_correct) {
            double corr = std::log2(t[i]);
            if (!(corr > 0.0))
                throw std::invalid_argument("fit_rate: log correction needs t > 1 in window");
            v /= corr;
        }
        if (!(v > 0.0))
            throw std::invalid_argument("fit_rate: nonpositive value at t = " + std::to_string(t[i]));
        lx.push_back(std::log(t[i]));
        ly.push_back(std::log(v));
    }
    const std::size_t m = lx.size();
    if (m < 4) throw std::invalid_argument("fit_rate: fewer than 4 points in window");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double dx = lx[i] - mx, dy = ly[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_rate: degenerate time window");

    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        ssr += r * r;
    }
    fit.r_squared = syy == 0.0 ? 1.0 : 1.0 - ssr / syy;
    fit.stderr_slope = m > 2 ? std::sqrt(ssr / (static_cast<double>(m - 2) * sxx)) : 0.0;
    fit.window_min = window_min;
    fit.window_max = window_max;
    fit.log_corrected = log_correct;
    fit.points = m;
    return fit;
}

inline RateFit fit_rate(const std::vector<double>& t, const std::vector<double>& value,
                        bool log_correct = false) {
    if (t.empty()) throw std::invalid_argument("fit_rate: empty series");
    double lo = t.front(), hi = t.front();
    for (double x : t) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    return fit_rate(t, value, lo, hi, log_correct);
}

} // namespace wsct
