#pragma once

/**
 * @file windows.hpp
 * @brief Compactly supported C-infinity test windows.
 *
 * Two shapes cover everything the verification suites need: a bump on
 * [1,2] (peak normalized to 1) and a plateau on [1/2,3] that is
 * identically 1 on [1,2]. Derivative sup-norms up to order 4 are
 * measured on a dense grid at construction and kept with the window;
 * the stationary-phase error budgets consume them.
 */

#include <array>
#include <cmath>
#include <functional>

#include "chitwist/errors.hpp"

namespace chitwist {

enum class WindowKind { bump_on_1_2, plateau_half_3 };

namespace detail {

/// exp(-1/u) continued by 0 for u <= 0; the standard C-infinity glue.
inline double smooth_exp_piece(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

/// Monotone C-infinity step: 0 for u <= 0, 1 for u >= 1.
inline double smooth_step(double u) {
    double a = smooth_exp_piece(u);
    double b = smooth_exp_piece(1.0 - u);
    return a / (a + b);
}

} // namespace detail

class SmoothWindow {
  public:
    explicit SmoothWindow(WindowKind kind = WindowKind::bump_on_1_2) : kind_(kind) {
        if (kind_ == WindowKind::bump_on_1_2) {
            lo_ = 1.0;
            hi_ = 2.0;
        } else {
            lo_ = 0.5;
            hi_ = 3.0;
        }
        measure_derivative_bounds();
    }

    WindowKind kind() const { return kind_; }
    double support_lo() const { return lo_; }
    double support_hi() const { return hi_; }

    double operator()(double x) const {
        if (x <= lo_ || x >= hi_) return 0.0;
        if (kind_ == WindowKind::bump_on_1_2) {
            double t = 2.0 * x - 3.0; // [1,2] -> (-1,1)
            return std::exp(1.0 - 1.0 / (1.0 - t * t));
        }
        if (x < 1.0) return detail::smooth_step((x - 0.5) / 0.5);
        if (x <= 2.0) return 1.0;
        return detail::smooth_step((3.0 - x) / 1.0);
    }

    /// Measured sup |V^(j)|, j = 0..4, with a 30% safety margin.
    double derivative_bound(int j) const {
        if (j < 0 || j > 4) throw PreconditionViolated("derivative_bound: j outside [0,4]");
        return bounds_[static_cast<size_t>(j)];
    }

  private:
    void measure_derivative_bounds() {
        // Central differences on a grid fine enough for these shapes.
        const int grid = 20001;
        const double h = 1e-4;
        std::array<double, 5> maxima{};
        for (int i = 0; i < grid; ++i) {
            double x = lo_ + (hi_ - lo_) * i / (grid - 1);
            auto& w = *this;
            double d0 = std::abs(w(x));
            double d1 = std::abs((w(x + h) - w(x - h)) / (2 * h));
            double d2 = std::abs((w(x + h) - 2 * w(x) + w(x - h)) / (h * h));
            double d3 = std::abs((w(x + 2 * h) - 2 * w(x + h) + 2 * w(x - h) - w(x - 2 * h)) / (2 * h * h * h));
            double d4 = std::abs((w(x + 2 * h) - 4 * w(x + h) + 6 * w(x) - 4 * w(x - h) + w(x - 2 * h)) /
                                 (h * h * h * h));
            maxima[0] = std::max(maxima[0], d0);
            maxima[1] = std::max(maxima[1], d1);
            maxima[2] = std::max(maxima[2], d2);
            maxima[3] = std::max(maxima[3], d3);
            maxima[4] = std::max(maxima[4], d4);
        }
        for (int j = 0; j <= 4; ++j) bounds_[static_cast<size_t>(j)] = maxima[static_cast<size_t>(j)] * 1.3;
    }

    WindowKind kind_;
    double lo_, hi_;
    std::array<double, 5> bounds_{};
};

} // namespace chitwist
