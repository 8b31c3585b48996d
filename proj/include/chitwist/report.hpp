#pragma once

#include <chrono>
#include <complex>
#include <cstdio>
#include <string>

namespace chitwist {

/// Relative discrepancy with a floor that keeps 0-vs-0 comparisons finite.
inline double relative_error(std::complex<double> lhs, std::complex<double> rhs) {
    double denom = std::max({std::abs(lhs), std::abs(rhs), 1e-30});
    return std::abs(lhs - rhs) / denom;
}

/**
 * Per-identity verification record: both sides, their discrepancy, what
 * was truncated where, and how long the check took. One report row per
 * identity instance; serializes to one CSV line.
 */
struct VerificationReport {
    std::string identity;
    std::string params;
    std::complex<double> lhs{0.0, 0.0};
    std::complex<double> rhs{0.0, 0.0};
    double abs_err = 0.0;
    double rel_err = 0.0;
    std::string truncation;
    double time_ms = 0.0;
    bool passed = true;

    void set_sides(std::complex<double> l, std::complex<double> r) {
        lhs = l;
        rhs = r;
        abs_err = std::abs(l - r);
        rel_err = relative_error(l, r);
    }
};

/// Full-precision decimal formatting (17 significant digits round-trips
/// a double exactly).
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string csv_header_for_reports() {
    return "identity,params,lhs_re,lhs_im,rhs_re,rhs_im,abs_err,rel_err,time_ms";
}

inline std::string to_csv_row(const VerificationReport& r) {
    std::string out;
    out += r.identity;
    out += ',';
    out += r.params;
    out += ',';
    out += format_g17(r.lhs.real());
    out += ',';
    out += format_g17(r.lhs.imag());
    out += ',';
    out += format_g17(r.rhs.real());
    out += ',';
    out += format_g17(r.rhs.imag());
    out += ',';
    out += format_g17(r.abs_err);
    out += ',';
    out += format_g17(r.rel_err);
    out += ',';
    out += format_g17(r.time_ms);
    return out;
}

class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double elapsed_ms() const {
        auto d = std::chrono::steady_clock::now() - start_;
        return std::chrono::duration<double, std::milli>(d).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

} // namespace chitwist
