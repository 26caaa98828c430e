#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace gradgibbs {

// Pairwise (cascade) summation. Deterministic for a fixed input order and
// keeps the rounding error at O(log n) ulps, which matters when we accumulate
// tens of millions of quadrature terms or thousands of log-determinant
// diagonals into results that get compared at 1e-9.
inline double pairwise_sum(const double* x, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

inline double pairwise_sum(const std::vector<double>& x) {
    return pairwise_sum(x.data(), x.size());
}

// log(sum_i exp(x_i)) with the usual max shift; -inf entries drop out.
inline double log_sum_exp(const std::vector<double>& x) {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : x)
        if (v > m) m = v;
    if (!std::isfinite(m)) return m;  // all -inf (or empty-ish)
    std::vector<double> t;
    t.reserve(x.size());
    for (double v : x) t.push_back(std::exp(v - m));
    return m + std::log(pairwise_sum(t));
}

// printf-style %.17g: enough digits to round-trip a double exactly.
inline std::string full_precision(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

}  // namespace gradgibbs
