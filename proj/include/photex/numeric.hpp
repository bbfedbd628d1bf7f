// Small numerical utilities shared across the library: deterministic
// pairwise summation, three-point parabolic peak refinement, adaptive
// Simpson quadrature and a least-squares slope fit.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace photex {

using cplx = std::complex<double>;

namespace detail {

// Fixed-tree pairwise summation. The reduction structure depends only on
// the element count, so results are bit-stable regardless of how the
// element values were produced (serial or parallel).
template <class T>
T pairwise_sum(std::span<const T> v) {
    if (v.size() <= 16) {
        T s{};
        for (const T& x : v) s += x;
        return s;
    }
    const std::size_t h = v.size() / 2;
    return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

inline cplx pairwise_sum(const std::vector<cplx>& v) {
    return pairwise_sum(std::span<const cplx>(v));
}
inline double pairwise_sum(const std::vector<double>& v) {
    return pairwise_sum(std::span<const double>(v));
}

struct PeakRefinement {
    double x = 0.0;
    double y = 0.0;
};

// Vertex of the parabola through (x0,y0),(x1,y1),(x2,y2); falls back to the
// middle sample when the three points are not strictly concave.
inline PeakRefinement parabolic_peak(double x0, double x1, double x2,
                                     double y0, double y1, double y2) {
    const double d01 = (x1 - x0) * (y1 - y2);
    const double d21 = (x1 - x2) * (y1 - y0);
    const double denom = d01 - d21;
    if (!(std::abs(denom) > 0.0)) return {x1, y1};
    double xs = x1 - 0.5 * ((x1 - x0) * d01 - (x1 - x2) * d21) / denom;
    if (!(xs >= std::min(x0, x2) && xs <= std::max(x0, x2))) return {x1, y1};
    // Lagrange evaluation at the vertex
    const double l0 = (xs - x1) * (xs - x2) / ((x0 - x1) * (x0 - x2));
    const double l1 = (xs - x0) * (xs - x2) / ((x1 - x0) * (x1 - x2));
    const double l2 = (xs - x0) * (xs - x1) / ((x2 - x0) * (x2 - x1));
    const double ys = y0 * l0 + y1 * l1 + y2 * l2;
    if (!(ys >= y1)) return {x1, y1};
    return {xs, ys};
}

template <class F>
cplx simpson_recurse(F&& f, double a, double b, cplx fa, cplx fm, cplx fb,
                     cplx whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const cplx flm = f(lm);
    const cplx frm = f(rm);
    const cplx left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const cplx right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const cplx err = left + right - whole;
    if (depth <= 0 || std::abs(err) <= 15.0 * tol) {
        return left + right + err / 15.0;
    }
    return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// Adaptive Simpson on [a,b] with optional interior split points (kinks of
// the integrand). rel_tol is applied against a coarse magnitude estimate.
template <class F>
cplx adaptive_simpson(F&& f, double a, double b, double rel_tol,
                      std::span<const double> split_points = {}) {
    if (!(b > a)) return cplx{0.0, 0.0};
    std::vector<double> edges;
    edges.push_back(a);
    for (double s : split_points) {
        if (s > a && s < b) edges.push_back(s);
    }
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());

    // coarse magnitude scale for the absolute tolerance
    double scale = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double lo = edges[i], hi = edges[i + 1];
        for (int k = 0; k <= 8; ++k) {
            const double t = lo + (hi - lo) * k / 8.0;
            scale = std::max(scale, std::abs(f(t)) * (hi - lo));
        }
    }
    const double abs_tol = rel_tol * std::max(scale, 1e-30);

    cplx total{0.0, 0.0};
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double lo = edges[i], hi = edges[i + 1];
        const double frac = (hi - lo) / (b - a);
        const cplx fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
        const cplx whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        total += simpson_recurse(f, lo, hi, fa, fm, fb, whole,
                                 abs_tol * std::max(frac, 0.05), 48);
    }
    return total;
}

// Slope of the least-squares line through (x,y).
inline double least_squares_slope(std::span<const double> x,
                                  std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("least_squares_slope: need >= 2 points");
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("least_squares_slope: degenerate x");
    return sxy / sxx;
}

}  // namespace detail
}  // namespace photex
