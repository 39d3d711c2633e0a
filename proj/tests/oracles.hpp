#pragma once

// Reference computations that avoid the library's own code paths.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "qcforge/cantor.hpp"
#include "qcforge/geometry.hpp"

namespace oracle {

// Ratio of singular values from the eigenvalues of MᵀM.
inline double singular_ratio(double m11, double m12, double m21, double m22) {
    const long double a = (long double)m11 * m11 + (long double)m21 * m21;
    const long double d = (long double)m12 * m12 + (long double)m22 * m22;
    const long double b = (long double)m11 * m12 + (long double)m21 * m22;
    const long double tr = a + d;
    const long double disc = std::sqrt(std::max<long double>(0.0L, (a - d) * (a - d) + 4.0L * b * b));
    const long double hi = 0.5L * (tr + disc);
    const long double det = (long double)m11 * m22 - (long double)m12 * m21;
    const long double lo = det * det / hi;  // λ_min = det² / λ_max avoids cancellation
    return static_cast<double>(std::sqrt(hi / lo));
}

inline double singular_ratio(const qcforge::AffineMap& m) { return singular_ratio(m.m11, m.m12, m.m21, m.m22); }

// Affine map fixing 0 and 1 with z -> w, written out column by column.
inline qcforge::AffineMap three_point_matrix(qcforge::Point z, qcforge::Point w) {
    return {1.0, (w.x - z.x) / z.y, 0.0, w.y / z.y, 0.0, 0.0};
}

inline qcforge::AffineMap random_positive_map(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (;;) {
        qcforge::AffineMap m{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
        if (m.det() > 0.05) return m;
    }
}

inline double polygon_area(const std::vector<qcforge::Point>& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto& a = p[i];
        const auto& b = p[(i + 1) % p.size()];
        s += a.x * b.y - b.x * a.y;
    }
    return 0.5 * s;
}

// Midpoint-rule area of disk ∩ rectangle on a g×g grid.
inline double disk_rectangle_quadrature(qcforge::Point c, double r, double x0, double x1, double y0, double y1,
                                        int g = 400) {
    const double hx = (x1 - x0) / g, hy = (y1 - y0) / g;
    std::int64_t inside = 0;
    for (int i = 0; i < g; ++i) {
        const double x = x0 + (i + 0.5) * hx;
        for (int j = 0; j < g; ++j) {
            const double y = y0 + (j + 0.5) * hy;
            if ((x - c.x) * (x - c.x) + (y - c.y) * (y - c.y) <= r * r) ++inside;
        }
    }
    return inside * hx * hy;
}

// Level-n uniform measure of a disk by summing over every square.
inline double brute_level_measure(const qcforge::CantorLevel& level, qcforge::Point c, double r, int g = 64) {
    const double mass = 1.0 / static_cast<double>(level.squares.size());
    double total = 0.0;
    for (const auto& s : level.squares) {
        const double h = 0.5 * s.side;
        if (std::abs(c.x - s.center.x) > h + r || std::abs(c.y - s.center.y) > h + r) continue;
        const double a = disk_rectangle_quadrature(c, r, s.center.x - h, s.center.x + h, s.center.y - h,
                                                   s.center.y + h, g);
        total += mass * a / (s.side * s.side);
    }
    return total;
}

// Index of the level square containing p, by scanning all squares; -1 if none.
inline std::int64_t locate_square(const qcforge::CantorLevel& level, qcforge::Point p, double slack = 0.0) {
    for (std::size_t i = 0; i < level.squares.size(); ++i) {
        const auto& s = level.squares[i];
        const double h = 0.5 * s.side + slack;
        if (std::abs(p.x - s.center.x) <= h && std::abs(p.y - s.center.y) <= h) return static_cast<std::int64_t>(i);
    }
    return -1;
}

// Count of side-h grid boxes (origin anchored) meeting a square's interior, by enumeration.
inline std::uint64_t boxes_for_squares(const std::vector<qcforge::Square>& squares, double h) {
    std::vector<std::pair<std::int64_t, std::int64_t>> keys;
    for (const auto& s : squares) {
        const double x0 = s.center.x - 0.5 * s.side, x1 = s.center.x + 0.5 * s.side;
        const double y0 = s.center.y - 0.5 * s.side, y1 = s.center.y + 0.5 * s.side;
        for (auto i = (std::int64_t)std::floor(x0 / h) - 1; i <= (std::int64_t)std::floor(x1 / h) + 1; ++i) {
            for (auto j = (std::int64_t)std::floor(y0 / h) - 1; j <= (std::int64_t)std::floor(y1 / h) + 1; ++j) {
                const double ox = std::min(x1, (i + 1) * h) - std::max(x0, i * h);
                const double oy = std::min(y1, (j + 1) * h) - std::max(y0, j * h);
                if (ox > 1e-12 * h && oy > 1e-12 * h) keys.emplace_back(i, j);
            }
        }
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return keys.size();
}

}  // namespace oracle
