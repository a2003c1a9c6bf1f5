#pragma once

// Shared generators and independent reference computations for the tests.

#include "newtondrag/geometry.hpp"
#include "newtondrag/random.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace testing {

using newtondrag::AffinePiece;
using newtondrag::ConcaveProfile;
using newtondrag::Domain;
using newtondrag::Rng;
using newtondrag::Vec2;

inline Domain unit_square() { return newtondrag::make_polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}); }

inline Domain hexagon(double r) {
    std::vector<Vec2> v;
    for (int k = 0; k < 6; ++k) {
        const double a = std::numbers::pi / 3.0 * k + 0.1;
        v.push_back({r * std::cos(a), r * std::sin(a)});
    }
    return newtondrag::make_polygon(v);
}

/// Random min-of-affine profile: 2–11 pieces with slopes in [0.2, 4], each
/// lifted to be nonnegative on the domain, under a random cap.
inline ConcaveProfile random_polyhedral(const Domain& domain, Rng& rng, int max_pieces = 11) {
    const int K = 2 + static_cast<int>(rng.uniform() * (max_pieces - 1));
    const double cap = rng.uniform(0.3, 3.0);
    std::vector<AffinePiece> pieces;
    for (int k = 0; k < K; ++k) {
        const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double s = rng.uniform(0.2, 4.0);
        const Vec2 a{s * std::cos(theta), s * std::sin(theta)};
        pieces.push_back({a, -domain.min_linear(a) + rng.uniform(0.0, 1.5)});
    }
    return ConcaveProfile::polyhedral(domain, pieces, cap);
}

/// Random concave nonincreasing radial profile on [0, R].
inline ConcaveProfile random_radial(double R, Rng& rng) {
    const int n = 3 + static_cast<int>(rng.uniform() * 8);
    std::vector<double> knots{0.0};
    for (int i = 1; i < n; ++i) knots.push_back(R * i / n + rng.uniform(-0.3, 0.3) * R / n);
    knots.push_back(R);
    std::vector<double> slopes;
    double s = rng.uniform(0.0, 0.5);
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        slopes.push_back(s);
        s += rng.uniform(0.0, 1.5);
    }
    double drop = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) drop += slopes[i] * (knots[i + 1] - knots[i]);
    const double floor_height = rng.uniform(0.0, 0.5);
    std::vector<double> values{drop + floor_height};
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        values.push_back(std::max(0.0, values.back() - slopes[i] * (knots[i + 1] - knots[i])));
    return ConcaveProfile::radial(knots, values);
}

// ---------------------------------------------------------------------------
// Exact resistance of a min-of-affine profile on a polygon by clipping each
// piece's cell (independent of any mesh).
// ---------------------------------------------------------------------------

using Polygon = std::vector<Vec2>;

/// Keeps the part of `poly` where n·x + c ≤ 0.
inline Polygon clip(const Polygon& poly, Vec2 n, double c) {
    Polygon out;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2 p = poly[i];
        const Vec2 q = poly[(i + 1) % poly.size()];
        const double fp = n.x * p.x + n.y * p.y + c;
        const double fq = n.x * q.x + n.y * q.y + c;
        if (fp <= 0.0) out.push_back(p);
        if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) {
            const double t = fp / (fp - fq);
            out.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
        }
    }
    return out;
}

inline double polygon_area(const Polygon& poly) {
    double twice = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2 p = poly[i];
        const Vec2 q = poly[(i + 1) % poly.size()];
        twice += p.x * q.y - p.y * q.x;
    }
    return 0.5 * std::abs(twice);
}

/// ∫_Ω 1/(1+|∇u|²) for u = min(cap, min_k piece_k) over the polygon `outline`.
inline double exact_polyhedral_resistance(const ConcaveProfile& profile, const Polygon& outline) {
    const auto& pieces = profile.pieces();
    double total = 0.0;
    for (std::size_t k = 0; k <= pieces.size(); ++k) {
        // k == size() is the plateau, where the cap is the smallest piece.
        const Vec2 ak = k < pieces.size() ? pieces[k].slope : Vec2{};
        const double bk = k < pieces.size() ? pieces[k].offset : profile.cap();
        Polygon cell = outline;
        for (std::size_t j = 0; j <= pieces.size() && !cell.empty(); ++j) {
            if (j == k) continue;
            const Vec2 aj = j < pieces.size() ? pieces[j].slope : Vec2{};
            const double bj = j < pieces.size() ? pieces[j].offset : profile.cap();
            cell = clip(cell, ak - aj, bk - bj);
        }
        if (cell.size() >= 3) total += polygon_area(cell) / (1.0 + newtondrag::norm2(ak));
    }
    return total;
}

}  // namespace testing
