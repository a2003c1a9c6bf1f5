#include "newtondrag/errors.hpp"
#include "newtondrag/random.hpp"
#include "newtondrag/shape_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace newtondrag {

namespace {

/// Weighted pool-adjacent-violators: nondecreasing fit minimising Σ w(p − y)².
void isotonic_nondecreasing(std::span<const double> y, std::span<const double> w, std::vector<double>& out) {
    struct Block {
        double value;
        double weight;
        std::size_t count;
    };
    std::vector<Block> blocks;
    blocks.reserve(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        blocks.push_back({y[i], w[i], 1});
        while (blocks.size() > 1 && blocks[blocks.size() - 2].value > blocks.back().value) {
            const Block top = blocks.back();
            blocks.pop_back();
            Block& prev = blocks.back();
            const double weight = prev.weight + top.weight;
            prev.value = (prev.value * prev.weight + top.value * top.weight) / weight;
            prev.weight = weight;
            prev.count += top.count;
        }
    }
    out.resize(y.size());
    std::size_t i = 0;
    for (const auto& b : blocks)
        for (std::size_t k = 0; k < b.count; ++k) out[i++] = b.value;
}

/// Slope magnitudes on uniform segments of [0, R]; feasible set is
/// {0 ≤ p₀ ≤ p₁ ≤ …, Σ p_i ≤ budget}, where budget = M/Δr.
class RadialProblem {
public:
    RadialProblem(double M, double R, int n) : n_(static_cast<std::size_t>(n)), dr_(R / n), budget_(M / dr_) {
        weights_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            const double a = static_cast<double>(i) * dr_;
            const double b = static_cast<double>(i + 1) * dr_;
            weights_[i] = std::numbers::pi * (b * b - a * a);
        }
    }

    double objective(std::span<const double> p) const {
        double total = 0.0;
        for (std::size_t i = 0; i < n_; ++i) total += weights_[i] / (1.0 + p[i] * p[i]);
        return total;
    }

    /// Projection in the weighted norm Σ w(p − q)².
    void project(std::span<const double> q, std::vector<double>& p) const {
        std::vector<double> shifted(n_);
        auto solve = [&](double lambda) {
            for (std::size_t i = 0; i < n_; ++i) shifted[i] = q[i] - lambda / weights_[i];
            isotonic_nondecreasing(shifted, weights_, p);
            double sum = 0.0;
            for (auto& v : p) {
                v = std::max(v, 0.0);
                sum += v;
            }
            return sum;
        };
        if (solve(0.0) <= budget_) return;
        double lo = 0.0;
        double hi = 0.0;
        for (std::size_t i = 0; i < n_; ++i) hi = std::max(hi, q[i] * weights_[i]);
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (solve(mid) > budget_)
                lo = mid;
            else
                hi = mid;
        }
        solve(hi);
    }

    std::size_t size() const { return n_; }
    double dr() const { return dr_; }
    double budget() const { return budget_; }
    const std::vector<double>& weights() const { return weights_; }

private:
    std::size_t n_;
    double dr_;
    double budget_;
    std::vector<double> weights_;
};

std::vector<double> descend(const RadialProblem& problem, std::vector<double> p, long max_iterations) {
    const std::size_t n = problem.size();
    std::vector<double> q(n);
    std::vector<double> candidate(n);
    problem.project(std::vector<double>(p), p);
    double value = problem.objective(p);
    double step = 1.0;
    int stalled = 0;
    for (long it = 0; it < max_iterations && step > 1e-14; ++it) {
        // Gradient scaled by the segment weights: −∂J/∂p_i / w_i = 2p/(1+p²)².
        for (std::size_t i = 0; i < n; ++i) {
            const double s = 1.0 + p[i] * p[i];
            q[i] = p[i] + step * 2.0 * p[i] / (s * s);
        }
        problem.project(q, candidate);
        const double next = problem.objective(candidate);
        if (next < value) {
            stalled = (value - next) <= 1e-15 * value ? stalled + 1 : 0;
            p.swap(candidate);
            value = next;
            step *= 1.5;
            if (stalled > 50) break;
        } else {
            step *= 0.5;
        }
    }
    return p;
}

// Minimiser of w/(1+p²) + μp over p ≥ 0: either 0 or the larger root of
// 2p/(1+p²)² = μ/w, which lies on p ≥ 1/√3 where the left side decreases.
double segment_minimiser(double w, double mu) {
    const double target = mu / w;
    auto h = [](double p) {
        const double s = 1.0 + p * p;
        return 2.0 * p / (s * s);
    };
    double lo = 1.0 / std::sqrt(3.0);
    if (target >= h(lo)) return 0.0;
    double hi = 2.0;
    while (h(hi) > target) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (h(mid) > target)
            lo = mid;
        else
            hi = mid;
    }
    const double p = 0.5 * (lo + hi);
    return w / (1.0 + p * p) + mu * p < w ? p : 0.0;
}

// Solves the separable relaxation (monotonicity dropped) by bisection on the
// multiplier of the height budget. Because the segment weights increase
// outward, the result is nondecreasing; the segment that switches at the
// critical multiplier absorbs the remaining budget.
std::vector<double> lagrangian_start(const RadialProblem& problem) {
    const auto& w = problem.weights();
    const std::size_t n = problem.size();
    auto slopes_at = [&](double mu) {
        std::vector<double> p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = segment_minimiser(w[i], mu);
        return p;
    };
    auto total = [](const std::vector<double>& p) {
        double sum = 0.0;
        for (double v : p) sum += v;
        return sum;
    };
    // μ is scaled per unit slope; total(μ) is nonincreasing.
    double lo = 0.0;
    double hi = 1.0;
    while (total(slopes_at(hi)) > problem.budget()) hi *= 2.0;
    lo = hi * 1e-300;
    for (int it = 0; it < 2000 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (total(slopes_at(mid)) > problem.budget())
            lo = mid;
        else
            hi = mid;
    }
    std::vector<double> p = slopes_at(hi);
    double missing = problem.budget() - total(p);
    // Hand the slack to the innermost sloped segment, keeping monotonicity.
    for (std::size_t i = n; i-- > 0 && missing > 0.0;) {
        if (p[i] > 0.0 && i > 0 && p[i - 1] > 0.0) continue;
        const double room = (i + 1 < n ? p[i + 1] : p[i] + missing) - p[i];
        const double add = std::min(room, missing);
        p[i] += add;
        missing -= add;
    }
    return p;
}

}  // namespace

RadialDiscreteResult optimize_radial_discrete(double M, double R, int n_knots, const OptimizeConfig& config) {
    require(std::isfinite(M) && M > 0.0, "height M must be positive");
    require(std::isfinite(R) && R > 0.0, "radius R must be positive");
    require(n_knots >= 16, "at least 16 knots are required");
    require(config.restarts >= 1, "restarts must be at least 1");

    const RadialProblem problem(M, R, n_knots);
    const std::size_t n = problem.size();
    const long iterations = std::max<long>(config.budget, 1000);

    std::vector<double> best_slopes;
    double best_value = std::numeric_limits<double>::infinity();
    int best_restart = 0;
    for (int restart = 0; restart < config.restarts; ++restart) {
        Rng rng(mix_seed(config.seed, static_cast<std::uint64_t>(restart)));
        std::vector<double> start(n);
        const double mean = problem.budget() / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
            switch (restart % 3) {
                case 1: start[i] = mean; break;                         // cone
                case 2: start[i] = 2.0 * mean * x; break;               // linear ramp
                default: start[i] = mean * 2.0 * rng.uniform(); break;  // random, sorted below
            }
        }
        if (restart == 0) start = lagrangian_start(problem);
        std::sort(start.begin(), start.end());
        auto slopes = descend(problem, std::move(start), iterations);
        const double value = problem.objective(slopes);
        if (value < best_value) {
            best_value = value;
            best_slopes = std::move(slopes);
            best_restart = restart;
        }
    }

    std::vector<double> knots(n + 1);
    std::vector<double> values(n + 1);
    values[0] = M;
    for (std::size_t i = 0; i < n; ++i) {
        knots[i + 1] = (i + 1 == n) ? R : static_cast<double>(i + 1) * problem.dr();
        values[i + 1] = std::max(0.0, values[i] - best_slopes[i] * problem.dr());
    }
    RadialDiscreteResult result{ConcaveProfile::radial(knots, values), 0.0, {}, {}, 0};
    result.objective = best_value;
    result.slopes = best_slopes;
    result.best_restart = best_restart;
    result.histogram = slope_histogram(result.profile, Mesh{}, 0.05);
    return result;
}

}  // namespace newtondrag
