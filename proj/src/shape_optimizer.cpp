#include "newtondrag/shape_optimizer.hpp"

#include "newtondrag/errors.hpp"
#include "newtondrag/parallel.hpp"
#include "newtondrag/profile_io.hpp"
#include "newtondrag/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace newtondrag {

using nlohmann::json;

void OptimizeConfig::validate() const {
    require(pieces >= 4, "pieces must be at least 4");
    require(budget >= 100L * pieces, "budget must be at least 100 evaluations per piece");
    require(restarts >= 1, "restarts must be at least 1");
    require(!penalty_schedule.empty(), "penalty schedule must not be empty");
    for (double mu : penalty_schedule) require(std::isfinite(mu) && mu > 0.0, "penalty multipliers must be positive");
    require(std::isfinite(mesh_h) && mesh_h > 0.0, "mesh_h must be positive");
    require(initial_step > 0.0 && min_step > 0.0 && min_step <= initial_step, "invalid step sizes");
    require(step_decay > 0.0 && step_decay < 1.0, "step_decay must lie in (0, 1)");
}

json config_to_json(const OptimizeConfig& c) {
    return {{"pieces", c.pieces},         {"budget", c.budget},
            {"restarts", c.restarts},     {"seed", c.seed},
            {"penalty_schedule", c.penalty_schedule},
            {"mesh_h", c.mesh_h},         {"initial_step", c.initial_step},
            {"step_decay", c.step_decay}, {"min_step", c.min_step}};
}

OptimizeConfig config_from_json(const json& j, OptimizeConfig c) {
    try {
        if (j.contains("pieces")) c.pieces = j["pieces"].get<int>();
        if (j.contains("budget")) c.budget = j["budget"].get<long>();
        if (j.contains("restarts")) c.restarts = j["restarts"].get<int>();
        if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("penalty_schedule")) c.penalty_schedule = j["penalty_schedule"].get<std::vector<double>>();
        if (j.contains("mesh_h")) c.mesh_h = j["mesh_h"].get<double>();
        if (j.contains("initial_step")) c.initial_step = j["initial_step"].get<double>();
        if (j.contains("step_decay")) c.step_decay = j["step_decay"].get<double>();
        if (j.contains("min_step")) c.min_step = j["min_step"].get<double>();
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed optimizer config: ") + e.what());
    }
    c.validate();
    return c;
}

double search_cap(const Domain& domain, const ConstraintSpec& constraint, std::optional<double> height_cap) {
    if (height_cap) require(std::isfinite(*height_cap) && *height_cap > 0.0, "height cap must be positive");
    switch (constraint.kind) {
        case ConstraintKind::height:
            return height_cap ? std::min(*height_cap, constraint.value) : constraint.value;
        case ConstraintKind::volume: {
            if (height_cap && constraint.value > *height_cap * domain.measure())
                throw Infeasible("volume bound exceeds M·|Ω|: the volume and height data contradict");
            const double implied = (Domain::dimension + 1) * constraint.value / domain.measure();
            return height_cap ? std::min(*height_cap, implied) : implied;
        }
        case ConstraintKind::surface: {
            if (constraint.value < domain.measure())
                throw Infeasible("surface bound is below |Ω|, the area of any admissible graph");
            const double implied = Domain::dimension * constraint.value / domain.boundary_length();
            return height_cap ? std::min(*height_cap, implied) : implied;
        }
        case ConstraintKind::lift: {
            if (constraint.value >= 0.5 * domain.measure())
                throw Infeasible("lift requirement is not below |Ω|/2, the supremum of the lift");
            return height_cap ? std::min(*height_cap, constraint.height) : constraint.height;
        }
    }
    throw InvalidArgument("unknown constraint kind");
}

namespace {

constexpr double pi = std::numbers::pi;

struct Piece {
    double ax = 0.0;
    double ay = 0.0;
    double b = 0.0;

    double at(Vec2 x) const { return ax * x.x + ay * x.y + b; }
};

struct Metrics {
    double objective = 0.0;
    double violation = 0.0;

    double penalized(double mu) const { return objective + mu * violation; }
    bool feasible() const { return violation <= 0.0; }
};

struct TriangleStencil {
    int i0, i1, i2;
    double c1x, c1y, c2x, c2y;  // ∇u = d1·c1 + d2·c2 with d1 = u1 − u0, d2 = u2 − u0
    double area;
};

/// Evaluates objective and constraint violation for a set of affine pieces,
/// with an incremental path for trial moves of a single piece.
class PieceEvaluator {
public:
    PieceEvaluator(const Domain& domain, const Mesh& mesh, const ConstraintSpec& constraint, const Objective& objective,
                   double cap)
        : domain_(domain), mesh_(mesh), constraint_(constraint), objective_(objective), cap_(cap) {
        for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
            const auto& tri = mesh.triangles[t];
            const Vec2 p0 = mesh.vertices[static_cast<std::size_t>(tri[0])];
            const Vec2 e1 = mesh.vertices[static_cast<std::size_t>(tri[1])] - p0;
            const Vec2 e2 = mesh.vertices[static_cast<std::size_t>(tri[2])] - p0;
            const double det = cross(e1, e2);
            stencils_.push_back({tri[0], tri[1], tri[2], e2.y / det, -e2.x / det, -e1.y / det, e1.x / det, mesh.areas[t]});
        }
        points_ = mesh.vertices;
        if (constraint.kind == ConstraintKind::surface) {
            boundary_ = make_boundary_samples(domain);
            points_.insert(points_.end(), boundary_.points.begin(), boundary_.points.end());
        }
        heights_.resize(points_.size());
        excluded_.resize(points_.size());
    }

    double cap() const { return cap_; }
    std::size_t evaluations() const { return evaluations_; }

    /// Smallest offset keeping the piece nonnegative on Ω.
    double min_offset(const Piece& p) const { return -domain_.min_linear({p.ax, p.ay}); }
    void repair(Piece& p) const { p.b = std::max(p.b, min_offset(p)); }

    Metrics full(const std::vector<Piece>& pieces) {
        for (std::size_t v = 0; v < points_.size(); ++v) heights_[v] = height(pieces, points_[v], -1);
        return measure();
    }

    /// Caches the minimum over all pieces except `k` (and the cap).
    void focus(const std::vector<Piece>& pieces, int k) {
        for (std::size_t v = 0; v < points_.size(); ++v) excluded_[v] = height(pieces, points_[v], k);
    }

    Metrics trial(const Piece& p) {
        for (std::size_t v = 0; v < points_.size(); ++v) heights_[v] = std::min(excluded_[v], p.at(points_[v]));
        return measure();
    }

    /// Area (by triangle centroid) on which each piece is active.
    std::vector<double> active_areas(const std::vector<Piece>& pieces) const {
        std::vector<double> area(pieces.size(), 0.0);
        for (std::size_t t = 0; t < mesh_.triangles.size(); ++t) {
            const auto& tri = mesh_.triangles[t];
            const Vec2 c = (1.0 / 3.0) * (mesh_.vertices[static_cast<std::size_t>(tri[0])] +
                                          mesh_.vertices[static_cast<std::size_t>(tri[1])] +
                                          mesh_.vertices[static_cast<std::size_t>(tri[2])]);
            double best = cap_;
            int index = -1;
            for (std::size_t k = 0; k < pieces.size(); ++k) {
                const double value = pieces[k].at(c);
                if (value < best) {
                    best = value;
                    index = static_cast<int>(k);
                }
            }
            if (index >= 0) area[static_cast<std::size_t>(index)] += mesh_.areas[t];
        }
        return area;
    }

private:
    double height(const std::vector<Piece>& pieces, Vec2 x, int skip) const {
        double u = cap_;
        for (std::size_t k = 0; k < pieces.size(); ++k) {
            if (static_cast<int>(k) == skip) continue;
            u = std::min(u, pieces[k].at(x));
        }
        return u;
    }

    Metrics measure() {
        ++evaluations_;
        Metrics m;
        const std::size_t nv = mesh_.vertices.size();
        const std::span<const double> nodal(heights_.data(), nv);
        double resistance = 0.0;
        double secondary = 0.0;
        const bool newton = objective_.is_newton();
        for (const auto& s : stencils_) {
            const double u0 = heights_[static_cast<std::size_t>(s.i0)];
            const double d1 = heights_[static_cast<std::size_t>(s.i1)] - u0;
            const double d2 = heights_[static_cast<std::size_t>(s.i2)] - u0;
            const double gx = d1 * s.c1x + d2 * s.c2x;
            const double gy = d1 * s.c1y + d2 * s.c2y;
            const double g2 = gx * gx + gy * gy;
            if (newton) resistance += s.area / (1.0 + g2);
            switch (constraint_.kind) {
                case ConstraintKind::height: break;
                case ConstraintKind::volume:
                    secondary += s.area * (u0 + heights_[static_cast<std::size_t>(s.i1)] +
                                           heights_[static_cast<std::size_t>(s.i2)]) /
                                 3.0;
                    break;
                case ConstraintKind::surface: secondary += s.area * std::sqrt(1.0 + g2); break;
                case ConstraintKind::lift:
                    secondary += s.area * (gx * constraint_.direction.x + gy * constraint_.direction.y) / (1.0 + g2);
                    break;
            }
        }
        m.objective = newton ? resistance : generic_functional(mesh_, nodal, objective_.phi);
        switch (constraint_.kind) {
            case ConstraintKind::height: break;
            case ConstraintKind::volume: m.violation = std::max(0.0, secondary - constraint_.value); break;
            case ConstraintKind::surface: {
                for (std::size_t i = 0; i < boundary_.points.size(); ++i)
                    secondary += boundary_.weights[i] * heights_[nv + i];
                m.violation = std::max(0.0, secondary - constraint_.value);
                break;
            }
            case ConstraintKind::lift: m.violation = std::max(0.0, constraint_.value - secondary); break;
        }
        return m;
    }

    const Domain& domain_;
    const Mesh& mesh_;
    ConstraintSpec constraint_;
    const Objective& objective_;
    double cap_;
    std::vector<TriangleStencil> stencils_;
    std::vector<Vec2> points_;  // mesh vertices, then boundary samples
    BoundarySamples boundary_;
    std::vector<double> heights_;
    std::vector<double> excluded_;
    std::size_t evaluations_ = 0;
};

/// Boundary point at arclength fraction s ∈ [0, 1) and its outward normal.
std::pair<Vec2, Vec2> boundary_frame(const Domain& domain, double s) {
    s -= std::floor(s);
    if (domain.kind() == DomainKind::disk) {
        const double theta = 2.0 * pi * s;
        const Vec2 n{std::cos(theta), std::sin(theta)};
        return {domain.radius() * n, n};
    }
    const auto& v = domain.vertices();
    double remaining = s * domain.boundary_length();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec2 a = v[i];
        const Vec2 b = v[(i + 1) % v.size()];
        const double len = norm(b - a);
        if (remaining <= len || i + 1 == v.size()) {
            const Vec2 e = (1.0 / len) * (b - a);
            return {a + std::min(remaining, len) * e, {e.y, -e.x}};
        }
        remaining -= len;
    }
    return {v.front(), {1.0, 0.0}};
}

/// Plane of slope magnitude `slope` descending towards the boundary point with
/// outward normal n, reaching height `level` at distance `inset` inside it.
Piece facing_piece(Vec2 point, Vec2 n, double slope, double level, double inset) {
    // u(x) = level − slope·(n·(x − point) + inset)
    return {-slope * n.x, -slope * n.y, level + slope * (dot(n, point) - inset)};
}

/// Random concave seed: K pieces facing the boundary in one to three rings,
/// with a random (possibly asymmetric) layout.
std::vector<Piece> seed_pieces(const Domain& domain, int K, double cap, int restart, Rng& rng) {
    const double scale = std::sqrt(domain.measure() / pi);
    const double aspect = cap / scale;
    std::vector<Piece> pieces;
    const int layout = restart % 4;
    const int rings = layout == 1 ? 1 : (layout == 3 ? 3 : 2);
    const double phase = rng.uniform();
    // Asymmetric layouts squeeze the angular distribution towards two sides.
    const double squeeze = (layout == 2) ? rng.uniform(0.3, 0.7) : 0.0;
    auto angle_of = [&](double s) { return s + squeeze * std::sin(4.0 * pi * s) / (4.0 * pi); };

    for (int k = 0; k < K; ++k) {
        const int ring = k % rings;
        const int per_ring = (K + rings - 1 - ring) / rings;
        const int index = k / rings;
        double s = phase + (index + 0.5 * ring) / std::max(per_ring, 1);
        if (layout == 1) s = rng.uniform();
        s += rng.uniform(-0.02, 0.02);
        const auto [point, n] = boundary_frame(domain, angle_of(s));
        const double outer = std::max(1.5, 1.5 * aspect) * rng.uniform(0.8, 1.25);
        const double inner = std::max(1.05, 0.75 * aspect) * rng.uniform(0.9, 1.2);
        const double t = rings == 1 ? 0.0 : static_cast<double>(ring) / (rings - 1);
        const double slope = outer + (inner - outer) * t;
        // Outer ring touches zero at the boundary; inner rings reach the cap early.
        const double level = t == 0.0 ? 0.0 : cap;
        const double inset = t == 0.0 ? 0.0 : scale * (1.0 - 0.55 * t) * rng.uniform(0.85, 1.15);
        pieces.push_back(facing_piece(point, n, slope, level, inset));
    }
    return pieces;
}

struct RestartOutcome {
    std::vector<Piece> pieces;
    double cap = 0.0;
    bool feasible = false;
    double best = std::numeric_limits<double>::infinity();
    long evaluations = 0;
    std::vector<TracePoint> trace;
};

/// Scales u by λ ∈ (0, 1] so that volume or surface constraints hold.
bool scale_repair(std::vector<Piece>& pieces, double& cap, const Domain& domain,
                  const Mesh& mesh, const ConstraintSpec& constraint, const Objective& objective, Metrics& metrics) {
    if (metrics.feasible()) return true;
    if (constraint.kind != ConstraintKind::volume && constraint.kind != ConstraintKind::surface) return false;
    auto scaled_metrics = [&](double lambda, std::vector<Piece>& out, double& out_cap) {
        out = pieces;
        for (auto& p : out) {
            p.ax *= lambda;
            p.ay *= lambda;
            p.b *= lambda;
        }
        out_cap = cap * lambda;
        PieceEvaluator scaled(domain, mesh, constraint, objective, out_cap);
        return scaled.full(out);
    };
    std::vector<Piece> candidate;
    double candidate_cap = cap;
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (scaled_metrics(mid, candidate, candidate_cap).feasible())
            lo = mid;
        else
            hi = mid;
    }
    if (lo <= 0.0) return false;
    metrics = scaled_metrics(lo, candidate, candidate_cap);
    if (!metrics.feasible()) return false;
    pieces = candidate;
    cap = candidate_cap;
    return true;
}

RestartOutcome run_restart(const Domain& domain, const Mesh& mesh, const ConstraintSpec& constraint,
                           const Objective& objective, const OptimizeConfig& config, double cap, int restart,
                           std::uint64_t seed) {
    Rng rng(seed);
    PieceEvaluator evaluator(domain, mesh, constraint, objective, cap);
    std::vector<Piece> pieces = seed_pieces(domain, config.pieces, cap, restart, rng);
    for (auto& p : pieces) evaluator.repair(p);

    const double scale = std::sqrt(domain.measure() / pi);
    const std::array<double, 3> coordinate_scale{cap / scale, cap / scale, cap};

    RestartOutcome out;
    out.cap = cap;
    long evals = 0;
    auto record = [&](const Metrics& m, const std::vector<Piece>& ps, double current_cap) {
        if (m.feasible() && m.objective < out.best) {
            out.best = m.objective;
            out.pieces = ps;
            out.cap = current_cap;
            out.feasible = true;
            out.trace.push_back({evals, m.objective});
        }
    };

    Metrics current = evaluator.full(pieces);
    ++evals;
    record(current, pieces, cap);

    const bool penalised = constraint.kind != ConstraintKind::height;
    const std::vector<double> schedule = penalised ? config.penalty_schedule : std::vector<double>{1.0};
    const long epoch_budget = config.budget / static_cast<long>(schedule.size());

    for (std::size_t epoch = 0; epoch < schedule.size() && evals < config.budget; ++epoch) {
        const double mu = std::min(schedule[epoch], 1e8);
        const long epoch_end = epoch + 1 == schedule.size() ? config.budget : evals + epoch_budget;
        double penalised_current = current.penalized(mu);
        double step = config.initial_step;
        // Kicks (perturb the best point, then resume the search) are used only
        // once the penalty has reached its final value.
        const bool final_epoch = epoch + 1 == schedule.size();
        for (;;) {
        while (step >= config.min_step && evals < epoch_end) {
            bool improved = false;
            for (int k = 0; k < config.pieces && evals < epoch_end; ++k) {
                evaluator.focus(pieces, k);
                for (int c = 0; c < 3 && evals < epoch_end; ++c) {
                    for (int sign : {1, -1}) {
                        if (evals >= epoch_end) break;
                        Piece trial = pieces[static_cast<std::size_t>(k)];
                        double& coord = c == 0 ? trial.ax : (c == 1 ? trial.ay : trial.b);
                        coord += sign * step * coordinate_scale[static_cast<std::size_t>(c)];
                        evaluator.repair(trial);
                        const Metrics m = evaluator.trial(trial);
                        ++evals;
                        const double value = m.penalized(mu);
                        if (value < penalised_current) {
                            pieces[static_cast<std::size_t>(k)] = trial;
                            current = m;
                            penalised_current = value;
                            improved = true;
                            record(m, pieces, cap);
                            break;
                        }
                    }
                }
            }

            // Birth/death: re-seed inactive pieces by splitting the piece with the
            // largest drag contribution.
            if (evals < epoch_end) {
                const auto area = evaluator.active_areas(pieces);
                std::size_t worst = 0;
                double worst_drag = -1.0;
                for (std::size_t k = 0; k < pieces.size(); ++k) {
                    const double drag = area[k] / (1.0 + pieces[k].ax * pieces[k].ax + pieces[k].ay * pieces[k].ay);
                    if (drag > worst_drag) {
                        worst_drag = drag;
                        worst = k;
                    }
                }
                for (std::size_t k = 0; k < pieces.size() && evals < epoch_end; ++k) {
                    if (area[k] > 0.0 || k == worst) continue;
                    const Piece& parent = pieces[worst];
                    const double turn = rng.uniform(-0.3, 0.3);
                    const double stretch = rng.uniform(1.0, 1.2);
                    Piece child{stretch * (std::cos(turn) * parent.ax - std::sin(turn) * parent.ay),
                                stretch * (std::sin(turn) * parent.ax + std::cos(turn) * parent.ay), parent.b};
                    evaluator.repair(child);
                    evaluator.focus(pieces, static_cast<int>(k));
                    const Metrics m = evaluator.trial(child);
                    ++evals;
                    const double value = m.penalized(mu);
                    if (value <= penalised_current) {
                        pieces[k] = child;
                        current = m;
                        penalised_current = value;
                        record(m, pieces, cap);
                    }
                }
            }
            if (!improved) step *= config.step_decay;
        }
        if (!final_epoch || evals >= epoch_end) break;
        if (out.feasible && out.cap == cap) pieces = out.pieces;
        const double kick = 0.5 * config.initial_step;
        for (auto& p : pieces) {
            if (rng.uniform() >= 0.3) continue;
            p.ax += kick * coordinate_scale[0] * rng.uniform(-1.0, 1.0);
            p.ay += kick * coordinate_scale[1] * rng.uniform(-1.0, 1.0);
            p.b += kick * coordinate_scale[2] * rng.uniform(-1.0, 1.0);
            evaluator.repair(p);
        }
        current = evaluator.full(pieces);
        ++evals;
        penalised_current = current.penalized(mu);
        record(current, pieces, cap);
        step = kick;
        }
        if (penalised && !current.feasible()) {
            std::vector<Piece> repaired = pieces;
            double repaired_cap = cap;
            Metrics m = current;
            if (scale_repair(repaired, repaired_cap, domain, mesh, constraint, objective, m)) {
                ++evals;
                record(m, repaired, repaired_cap);
            }
        }
    }
    out.evaluations = evals;
    return out;
}

ConcaveProfile to_profile(const Domain& domain, const std::vector<Piece>& pieces, double cap) {
    std::vector<AffinePiece> affine;
    affine.reserve(pieces.size());
    for (const auto& p : pieces) affine.push_back({{p.ax, p.ay}, p.b});
    return ConcaveProfile::polyhedral(domain, std::move(affine), cap);
}

json histogram_json(const SlopeHistogram& h) { return {{"edges", h.edges}, {"fractions", h.fractions}}; }

}  // namespace

OptimizeReport optimize(const Domain& domain, const ConstraintSpec& constraint, const Objective& objective,
                        const OptimizeConfig& config, std::optional<double> height_cap) {
    config.validate();
    const double cap = search_cap(domain, constraint, height_cap);
    const Mesh mesh = build_mesh(domain, config.mesh_h);

    std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(config.restarts));
    std::vector<std::uint64_t> seeds(outcomes.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = mix_seed(config.seed, i);
    const std::size_t threads = config.threads > 0 ? config.threads : default_thread_count();
    parallel_for(
        outcomes.size(),
        [&](std::size_t i) {
            outcomes[i] = run_restart(domain, mesh, constraint, objective, config, cap, static_cast<int>(i), seeds[i]);
        },
        threads);

    // Lowest objective wins; ties go to the lowest restart index.
    int best = -1;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (!outcomes[i].feasible) continue;
        if (best < 0 || outcomes[i].best < outcomes[static_cast<std::size_t>(best)].best) best = static_cast<int>(i);
    }
    if (best < 0) throw NumericalFailure("budget exhausted before any feasible profile was found");

    const RestartOutcome& winner = outcomes[static_cast<std::size_t>(best)];
    ConcaveProfile profile = to_profile(domain, winner.pieces, winner.cap);

    auto evaluate = [&](const Mesh& m) {
        return objective.is_newton() ? newton_resistance(profile, m) : generic_functional(profile, m, objective.phi);
    };
    const double value = evaluate(mesh);
    const Mesh fine = build_mesh(domain, 0.5 * config.mesh_h);

    OptimizeReport report{profile, constraint, objective.name, 0.0, 0.0, 0.0, {}, {}, 0, {}, 0.0, {}};
    report.objective = value;
    report.estimated_error = std::abs(value - evaluate(fine));
    report.mesh_h = mesh.h;
    report.admissibility = check_admissible(profile, mesh, constraint);
    report.best_restart = best;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        RestartTrace trace;
        trace.restart = static_cast<int>(i);
        trace.seed = seeds[i];
        trace.feasible = outcomes[i].feasible;
        trace.best_objective = outcomes[i].best;
        trace.evaluations = outcomes[i].evaluations;
        trace.trace = outcomes[i].trace;
        report.restarts.push_back(std::move(trace));
    }
    const VerificationRecord verification = verify_optimum(profile, mesh);
    report.histogram = verification.histogram;
    report.plateau_fraction = verification.plateau_fraction;
    if (domain.kind() == DomainKind::disk && constraint.kind == ConstraintKind::height && objective.is_newton())
        report.radial_baseline = radial_optimum(cap, domain.radius()).resistance;
    return report;
}

json report_to_json(const OptimizeReport& r) {
    json restarts = json::array();
    for (const auto& t : r.restarts) {
        json trace = json::array();
        for (const auto& p : t.trace) trace.push_back({p.eval, p.best_objective});
        restarts.push_back({{"restart", t.restart},
                            {"seed", t.seed},
                            {"feasible", t.feasible},
                            {"best_objective", t.feasible ? json(t.best_objective) : json(nullptr)},
                            {"evaluations", t.evaluations},
                            {"trace", trace}});
    }
    json j{{"objective_name", r.objective_name},
           {"objective", r.objective},
           {"estimated_error", r.estimated_error},
           {"mesh_h", r.mesh_h},
           {"constraint", constraint_to_json(r.constraint)},
           {"admissibility", admissibility_to_json(r.admissibility)},
           {"best_restart", r.best_restart},
           {"restarts", restarts},
           {"dichotomy_histogram", histogram_json(r.histogram)},
           {"plateau_fraction", r.plateau_fraction},
           {"profile", profile_to_json(r.profile)}};
    j["radial_baseline"] = r.radial_baseline ? json(*r.radial_baseline) : json(nullptr);
    return j;
}

}  // namespace newtondrag
