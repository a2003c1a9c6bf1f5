#pragma once

#include "newtondrag/functionals.hpp"
#include "newtondrag/geometry.hpp"
#include "newtondrag/radial_solver.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace newtondrag {

struct OptimizeConfig {
    int pieces = 16;
    long budget = 20000;  // functional evaluations per restart
    int restarts = 4;
    std::uint64_t seed = 0;
    std::vector<double> penalty_schedule{1.0, 10.0, 100.0, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8};
    double mesh_h = 0.04;
    double initial_step = 0.25;  // relative to the height scale
    double step_decay = 0.5;
    double min_step = 1e-5;
    std::size_t threads = 0;  // 0: NEWTONDRAG_THREADS / hardware

    void validate() const;
};

nlohmann::json config_to_json(const OptimizeConfig& config);
OptimizeConfig config_from_json(const nlohmann::json& j, OptimizeConfig defaults = {});

/// Minimised functional: Newton's resistance or a user integrand φ(x,u,∇u) ≥ 0.
struct Objective {
    std::string name = "newton";
    Integrand phi;  // empty for newton

    static Objective newton() { return {}; }
    static Objective generic(std::string name, Integrand phi) { return {std::move(name), std::move(phi)}; }
    bool is_newton() const { return !phi; }
};

struct TracePoint {
    long eval = 0;
    double best_objective = 0.0;
};

struct RestartTrace {
    int restart = 0;
    std::uint64_t seed = 0;
    bool feasible = false;
    double best_objective = 0.0;
    long evaluations = 0;
    std::vector<TracePoint> trace;
};

/// Dichotomy histogram: area fraction of |∇u| per bin.
struct SlopeHistogram {
    std::vector<double> edges;      // bins [edges[i], edges[i+1]); last bin open-ended
    std::vector<double> fractions;
};

struct OptimizeReport {
    ConcaveProfile profile;
    ConstraintSpec constraint;
    std::string objective_name;
    double objective = 0.0;
    double estimated_error = 0.0;  // |F_h − F_{h/2}| for the returned profile
    double mesh_h = 0.0;
    AdmissibilityReport admissibility;
    std::vector<RestartTrace> restarts;
    int best_restart = 0;
    SlopeHistogram histogram;
    double plateau_fraction = 0.0;
    std::optional<double> radial_baseline;  // disk + height constraint only
};

nlohmann::json report_to_json(const OptimizeReport& report);

/// Multi-start pattern search over min-of-affine profiles with piece
/// birth/death moves. `height_cap`, when given, bounds u in addition to the
/// constraint. Throws Infeasible for contradictory constraint data and
/// NumericalFailure when no feasible point is found within the budget.
OptimizeReport optimize(const Domain& domain, const ConstraintSpec& constraint, const Objective& objective,
                        const OptimizeConfig& config, std::optional<double> height_cap = {});

/// Height cap used for the search (M, or the implied bound of the constraint).
double search_cap(const Domain& domain, const ConstraintSpec& constraint, std::optional<double> height_cap);

// ---------------------------------------------------------------------------
// Discrete radial problem
// ---------------------------------------------------------------------------

struct RadialDiscreteResult {
    ConcaveProfile profile;
    double objective = 0.0;
    std::vector<double> slopes;  // |u'| per segment, nondecreasing in r
    SlopeHistogram histogram;
    int best_restart = 0;
};

/// Minimises Σ π(r_{i+1}² − r_i²)/(1+s_i²) over n_knots uniform segments by
/// projected gradient descent on the slope magnitudes (nondecreasing, total
/// drop ≤ M), with multi-start. Independent of the closed-form solver.
RadialDiscreteResult optimize_radial_discrete(double M, double R, int n_knots, const OptimizeConfig& config);

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

struct VerificationRecord {
    double epsilon = 0.05;
    double dichotomy_fraction = 0.0;  // area with |∇u| ∈ (ε, 1−ε) outside the edge band
    double excluded_fraction = 0.0;   // area inside the 2h band around piece edges
    double plateau_fraction = 0.0;
    bool hessian_structural = false;  // polyhedral: det ∇²u ≡ 0 on every piece
    std::optional<double> min_hessian_det;  // radial inputs: min over the curved part
    SlopeHistogram histogram;
};

nlohmann::json verification_to_json(const VerificationRecord& record);

VerificationRecord verify_optimum(const ConcaveProfile& profile, const Mesh& mesh, double epsilon = 0.05);
VerificationRecord verify_optimum(const RadialOptimum& optimum, double epsilon = 0.05, int samples = 2000);

/// Area-fraction histogram of |∇u| over bins {0, ε, 1−ε, 1, 2, 4, ∞}.
SlopeHistogram slope_histogram(const ConcaveProfile& profile, const Mesh& mesh, double epsilon = 0.05);

// ---------------------------------------------------------------------------
// Degenerate sequences
// ---------------------------------------------------------------------------

struct DegenerateRow {
    int n = 0;
    double steep_cone = 0.0;            // F(n·dist(x, ∂Ω))
    std::optional<double> steep_cone_exact;  // π R²/(1+n²) on a disk
    double oscillating = 0.0;           // F(M sin²(n|x|))
    double oscillation_violation = 0.0; // concavity violation of the sin² profile
    bool oscillating_concave = false;
};

std::vector<DegenerateRow> degenerate_sweep(const Domain& domain, double M, const std::vector<int>& n_list,
                                            double mesh_h = 0.01, std::uint64_t seed = 0);

}  // namespace newtondrag
