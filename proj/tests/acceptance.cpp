// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "../tools/cli.hpp"
#include "newtondrag/functionals.hpp"
#include "newtondrag/particle_oracle.hpp"
#include "newtondrag/radial_solver.hpp"
#include "newtondrag/shape_optimizer.hpp"
#include "support.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

using namespace newtondrag;

namespace {

constexpr double pi = std::numbers::pi;

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

std::string num(double v, const char* f = "%.6g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

int failures = 0;

void criterion(int id, const char* name, const std::function<Verdict()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v.pass = false;
        v.detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) ++failures;
    std::printf("%s %2d %s (%.1f s): %s\n", v.pass ? "PASS" : "FAIL", id, name, seconds, v.detail.c_str());
    std::fflush(stdout);
}

testing::Polygon outline_of(const Domain& d) {
    if (d.kind() == DomainKind::polygon) return d.vertices();
    testing::Polygon p;
    for (int k = 0; k < 20000; ++k) {
        const double a = 2.0 * pi * k / 20000;
        p.push_back({d.radius() * std::cos(a), d.radius() * std::sin(a)});
    }
    return p;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_tool(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    return cli::run_cli(args, out, err);
}

// Shared by criteria 8 and 9.
std::optional<OptimizeReport> symmetry_run;

const OptimizeReport& tall_disk_optimum() {
    if (!symmetry_run) {
        OptimizeConfig c;
        c.pieces = 16;
        c.budget = 100000;
        c.restarts = 16;
        c.seed = 2024;
        c.mesh_h = 0.04;
        symmetry_run = optimize(make_disk(1.0), ConstraintSpec::height_bound(2.0), Objective::newton(), c);
    }
    return *symmetry_run;
}

}  // namespace

int main() {
    criterion(1, "closed-form self-consistency", [] {
        Verdict v;
        double worst = 0.0;
        for (double M : {1.0, 2.0, 0.5}) {
            const RadialOptimum o = radial_optimum(M, 1.0);
            const double q = 1.0 + o.T * o.T;
            worst = std::max({worst, rel(o.radius_at(o.T), 1.0), std::abs(o.height_at(o.T)) / M,
                              std::abs(o.slope_at_radius(o.r0) - 1.0), el_residual(o, 2000)});
            // slope parameter at the plateau edge is t = 1 by construction of r0 = 4RT/(1+T²)²
            worst = std::max(worst, rel(4.0 * o.T / (q * q), o.r0));
        }
        v.require(worst <= 1e-10, "max relative residual " + num(worst, "%.3g"));
        return v;
    });

    criterion(2, "tall-body asymptotics", [] {
        Verdict v;
        const std::vector<double> ratios{10.0, 20.0, 40.0};
        const auto rows = asymptotics_table(ratios);
        const double a = 27.0 / 16.0, b = 27.0 / 32.0;
        v.require(rel(rows[2].r0_scaled, a) <= 0.1, "r0 scaled " + num(rows[2].r0_scaled) + " vs 27/16");
        v.require(rel(rows[2].c0_scaled, b) <= 0.1, "C0 scaled " + num(rows[2].c0_scaled) + " vs 27/32");
        bool monotone = true;
        for (int i = 1; i < 3; ++i)
            monotone = monotone && std::abs(rows[i].r0_scaled - a) < std::abs(rows[i - 1].r0_scaled - a) &&
                       std::abs(rows[i].c0_scaled - b) < std::abs(rows[i - 1].c0_scaled - b);
        v.require(monotone, monotone ? "monotone approach" : "approach not monotone");
        return v;
    });

    criterion(3, "discrete radial oracle", [] {
        Verdict v;
        OptimizeConfig c;
        c.restarts = 4;
        c.budget = 20000;
        const auto d = optimize_radial_discrete(1.0, 1.0, 2000, c);
        const double F = radial_optimum(1.0, 1.0).resistance;
        v.require(rel(d.objective, F) <= 5e-3,
                  "discrete " + num(d.objective, "%.9g") + " vs closed form " + num(F, "%.9g") + ", rel " +
                      num(rel(d.objective, F), "%.2g"));
        return v;
    });

    criterion(4, "Cartesian-intrinsic identity and convergence order", [] {
        Verdict v;
        Rng rng(11);
        double worst = 0.0;
        std::vector<ConcaveProfile> profiles;
        std::vector<double> exact;
        for (int i = 0; i < 20; ++i) {
            const Domain d = i % 2 ? testing::unit_square() : make_disk(1.0);
            profiles.push_back(testing::random_polyhedral(d, rng));
            const Mesh m = build_mesh(d, 0.04);
            const double F = newton_resistance(profiles.back(), m);
            worst = std::max(worst, std::abs(F - boundary_resistance(graph_surface(profiles.back(), m))) /
                                        std::max(1.0, F));
            exact.push_back(testing::exact_polyhedral_resistance(profiles.back(), outline_of(d)));
        }
        v.require(worst <= 1e-12, "identity residual " + num(worst, "%.2g"));
        const std::vector<double> hs{0.08, 0.04, 0.02, 0.01};
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (double h : hs) {
            double total = 0.0;
            for (std::size_t i = 0; i < profiles.size(); ++i)
                total += std::abs(newton_resistance(profiles[i], build_mesh(profiles[i].domain(), h)) - exact[i]);
            const double x = std::log(h), y = std::log(total);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double n = static_cast<double>(hs.size());
        const double order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        v.require(order >= 1.0, "fitted order " + num(order, "%.3f"));
        return v;
    });

    criterion(5, "temperature Dirac consistency and Gaussian limit", [] {
        Verdict v;
        const RadialOptimum o = radial_optimum(1.0, 1.0);
        const auto s = graph_surface(o.to_profile(400), build_mesh(make_disk(1.0), 0.04));
        const double V = 1.5;
        const Vec3 f = temperature_force(s, VelocityDensity::dirac({0.0, 0.0, -V}));
        const double br = boundary_resistance(s);
        const double residual = std::abs(-f.z - 2.0 * V * V * br) / (2.0 * V * V * br);
        v.require(residual <= 1e-12, "Dirac residual " + num(residual, "%.2g"));
        double previous = INFINITY;
        bool monotone = true;
        std::string errors;
        for (double sigma : {0.2, 0.1, 0.05}) {
            const Vec3 g = temperature_force(s, VelocityDensity::gaussian({0.0, 0.0, -V}, sigma * V), 200000, 1);
            const double err = std::abs(g.z - f.z) / std::abs(f.z);
            monotone = monotone && err < previous;
            previous = err;
            errors += (errors.empty() ? "" : ", ") + num(err, "%.3g");
        }
        v.require(monotone, "Gaussian errors " + errors);
        return v;
    });

    criterion(6, "Monte Carlo oracle at 1e6 rays", [] {
        Verdict v;
        std::vector<ConcaveProfile> profiles{radial_optimum(1.0, 1.0).to_profile(400)};
        Rng rng(606);
        for (int i = 0; i < 10; ++i)
            profiles.push_back(testing::random_polyhedral(i % 2 ? testing::unit_square() : make_disk(1.0), rng));
        const double V = 1.0;
        double worst_sigma = 0.0, worst_rel = 0.0, slowest = 0.0;
        for (std::size_t i = 0; i < profiles.size(); ++i) {
            const auto start = std::chrono::steady_clock::now();
            const Mesh m = build_mesh(profiles[i].domain(), 0.04);
            const auto s = graph_surface(profiles[i], m);
            const ImpactRun run = simulate_drag(s, VelocityDensity::dirac({0.0, 0.0, -V}), 1000000, 100 + i);
            const double F = newton_resistance(profiles[i], m);
            const double mc = -run.force.z / (2.0 * V * V);
            const double se = run.stderr_estimate.z / (2.0 * V * V);
            worst_sigma = std::max(worst_sigma, std::abs(mc - F) / se);
            worst_rel = std::max(worst_rel, rel(mc, F));
            slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
        }
        v.require(worst_sigma <= 3.0, "worst deviation " + num(worst_sigma, "%.2f") + " standard errors");
        v.require(worst_rel <= 0.015, "worst relative " + num(worst_rel, "%.2g"));
        v.require(slowest < 60.0, "slowest profile " + num(slowest, "%.1f") + " s");
        return v;
    });

    criterion(7, "degenerate sequences", [] {
        Verdict v;
        const auto rows = degenerate_sweep(make_disk(1.0), 1.0, {1, 4, 16}, 0.01);
        double worst = 0.0;
        bool rejected = true;
        for (const auto& r : rows) {
            worst = std::max(worst, rel(r.steep_cone, pi / (1.0 + r.n * r.n)));
            if (r.n > 1) rejected = rejected && !r.oscillating_concave;
        }
        v.require(worst <= 0.01, "steep cone relative error " + num(worst, "%.2g"));
        v.require(rejected, rejected ? "sin² profiles rejected" : "sin² profile accepted as concave");
        return v;
    });

    criterion(8, "optimality properties", [] {
        Verdict v;
        // (a) dichotomy on height-constrained optimizer outputs
        const OptimizeReport& disk = tall_disk_optimum();
        const double fa = verify_optimum(disk.profile, build_mesh(make_disk(1.0), disk.mesh_h)).dichotomy_fraction;
        OptimizeConfig c;
        c.pieces = 12;
        c.budget = 20000;
        c.restarts = 4;
        c.seed = 8;
        const auto sq = optimize(testing::unit_square(), ConstraintSpec::height_bound(1.0), Objective::newton(), c);
        const double fb = verify_optimum(sq.profile, build_mesh(testing::unit_square(), c.mesh_h)).dichotomy_fraction;
        v.require(std::max(fa, fb) <= 0.02, "(a) dichotomy fractions " + num(fa, "%.3g") + ", " + num(fb, "%.3g"));
        // (b), (c) radial optima
        double min_plateau = INFINITY, min_det = INFINITY;
        for (double M : {0.1, 0.5, 1.0, 2.0, 10.0, 40.0}) {
            const auto rec = verify_optimum(radial_optimum(M, 1.0));
            min_plateau = std::min(min_plateau, rec.plateau_fraction);
            min_det = std::min(min_det, rec.min_hessian_det.value_or(-1.0));
        }
        v.require(min_plateau > 0.0, "(b) min plateau fraction " + num(min_plateau, "%.3g"));
        v.require(min_det > 0.0, "(c) min det " + num(min_det, "%.3g"));
        // (d) cone inequalities
        Rng rng(808);
        int violations = 0;
        for (int i = 0; i < 200; ++i) {
            const Domain d = i % 2 ? make_disk(1.0) : testing::hexagon(1.1);
            const auto p = testing::random_polyhedral(d, rng);
            const Mesh m = build_mesh(d, 0.08);
            const auto u = nodal_heights(p, m);
            const double M = *std::max_element(u.begin(), u.end());
            if (volume(p, m) < m.measure * M / 3.0 * (1.0 - 1e-9)) ++violations;
            if (free_surface(p, m, make_boundary_samples(d)) < d.boundary_length() * M / 2.0) ++violations;
        }
        v.require(violations == 0, "(d) " + std::to_string(violations) + " cone violations over 200 profiles");
        return v;
    });

    criterion(9, "symmetry breaking at R=1, M=2", [] {
        Verdict v;
        const OptimizeReport& r = tall_disk_optimum();
        const double radial = *r.radial_baseline;
        const double margin = radial - r.objective;
        v.require(r.admissibility.feasible, "feasible");
        v.require(margin > 3.0 * r.estimated_error,
                  "objective " + num(r.objective) + " vs radial " + num(radial) + ", margin " + num(margin, "%.3g") +
                      " vs 3x error " + num(3.0 * r.estimated_error, "%.3g"));
        return v;
    });

    criterion(10, "determinism", [] {
        Verdict v;
        const std::string dir = "acceptance_work/";
        std::filesystem::create_directories(dir);
        const nlohmann::json config{
            {"domain", {{"kind", "disk"}, {"R", 1.0}}},
            {"constraint", {{"kind", "height"}, {"value", 2.0}}},
            {"optimizer", {{"pieces", 8}, {"budget", 4000}, {"restarts", 4}, {"seed", 10}, {"mesh_h", 0.08}}},
            {"output", dir + "opt"}};
        std::ofstream(dir + "config.json") << config.dump();

        const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> commands{
            {{"radial", "--M", "2", "--R", "1", "--out", dir + "radial"}, {dir + "radial.json", dir + "radial.csv"}},
            {{"optimize", dir + "config.json"}, {dir + "opt.report.json", dir + "opt.profile.json", dir + "opt.obj"}},
            {{"simulate", dir + "radial.json", "--rays", "100000", "--seed", "3", "--out", dir + "sim.json",
              "--batches-csv", dir + "sim.csv"},
             {dir + "sim.json", dir + "sim.csv"}},
            {{"simulate", dir + "radial.json", "--rays", "20000", "--seed", "4", "--density",
              "gaussian:0,0,-1,0.2", "--out", dir + "gauss.json"},
             {dir + "gauss.json"}},
            {{"eval", dir + "opt.profile.json", "--functional", "boundary", "--out", dir + "eval.json"},
             {dir + "eval.json"}},
            {{"verify", dir + "opt.profile.json", "--out", dir + "verify.json"}, {dir + "verify.json"}},
            {{"asymptotics", "--out", dir + "asym.csv"}, {dir + "asym.csv"}},
            {{"export", dir + "opt.profile.json", "--format", "svg", "--out", dir + "opt.svg"}, {dir + "opt.svg"}},
        };
        int compared = 0, mismatched = 0, failed = 0;
        for (const auto& [args, files] : commands) {
            const bool threaded = args[0] == "optimize" || args[0] == "simulate";
            std::vector<std::vector<std::string>> variants{args, args};
            if (threaded) {
                variants[0].insert(variants[0].end(), {"--threads", "1"});
                variants[1].insert(variants[1].end(), {"--threads", "4"});
            }
            std::vector<std::string> first;
            for (std::size_t k = 0; k < variants.size(); ++k) {
                if (run_tool(variants[k]) != 0) ++failed;
                for (std::size_t f = 0; f < files.size(); ++f) {
                    const std::string text = slurp(files[f]);
                    if (k == 0) {
                        first.push_back(text);
                    } else {
                        ++compared;
                        if (text != first[f] || text.empty()) ++mismatched;
                    }
                }
            }
        }
        v.require(failed == 0, std::to_string(failed) + " command failures");
        v.require(mismatched == 0,
                  std::to_string(compared - mismatched) + "/" + std::to_string(compared) + " outputs byte-identical");
        return v;
    });

    std::printf("%s: %d of 10 criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
