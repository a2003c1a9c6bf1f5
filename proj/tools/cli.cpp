#include "cli.hpp"

#include "newtondrag/errors.hpp"
#include "newtondrag/functionals.hpp"
#include "newtondrag/particle_oracle.hpp"
#include "newtondrag/profile_io.hpp"
#include "newtondrag/radial_solver.hpp"
#include "newtondrag/shape_optimizer.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#ifndef NEWTONDRAG_VERSION
#define NEWTONDRAG_VERSION "0.0.0"
#endif

namespace newtondrag::cli {

using nlohmann::json;

const char* version() { return NEWTONDRAG_VERSION; }

json run_config_to_json(const RunConfig& c) {
    json j{{"command", c.command},     {"domain", c.domain},   {"constraint", c.constraint},
           {"optimizer", c.optimizer}, {"outputs", c.outputs}, {"formats", c.formats},
           {"parameters", c.parameters}};
    j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
    j["mesh_h"] = c.mesh_h ? json(*c.mesh_h) : json(nullptr);
    return j;
}

RunConfig run_config_from_json(const json& j) {
    try {
        RunConfig c;
        c.command = j.at("command").get<std::string>();
        c.domain = j.value("domain", json(nullptr));
        c.constraint = j.value("constraint", json(nullptr));
        c.optimizer = j.value("optimizer", json(nullptr));
        c.outputs = j.value("outputs", json::object());
        if (j.contains("seed") && !j["seed"].is_null()) c.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("mesh_h") && !j["mesh_h"].is_null()) c.mesh_h = j["mesh_h"].get<double>();
        c.formats = j.value("formats", std::vector<std::string>{});
        c.parameters = j.value("parameters", json::object());
        return c;
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed run config: ") + e.what());
    }
}

namespace {

json header(const RunConfig& config) {
    return {{"artifact", {{"name", "newtondrag"}, {"version", version()}}}, {"run_config", run_config_to_json(config)}};
}

std::string comment_line(const RunConfig& config, const char* prefix) {
    return std::string(prefix) + " newtondrag " + version() + " run_config=" + run_config_to_json(config).dump() + "\n";
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    require(static_cast<bool>(file), "cannot write '" + path + "'");
    file << text;
}

void emit_json(const std::string& path, const json& j, std::ostream& out) { write_text(path, j.dump(2) + "\n", out); }

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            require(used == item.size(), "");
        } catch (const std::exception&) {
            throw InvalidArgument("cannot parse number '" + item + "' in '" + text + "'");
        }
    }
    return values;
}

VelocityDensity parse_density(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::vector<double> values = colon == std::string::npos ? std::vector<double>{} : parse_list(spec.substr(colon + 1));
    if (kind == "dirac") {
        require(values.size() == 3, "dirac density needs three drift components: dirac:vx,vy,vz");
        return VelocityDensity::dirac({values[0], values[1], values[2]});
    }
    if (kind == "gaussian") {
        require(values.size() == 4, "gaussian density needs mean and sigma: gaussian:mx,my,mz,sigma");
        return VelocityDensity::gaussian({values[0], values[1], values[2]}, values[3]);
    }
    require(colon == std::string::npos, "unknown density kind '" + kind + "'");
    return density_from_json(load_json(spec));
}

ConcaveProfile read_profile(const std::string& path) {
    const json j = load_json(path);
    // Profiles written by `optimize` wrap the record; plain records are accepted too.
    return profile_from_json(j.contains("profile") ? j.at("profile") : j);
}

// ---------------------------------------------------------------------------
// SVG
// ---------------------------------------------------------------------------

struct Canvas {
    double x0, x1, y0, y1;
    double width = 640.0;
    double height = 480.0;
    double margin = 40.0;

    double sx(double x) const { return margin + (x - x0) / (x1 - x0) * (width - 2 * margin); }
    double sy(double y) const { return height - margin - (y - y0) / (y1 - y0) * (height - 2 * margin); }
};

std::string svg_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string svg_open(const Canvas& c, const RunConfig& config) {
    std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<!--" + comment_line(config, "").substr(1) + "-->\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + svg_number(c.width) + "\" height=\"" +
         svg_number(c.height) + "\" viewBox=\"0 0 " + svg_number(c.width) + " " + svg_number(c.height) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    return s;
}

std::string polyline(const Canvas& c, const std::vector<std::pair<double, double>>& pts, const char* style) {
    std::string s = "<polyline fill=\"none\" " + std::string(style) + " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) s += ' ';
        s += svg_number(c.sx(pts[i].first)) + "," + svg_number(c.sy(pts[i].second));
    }
    return s + "\"/>\n";
}

std::string radial_svg(const ConcaveProfile& p, const RunConfig& config) {
    const double R = p.knots().back();
    const double M = std::max(p.cap(), 1e-12);
    Canvas c{-R, R, 0.0, M};
    const double span = std::max(2.0 * R, M);
    c.width = 640.0 * 2.0 * R / span + 80.0;
    c.height = 640.0 * M / span + 80.0;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = p.knots().size(); i-- > 0;) pts.emplace_back(-p.knots()[i], p.values()[i]);
    for (std::size_t i = 1; i < p.knots().size(); ++i) pts.emplace_back(p.knots()[i], p.values()[i]);
    std::string s = svg_open(c, config);
    s += polyline(c, {{-R, 0.0}, {R, 0.0}}, "stroke=\"#888\" stroke-width=\"1\"");
    s += polyline(c, pts, "stroke=\"#1f4e9c\" stroke-width=\"2\"");
    return s + "</svg>\n";
}

std::string polyhedral_svg(const ConcaveProfile& p, double mesh_h, const RunConfig& config) {
    const Domain& d = p.domain();
    const auto outline = d.extreme_points(256);
    double x0 = outline[0].x, x1 = x0, y0 = outline[0].y, y1 = y0;
    for (const Vec2 q : outline) {
        x0 = std::min(x0, q.x);
        x1 = std::max(x1, q.x);
        y0 = std::min(y0, q.y);
        y1 = std::max(y1, q.y);
    }
    const double span = std::max(x1 - x0, y1 - y0);
    Canvas c{x0, x1, y0, y1};
    c.width = 560.0 * (x1 - x0) / span + 80.0;
    c.height = 560.0 * (y1 - y0) / span + 80.0;
    std::string s = svg_open(c, config);
    std::vector<std::pair<double, double>> border;
    for (const Vec2 q : outline) border.emplace_back(q.x, q.y);
    border.push_back(border.front());
    s += polyline(c, border, "stroke=\"black\" stroke-width=\"1.5\"");

    // Level sets by marching triangles on the nodal interpolant.
    const Mesh mesh = build_mesh(d, mesh_h);
    const auto u = nodal_heights(p, mesh);
    constexpr int levels = 10;
    for (int k = 1; k < levels; ++k) {
        const double level = p.cap() * k / levels;
        std::string path;
        for (const auto& tri : mesh.triangles) {
            std::vector<Vec2> cut;
            for (int e = 0; e < 3; ++e) {
                const int a = tri[static_cast<std::size_t>(e)];
                const int b = tri[static_cast<std::size_t>((e + 1) % 3)];
                const double ua = u[static_cast<std::size_t>(a)] - level;
                const double ub = u[static_cast<std::size_t>(b)] - level;
                if ((ua < 0.0) == (ub < 0.0)) continue;
                const double t = ua / (ua - ub);
                cut.push_back(mesh.vertices[static_cast<std::size_t>(a)] +
                              t * (mesh.vertices[static_cast<std::size_t>(b)] - mesh.vertices[static_cast<std::size_t>(a)]));
            }
            if (cut.size() != 2) continue;
            path += "M" + svg_number(c.sx(cut[0].x)) + "," + svg_number(c.sy(cut[0].y)) + "L" +
                    svg_number(c.sx(cut[1].x)) + "," + svg_number(c.sy(cut[1].y));
        }
        if (!path.empty())
            s += "<path fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1\" data-level=\"" + fmt(level) + "\" d=\"" +
                 path + "\"/>\n";
    }
    return s + "</svg>\n";
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

struct Streams {
    std::ostream& out;
    std::ostream& err;
};

int cmd_radial(double M, double R, int samples, const std::string& prefix, Streams io) {
    require(samples >= 2, "--samples must be at least 2");
    const RadialOptimum opt = radial_optimum(M, R);
    RunConfig config;
    config.command = "radial";
    config.domain = domain_to_json(make_disk(R));
    config.constraint = constraint_to_json(ConstraintSpec::height_bound(M));
    config.parameters = {{"M", M}, {"R", R}, {"samples", samples}};
    if (!prefix.empty()) {
        config.outputs = {{"json", prefix + ".json"}, {"csv", prefix + ".csv"}};
        config.formats = {"json", "csv"};
        json record = header(config);
        record["radial"] = radial_optimum_to_json(opt, samples);
        record["profile"] = profile_to_json(opt.to_profile(samples));
        emit_json(prefix + ".json", record, io.out);
        std::string csv = comment_line(config, "#") + "r,u\n";
        for (const auto& p : opt.polyline(samples)) csv += fmt(p.r) + "," + fmt(p.u) + "\n";
        write_text(prefix + ".csv", csv, io.out);
    }
    io.out << "T=" << fmt(opt.T) << " r0=" << fmt(opt.r0) << " resistance=" << fmt(opt.resistance)
           << " C0=" << fmt(opt.C0) << "\n";
    return 0;
}

struct OptimizeFlags {
    std::optional<std::uint64_t> seed;
    std::optional<int> restarts;
    std::optional<long> budget;
    std::optional<int> pieces;
    std::optional<double> mesh_h;
    std::optional<std::size_t> threads;
    std::string out;
};

template <typename T>
void override_field(json& cfg, const char* key, const std::optional<T>& flag, std::ostream& err) {
    if (!flag) return;
    if (cfg.contains(key) && cfg[key] != json(*flag))
        err << "config: " << key << " = " << cfg[key].dump() << " overridden by flag (" << json(*flag).dump() << ")\n";
    cfg[key] = *flag;
}

int cmd_optimize(const std::string& path, const OptimizeFlags& flags, Streams io) {
    const json input = load_json(path);
    Domain domain = make_disk(1.0);
    ConstraintSpec constraint;
    json optimizer_json = json::object();
    std::optional<double> height_cap;
    std::string prefix = "optimize";
    try {
        domain = domain_from_json(input.at("domain"));
        constraint = constraint_from_json(input.at("constraint"));
        if (input.contains("optimizer")) optimizer_json = input.at("optimizer");
        require(optimizer_json.is_object(), "\"optimizer\" must be an object");
        if (input.contains("height_cap") && !input["height_cap"].is_null())
            height_cap = input["height_cap"].get<double>();
        const std::string objective = input.value("objective", std::string("newton"));
        require(objective == "newton", "only the \"newton\" objective can be configured from a file");
        prefix = input.value("output", prefix);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed optimize config: ") + e.what());
    }
    override_field(optimizer_json, "seed", flags.seed, io.err);
    override_field(optimizer_json, "restarts", flags.restarts, io.err);
    override_field(optimizer_json, "budget", flags.budget, io.err);
    override_field(optimizer_json, "pieces", flags.pieces, io.err);
    override_field(optimizer_json, "mesh_h", flags.mesh_h, io.err);
    if (!flags.out.empty()) {
        if (flags.out != prefix) io.err << "config: output = \"" << prefix << "\" overridden by flag (\"" << flags.out << "\")\n";
        prefix = flags.out;
    }
    OptimizeConfig oc = config_from_json(optimizer_json);
    if (flags.threads) oc.threads = *flags.threads;  // does not affect results, so not recorded

    RunConfig config;
    config.command = "optimize";
    config.domain = domain_to_json(domain);
    config.constraint = constraint_to_json(constraint);
    config.optimizer = config_to_json(oc);
    config.seed = oc.seed;
    config.mesh_h = oc.mesh_h;
    config.outputs = {{"report", prefix + ".report.json"}, {"profile", prefix + ".profile.json"}, {"surface", prefix + ".obj"}};
    config.formats = {"json", "obj"};
    config.parameters = {{"objective", "newton"}, {"height_cap", height_cap ? json(*height_cap) : json(nullptr)}};

    const OptimizeReport report = optimize(domain, constraint, Objective::newton(), oc, height_cap);

    json rep = header(config);
    rep["report"] = report_to_json(report);
    save_json(prefix + ".report.json", rep);
    json prof = header(config);
    prof["profile"] = profile_to_json(report.profile);
    save_json(prefix + ".profile.json", prof);
    {
        std::ofstream obj(prefix + ".obj", std::ios::binary);
        require(static_cast<bool>(obj), "cannot write '" + prefix + ".obj'");
        obj << comment_line(config, "#");
        write_obj(obj, graph_surface(report.profile, build_mesh(domain, oc.mesh_h)));
    }

    io.out << "best objective " << fmt(report.objective) << " (restart " << report.best_restart
           << ", estimated error " << fmt(report.estimated_error) << ")\n";
    if (report.radial_baseline) {
        io.out << "radial baseline " << fmt(*report.radial_baseline) << ", improvement "
               << fmt(*report.radial_baseline - report.objective) << "\n";
    }
    return 0;
}

int cmd_eval(const std::string& path, const std::string& functional, double mesh_h, const std::string& direction,
             const std::string& out_path, Streams io) {
    const ConcaveProfile profile = read_profile(path);
    const auto dir_values = parse_list(direction);
    require(dir_values.size() == 2, "--direction needs two components");
    const Vec2 dir{dir_values[0], dir_values[1]};
    require(std::abs(norm(dir) - 1.0) < 1e-12, "--direction must be a unit vector");

    std::function<double(const ConcaveProfile&, const Mesh&)> fn;
    if (functional == "newton") {
        fn = [](const ConcaveProfile& p, const Mesh& m) { return newton_resistance(p, m); };
    } else if (functional == "lift") {
        fn = [dir](const ConcaveProfile& p, const Mesh& m) { return lift(p, m, dir); };
    } else if (functional == "volume") {
        fn = [](const ConcaveProfile& p, const Mesh& m) { return volume(p, m); };
    } else if (functional == "surface") {
        fn = [](const ConcaveProfile& p, const Mesh& m) {
            return free_surface(p, m, make_boundary_samples(p.domain()));
        };
    } else if (functional == "boundary") {
        fn = [](const ConcaveProfile& p, const Mesh& m) { return boundary_resistance(graph_surface(p, m)); };
    } else {
        throw InvalidArgument("unknown functional '" + functional + "' (newton, lift, volume, surface, boundary)");
    }
    const FunctionalResult result = evaluate_with_error(profile, mesh_h, fn);

    RunConfig config;
    config.command = "eval";
    config.domain = domain_to_json(profile.domain());
    config.mesh_h = mesh_h;
    config.formats = {"json"};
    if (!out_path.empty()) config.outputs = {{"result", out_path}};
    config.parameters = {{"profile", path}, {"functional", functional}, {"direction", {dir.x, dir.y}}};
    json record = header(config);
    record["functional"] = functional;
    record["result"] = result_to_json(result);
    emit_json(out_path, record, io.out);
    return 0;
}

int cmd_verify(const std::string& path, std::optional<double> M, double epsilon, double mesh_h,
               const std::string& out_path, Streams io) {
    const ConcaveProfile profile = read_profile(path);
    const double bound = M.value_or(profile.cap());
    const Mesh mesh = build_mesh(profile.domain(), mesh_h);
    const VerificationRecord rec = verify_optimum(profile, mesh, epsilon);
    const AdmissibilityReport adm = in_CM(profile, mesh, ConstraintSpec::height_bound(bound));

    RunConfig config;
    config.command = "verify";
    config.domain = domain_to_json(profile.domain());
    config.constraint = constraint_to_json(ConstraintSpec::height_bound(bound));
    config.mesh_h = mesh_h;
    config.formats = {"json"};
    if (!out_path.empty()) config.outputs = {{"verification", out_path}};
    config.parameters = {{"profile", path}, {"epsilon", epsilon}};
    json record = header(config);
    record["verification"] = verification_to_json(rec);
    record["admissibility"] = admissibility_to_json(adm);
    emit_json(out_path, record, io.out);
    return 0;
}

int cmd_asymptotics(const std::string& ratios_text, const std::string& out_path, Streams io) {
    const auto ratios = parse_list(ratios_text);
    require(!ratios.empty(), "--ratios must list at least one value");
    const auto rows = asymptotics_table(ratios);
    RunConfig config;
    config.command = "asymptotics";
    config.formats = {"csv"};
    if (!out_path.empty()) config.outputs = {{"table", out_path}};
    config.parameters = {{"ratios", ratios}, {"r0_limit", 27.0 / 16.0}, {"c0_limit", 27.0 / 32.0}};
    std::ostringstream csv;
    csv << comment_line(config, "#");
    write_asymptotics_csv(csv, rows);
    write_text(out_path, csv.str(), io.out);
    return 0;
}

int cmd_simulate(const std::string& path, const std::string& density_spec, long rays, std::uint64_t seed,
                 double mesh_h, std::optional<std::size_t> threads, const std::string& out_path,
                 const std::string& batches_path, Streams io) {
    const ConcaveProfile profile = read_profile(path);
    const VelocityDensity density = parse_density(density_spec);
    const Mesh mesh = build_mesh(profile.domain(), mesh_h);
    const TriangulatedSurface surface = graph_surface(profile, mesh);
    const ImpactRun run = simulate_drag(surface, density, rays, seed, threads.value_or(0));

    RunConfig config;
    config.command = "simulate";
    config.domain = domain_to_json(profile.domain());
    config.seed = seed;
    config.mesh_h = mesh_h;
    config.formats = {"json"};
    if (!out_path.empty()) config.outputs["run"] = out_path;
    if (!batches_path.empty()) {
        config.outputs["batches"] = batches_path;
        config.formats.push_back("csv");
    }
    config.parameters = {{"profile", path}, {"density", density_to_json(density)}, {"rays", rays}};

    json record = header(config);
    record["run"] = impact_run_to_json(run);
    json reference{{"newton_resistance", newton_resistance(profile, mesh)},
                   {"boundary_resistance", boundary_resistance(surface)}};
    if (density.kind == VelocityDensity::Kind::dirac) {
        const double v2 = dot(density.mean, density.mean);
        reference["drag_over_2V2"] = -run.force.z / (2.0 * v2);
        reference["stderr_over_2V2"] = run.stderr_estimate.z / (2.0 * v2);
    }
    record["reference"] = reference;
    emit_json(out_path, record, io.out);
    if (!batches_path.empty()) {
        std::ostringstream csv;
        csv << comment_line(config, "#");
        write_batches_csv(csv, run);
        write_text(batches_path, csv.str(), io.out);
    }
    return 0;
}

int cmd_export(const std::string& path, const std::string& format, double mesh_h, const std::string& out_path,
               Streams io) {
    const ConcaveProfile profile = read_profile(path);
    RunConfig config;
    config.command = "export";
    config.domain = domain_to_json(profile.domain());
    config.mesh_h = mesh_h;
    config.formats = {format};
    if (!out_path.empty()) config.outputs = {{format, out_path}};
    config.parameters = {{"profile", path}};

    std::string text;
    if (format == "obj") {
        std::ostringstream obj;
        obj << comment_line(config, "#");
        write_obj(obj, graph_surface(profile, build_mesh(profile.domain(), mesh_h)));
        text = obj.str();
    } else if (format == "csv") {
        text = comment_line(config, "#");
        if (profile.kind() == ProfileKind::radial) {
            text += "r,u\n";
            for (std::size_t i = 0; i < profile.knots().size(); ++i)
                text += fmt(profile.knots()[i]) + "," + fmt(profile.values()[i]) + "\n";
        } else {
            const Mesh mesh = build_mesh(profile.domain(), mesh_h);
            const auto u = nodal_heights(profile, mesh);
            text += "x,y,u\n";
            for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
                text += fmt(mesh.vertices[i].x) + "," + fmt(mesh.vertices[i].y) + "," + fmt(u[i]) + "\n";
        }
    } else if (format == "svg") {
        text = profile.kind() == ProfileKind::radial ? radial_svg(profile, config)
                                                     : polyhedral_svg(profile, mesh_h, config);
    } else {
        throw InvalidArgument("unknown export format '" + format + "' (obj, csv, svg)");
    }
    write_text(out_path, text, io.out);
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Streams io{out, err};
    CLI::App app{"Newton minimal-resistance solver, optimizer and particle oracle", "newtondrag"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version());

    // radial
    double rM = 0.0, rR = 0.0;
    int r_samples = 200;
    std::string r_out;
    auto* radial = app.add_subcommand("radial", "Closed-form radial optimum");
    radial->add_option("--M", rM, "Height bound")->required();
    radial->add_option("--R", rR, "Disk radius")->required();
    radial->add_option("--samples", r_samples, "Polyline samples");
    radial->add_option("--out", r_out, "Output prefix for .json and .csv");

    // optimize
    std::string o_config;
    OptimizeFlags o_flags;
    std::uint64_t o_seed = 0;
    int o_restarts = 0, o_pieces = 0;
    long o_budget = 0;
    double o_mesh_h = 0.0;
    std::size_t o_threads = 0;
    auto* opt = app.add_subcommand("optimize", "Polyhedral shape optimization from a JSON config");
    opt->add_option("config", o_config, "Config file")->required();
    auto* o_seed_opt = opt->add_option("--seed", o_seed);
    auto* o_restarts_opt = opt->add_option("--restarts", o_restarts);
    auto* o_budget_opt = opt->add_option("--budget", o_budget, "Evaluations per restart");
    auto* o_pieces_opt = opt->add_option("--pieces", o_pieces);
    auto* o_mesh_opt = opt->add_option("--mesh-h", o_mesh_h);
    auto* o_threads_opt = opt->add_option("--threads", o_threads);
    opt->add_option("--out", o_flags.out, "Output prefix");

    // eval
    std::string e_profile, e_functional = "newton", e_direction = "1,0", e_out;
    double e_mesh_h = 0.02;
    auto* eval = app.add_subcommand("eval", "Evaluate a functional on a profile");
    eval->add_option("profile", e_profile)->required();
    eval->add_option("--functional", e_functional, "newton | lift | volume | surface | boundary");
    eval->add_option("--mesh-h", e_mesh_h);
    eval->add_option("--direction", e_direction, "Lift direction x,y");
    eval->add_option("--out", e_out);

    // verify
    std::string v_profile, v_out;
    double v_M = 0.0, v_eps = 0.05, v_mesh_h = 0.02;
    auto* verify = app.add_subcommand("verify", "Optimality diagnostics for a profile");
    verify->add_option("profile", v_profile)->required();
    auto* v_M_opt = verify->add_option("--M", v_M, "Height bound (default: profile cap)");
    verify->add_option("--epsilon", v_eps);
    verify->add_option("--mesh-h", v_mesh_h);
    verify->add_option("--out", v_out);

    // asymptotics
    std::string a_ratios = "10,20,40", a_out;
    auto* asym = app.add_subcommand("asymptotics", "Scaled r0 and C0 for large M/R");
    asym->add_option("--ratios", a_ratios, "Comma-separated M/R values");
    asym->add_option("--out", a_out);

    // simulate
    std::string s_profile, s_density = "dirac:0,0,-1", s_out, s_batches;
    long s_rays = 1000000;
    std::uint64_t s_seed = 0;
    double s_mesh_h = 0.04;
    std::size_t s_threads = 0;
    auto* sim = app.add_subcommand("simulate", "Particle Monte Carlo drag");
    sim->add_option("profile", s_profile)->required();
    sim->add_option("--density", s_density, "dirac:vx,vy,vz | gaussian:mx,my,mz,sigma | file.json");
    sim->add_option("--rays", s_rays);
    sim->add_option("--seed", s_seed);
    sim->add_option("--mesh-h", s_mesh_h);
    auto* s_threads_opt = sim->add_option("--threads", s_threads);
    sim->add_option("--out", s_out);
    sim->add_option("--batches-csv", s_batches);

    // export
    std::string x_profile, x_format, x_out;
    double x_mesh_h = 0.04;
    auto* exp = app.add_subcommand("export", "Export a profile as obj, csv or svg");
    exp->add_option("profile", x_profile)->required();
    exp->add_option("--format", x_format, "obj | csv | svg")->required();
    exp->add_option("--mesh-h", x_mesh_h);
    exp->add_option("--out", x_out);

    std::vector<std::string> argv_storage{"newtondrag"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << version() << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*radial) return cmd_radial(rM, rR, r_samples, r_out, io);
        if (*opt) {
            if (*o_seed_opt) o_flags.seed = o_seed;
            if (*o_restarts_opt) o_flags.restarts = o_restarts;
            if (*o_budget_opt) o_flags.budget = o_budget;
            if (*o_pieces_opt) o_flags.pieces = o_pieces;
            if (*o_mesh_opt) o_flags.mesh_h = o_mesh_h;
            if (*o_threads_opt) o_flags.threads = o_threads;
            return cmd_optimize(o_config, o_flags, io);
        }
        if (*eval) return cmd_eval(e_profile, e_functional, e_mesh_h, e_direction, e_out, io);
        if (*verify)
            return cmd_verify(v_profile, *v_M_opt ? std::optional<double>(v_M) : std::nullopt, v_eps, v_mesh_h, v_out,
                              io);
        if (*asym) return cmd_asymptotics(a_ratios, a_out, io);
        if (*sim)
            return cmd_simulate(s_profile, s_density, s_rays, s_seed, s_mesh_h,
                                *s_threads_opt ? std::optional<std::size_t>(s_threads) : std::nullopt, s_out,
                                s_batches, io);
        if (*exp) return cmd_export(x_profile, x_format, x_mesh_h, x_out, io);
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Infeasible& e) {
        err << "infeasible: " << e.what() << "\n";
        return 3;
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 4;
    }
    return 2;
}

}  // namespace newtondrag::cli
