#include "qcforge/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>

#include "qcforge/io.hpp"

namespace qcforge {

namespace {

constexpr int kUsage = 1;
constexpr int kFailed = 2;

struct RunConfig {
    std::string gauge = "geometric:1";
    std::string dst = "geometric:1";
    std::string scenario;
    bool theorem_b = false;
    bool invert = false;
    int depth = 3;
    int n_max = 12;
    int N = 400;
    double tol = 0.0;
    double a = 0.1, b = 0.3;
    double C = 1.0, alpha = 1.0;
    std::optional<double> K0;
    double s = 1.0;
    int samples = 200;
    std::uint64_t seed = 1;
    std::string method = "bounds";
    std::string family = "lambda";
    std::string side = "domain";
    std::string direction = "forward";
    std::vector<int> depths{4, 6, 8};
    std::string out;
    std::string format = "json";
};

// Writes to a sibling temporary and renames, so readers never see a partial file.
void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.out.empty()) {
        out << text;
        return;
    }
    const std::string tmp = cfg.out + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw DomainError("cannot open " + tmp);
        f << text;
        if (!f.flush()) throw DomainError("cannot write " + tmp);
    }
    if (std::rename(tmp.c_str(), cfg.out.c_str()) != 0) throw DomainError("cannot move output to " + cfg.out);
}

HierarchicalMap scenario_map(const RunConfig& cfg, int depth, Direction& dir) {
    dir = cfg.direction == "inverse" ? Direction::inverse : Direction::forward;
    HierarchicalMap m = cfg.theorem_b ? theoremB_homeo(depth)
                                      : standard_homeo(ScenarioSpec::parse(cfg.scenario).source(),
                                                       ScenarioSpec::parse(cfg.scenario).target(), depth);
    return dir == Direction::inverse ? invert(m) : m;
}

void require_case(const RunConfig& cfg) {
    if (cfg.theorem_b == !cfg.scenario.empty()) throw DomainError("give exactly one of --case or --theorem-b");
}

void check_depth(int depth) {
    if (depth < 0) throw DomainError("depth must be non-negative");
    if (depth > depth_guard()) {
        throw DepthGuardError("depth " + std::to_string(depth) + " exceeds guard " + std::to_string(depth_guard()));
    }
}

int cmd_cantor(const RunConfig& cfg, bool sigma, std::ostream& out) {
    check_depth(cfg.depth);
    const CantorLevel level = sigma ? build_sigma_level(cfg.depth) : build_level(GaugeSequence::parse(cfg.gauge), cfg.depth);
    emit(cfg, cfg.format == "csv" ? cantor_csv(level) : cantor_json(level), out);
    return 0;
}

int cmd_dims(const RunConfig& cfg, std::ostream& out) {
    const bool sigma = cfg.family == "sigma";
    const GaugeSequence g = GaugeSequence::parse(cfg.gauge);
    const std::string name = sigma ? "sigma" : g.describe();
    if (cfg.method == "bounds") {
        if (sigma) throw DomainError("bounds apply to lambda gauges");
        emit(cfg, dimension_json(name, dimension_bounds(g, cfg.N)), out);
    } else if (cfg.method == "box") {
        for (int d : cfg.depths) check_depth(d);
        auto source = [&](int d) { return box_sample(sigma ? build_sigma_level(d) : build_level(g, d)); };
        emit(cfg, dimension_json(name, box_dimension(source, cfg.depths)), out);
    } else {
        if (sigma) throw DomainError("frostman check applies to lambda gauges");
        const auto profile = frostman_profile(g, cfg.depth, cfg.s, cfg.samples, cfg.seed);
        JsonWriter w;
        w.begin_object().key("gauge").value(name).key("s").value(cfg.s).key("depth").value(cfg.depth);
        double mx = 0.0;
        for (const auto& p : profile) mx = std::max(mx, p.max_ratio);
        w.key("max_ratio").value(mx).key("trend").value(frostman_trend(profile));
        w.key("profile").begin_array();
        for (const auto& p : profile) w.begin_object().key("radius").value(p.radius).key("max_ratio").value(p.max_ratio).end_object();
        w.end_array().end_object();
        emit(cfg, w.str(), out);
    }
    return 0;
}

int cmd_piecewise(const RunConfig& cfg, bool twist, std::ostream& out) {
    const PiecewiseAffineMap m = twist ? twist_extension(cfg.a) : annulus_extension(cfg.a, cfg.b);
    // Domain and image regions share the outer boundary; the image area is that minus the target holes.
    double target = 0.0;
    {
        const auto& o = m.boundary().outer;
        for (std::size_t i = 0; i < o.size(); ++i) {
            const Point p = o[i], q = o[(i + 1) % o.size()];
            target += 0.5 * (p.x * q.y - q.x * p.y);
        }
        for (const auto& h : m.boundary().holes) target -= h.dst_side * h.dst_side;
    }
    const ValidationReport r = validate(m, target, 1e-9);
    emit(cfg, map_json(m, r), out);
    return r.ok(1e-9) ? 0 : kFailed;
}

int cmd_homeo(const RunConfig& cfg, std::ostream& out) {
    HierarchicalMap m = cfg.theorem_b ? theoremB_homeo(cfg.depth)
                                      : standard_homeo(GaugeSequence::parse(cfg.gauge), GaugeSequence::parse(cfg.dst), cfg.depth);
    if (cfg.invert) m = invert(m);
    emit(cfg, hierarchical_summary_json(m), out);
    return 0;
}

DavidParams david_params(const RunConfig& cfg, Direction dir) {
    DavidParams p{cfg.C, cfg.alpha, 1.0};
    if (cfg.K0) {
        p.K0 = *cfg.K0;
    } else {
        p.K0 = cfg.theorem_b ? frozen_K0_theoremB(dir) : frozen_K0(ScenarioSpec::parse(cfg.scenario), dir);
    }
    return p;
}

int cmd_profile(const RunConfig& cfg, std::ostream& out) {
    require_case(cfg);
    Direction dir{};
    const HierarchicalMap m = scenario_map(cfg, cfg.depth, dir);
    const DilatationProfile p = dilatation_profile(m, cfg.side == "image" ? ProfileSide::image : ProfileSide::domain);
    emit(cfg, profile_csv(p, DavidParams{cfg.C, cfg.alpha, 1.0}), out);
    return 0;
}

int cmd_david(const RunConfig& cfg, std::ostream& out) {
    require_case(cfg);
    Direction dir{};
    const HierarchicalMap m = scenario_map(cfg, cfg.depth, dir);
    const DilatationProfile p = dilatation_profile(m, ProfileSide::domain);
    const DavidParams params = david_params(cfg, dir);
    const DavidVerdict v = check_david(p, params);
    const std::string name = cfg.theorem_b ? std::string("sigma-to-sqrt") : ScenarioSpec::parse(cfg.scenario).describe();
    emit(cfg, david_json(name + (dir == Direction::inverse ? ":inverse" : ""), p, params, v), out);
    return v.passed ? 0 : kFailed;
}

int cmd_curve(const RunConfig& cfg, std::ostream& out) {
    check_depth(cfg.depth);
    emit(cfg, polyline_csv(curve_polyline(theoremB_homeo(cfg.depth), cfg.tol)), out);
    return 0;
}

int cmd_report(const RunConfig& cfg, std::ostream& out) {
    require_case(cfg);
    if (cfg.theorem_b) {
        const TheoremBReport r = theoremB_report(cfg.n_max, cfg.depths);
        emit(cfg, theoremB_report_json(r), out);
        return r.all_passed() ? 0 : kFailed;
    }
    const ScenarioReport r = theoremA_report(ScenarioSpec::parse(cfg.scenario), cfg.n_max, cfg.N);
    emit(cfg, scenario_report_json(r), out);
    return r.all_passed() ? 0 : kFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Cantor sets, David map approximants and their dilatation checks", "qcforge"};
    app.require_subcommand(1);

    auto add_out = [&](CLI::App* c) {
        c->add_option("--out", cfg.out, "output file (default stdout)");
    };
    auto add_format = [&](CLI::App* c) {
        c->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    };
    auto add_case = [&](CLI::App* c) {
        c->add_option("--case", cfg.scenario, "slow-to-geometric:NU, geometric-to-fast:NU or slow-to-fast");
        c->add_flag("--theorem-b", cfg.theorem_b, "use the Sigma -> Lambda(sqrt) map");
    };
    auto add_direction = [&](CLI::App* c) {
        c->add_option("--direction", cfg.direction, "forward or inverse")->check(CLI::IsMember({"forward", "inverse"}));
    };

    auto* cantor = app.add_subcommand("cantor", "squares of a Lambda level");
    cantor->add_option("--gauge", cfg.gauge, "gauge kind[:param]");
    cantor->add_option("--depth", cfg.depth, "level");
    add_format(cantor);
    add_out(cantor);

    auto* sigma = app.add_subcommand("sigma", "squares of a Sigma level");
    sigma->add_option("--depth", cfg.depth, "level");
    add_format(sigma);
    add_out(sigma);

    auto* dims = app.add_subcommand("dims", "dimension bounds, box counting or Frostman ratios");
    dims->add_option("--gauge", cfg.gauge, "gauge kind[:param]");
    dims->add_option("--family", cfg.family, "lambda or sigma")->check(CLI::IsMember({"lambda", "sigma"}));
    dims->add_option("--method", cfg.method, "bounds, box or frostman")
        ->check(CLI::IsMember({"bounds", "box", "frostman"}));
    dims->add_option("--N", cfg.N, "last index for the bounds");
    dims->add_option("--depths", cfg.depths, "depths for box counting");
    dims->add_option("--depth", cfg.depth, "level for the Frostman check");
    dims->add_option("--s", cfg.s, "exponent for the Frostman check");
    dims->add_option("--samples", cfg.samples, "centers per radius");
    dims->add_option("--seed", cfg.seed, "random seed");
    add_out(dims);

    auto* annulus = app.add_subcommand("annulus", "square annulus extension");
    annulus->add_option("--a", cfg.a, "source inset")->required();
    annulus->add_option("--b", cfg.b, "target inset")->required();
    add_out(annulus);

    auto* twist = app.add_subcommand("twist", "two-hole twist extension");
    twist->add_option("--a", cfg.a, "twist parameter")->required();
    add_out(twist);

    auto* homeo = app.add_subcommand("homeo", "per-level summary of a hierarchical map");
    homeo->add_option("--src", cfg.gauge, "source gauge");
    homeo->add_option("--dst", cfg.dst, "target gauge");
    homeo->add_option("--depth", cfg.depth, "depth");
    homeo->add_flag("--theorem-b", cfg.theorem_b, "use the Sigma -> Lambda(sqrt) map");
    homeo->add_flag("--invert", cfg.invert, "summarize the inverse");
    add_out(homeo);

    auto* profile = app.add_subcommand("profile", "dilatation exceedance profile as CSV");
    add_case(profile);
    add_direction(profile);
    profile->add_option("--depth", cfg.depth, "depth");
    profile->add_option("--side", cfg.side, "domain or image")->check(CLI::IsMember({"domain", "image"}));
    profile->add_option("--C", cfg.C, "bound constant");
    profile->add_option("--alpha", cfg.alpha, "bound exponent");
    add_out(profile);

    auto* david = app.add_subcommand("david", "David condition check");
    add_case(david);
    add_direction(david);
    david->add_option("--depth", cfg.depth, "depth");
    david->add_option("--C", cfg.C, "bound constant");
    david->add_option("--alpha", cfg.alpha, "bound exponent");
    david->add_option("--K0", cfg.K0, "threshold floor (default: frozen per scenario)");
    add_out(david);

    auto* curve = app.add_subcommand("curve", "image of [-1/2,1/2] under the Sigma map as CSV");
    curve->add_option("--depth", cfg.depth, "depth");
    curve->add_option("--tol", cfg.tol, "stop refining once target squares are this small");
    add_out(curve);

    auto* report = app.add_subcommand("report", "scenario report");
    add_case(report);
    report->add_option("--n-max", cfg.n_max, "largest depth");
    report->add_option("--N", cfg.N, "last index for the endpoint dimension bounds");
    report->add_option("--depths", cfg.depths, "curve depths (with --theorem-b)");
    add_out(report);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : kUsage;
    }
    if (cfg.tol < 0.0) {
        err << "error: --tol must be non-negative\n";
        return kUsage;
    }

    try {
        if (cantor->parsed()) return cmd_cantor(cfg, false, out);
        if (sigma->parsed()) return cmd_cantor(cfg, true, out);
        if (dims->parsed()) return cmd_dims(cfg, out);
        if (annulus->parsed()) return cmd_piecewise(cfg, false, out);
        if (twist->parsed()) return cmd_piecewise(cfg, true, out);
        if (homeo->parsed()) return cmd_homeo(cfg, out);
        if (profile->parsed()) return cmd_profile(cfg, out);
        if (david->parsed()) return cmd_david(cfg, out);
        if (curve->parsed()) return cmd_curve(cfg, out);
        if (report->parsed()) return cmd_report(cfg, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kFailed;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

}  // namespace qcforge
