#include "qcforge/io.hpp"

#include <cmath>
#include <cstdio>

namespace qcforge {

std::string format_real(double x) {
    if (x == 0.0) x = 0.0;  // drop the sign of negative zero
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void JsonWriter::separate() {
    if (after_key_) {
        after_key_ = false;
        return;
    }
    if (!first_.empty()) {
        if (!first_.back()) out_ += ',';
        first_.back() = false;
    }
}

JsonWriter& JsonWriter::begin_object() {
    separate();
    out_ += '{';
    first_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    out_ += '}';
    first_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    separate();
    out_ += '[';
    first_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    out_ += ']';
    first_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::key(const std::string& k) {
    value(k);
    out_ += ':';
    after_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(double x) {
    separate();
    out_ += std::isfinite(x) ? format_real(x) : "null";
    return *this;
}

JsonWriter& JsonWriter::value(int x) {
    separate();
    out_ += std::to_string(x);
    return *this;
}

JsonWriter& JsonWriter::value(std::uint64_t x) {
    separate();
    out_ += std::to_string(x);
    return *this;
}

JsonWriter& JsonWriter::value(bool b) {
    separate();
    out_ += b ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::value(const std::string& s) {
    separate();
    out_ += '"';
    for (char c : s) {
        if (c == '"' || c == '\\') out_ += '\\';
        out_ += c;
    }
    out_ += '"';
    return *this;
}

JsonWriter& JsonWriter::point(Point p) {
    begin_array();
    value(p.x);
    value(p.y);
    return end_array();
}

namespace {

const char* family_name(CantorFamily f) { return f == CantorFamily::sigma ? "sigma" : "lambda"; }

void write_verdict(JsonWriter& w, const DavidVerdict& v) {
    w.key("passed").value(v.passed);
    w.key("margin").value(v.margin);
    w.key("thresholds_tested").value(v.thresholds_tested);
    w.key("worst_K").value(v.worst_K);
}

void write_levels(JsonWriter& w, const std::string& name, const std::vector<LevelRow>& rows) {
    w.key(name).begin_array();
    for (const auto& r : rows) {
        w.begin_object().key("level").value(r.level).key("K").value(r.K).key("ratio").value(r.ratio).end_object();
    }
    w.end_array();
}

void write_depths(JsonWriter& w, const std::vector<DepthRow>& rows) {
    w.key("depths").begin_array();
    for (const auto& r : rows) {
        w.begin_object();
        w.key("depth").value(r.depth);
        w.key("direction").value(r.direction == Direction::forward ? "forward" : "inverse");
        w.key("K").value(r.K);
        write_verdict(w, r.david);
        w.key("conservation_error").value(r.conservation_error);
        w.end_object();
    }
    w.end_array();
}

void write_estimate(JsonWriter& w, const DimensionEstimate& e) {
    w.begin_object();
    w.key("value").value(e.value).key("lower").value(e.lower).key("upper").value(e.upper);
    w.key("method").value(e.method == DimensionMethod::box_counting ? "box_counting" : "lemma_bounds");
    w.end_object();
}

}  // namespace

std::string cantor_json(const CantorLevel& level) {
    JsonWriter w;
    w.begin_object();
    w.key("family").value(family_name(level.family));
    w.key("level").value(level.level);
    w.key("side").value(level.side);
    w.key("squares").begin_array();
    for (const auto& s : level.squares) w.point(s.center);
    w.end_array();
    w.end_object();
    return w.str();
}

std::string cantor_csv(const CantorLevel& level) {
    std::string out = "x,y,side\n";
    for (const auto& s : level.squares) {
        out += format_real(s.center.x) + "," + format_real(s.center.y) + "," + format_real(s.side) + "\n";
    }
    return out;
}

std::string dimension_json(const std::string& gauge, const DimensionEstimate& est) {
    JsonWriter w;
    w.begin_object();
    w.key("gauge").value(gauge);
    w.key("value").value(est.value).key("lower").value(est.lower).key("upper").value(est.upper);
    w.key("method").value(est.method == DimensionMethod::box_counting ? "box_counting" : "lemma_bounds");
    if (est.method == DimensionMethod::box_counting) {
        w.key("scales").begin_array();
        for (double s : est.scales_used) w.value(s);
        w.end_array();
        w.key("counts").begin_array();
        for (double c : est.counts) w.value(c);
        w.end_array();
    }
    w.end_object();
    return w.str();
}

std::string map_json(const PiecewiseAffineMap& map, const ValidationReport& report) {
    JsonWriter w;
    w.begin_object();
    w.key("domain_kind").value(to_string(map.domain_kind()));
    w.key("params").begin_array();
    for (double p : map.params()) w.value(p);
    w.end_array();
    w.key("max_dilatation").value(map.max_dilatation());
    w.key("validation").begin_object();
    w.key("continuous").value(report.continuous);
    w.key("oriented").value(report.oriented);
    w.key("boundary_ok").value(report.boundary_ok);
    w.key("surjective_area_defect").value(report.surjective_area_defect);
    w.end_object();
    w.key("pieces").begin_array();
    for (const Piece& p : map.pieces()) {
        w.begin_object();
        w.key("cell").begin_array();
        for (const Point& v : p.cell.vertices()) w.point(v);
        w.end_array();
        const AffineMap& m = p.map;
        w.key("map").begin_array();
        for (double x : {m.m11, m.m12, m.m21, m.m22, m.tx, m.ty}) w.value(x);
        w.end_array();
        w.key("K").value(p.dilatation);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.str();
}

std::string polyline_csv(const Polyline& line) {
    std::string out = "t,x,y\n";
    for (std::size_t i = 0; i < line.vertices.size(); ++i) {
        out += format_real(line.marks[i]) + "," + format_real(line.vertices[i].x) + "," +
               format_real(line.vertices[i].y) + "\n";
    }
    return out;
}

std::string hierarchical_summary_json(const HierarchicalMap& map) {
    JsonWriter w;
    w.begin_object();
    w.key("depth").value(map.depth());
    w.key("source").value(map.source().describe());
    w.key("target").value(map.target().describe());
    w.key("direction").value(map.direction() == Direction::forward ? "forward" : "inverse");
    w.key("per_level").begin_array();
    for (const auto& t : map.levels()) {
        w.begin_object();
        w.key("level").value(t.level);
        w.key("max_K").value(t.max_dilatation);
        w.key("gasket_cells").value(static_cast<std::uint64_t>(t.gasket.pieces().size()));
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.str();
}

std::string profile_csv(const DilatationProfile& profile, const DavidParams& params) {
    std::string out = "K,exceedance_area,bound_C_alpha,truncation\n";
    for (const auto& e : profile.entries) {
        out += format_real(e.K) + "," + format_real(e.exceedance_area) + "," +
               format_real(params.C * std::exp(-params.alpha * e.K)) + "," + format_real(profile.truncation_bound) +
               "\n";
    }
    return out;
}

std::string david_json(const std::string& scenario, const DilatationProfile& profile, const DavidParams& params,
                       const DavidVerdict& verdict) {
    JsonWriter w;
    w.begin_object();
    w.key("scenario").value(scenario);
    w.key("depth").value(profile.depth);
    w.key("side").value(to_string(profile.side));
    w.key("C").value(params.C).key("alpha").value(params.alpha).key("K0").value(params.K0);
    w.key("truncation").value(profile.truncation_bound);
    write_verdict(w, verdict);
    w.end_object();
    return w.str();
}

std::string scenario_report_json(const ScenarioReport& report) {
    JsonWriter w;
    w.begin_object();
    w.key("scenario").value(report.scenario);
    w.key("n_max").value(report.n_max);
    write_levels(w, "forward_levels", report.forward_levels);
    write_levels(w, "inverse_levels", report.inverse_levels);
    write_depths(w, report.depths);
    w.key("source_dimension");
    write_estimate(w, report.source_dimension);
    w.key("target_dimension");
    write_estimate(w, report.target_dimension);
    w.key("all_passed").value(report.all_passed());
    w.end_object();
    return w.str();
}

std::string theoremB_report_json(const TheoremBReport& report) {
    JsonWriter w;
    w.begin_object();
    w.key("n_max").value(report.n_max);
    write_levels(w, "levels", report.levels);
    w.key("twist_parameters").begin_array();
    for (double a : report.twist_parameters) w.value(a);
    w.end_array();
    write_depths(w, report.depths);
    w.key("curve").begin_array();
    for (const auto& c : report.curve) {
        w.begin_object();
        w.key("depth").value(c.depth).key("squares").value(c.squares);
        w.key("estimate").value(c.estimate).key("expected").value(c.expected);
        w.end_object();
    }
    w.end_array();
    w.key("all_passed").value(report.all_passed());
    w.end_object();
    return w.str();
}

}  // namespace qcforge
