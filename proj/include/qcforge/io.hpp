#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcforge/analysis.hpp"
#include "qcforge/cantor.hpp"
#include "qcforge/homeo.hpp"
#include "qcforge/qcmaps.hpp"

namespace qcforge {

/// printf %.17g; negative zero prints as 0.
std::string format_real(double x);

/// Compact JSON builder with caller-controlled field order. Non-finite reals
/// are written as null.
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(const std::string& k);
    JsonWriter& value(double x);
    JsonWriter& value(int x);
    JsonWriter& value(std::uint64_t x);
    JsonWriter& value(bool b);
    JsonWriter& value(const std::string& s);
    JsonWriter& value(const char* s) { return value(std::string(s)); }
    JsonWriter& point(Point p);

    /// Document followed by a single LF.
    std::string str() const { return out_ + "\n"; }

private:
    void separate();

    std::string out_;
    std::vector<bool> first_;
    bool after_key_ = false;
};

std::string cantor_json(const CantorLevel& level);
std::string cantor_csv(const CantorLevel& level);
std::string dimension_json(const std::string& gauge, const DimensionEstimate& est);
std::string map_json(const PiecewiseAffineMap& map, const ValidationReport& report);
std::string polyline_csv(const Polyline& line);
std::string hierarchical_summary_json(const HierarchicalMap& map);
std::string profile_csv(const DilatationProfile& profile, const DavidParams& params);
std::string david_json(const std::string& scenario, const DilatationProfile& profile, const DavidParams& params,
                       const DavidVerdict& verdict);
std::string scenario_report_json(const ScenarioReport& report);
std::string theoremB_report_json(const TheoremBReport& report);

}  // namespace qcforge
