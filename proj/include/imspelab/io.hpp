#ifndef IMSPELAB_IO_HPP
#define IMSPELAB_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "imspelab/studies.hpp"

namespace imspelab {

inline constexpr const char* kToolVersion = "imspelab 1.0.0";
// Sentinel for unrepresentable numeric fields in CSV output.
inline constexpr const char* kNA = "NA";

// Design CSV: one point per row, D coordinate columns, optional header row,
// optional `twin_group` column (requires a header) marking exactly the two
// twin rows with 1. Values are decimal scientific notation.
Design read_design_csv(std::istream& in, const PrecisionContext& ctx);
Design read_design_csv_file(const std::string& path, const PrecisionContext& ctx);
void write_design_csv(std::ostream& out, const Design& design, int digits);
void write_design_csv_file(const std::string& path, const Design& design, int digits);

// Formatting used by every writer: BigReal at fixed significant digits
// (or NA when not finite), doubles at shortest-exact %.17g.
std::string fmt_big(const BigReal& x, int digits);
std::string fmt_double(double x);
// One-line, comma-free rendering of an error for a CSV status field.
std::string fmt_status(const std::string& error);

// Study CSV writers (header row, records in input order, trailing `status`
// column; failed records carry NA data fields).
void write_sweep_csv(std::ostream& out, const std::vector<PhaseRecord>& records,
                     int digits);
void write_rect_width_csv(std::ostream& out, const std::vector<RectWidth>& widths);
void write_baseline_csv(std::ostream& out, const BaselineReport& report, int digits);
void write_profile_csv(std::ostream& out, const std::vector<ProfilePoint>& points,
                       int digits);
void write_hue_csv(std::ostream& out, const std::vector<HueCell>& cells, int digits);
void write_tornado_csv(std::ostream& out, const std::vector<TornadoPoint>& points,
                       int digits);

// JSON renderings (BigReal values as strings at `digits`).
nlohmann::ordered_json design_to_json(const Design& design, int digits);
nlohmann::ordered_json imspe_result_to_json(const ImspeResult& result, int digits);
nlohmann::ordered_json search_result_to_json(const SearchResult& result, int digits);
nlohmann::ordered_json baseline_summary_to_json(const BaselineReport& report,
                                                int digits);

void write_text_file(const std::string& path, const std::string& content);
void write_json_file(const std::string& path, const nlohmann::ordered_json& j);

// Run manifest: tool version + command + full config + artifact paths.
// Contains no timestamps or absolute paths, so identical runs are
// byte-identical.
void write_manifest(const std::string& path, const std::string& command,
                    const nlohmann::ordered_json& config,
                    const std::vector<std::string>& artifact_paths);

} // namespace imspelab

#endif
