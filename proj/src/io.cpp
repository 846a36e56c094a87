#include "imspelab/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace imspelab {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

bool parses_as_number(const std::string& s, const PrecisionContext& ctx) {
    try {
        from_string(s, ctx);
        return true;
    } catch (const Error&) {
        return false;
    }
}

bool truthy_flag(const std::string& raw, int line_no) {
    std::string s = raw;
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (s.empty() || s == "0" || s == "false" || s == "f" || s == "no") return false;
    if (s == "1" || s == "true" || s == "t" || s == "yes") return true;
    throw ParseError("design csv: twin_group value '" + raw + "' is not a flag",
                     line_no);
}

} // namespace

Design read_design_csv(std::istream& in, const PrecisionContext& ctx) {
    std::string line;
    int line_no = 0;
    int twin_col = -1;
    int n_cols = -1;
    bool saw_header = false;
    std::vector<std::vector<BigReal>> rows;
    std::vector<bool> twin_mark;
    std::vector<int> row_lines;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        std::vector<std::string> fields = split_csv(line);
        if (n_cols < 0) {
            // First contentful line: a header if any field is non-numeric.
            bool numeric = true;
            for (const std::string& f : fields)
                if (!parses_as_number(f, ctx)) {
                    numeric = false;
                    break;
                }
            if (!numeric) {
                saw_header = true;
                for (size_t c = 0; c < fields.size(); ++c)
                    if (fields[c] == "twin_group") twin_col = static_cast<int>(c);
                n_cols = static_cast<int>(fields.size());
                if (n_cols - (twin_col >= 0 ? 1 : 0) < 1)
                    throw ParseError("design csv: no coordinate columns", line_no);
                continue;
            }
            n_cols = static_cast<int>(fields.size());
        }
        if (static_cast<int>(fields.size()) != n_cols)
            throw ParseError("design csv: expected " + std::to_string(n_cols) +
                                 " fields, found " + std::to_string(fields.size()),
                             line_no);
        std::vector<BigReal> coords;
        bool is_twin = false;
        for (int c = 0; c < n_cols; ++c) {
            if (c == twin_col) {
                is_twin = truthy_flag(fields[static_cast<size_t>(c)], line_no);
                continue;
            }
            try {
                coords.push_back(from_string(fields[static_cast<size_t>(c)], ctx));
            } catch (const Error& e) {
                throw ParseError("design csv: column " + std::to_string(c + 1) +
                                     ": " + e.what(),
                                 line_no);
            }
        }
        rows.push_back(std::move(coords));
        twin_mark.push_back(is_twin);
        row_lines.push_back(line_no);
    }
    (void)saw_header;
    if (rows.empty()) throw ParseError("design csv: no data rows", line_no);

    const int d = static_cast<int>(rows.front().size());
    const int n = static_cast<int>(rows.size());
    std::vector<int> twins;
    for (int i = 0; i < n; ++i)
        if (twin_mark[static_cast<size_t>(i)]) twins.push_back(i);
    if (!twins.empty() && twins.size() != 2)
        throw ParseError("design csv: twin_group must mark exactly two rows (found " +
                             std::to_string(twins.size()) + ")",
                         row_lines[static_cast<size_t>(twins.back())]);

    if (twins.empty()) {
        std::vector<BigReal> pts;
        pts.reserve(static_cast<size_t>(n) * d);
        for (auto& r : rows)
            for (auto& v : r) pts.push_back(std::move(v));
        return Design(n, d, std::move(pts));
    }
    const BigReal two(2, ctx);
    const auto& a = rows[static_cast<size_t>(twins[0])];
    const auto& b = rows[static_cast<size_t>(twins[1])];
    TwinSpec tw;
    for (int k = 0; k < d; ++k) {
        tw.barycenter.push_back((a[static_cast<size_t>(k)] + b[static_cast<size_t>(k)]) / two);
        tw.delta.push_back((a[static_cast<size_t>(k)] - b[static_cast<size_t>(k)]) / two);
    }
    std::vector<BigReal> leading;
    leading.reserve(static_cast<size_t>(n - 2) * d);
    for (int i = 0; i < n; ++i) {
        if (i == twins[0] || i == twins[1]) continue;
        for (auto& v : rows[static_cast<size_t>(i)]) leading.push_back(std::move(v));
    }
    return Design(n, d, std::move(leading), std::move(tw));
}

Design read_design_csv_file(const std::string& path, const PrecisionContext& ctx) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open design file: " + path);
    return read_design_csv(in, ctx);
}

void write_design_csv(std::ostream& out, const Design& design, int digits) {
    for (int k = 0; k < design.dim(); ++k)
        out << (k ? "," : "") << "x" << (k + 1);
    if (design.has_twin()) out << ",twin_group";
    out << "\n";
    for (int i = 0; i < design.n(); ++i) {
        for (int k = 0; k < design.dim(); ++k)
            out << (k ? "," : "") << fmt_big(design.at(i, k), digits);
        if (design.has_twin())
            out << "," << (i >= design.n() - 2 ? "1" : "0");
        out << "\n";
    }
}

void write_design_csv_file(const std::string& path, const Design& design, int digits) {
    std::ostringstream os;
    write_design_csv(os, design, digits);
    write_text_file(path, os.str());
}

std::string fmt_big(const BigReal& x, int digits) {
    if (!x.is_finite()) return kNA;
    return to_string(x, digits);
}

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt_status(const std::string& error) {
    if (error.empty()) return "ok";
    std::string s = "error: " + error;
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

void write_sweep_csv(std::ostream& out, const std::vector<PhaseRecord>& records,
                     int digits) {
    out << "theta1,theta2,imspe,label";
    const int n = records.empty() || !records.front().design
                      ? 4
                      : records.front().design->n();
    const int d = records.empty() || !records.front().design
                      ? 2
                      : records.front().design->dim();
    for (int i = 1; i <= n; ++i)
        for (int k = 1; k <= d; ++k) out << ",x" << i << "_" << k;
    out << ",status\n";
    for (const PhaseRecord& r : records) {
        out << fmt_big(r.theta1, digits) << "," << fmt_big(r.theta2, digits) << ",";
        if (r.ok && r.design) {
            out << fmt_big(r.imspe, digits) << "," << to_string(r.label);
            for (int i = 0; i < r.design->n(); ++i)
                for (int k = 0; k < r.design->dim(); ++k)
                    out << "," << fmt_big(r.design->at(i, k), digits);
            out << ",ok\n";
        } else {
            out << kNA << "," << to_string(r.label);
            for (int i = 0; i < n * d; ++i) out << "," << kNA;
            out << "," << fmt_status(r.error.empty() ? "search failed" : r.error)
                << "\n";
        }
    }
}

void write_rect_width_csv(std::ostream& out, const std::vector<RectWidth>& widths) {
    out << "theta1,n_rect,log10_width,status\n";
    for (const RectWidth& w : widths) {
        out << fmt_big(w.theta1, 20) << "," << w.n_rect << ",";
        if (w.defined)
            out << fmt_double(w.log10_width) << ",ok\n";
        else
            out << kNA << ",undefined\n";
    }
}

void write_baseline_csv(std::ostream& out, const BaselineReport& report, int digits) {
    out << "sample_index,imspe,gap,status\n";
    for (const BaselineSample& s : report.samples) {
        out << s.index << ",";
        if (s.ok) {
            out << fmt_big(s.imspe, digits) << ","
                << fmt_big(s.imspe - report.reference_imspe, digits) << ",ok\n";
        } else {
            out << kNA << "," << kNA << "," << fmt_status(s.error) << "\n";
        }
    }
}

void write_profile_csv(std::ostream& out, const std::vector<ProfilePoint>& points,
                       int digits) {
    out << "axis,delta,imspe,status\n";
    for (const ProfilePoint& p : points) {
        out << p.axis << "," << fmt_big(p.delta, digits) << ",";
        if (p.ok)
            out << fmt_big(p.imspe, digits) << ",ok\n";
        else
            out << kNA << "," << fmt_status(p.error) << "\n";
    }
}

void write_hue_csv(std::ostream& out, const std::vector<HueCell>& cells, int digits) {
    out << "u,v,gap,status\n";
    for (const HueCell& c : cells) {
        out << fmt_double(c.u) << "," << fmt_double(c.v) << ",";
        if (c.ok)
            out << fmt_big(c.gap, digits) << ",ok\n";
        else
            out << kNA << "," << fmt_status(c.error) << "\n";
    }
}

void write_tornado_csv(std::ostream& out, const std::vector<TornadoPoint>& points,
                       int digits) {
    out << "d,gap,status\n";
    for (const TornadoPoint& p : points) {
        if (p.ok)
            out << fmt_double(p.d) << "," << fmt_big(p.gap, digits) << ",ok\n";
        else
            out << fmt_double(p.d) << "," << kNA << ",error: unusable sample\n";
    }
}

nlohmann::ordered_json design_to_json(const Design& design, int digits) {
    nlohmann::ordered_json j;
    j["n"] = design.n();
    j["d"] = design.dim();
    nlohmann::ordered_json pts = nlohmann::ordered_json::array();
    for (int i = 0; i < design.n(); ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (int k = 0; k < design.dim(); ++k)
            row.push_back(fmt_big(design.at(i, k), digits));
        pts.push_back(std::move(row));
    }
    j["points"] = std::move(pts);
    if (design.has_twin()) {
        nlohmann::ordered_json tw;
        nlohmann::ordered_json bc = nlohmann::ordered_json::array();
        nlohmann::ordered_json de = nlohmann::ordered_json::array();
        for (int k = 0; k < design.dim(); ++k) {
            bc.push_back(fmt_big(design.twin().barycenter[static_cast<size_t>(k)], digits));
            de.push_back(fmt_big(design.twin().delta[static_cast<size_t>(k)], digits));
        }
        tw["barycenter"] = std::move(bc);
        tw["delta"] = std::move(de);
        j["twin"] = std::move(tw);
    } else {
        j["twin"] = nullptr;
    }
    return j;
}

nlohmann::ordered_json imspe_result_to_json(const ImspeResult& result, int digits) {
    nlohmann::ordered_json j;
    j["imspe"] = fmt_big(result.imspe, digits);
    j["digits_used"] = result.digits_used;
    j["escalations"] = result.escalations;
    j["min_pivot"] = fmt_big(result.min_pivot, 6);
    return j;
}

nlohmann::ordered_json search_result_to_json(const SearchResult& result, int digits) {
    nlohmann::ordered_json j;
    j["imspe"] = fmt_big(result.imspe, digits);
    j["sweeps"] = result.sweeps;
    j["converged"] = result.converged;
    nlohmann::ordered_json tr = nlohmann::ordered_json::array();
    for (const SweepTrace& t : result.trace)
        tr.push_back({t.sweep, fmt_big(t.imspe, digits)});
    j["trace"] = std::move(tr);
    if (result.design) j["design"] = design_to_json(*result.design, digits);
    return j;
}

nlohmann::ordered_json baseline_summary_to_json(const BaselineReport& report,
                                                int digits) {
    nlohmann::ordered_json j;
    j["n_samples"] = report.n_samples;
    j["n"] = report.n;
    j["d"] = report.dim;
    j["skipped"] = report.skipped;
    j["count_below_reference"] = report.count_below_reference;
    j["reference_imspe"] = fmt_big(report.reference_imspe, digits);
    j["min_gap"] = fmt_big(report.min_gap, digits);
    j["histogram_bins_log10_gap"] = {{"lo", -16.0}, {"hi", 2.0}, {"width", 0.5}};
    j["histogram"] = report.histogram;
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    out << content;
    if (!out) throw Error("write failed: " + path);
}

void write_json_file(const std::string& path, const nlohmann::ordered_json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

void write_manifest(const std::string& path, const std::string& command,
                    const nlohmann::ordered_json& config,
                    const std::vector<std::string>& artifact_paths) {
    nlohmann::ordered_json j;
    j["tool_version"] = kToolVersion;
    j["command"] = command;
    j["config"] = config;
    j["artifact_paths"] = artifact_paths;
    write_json_file(path, j);
}

} // namespace imspelab
