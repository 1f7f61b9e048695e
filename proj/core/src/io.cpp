#include "lpreduce/io.hpp"

#include "lpreduce/errors.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace lpreduce {

namespace {

using nlohmann::json;

bool parse_number(std::string_view token, double& out) {
    const char* begin = token.data();
    const char* end = begin + token.size();
    const auto result = std::from_chars(begin, end, out);
    return result.ec == std::errc() && result.ptr == end;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return fields;
}

json audit_to_json(const SnowflakeAudit& audit) {
    return json{{"min_ratio", audit.min_ratio},
                {"max_ratio", audit.max_ratio},
                {"argmin_u", audit.argmin_u},
                {"argmax_u", audit.argmax_u},
                {"samples", audit.samples}};
}

SnowflakeAudit audit_from_json(const json& j) {
    SnowflakeAudit audit;
    audit.min_ratio = j.at("min_ratio").get<double>();
    audit.max_ratio = j.at("max_ratio").get<double>();
    audit.argmin_u = j.at("argmin_u").get<double>();
    audit.argmax_u = j.at("argmax_u").get<double>();
    audit.samples = j.at("samples").get<int>();
    return audit;
}

json summary_to_json(const SnowflakeSummary& s) {
    return json{{"rho", s.rho},
                {"eps", s.eps},
                {"u_min", s.u_min},
                {"u_max", s.u_max},
                {"bands", s.bands},
                {"dim", s.dim},
                {"calibration", s.calibration},
                {"audit", audit_to_json(s.audit)}};
}

SnowflakeSummary summary_from_json(const json& j) {
    SnowflakeSummary s;
    s.rho = j.at("rho").get<double>();
    s.eps = j.at("eps").get<double>();
    s.u_min = j.at("u_min").get<double>();
    s.u_max = j.at("u_max").get<double>();
    s.bands = j.at("bands").get<int>();
    s.dim = j.at("dim").get<int>();
    s.calibration = j.at("calibration").get<double>();
    s.audit = audit_from_json(j.at("audit"));
    return s;
}

json distortion_to_json(const DistortionReport& d) {
    return json{{"min_ratio", d.min_ratio},
                {"max_ratio", d.max_ratio},
                {"worst_min_pair", json::array({d.worst_min_u, d.worst_min_v})},
                {"worst_max_pair", json::array({d.worst_max_u, d.worst_max_v})},
                {"min_power_ratio", d.min_power_ratio},
                {"max_power_ratio", d.max_power_ratio},
                {"certified_side", d.certified_side},
                {"pair_count", d.pair_count},
                {"duplicate_count", d.duplicate_count},
                {"violation_count", d.violation_count}};
}

DistortionReport distortion_from_json(const json& j) {
    DistortionReport d;
    d.min_ratio = j.at("min_ratio").get<double>();
    d.max_ratio = j.at("max_ratio").get<double>();
    d.worst_min_u = j.at("worst_min_pair").at(0).get<int>();
    d.worst_min_v = j.at("worst_min_pair").at(1).get<int>();
    d.worst_max_u = j.at("worst_max_pair").at(0).get<int>();
    d.worst_max_v = j.at("worst_max_pair").at(1).get<int>();
    d.min_power_ratio = j.at("min_power_ratio").get<double>();
    d.max_power_ratio = j.at("max_power_ratio").get<double>();
    d.certified_side = j.at("certified_side").get<double>();
    d.pair_count = j.at("pair_count").get<long>();
    d.duplicate_count = j.at("duplicate_count").get<long>();
    d.violation_count = j.at("violation_count").get<long>();
    return d;
}

json timings_to_json(const StageTimings& t) {
    return json{{"snowflake_ms", t.snowflake_ms},
                {"subspaces_ms", t.subspaces_ms},
                {"sparsify_ms", t.sparsify_ms},
                {"emit_ms", t.emit_ms},
                {"audit_ms", t.audit_ms},
                {"total_ms", t.total_ms}};
}

StageTimings timings_from_json(const json& j) {
    StageTimings t;
    t.snowflake_ms = j.at("snowflake_ms").get<double>();
    t.subspaces_ms = j.at("subspaces_ms").get<double>();
    t.sparsify_ms = j.at("sparsify_ms").get<double>();
    t.emit_ms = j.at("emit_ms").get<double>();
    t.audit_ms = j.at("audit_ms").get<double>();
    t.total_ms = j.at("total_ms").get<double>();
    return t;
}

json parse_or_throw(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) {
        throw validation_error(std::string("malformed JSON for ") + what);
    }
    return j;
}

}  // namespace

Eigen::MatrixXd parse_matrix_csv(const std::string& text, const std::string& origin) {
    std::vector<std::vector<double>> rows;
    std::size_t width = 0;
    std::size_t line_no = 0;
    std::size_t start = 0;
    bool header_allowed = true;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        const std::string_view line = trim(std::string_view(text).substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (line.empty()) continue;

        const auto fields = split_fields(line);
        std::vector<double> row;
        row.reserve(fields.size());
        bool numeric = true;
        for (const auto& f : fields) {
            double value = 0.0;
            if (f.empty() || !parse_number(f, value)) {
                numeric = false;
                break;
            }
            row.push_back(value);
        }
        if (!numeric) {
            if (header_allowed) {
                header_allowed = false;  // one non-numeric line tolerated as a header
                continue;
            }
            throw validation_error(origin + ":" + std::to_string(line_no) +
                                   ": non-numeric field in CSV data row");
        }
        header_allowed = false;
        if (width == 0) {
            width = row.size();
        } else if (row.size() != width) {
            throw validation_error(origin + ":" + std::to_string(line_no) + ": expected " +
                                   std::to_string(width) + " columns, got " +
                                   std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw validation_error(origin + ": no data rows");
    }
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < width; ++j) {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return out;
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
    return parse_matrix_csv(read_text_file(path), path);
}

std::string format_double(double value) {
    char buf[32];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, result.ptr);
}

std::string format_matrix_csv(const Eigen::MatrixXd& rows) {
    std::string out;
    out.reserve(static_cast<std::size_t>(rows.size()) * 12);
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        for (Eigen::Index j = 0; j < rows.cols(); ++j) {
            if (j > 0) out.push_back(',');
            out += format_double(rows(i, j));
        }
        out.push_back('\n');
    }
    return out;
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& rows) {
    write_text_file(path, format_matrix_csv(rows));
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw validation_error("cannot open file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw validation_error("cannot write file: " + path);
    }
    out << content;
    if (!out) {
        throw validation_error("write failed: " + path);
    }
}

std::string run_report_to_json(const RunReport& r) {
    json config{{"p", r.p},
                {"eps_total", r.eps_total.has_value() ? json(*r.eps_total) : json(nullptr)},
                {"eps_snow", r.eps_snow},
                {"d_bss", r.d_bss},
                {"normalization", r.normalization},
                {"range_policy", json{{"mode", r.explicit_range ? "explicit" : "auto"},
                                      {"u_min", r.range_u_min},
                                      {"u_max", r.range_u_max}}},
                {"rank_tol", r.rank_tol},
                {"input_path", r.input_path}};
    json j{{"schema_version", r.schema_version},
           {"artifact_version", r.artifact_version},
           {"config", config},
           {"input", json{{"k", r.k}, {"m", r.m}}},
           {"n", r.n},
           {"sigma", r.sigma},
           {"weights", r.weights},
           {"kappa", r.kappa},
           {"certified_factor", r.certified_factor},
           {"normalization_scale", r.normalization_scale},
           {"degenerate", r.degenerate},
           {"snowflake", summary_to_json(r.snowflake)},
           {"distortion", distortion_to_json(r.distortion)},
           {"timings_ms", timings_to_json(r.timings)}};
    return j.dump(2);
}

RunReport run_report_from_json(const std::string& text) {
    const json j = parse_or_throw(text, "run report");
    RunReport r;
    try {
        r.schema_version = j.at("schema_version").get<int>();
        r.artifact_version = j.at("artifact_version").get<std::string>();
        const json& config = j.at("config");
        r.p = config.at("p").get<double>();
        if (!config.at("eps_total").is_null()) {
            r.eps_total = config.at("eps_total").get<double>();
        }
        r.eps_snow = config.at("eps_snow").get<double>();
        r.d_bss = config.at("d_bss").get<double>();
        r.normalization = config.at("normalization").get<std::string>();
        r.explicit_range = config.at("range_policy").at("mode").get<std::string>() == "explicit";
        r.range_u_min = config.at("range_policy").at("u_min").get<double>();
        r.range_u_max = config.at("range_policy").at("u_max").get<double>();
        r.rank_tol = config.at("rank_tol").get<double>();
        r.input_path = config.at("input_path").get<std::string>();
        r.k = j.at("input").at("k").get<int>();
        r.m = j.at("input").at("m").get<int>();
        r.n = j.at("n").get<int>();
        r.sigma = j.at("sigma").get<std::vector<int>>();
        r.weights = j.at("weights").get<std::vector<double>>();
        r.kappa = j.at("kappa").get<double>();
        r.certified_factor = j.at("certified_factor").get<double>();
        r.normalization_scale = j.at("normalization_scale").get<double>();
        r.degenerate = j.at("degenerate").get<bool>();
        r.snowflake = summary_from_json(j.at("snowflake"));
        r.distortion = distortion_from_json(j.at("distortion"));
        r.timings = timings_from_json(j.at("timings_ms"));
    } catch (const json::exception& e) {
        throw validation_error(std::string("run report JSON: ") + e.what());
    }
    return r;
}

std::string sparse_weights_to_json(const SparseWeights& w) {
    json support = json::array();
    for (int idx : w.support) {
        support.push_back(json{{"index", idx}, {"weight", w.weights(idx)}});
    }
    json j{{"schema_version", 1},
           {"d", w.d_used},
           {"rank", w.rank_used},
           {"count", static_cast<int>(w.weights.size())},
           {"support", support},
           {"kappa", w.kappa},
           {"scale", w.scale}};
    return j.dump(2);
}

SparseWeights sparse_weights_from_json(const std::string& text) {
    const json j = parse_or_throw(text, "sparse weights");
    SparseWeights w;
    try {
        w.d_used = j.at("d").get<double>();
        w.rank_used = j.at("rank").get<int>();
        w.kappa = j.at("kappa").get<double>();
        w.scale = j.at("scale").get<double>();
        const int count = j.at("count").get<int>();
        w.weights = Eigen::VectorXd::Zero(count);
        for (const json& entry : j.at("support")) {
            const int idx = entry.at("index").get<int>();
            if (idx < 0 || idx >= count) {
                throw validation_error("support index out of range in weights JSON");
            }
            w.weights(idx) = entry.at("weight").get<double>();
            w.support.push_back(idx);
        }
    } catch (const json::exception& e) {
        throw validation_error(std::string("sparse weights JSON: ") + e.what());
    }
    return w;
}

std::string reduced_points_to_json(const ReducedPointSet& r) {
    json points = json::array();
    for (Eigen::Index u = 0; u < r.points.rows(); ++u) {
        json row = json::array();
        for (Eigen::Index j = 0; j < r.points.cols(); ++j) {
            row.push_back(r.points(u, j));
        }
        points.push_back(std::move(row));
    }
    json weights = json::array();
    for (Eigen::Index j = 0; j < r.weights.size(); ++j) {
        weights.push_back(r.weights(j));
    }
    json j{{"schema_version", 1},
           {"p", r.p},
           {"n", r.n},
           {"sigma", r.sigma},
           {"weights", weights},
           {"certified_factor", r.certified_factor},
           {"normalization_scale", r.normalization_scale},
           {"degenerate", r.degenerate},
           {"kappa", r.kappa},
           {"eps_snow", r.eps_snow},
           {"d_bss", r.d_bss},
           {"snowflake", summary_to_json(r.snowflake)},
           {"points", points}};
    return j.dump(2);
}

ReducedPointSet reduced_points_from_json(const std::string& text) {
    const json j = parse_or_throw(text, "reduced point set");
    ReducedPointSet r;
    try {
        r.p = j.at("p").get<double>();
        r.n = j.at("n").get<int>();
        r.sigma = j.at("sigma").get<std::vector<int>>();
        const auto weights = j.at("weights").get<std::vector<double>>();
        r.weights = Eigen::Map<const Eigen::VectorXd>(weights.data(),
                                                      static_cast<Eigen::Index>(weights.size()));
        r.certified_factor = j.at("certified_factor").get<double>();
        r.normalization_scale = j.at("normalization_scale").get<double>();
        r.degenerate = j.at("degenerate").get<bool>();
        r.kappa = j.at("kappa").get<double>();
        r.eps_snow = j.at("eps_snow").get<double>();
        r.d_bss = j.at("d_bss").get<double>();
        r.snowflake = summary_from_json(j.at("snowflake"));
        const json& points = j.at("points");
        const auto rows = static_cast<Eigen::Index>(points.size());
        r.points.resize(rows, r.n);
        for (Eigen::Index u = 0; u < rows; ++u) {
            const json& row = points.at(static_cast<std::size_t>(u));
            if (static_cast<int>(row.size()) != r.n) {
                throw validation_error("reduced point row width does not match n");
            }
            for (int c = 0; c < r.n; ++c) {
                r.points(u, c) = row.at(static_cast<std::size_t>(c)).get<double>();
            }
        }
    } catch (const json::exception& e) {
        throw validation_error(std::string("reduced point set JSON: ") + e.what());
    }
    return r;
}

std::string snowflake_summary_to_json(const SnowflakeSummary& summary) {
    return summary_to_json(summary).dump(2);
}

std::string strip_timings(const std::string& report_json) {
    json j = parse_or_throw(report_json, "report");
    j.erase("timings_ms");
    return j.dump(2);
}

}  // namespace lpreduce
