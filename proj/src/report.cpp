#include "polybloch/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace polybloch {

namespace {

std::string format_number(double x) {
    if (!std::isfinite(x)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write(const Json& v, std::string& out, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
    switch (v.type()) {
    case Json::value_t::object: {
        if (v.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (const auto& [key, item] : v.items()) {
            if (!first) out += ",\n";
            first = false;
            out += pad + Json(key).dump() + ": ";
            write(item, out, depth + 1);
        }
        out += "\n" + close_pad + "}";
        return;
    }
    case Json::value_t::array: {
        if (v.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += ",\n";
            out += pad;
            write(v[i], out, depth + 1);
        }
        out += "\n" + close_pad + "]";
        return;
    }
    case Json::value_t::number_float: out += format_number(v.get<double>()); return;
    default: out += v.dump(); return;
    }
}

} // namespace

std::string dump_json(const Json& value) {
    std::string out;
    write(value, out, 0);
    out += '\n';
    return out;
}

Json point_json(std::span<const Complex> z) {
    Json arr = Json::array();
    for (const Complex& c : z) arr.push_back(Json::array({c.real(), c.imag()}));
    return arr;
}

Json to_json(const DeltaRow& row) {
    return Json{
        {"delta", row.delta},
        {"S", row.S},
        {"K", row.K},
        {"b_l", row.b_l},
        {"samples_in_region", row.samples_in_region},
        {"refined_in_region", row.refined_in_region},
        {"witness_S", point_json(row.witness_S)},
        {"witness_K", point_json(row.witness_K)},
    };
}

Json to_json(const BoundReport& report) {
    Json rows = Json::array();
    for (const auto& row : report.rows) rows.push_back(to_json(row));
    const BoundDiagnostics& d = report.diagnostics;
    Json j;
    j["rows"] = std::move(rows);
    j["S_limit"] = report.S_limit;
    j["K_limit"] = report.K_limit;
    j["lower_bound"] = report.lower_bound;
    j["upper_bound"] = report.upper_bound;
    j["verdict"] = to_string(report.verdict);
    j["boundedness_assumed"] = report.boundedness_assumed;
    j["diagnostics"] = Json{
        {"degenerate_empty", d.degenerate_empty},
        {"empty_rows", d.empty_rows},
        {"phi_sup_sampled", d.phi_sup_sampled},
        {"psi_sup_sampled", d.psi_sup_sampled},
        {"last_step", d.last_step},
        {"stable", d.stable},
        {"S_trend", d.s_trend},
        {"notes", d.notes},
    };
    return j;
}

Json to_json(const BlochNormEstimate& e) {
    return Json{
        {"seminorm_B", e.seminorm_B},
        {"norm_1", e.norm_1},
        {"norm_G", e.norm_G},
        {"value_at_origin", e.value_at_origin},
        {"sampled_seminorm_B", e.sampled_seminorm_B},
        {"sampled_sup_G", e.sampled_sup_G},
        {"argmax_point", point_json(e.argmax_point)},
        {"argmax_point_G", point_json(e.argmax_point_G)},
        {"sample_budget", e.sample_budget},
        {"is_lower_estimate", e.is_lower_estimate},
    };
}

Json to_json(const InequalityReport& r) {
    Json witness = Json::array();
    for (const auto& p : r.worst_witness) witness.push_back(point_json(p));
    return Json{
        {"suite", r.suite},
        {"trials", r.trials},
        {"violations", r.violations},
        {"worst_ratio", r.worst_ratio},
        {"worst_label", r.worst_label},
        {"worst_parameter", r.worst_parameter},
        {"worst_witness", std::move(witness)},
        {"diagnostic_violations", r.diagnostic_violations},
        {"notes", r.notes},
    };
}

Json to_json(const ValidationReport& r) {
    Json j{
        {"passed", r.passed},
        {"max_sup_norm", r.max_sup_norm},
        {"samples", r.samples},
    };
    j["witness"] = r.witness ? point_json(*r.witness) : Json(nullptr);
    j["failure"] = r.failure;
    return j;
}

std::string rows_csv(const BoundReport& report) {
    std::ostringstream out;
    out << "delta,S,K,samples_in_region";
    for (std::size_t l = 0; l < report.dim; ++l) out << ",b_" << (l + 1);
    out << '\n';
    for (const DeltaRow& row : report.rows) {
        out << format_number(row.delta) << ',' << format_number(row.S) << ',' << format_number(row.K) << ','
            << row.samples_in_region;
        for (double b : row.b_l) out << ',' << format_number(b);
        out << '\n';
    }
    return out.str();
}

} // namespace polybloch
