#include "fracqm/csv_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fracqm/errors.hpp"

namespace fracqm::io {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw IoError("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

void append_row(std::string& out, std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
        if (!first) out += ',';
        out += format_double(v);
        first = false;
    }
    out += '\n';
}

}  // namespace

std::vector<std::vector<double>> parse_numeric_csv(const std::string& text,
                                                   std::size_t expected_columns) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty CSV");
    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            const std::size_t comma = line.find(',', pos);
            const std::string cell =
                line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (cell.empty() || end != cell.c_str() + cell.size()) {
                throw IoError("bad numeric cell '" + cell + "' on line " + std::to_string(lineno));
            }
            row.push_back(v);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (row.size() != expected_columns) {
            throw IoError("line " + std::to_string(lineno) + " has " + std::to_string(row.size()) +
                          " columns, expected " + std::to_string(expected_columns));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string curve_csv(const CurveGrid& grid) {
    std::string out = "v,x,y,z\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& p = grid.point(i);
        append_row(out, {grid.param(i), p.x(), p.y(), p.z()});
    }
    return out;
}

CurveGrid parse_curve_csv(const std::string& text, int level) {
    const auto rows = parse_numeric_csv(text, 4);
    std::vector<double> params;
    std::vector<Vec3> points;
    for (const auto& r : rows) {
        params.push_back(r[0]);
        points.emplace_back(r[1], r[2], r[3]);
    }
    return CurveGrid(std::move(params), std::move(points), level);
}

std::string time_set_csv(const TimeSet& set) {
    std::string out = "a,b\n";
    for (const auto& iv : set.kept_intervals()) append_row(out, {iv.lo, iv.hi});
    return out;
}

std::string staircase_csv(const Staircase& stair) {
    std::string out = "v,S\n";
    for (std::size_t i = 0; i < stair.size(); ++i) append_row(out, {stair.param(i), stair.value(i)});
    return out;
}

namespace {

// Base knot: S == 0 when the chart was built from a node, else the knot
// closest to zero (shifted charts).
std::size_t zero_knot(const std::vector<double>& s) {
    if (s.empty()) throw IoError("staircase CSV has no rows");
    std::size_t best = 0;
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (std::abs(s[i]) < std::abs(s[best])) best = i;
    }
    return best;
}

}  // namespace

Staircase parse_staircase_csv(const std::string& text, double alpha) {
    const auto rows = parse_numeric_csv(text, 2);
    std::vector<double> v, s;
    for (const auto& r : rows) {
        v.push_back(r[0]);
        s.push_back(r[1]);
    }
    const std::size_t base = zero_knot(s);
    return Staircase(alpha, std::move(v), std::move(s), base);
}

std::string field_csv(const RealField& f) {
    std::string out = "v,S,re,im\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        append_row(out, {f.chart().param(i), f.chart().value(i), f[i], 0.0});
    }
    return out;
}

std::string field_csv(const ComplexField& f) {
    std::string out = "v,S,re,im\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        append_row(out, {f.chart().param(i), f.chart().value(i), f[i].real(), f[i].imag()});
    }
    return out;
}

ParsedField parse_field_csv(const std::string& text, double alpha) {
    const auto rows = parse_numeric_csv(text, 4);
    std::vector<double> v, s;
    std::vector<Complex> vals;
    for (const auto& r : rows) {
        v.push_back(r[0]);
        s.push_back(r[1]);
        vals.emplace_back(r[2], r[3]);
    }
    const std::size_t base = zero_knot(s);
    return {std::make_shared<const Staircase>(alpha, std::move(v), std::move(s), base),
            std::move(vals)};
}

std::string snapshot_csv(const WaveFunction& psi) {
    std::string out = "v,S,re,im,abs2\n";
    const auto& chart = psi.space_chart();
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const Complex z = psi.field[i];
        append_row(out, {chart.param(i), chart.value(i), z.real(), z.imag(), std::norm(z)});
    }
    return out;
}

std::string continuity_csv(const std::vector<ContinuityRow>& rows) {
    std::string out = "tau,residual_max,residual_l2,total_probability\n";
    for (const auto& r : rows) append_row(out, {r.tau, r.residual_max, r.residual_l2, r.total_probability});
    return out;
}

}  // namespace fracqm::io
