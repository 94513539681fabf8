#include "fracqm/cli/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>

namespace fracqm::cli {

using nlohmann::json;

namespace {

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ConfigError(where + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(where + ": must be finite");
    return x;
}

template <class Int>
Int count(const json& v, const std::string& where) {
    if (!v.is_number_integer()) throw ConfigError(where + ": expected an integer");
    const auto x = v.get<long long>();
    if (x < 0) throw ConfigError(where + ": must be non-negative");
    return static_cast<Int>(x);
}

std::string text(const json& v, const std::string& where, std::initializer_list<const char*> choices) {
    if (!v.is_string()) throw ConfigError(where + ": expected a string");
    const auto s = v.get<std::string>();
    std::string list;
    for (const char* c : choices) {
        if (s == c) return s;
        list += std::string(list.empty() ? "" : "|") + c;
    }
    throw ConfigError(where + ": '" + s + "' is not one of " + list);
}

Vec3 vec3(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 3) throw ConfigError(where + ": expected [x, y, z]");
    return {number(v[0], where), number(v[1], where), number(v[2], where)};
}

Complex complex_value(const json& v, const std::string& where) {
    if (v.is_number()) return {number(v, where), 0.0};
    if (v.is_array() && v.size() == 2) return {number(v[0], where), number(v[1], where)};
    throw ConfigError(where + ": expected a number or [re, im]");
}

Mat3 rotation(const json& v, const std::string& where) {
    if (v.is_number()) {
        // angle in degrees about the z axis
        const double a = number(v, where) * std::numbers::pi / 180.0;
        Mat3 r = Mat3::Identity();
        r(0, 0) = std::cos(a);
        r(0, 1) = -std::sin(a);
        r(1, 0) = std::sin(a);
        r(1, 1) = std::cos(a);
        return r;
    }
    if (!v.is_array() || v.size() != 3) throw ConfigError(where + ": expected degrees or a 3x3 matrix");
    Mat3 r;
    for (int i = 0; i < 3; ++i) r.row(i) = vec3(v[i], where).transpose();
    return r;
}

GeneratorSpec generator(const json& v, const std::string& where) {
    if (!v.is_array() || v.empty()) throw ConfigError(where + ": expected a non-empty array of maps");
    GeneratorSpec spec;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string w = where + "[" + std::to_string(i) + "]";
        only_keys(v[i], w, {"scale", "rotation", "translation"});
        SimilarityMap m;
        m.scale = number(v[i].at("scale"), w + ".scale");
        if (v[i].contains("rotation")) m.rotation = rotation(v[i]["rotation"], w + ".rotation");
        if (v[i].contains("translation")) m.translation = vec3(v[i]["translation"], w + ".translation");
        spec.maps.push_back(m);
    }
    return spec;
}

void parse_curve(const json& j, CurveConfig& c) {
    only_keys(j, "curve", {"kind", "level", "level_cap", "start", "end", "intervals", "length", "maps"});
    if (j.contains("kind")) c.kind = text(j["kind"], "curve.kind", {"koch", "line", "cantor", "custom"});
    if (j.contains("level")) c.level = count<int>(j["level"], "curve.level");
    if (j.contains("level_cap")) c.level_cap = count<int>(j["level_cap"], "curve.level_cap");
    if (j.contains("start")) c.start = vec3(j["start"], "curve.start");
    if (j.contains("end")) c.end = vec3(j["end"], "curve.end");
    if (j.contains("intervals")) c.intervals = count<std::size_t>(j["intervals"], "curve.intervals");
    if (j.contains("length")) c.length = number(j["length"], "curve.length");
    if (j.contains("maps")) c.generator = generator(j["maps"], "curve.maps");
    if (c.kind == "custom" && !c.generator) throw ConfigError("curve.maps is required for kind custom");
    if (c.kind != "custom" && c.generator) throw ConfigError("curve.maps is only valid for kind custom");
    if (c.kind == "line" && c.intervals < 1) throw ConfigError("curve.intervals must be >= 1");
    if (c.level > c.level_cap) {
        throw ConfigError("curve.level " + std::to_string(c.level) + " exceeds level_cap " +
                          std::to_string(c.level_cap));
    }
}

void parse_time_set(const json& j, TimeSetConfig& t) {
    only_keys(j, "time_set", {"kind", "level", "T", "alpha"});
    if (j.contains("kind")) t.kind = text(j["kind"], "time_set.kind", {"full", "cantor"});
    if (j.contains("level")) t.level = count<int>(j["level"], "time_set.level");
    if (j.contains("T")) t.duration = number(j["T"], "time_set.T");
    if (j.contains("alpha")) t.alpha = number(j["alpha"], "time_set.alpha");
    if (t.duration <= 0.0) throw ConfigError("time_set.T must be positive");
    if (t.alpha && *t.alpha <= 0.0) throw ConfigError("time_set.alpha must be positive");
}

void parse_state(const json& j, StateConfig& s) {
    only_keys(j, "state", {"kind", "center", "sigma", "k0", "A", "B", "k", "mode"});
    if (j.contains("kind")) s.kind = text(j["kind"], "state.kind", {"gaussian", "plane_wave"});
    if (j.contains("center")) s.center = number(j["center"], "state.center");
    if (j.contains("sigma")) s.sigma = number(j["sigma"], "state.sigma");
    if (j.contains("k0")) s.k0 = number(j["k0"], "state.k0");
    if (j.contains("A")) s.A = complex_value(j["A"], "state.A");
    if (j.contains("B")) s.B = complex_value(j["B"], "state.B");
    if (j.contains("k")) s.k = number(j["k"], "state.k");
    if (j.contains("mode")) {
        if (!j["mode"].is_number_integer()) throw ConfigError("state.mode: expected an integer");
        s.mode = j["mode"].get<int>();
    }
    if (s.sigma && *s.sigma <= 0.0) throw ConfigError("state.sigma must be positive");
}

void parse_run(const json& j, RunConfig& r) {
    only_keys(j, "run", {"d_tau", "steps", "stride", "boundary", "xi_points", "potential"});
    if (j.contains("d_tau")) r.d_tau = number(j["d_tau"], "run.d_tau");
    if (j.contains("steps")) r.steps = count<std::size_t>(j["steps"], "run.steps");
    if (j.contains("stride")) r.stride = count<std::size_t>(j["stride"], "run.stride");
    if (j.contains("boundary")) {
        r.boundary = text(j["boundary"], "run.boundary", {"dirichlet", "periodic"}) == "periodic"
                         ? Boundary::periodic
                         : Boundary::dirichlet;
    }
    if (j.contains("xi_points")) r.xi_points = count<std::size_t>(j["xi_points"], "run.xi_points");
    if (j.contains("potential")) {
        const auto& p = j["potential"];
        only_keys(p, "run.potential", {"kind", "omega", "center"});
        if (p.contains("kind")) r.potential.kind = text(p["kind"], "run.potential.kind", {"none", "harmonic"});
        if (p.contains("omega")) r.potential.omega = number(p["omega"], "run.potential.omega");
        if (p.contains("center")) r.potential.center = number(p["center"], "run.potential.center");
    }
    if (r.d_tau <= 0.0) throw ConfigError("run.d_tau must be positive");
    if (r.stride < 1) throw ConfigError("run.stride must be >= 1");
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
    ExperimentConfig cfg;
    cfg.raw = j;
    only_keys(j, "config", {"curve", "alpha_space", "p0", "dimension", "time_set", "physics", "state",
                            "run", "field", "integrate", "output"});
    if (j.contains("curve")) parse_curve(j["curve"], cfg.curve);
    if (j.contains("alpha_space")) {
        const auto& a = j["alpha_space"];
        if (a.is_string()) {
            if (a.get<std::string>() != "auto") throw ConfigError("alpha_space: expected a number or \"auto\"");
        } else {
            cfg.alpha_space = number(a, "alpha_space");
            if (*cfg.alpha_space <= 0.0) throw ConfigError("alpha_space must be positive");
        }
    }
    if (j.contains("p0")) cfg.p0 = number(j["p0"], "p0");
    if (j.contains("dimension")) {
        const auto& d = j["dimension"];
        only_keys(d, "dimension", {"levels", "tol"});
        if (d.contains("levels")) {
            const auto& l = d["levels"];
            if (!l.is_array() || l.size() != 2) throw ConfigError("dimension.levels: expected [min, max]");
            cfg.dimension.min_level = count<int>(l[0], "dimension.levels");
            cfg.dimension.max_level = count<int>(l[1], "dimension.levels");
        } else {
            cfg.dimension.max_level = cfg.curve.level;
            cfg.dimension.min_level = std::max(0, cfg.curve.level - 5);
        }
        if (d.contains("tol")) cfg.dimension.tol = number(d["tol"], "dimension.tol");
    } else {
        cfg.dimension.max_level = cfg.curve.level;
        cfg.dimension.min_level = std::max(0, cfg.curve.level - 5);
    }
    if (cfg.dimension.tol <= 0.0) throw ConfigError("dimension.tol must be positive");
    if (j.contains("time_set")) parse_time_set(j["time_set"], cfg.time_set.emplace());
    if (j.contains("physics")) {
        const auto& p = j["physics"];
        only_keys(p, "physics", {"hbar", "mass"});
        if (p.contains("hbar")) cfg.physics.hbar = number(p["hbar"], "physics.hbar");
        if (p.contains("mass")) cfg.physics.mass = number(p["mass"], "physics.mass");
        if (cfg.physics.hbar <= 0.0 || cfg.physics.mass <= 0.0) {
            throw ConfigError("physics.hbar and physics.mass must be positive");
        }
    }
    if (j.contains("state")) parse_state(j["state"], cfg.state);
    if (j.contains("run")) parse_run(j["run"], cfg.run);
    if (j.contains("field")) {
        const auto& f = j["field"];
        only_keys(f, "field", {"function", "k"});
        if (f.contains("function")) {
            cfg.field.function =
                text(f["function"], "field.function", {"one", "S", "S2", "sinS", "cosS", "expS"});
        }
        if (f.contains("k")) cfg.field.k = number(f["k"], "field.k");
    }
    if (j.contains("integrate")) {
        const auto& in = j["integrate"];
        only_keys(in, "integrate", {"a", "b"});
        if (in.contains("a")) cfg.integrate.a = number(in["a"], "integrate.a");
        if (in.contains("b")) cfg.integrate.b = number(in["b"], "integrate.b");
    }
    if (j.contains("output")) {
        if (!j["output"].is_string() || j["output"].get<std::string>().empty()) {
            throw ConfigError("output: expected a non-empty path string");
        }
        cfg.output = j["output"].get<std::string>();
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    json j;
    try {
        j = json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_config(j);
}

std::uint64_t config_hash(const json& j) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : j.dump()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t x) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg) {
    if (cfg.output.is_absolute()) return cfg.output;
    if (const char* root = std::getenv("FRACQM_OUTPUT_ROOT"); root && *root) {
        return std::filesystem::path(root) / cfg.output;
    }
    return cfg.output;
}

}  // namespace fracqm::cli
