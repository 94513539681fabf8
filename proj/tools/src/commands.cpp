#include "fracqm/cli/commands.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <deque>
#include <functional>
#include <numbers>

#include "fracqm/csv_io.hpp"
#include "fracqm/errors.hpp"
#include "fracqm/falpha_calculus.hpp"
#include "fracqm/fractal_measure.hpp"
#include "fracqm/probability_flow.hpp"

namespace fracqm::cli {

using nlohmann::json;
namespace fs = std::filesystem;
using Files = std::vector<fs::path>;

namespace {

void write_json(const fs::path& out, const fs::path& name, const json& j, Files& files) {
    io::write_text_file(out / name, j.dump(2) + "\n");
    files.push_back(name);
}

void write_csv(const fs::path& out, const fs::path& name, const std::string& text, Files& files) {
    io::write_text_file(out / name, text);
    files.push_back(name);
}

json complex_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json estimate_json(const DimensionEstimate& e) {
    return {{"alpha_star", e.alpha_star},
            {"bracket", {e.bracket.first, e.bracket.second}},
            {"levels_used", e.levels_used},
            {"slope_at_alpha", e.slope_at_alpha},
            {"slopes_per_level", e.slopes_per_level}};
}

std::vector<CurveGrid> dimension_grids(const ExperimentConfig& cfg) {
    const auto& d = cfg.dimension;
    if (d.max_level < d.min_level || d.max_level - d.min_level + 1 < 3) {
        throw ConfigError("dimension estimate needs at least 3 levels, got [" +
                          std::to_string(d.min_level) + ", " + std::to_string(d.max_level) + "]");
    }
    std::vector<CurveGrid> grids;
    for (int l = d.min_level; l <= d.max_level; ++l) grids.push_back(curve_at_level(cfg.curve, l));
    return grids;
}

DimensionEstimate estimate(const ExperimentConfig& cfg) {
    const auto grids = dimension_grids(cfg);
    DimensionOptions opt;
    opt.tol = cfg.dimension.tol;
    return estimate_gamma_dimension(grids, opt);
}

struct SpaceSetup {
    CurveGrid grid;
    double alpha;
    std::optional<DimensionEstimate> dimension;  // set when alpha was "auto"
    std::shared_ptr<const Staircase> chart;
};

SpaceSetup space_setup(const ExperimentConfig& cfg) {
    auto grid = build_curve(cfg.curve);
    std::optional<DimensionEstimate> est;
    double alpha;
    if (cfg.alpha_space) {
        alpha = *cfg.alpha_space;
    } else {
        est = estimate(cfg);
        alpha = est->alpha_star;
    }
    auto chart = std::make_shared<const Staircase>(build_staircase(grid, alpha, cfg.p0));
    return {std::move(grid), alpha, est, std::move(chart)};
}

json alpha_json(const SpaceSetup& s) {
    json j = {{"alpha", s.alpha}, {"source", s.dimension ? "auto" : "config"}};
    if (s.dimension) j["dimension"] = estimate_json(*s.dimension);
    return j;
}

std::optional<TimeSet> time_set(const ExperimentConfig& cfg) {
    if (!cfg.time_set) return std::nullopt;
    const auto& t = *cfg.time_set;
    if (t.kind == "full") return build_full_time(t.duration);
    return build_cantor_time(t.duration, t.level, t.alpha.value_or(cantor_time_alpha()));
}

json time_set_json(const TimeSet& t, const std::string& kind) {
    return {{"kind", kind},
            {"level", t.level()},
            {"T", t.duration()},
            {"alpha", t.alpha()},
            {"kept_length", t.kept_length()},
            {"tau_T", t.staircase().back()}};
}

// Test functions of S with known derivatives and antiderivatives.
struct FieldFunction {
    std::function<Complex(double)> f, d1, d2, primitive;
};

FieldFunction field_function(const FieldConfig& fc) {
    const double k = fc.k;
    constexpr Complex I{0.0, 1.0};
    const auto& n = fc.function;
    if (n == "one") return {[](double) { return Complex(1.0); }, [](double) { return Complex(0.0); },
                            [](double) { return Complex(0.0); }, [](double s) { return Complex(s); }};
    if (n == "S") return {[](double s) { return Complex(s); }, [](double) { return Complex(1.0); },
                          [](double) { return Complex(0.0); }, [](double s) { return Complex(s * s / 2); }};
    if (n == "S2") return {[](double s) { return Complex(s * s); }, [](double s) { return Complex(2 * s); },
                           [](double) { return Complex(2.0); },
                           [](double s) { return Complex(s * s * s / 3); }};
    if (k == 0.0) throw ConfigError("field.k must be non-zero for " + n);
    if (n == "sinS") return {[k](double s) { return Complex(std::sin(k * s)); },
                             [k](double s) { return Complex(k * std::cos(k * s)); },
                             [k](double s) { return Complex(-k * k * std::sin(k * s)); },
                             [k](double s) { return Complex(-std::cos(k * s) / k); }};
    if (n == "cosS") return {[k](double s) { return Complex(std::cos(k * s)); },
                             [k](double s) { return Complex(-k * std::sin(k * s)); },
                             [k](double s) { return Complex(-k * k * std::cos(k * s)); },
                             [k](double s) { return Complex(std::sin(k * s) / k); }};
    return {[k, I](double s) { return std::exp(I * k * s); },
            [k, I](double s) { return I * k * std::exp(I * k * s); },
            [k, I](double s) { return -k * k * std::exp(I * k * s); },
            [k, I](double s) { return std::exp(I * k * s) / (I * k); }};
}

double max_error(const ComplexField& f, const std::function<Complex(double)>& exact) {
    double e = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) e = std::max(e, std::abs(f[i] - exact(f.chart().value(i))));
    return e;
}

json config_block(const ExperimentConfig& cfg, const std::string& command) {
    return {{"command", command}, {"config", cfg.raw}, {"config_hash", hex64(config_hash(cfg.raw))}};
}

// Least-squares slope of y against x.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

struct RunOutputs {
    bool snapshots = true;
    bool phase_check = true;
    bool stationarity = true;
};

Files run_dynamics(const ExperimentConfig& cfg, const fs::path& out, const std::string& command,
                   RunOutputs what) {
    const auto& r = cfg.run;
    const auto& pc = cfg.physics;
    const auto space = space_setup(cfg);
    const auto& chart = space.chart;
    const auto tset = time_set(cfg);
    const auto time_chart = tset ? tset->staircase_ptr() : nullptr;
    const double tau_end = r.d_tau * static_cast<double>(r.steps);
    if (tset && tau_end > tset->staircase().back() * (1.0 + 1e-12)) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "run covers tau = %.17g beyond the time set's tau(T) = %.17g", tau_end,
                      tset->staircase().back());
        throw ConfigError(buf);
    }

    const double mid = 0.5 * (chart->front() + chart->back());
    const auto& st = cfg.state;
    WaveFunction psi0 = make_wave_function(ComplexField::constant(chart, 0.0), pc);
    std::optional<PlaneWaveParams> pw;
    if (st.kind == "plane_wave") {
        const double k = st.k.value_or(2.0 * std::numbers::pi * st.mode / chart->span());
        pw = PlaneWaveParams::from_wavenumber(st.A, st.B, k, pc);
        psi0 = plane_wave(*pw, chart, time_chart, 0.0, pc);
    } else {
        psi0 = gaussian_packet(chart, st.center.value_or(mid), st.sigma.value_or(chart->span() / 16.0), st.k0, pc);
        psi0.time_chart = time_chart;
    }

    std::optional<PotentialOnCurve> potential;
    if (r.potential.kind == "harmonic") {
        potential = PotentialOnCurve::harmonic(chart, r.potential.omega, r.potential.center.value_or(mid), pc);
    }
    const PotentialOnCurve* vp = potential ? &*potential : nullptr;

    Evolver ev(psi0, vp, r.d_tau, {r.boundary, r.xi_points});
    const std::size_t n = psi0.size();
    const std::size_t first = r.boundary == Boundary::periodic && n > 5 ? 2 : 0;
    const std::size_t last = r.boundary == Boundary::periodic && n > 5 ? n - 3 : n - 1;

    Files files;
    json snaps = json::array();
    std::vector<io::ContinuityRow> rows;
    std::deque<WaveFunction> window;
    std::vector<double> phase_tau, phase;
    double max_density_change = 0.0, density_peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) density_peak = std::max(density_peak, std::norm(psi0.field[i]));
    // The integrator conserves the xi-grid norm; the chart integral also
    // carries the resampling error when xi_points differs from the knots.
    const double p0 = total_probability(psi0);
    const double xi0 = ev.xi_norm();
    double max_drift = 0.0, max_xi_drift = 0.0;

    auto overlap_phase = [&](const WaveFunction& w) {
        std::vector<Complex> prod(n);
        for (std::size_t i = 0; i < n; ++i) prod[i] = std::conj(psi0.field[i]) * w.field[i];
        return std::arg(falpha_integral_nodes(ComplexField(chart, prod), 0, n - 1));
    };

    for (std::size_t s = 0; s <= r.steps; ++s) {
        if (s > 0) ev.step();
        window.push_back(ev.snapshot());
        if (window.size() > 3) window.pop_front();
        const auto& cur = window.back();
        max_drift = std::max(max_drift, std::abs(total_probability(cur) - p0));
        max_xi_drift = std::max(max_xi_drift, std::abs(ev.xi_norm() - xi0));

        if (s % r.stride == 0 || s == r.steps) {
            if (what.snapshots) {
                char name[40];
                std::snprintf(name, sizeof name, "snapshot_%06zu.csv", s);
                const fs::path rel = fs::path("snapshots") / name;
                write_csv(out, rel, io::snapshot_csv(cur), files);
                json e = {{"file", rel.generic_string()}, {"step", s}, {"tau", cur.tau}};
                e["t"] = time_chart ? json(time_chart->inverse(cur.tau)) : json(cur.tau);
                snaps.push_back(std::move(e));
            }
            if (pw) {
                double ph = overlap_phase(cur);
                if (!phase.empty()) {
                    // unwrap against the previous sample
                    while (ph - phase.back() > std::numbers::pi) ph -= 2 * std::numbers::pi;
                    while (ph - phase.back() < -std::numbers::pi) ph += 2 * std::numbers::pi;
                }
                phase_tau.push_back(cur.tau);
                phase.push_back(ph);
            }
            for (std::size_t i = 0; i < n; ++i) {
                max_density_change = std::max(max_density_change,
                                              std::abs(std::norm(cur.field[i]) - std::norm(psi0.field[i])));
            }
        }
        // continuity at the middle snapshot of the window
        if (window.size() == 3 && s >= 2 && (s - 1) % r.stride == 0) {
            const auto& mid_w = window[1];
            const auto res = residual_norms(continuity_residual(window[0], mid_w, window[2]), first, last);
            rows.push_back({mid_w.tau, res.max, res.l2, total_probability(mid_w)});
        }
    }

    write_csv(out, "continuity.csv", io::continuity_csv(rows), files);

    json manifest = config_block(cfg, command);
    manifest["constants"] = {{"hbar", pc.hbar}, {"mass", pc.mass}};
    manifest["curve"] = {{"kind", cfg.curve.kind}, {"level", space.grid.level()}, {"nodes", space.grid.size()}};
    manifest["alpha_space"] = alpha_json(space);
    manifest["time_set"] = tset ? time_set_json(*tset, cfg.time_set->kind) : json(nullptr);
    manifest["run"] = {{"d_tau", r.d_tau},
                       {"steps", r.steps},
                       {"stride", r.stride},
                       {"boundary", r.boundary == Boundary::periodic ? "periodic" : "dirichlet"},
                       {"xi_points", ev.state().size()},
                       {"potential", r.potential.kind},
                       {"residual_knots", {first, last}}};
    manifest["state"] = {{"kind", st.kind}, {"total_probability", p0}};
    if (pw) manifest["state"]["k"] = pw->k;
    manifest["probability_drift_max"] = max_drift;
    manifest["xi_norm_drift_max"] = max_xi_drift;
    double worst = 0.0;
    for (const auto& row : rows) worst = std::max(worst, row.residual_max);
    manifest["continuity_residual_max"] = worst;
    if (what.snapshots) manifest["snapshots"] = snaps;

    if (what.phase_check && pw && phase.size() >= 2) {
        const double expected = pw->beta;
        const double measured = -slope(phase_tau, phase);
        write_json(out, "phase_check.json",
                   {{"k", pw->k},
                    {"beta_expected", expected},
                    {"beta_measured", measured},
                    {"relative_error", std::abs(measured - expected) / std::abs(expected)},
                    {"samples", phase.size()}},
                   files);
    }
    if (what.stationarity && potential) {
        write_json(out, "stationarity.json",
                   {{"omega", r.potential.omega},
                    {"max_density_change", max_density_change},
                    {"relative_density_change", max_density_change / density_peak},
                    {"probability_drift_max", max_drift},
                    {"xi_norm_drift_max", max_xi_drift}},
                   files);
    }
    write_json(out, "manifest.json", manifest, files);
    return files;
}

}  // namespace

CurveGrid curve_at_level(const CurveConfig& c, int level) {
    if (c.kind == "koch") return build_koch(level, c.level_cap);
    if (c.kind == "cantor") return build_cantor_dust(level, c.length, std::max(c.level_cap, 20));
    if (c.kind == "line") {
        auto unit = build_from_generator(GeneratorSpec::line_bisection(), level, c.level_cap);
        std::vector<Vec3> pts;
        for (const auto& p : unit.points()) pts.push_back(c.start + p.x() * (c.end - c.start));
        return CurveGrid(unit.params(), std::move(pts), level);
    }
    return build_from_generator(*c.generator, level, c.level_cap);
}

CurveGrid build_curve(const CurveConfig& c) {
    if (c.kind == "line") return build_line(c.start, c.end, c.intervals);
    return curve_at_level(c, c.level);
}

Files cmd_dimension(const ExperimentConfig& cfg, const fs::path& out) {
    Files files;
    json j = config_block(cfg, "dimension");
    j["curve"] = cfg.curve.kind;
    j["tol"] = cfg.dimension.tol;
    j["levels"] = {cfg.dimension.min_level, cfg.dimension.max_level};
    try {
        const auto est = estimate(cfg);
        j["status"] = "ok";
        j["estimate"] = estimate_json(est);
    } catch (const EstimationFailure& e) {
        j["status"] = "estimation_failure";
        j["message"] = e.what();
        j["alpha"] = e.alpha();
        j["slopes_per_level"] = e.slopes();
        write_json(out, "dimension.json", j, files);
        throw;
    }
    write_json(out, "dimension.json", j, files);
    return files;
}

Files cmd_staircase(const ExperimentConfig& cfg, const fs::path& out) {
    Files files;
    const auto space = space_setup(cfg);
    write_csv(out, "staircase.csv", io::staircase_csv(*space.chart), files);
    json j = config_block(cfg, "staircase");
    j["alpha_space"] = alpha_json(space);
    j["p0"] = cfg.p0;
    j["nodes"] = space.chart->size();
    j["S_first"] = space.chart->front();
    j["S_last"] = space.chart->back();
    j["has_plateau"] = space.chart->has_plateau();
    if (const auto t = time_set(cfg)) {
        write_csv(out, "time_staircase.csv", io::staircase_csv(t->staircase()), files);
        write_csv(out, "time_set.csv", io::time_set_csv(*t), files);
        j["time_set"] = time_set_json(*t, cfg.time_set->kind);
    }
    write_json(out, "staircase.json", j, files);
    return files;
}

Files cmd_derive(const ExperimentConfig& cfg, const fs::path& out) {
    Files files;
    const auto space = space_setup(cfg);
    const auto fn = field_function(cfg.field);
    const auto f = ComplexField::from_function(space.chart, [&](double, double s) { return fn.f(s); });
    const auto d = falpha_derivative(f);
    const auto l = laplacian(f);
    write_csv(out, "field.csv", io::field_csv(f), files);
    write_csv(out, "derivative.csv", io::field_csv(d), files);
    write_csv(out, "laplacian.csv", io::field_csv(l), files);
    json j = config_block(cfg, "derive");
    j["alpha_space"] = alpha_json(space);
    j["function"] = cfg.field.function;
    j["k"] = cfg.field.k;
    j["derivative_max_error"] = max_error(d, fn.d1);
    j["laplacian_max_error"] = max_error(l, fn.d2);
    write_json(out, "derive.json", j, files);
    return files;
}

Files cmd_integrate(const ExperimentConfig& cfg, const fs::path& out) {
    Files files;
    const auto space = space_setup(cfg);
    const auto fn = field_function(cfg.field);
    const auto f = ComplexField::from_function(space.chart, [&](double, double s) { return fn.f(s); });
    const double a = cfg.integrate.a.value_or(space.chart->params().front());
    const double b = cfg.integrate.b.value_or(space.chart->params().back());
    if (!(a <= b)) throw ConfigError("integrate.a must not exceed integrate.b");
    const Complex value = falpha_integral(f, a, b);
    const Complex exact = fn.primitive(space.chart->evaluate(b)) - fn.primitive(space.chart->evaluate(a));
    write_csv(out, "antiderivative.csv", io::field_csv(falpha_antiderivative(f, a)), files);
    json j = config_block(cfg, "integrate");
    j["alpha_space"] = alpha_json(space);
    j["function"] = cfg.field.function;
    j["k"] = cfg.field.k;
    j["a"] = a;
    j["b"] = b;
    j["S_a"] = space.chart->evaluate(a);
    j["S_b"] = space.chart->evaluate(b);
    j["value"] = complex_json(value);
    j["exact"] = complex_json(exact);
    j["abs_error"] = std::abs(value - exact);
    write_json(out, "integral.json", j, files);
    return files;
}

Files cmd_evolve(const ExperimentConfig& cfg, const fs::path& out) {
    return run_dynamics(cfg, out, "evolve", {});
}

Files cmd_continuity(const ExperimentConfig& cfg, const fs::path& out) {
    return run_dynamics(cfg, out, "continuity", {false, false, false});
}

const std::vector<std::string>& subcommand_names() {
    static const std::vector<std::string> names{"dimension", "staircase", "derive",
                                                "integrate", "evolve",    "continuity"};
    return names;
}

}  // namespace fracqm::cli
