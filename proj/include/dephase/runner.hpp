// runner.hpp: Scenario configs, trace/figure/compare/sweep jobs and their file outputs
//
// Frequencies are in units of the cutoff Omega (Omega = 1), times in units of 1/Omega.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dephase/dephasing_model.hpp"
#include "dephase/format.hpp"
#include "dephase/volterra.hpp"

namespace dephase {

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, int line, const std::string& message)
        : std::runtime_error(compose(key, line, message)), key_(std::move(key)), line_(line) {}
    const std::string& key() const noexcept { return key_; }
    int line() const noexcept { return line_; } // 0 when the key is absent

private:
    static std::string compose(const std::string& key, int line, const std::string& message) {
        std::string where = line > 0 ? "line " + std::to_string(line) + ": " : "";
        return where + "key '" + key + "': " + message;
    }
    std::string key_;
    int line_;
};

enum class Output { trajectory, breakdown, comparison };

inline const char* to_string(Output o) {
    switch (o) {
        case Output::trajectory: return "trajectory";
        case Output::breakdown: return "breakdown";
        case Output::comparison: return "comparison";
    }
    return "";
}

struct Scenario {
    std::string label{"scenario"};
    QubitBathParams params;
    double beta_omega0{1.0}; // as configured; params.beta = beta_omega0 / params.omega0
    SolverConfig solver;
    QuadratureConfig quadrature;
    std::set<Output> outputs{Output::trajectory};

    bool operator==(const Scenario& o) const {
        const auto& a = params;
        const auto& b = o.params;
        return label == o.label && beta_omega0 == o.beta_omega0 && outputs == o.outputs && a.omega0 == b.omega0 &&
               a.beta == b.beta && a.sigma3_mean == b.sigma3_mean && a.initial_coherence == b.initial_coherence &&
               a.spectral.lambda == b.spectral.lambda && a.spectral.omega_c == b.spectral.omega_c &&
               a.spectral.s == b.spectral.s && solver.t_max == o.solver.t_max && solver.n_steps == o.solver.n_steps &&
               solver.corrector_iterations == o.solver.corrector_iterations &&
               quadrature.abs_tol == o.quadrature.abs_tol && quadrature.rel_tol == o.quadrature.rel_tol;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& key, const std::string& text, int line) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ConfigError(key, line, "not a number: '" + text + "'");
    }
    if (used != text.size() || !std::isfinite(v)) throw ConfigError(key, line, "not a finite number: '" + text + "'");
    return v;
}

inline const std::vector<std::string>& required_keys() {
    static const std::vector<std::string> keys{"omega0_over_cutoff", "beta_omega0", "sigma3_mean", "lambda",
                                               "s",                  "t_max_cutoff_units", "n_steps"};
    return keys;
}

inline const std::set<std::string>& optional_keys() {
    static const std::set<std::string> keys{"abs_tol", "rel_tol", "initial_coherence_re", "initial_coherence_im",
                                            "label", "outputs"};
    return keys;
}

} // namespace detail

/// Parses the line-oriented `key = value` format ('#' starts a comment).
inline Scenario parse_config(const std::string& text, const std::string& default_label = "scenario") {
    struct Entry {
        std::string value;
        int line;
    };
    std::map<std::string, Entry> entries;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string body = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ConfigError(detail::trim(body), line, "expected 'key = value'");
        const std::string key = detail::trim(body.substr(0, eq));
        const std::string value = detail::trim(body.substr(eq + 1));
        const auto& req = detail::required_keys();
        if (std::find(req.begin(), req.end(), key) == req.end() && !detail::optional_keys().count(key))
            throw ConfigError(key, line, "unknown key");
        if (entries.count(key)) throw ConfigError(key, line, "duplicate key (first on line " + std::to_string(entries[key].line) + ")");
        if (value.empty()) throw ConfigError(key, line, "missing value");
        entries[key] = {value, line};
    }
    for (const auto& key : detail::required_keys())
        if (!entries.count(key)) throw ConfigError(key, 0, "missing required key");

    auto number = [&](const std::string& key) {
        const auto& e = entries.at(key);
        return std::pair{detail::parse_number(key, e.value, e.line), e.line};
    };
    auto require = [](bool ok, const std::string& key, int line, const std::string& msg) {
        if (!ok) throw ConfigError(key, line, msg);
    };

    Scenario sc;
    sc.label = default_label;
    auto [omega0, l_omega0] = number("omega0_over_cutoff");
    require(omega0 > 0.0, "omega0_over_cutoff", l_omega0, "must be > 0");
    auto [bw, l_bw] = number("beta_omega0");
    require(bw > 0.0, "beta_omega0", l_bw, "must be > 0");
    auto [s3, l_s3] = number("sigma3_mean");
    require(s3 >= -1.0 && s3 <= 1.0, "sigma3_mean", l_s3, "must lie in [-1, 1]");
    auto [lam, l_lam] = number("lambda");
    require(lam >= 0.0, "lambda", l_lam, "must be >= 0");
    auto [s, l_s] = number("s");
    require(s > 0.0, "s", l_s, "must be > 0");
    auto [tmax, l_tmax] = number("t_max_cutoff_units");
    require(tmax > 0.0, "t_max_cutoff_units", l_tmax, "must be > 0");
    auto [steps, l_steps] = number("n_steps");
    require(steps >= 2.0 && steps == std::floor(steps) && steps < 1e8, "n_steps", l_steps,
            "must be an integer >= 2");

    sc.params.omega0 = omega0;
    sc.beta_omega0 = bw;
    sc.params.beta = bw / omega0;
    sc.params.sigma3_mean = s3;
    sc.params.spectral = SpectralDensity{lam, 1.0, s};
    sc.solver.t_max = tmax;
    sc.solver.n_steps = static_cast<std::size_t>(steps);

    for (const char* key : {"abs_tol", "rel_tol"}) {
        if (!entries.count(key)) continue;
        auto [v, l] = number(key);
        require(v > 0.0, key, l, "must be > 0");
        (std::string(key) == "abs_tol" ? sc.quadrature.abs_tol : sc.quadrature.rel_tol) = v;
    }
    if (entries.count("initial_coherence_re") || entries.count("initial_coherence_im")) {
        double re = 0.0, im = 0.0;
        int l = 0;
        std::string key = "initial_coherence_re";
        if (entries.count("initial_coherence_re")) std::tie(re, l) = number("initial_coherence_re");
        if (entries.count("initial_coherence_im")) {
            int li = 0;
            std::tie(im, li) = number("initial_coherence_im");
            if (!l) {
                l = li;
                key = "initial_coherence_im";
            }
        }
        require(re * re + im * im <= 0.25 * (1.0 - s3 * s3) * (1.0 + 1e-12), key, l,
                "|initial_coherence|^2 exceeds (1 - sigma3_mean^2)/4");
        sc.params.initial_coherence = complex{re, im};
    }
    if (entries.count("label")) sc.label = entries.at("label").value;
    if (entries.count("outputs")) {
        const auto& e = entries.at("outputs");
        sc.outputs.clear();
        std::istringstream items(e.value);
        std::string item;
        while (std::getline(items, item, ',')) {
            item = detail::trim(item);
            if (item == "trajectory") sc.outputs.insert(Output::trajectory);
            else if (item == "breakdown") sc.outputs.insert(Output::breakdown);
            else if (item == "comparison") sc.outputs.insert(Output::comparison);
            else throw ConfigError("outputs", e.line, "unknown output '" + item + "'");
        }
        if (sc.outputs.empty()) throw ConfigError("outputs", e.line, "empty output list");
    }
    if (sc.label.empty()) throw ConfigError("label", entries.count("label") ? entries.at("label").line : 0, "must be non-empty");
    return sc;
}

/// Inverse of parse_config for scenarios it produced.
inline std::string render_config(const Scenario& sc) {
    std::ostringstream out;
    const auto& p = sc.params;
    out << "label = " << sc.label << '\n';
    out << "omega0_over_cutoff = " << format_double(p.omega0) << '\n';
    out << "beta_omega0 = " << format_double(sc.beta_omega0) << '\n';
    out << "sigma3_mean = " << format_double(p.sigma3_mean) << '\n';
    out << "lambda = " << format_double(p.spectral.lambda) << '\n';
    out << "s = " << format_double(p.spectral.s) << '\n';
    out << "t_max_cutoff_units = " << format_double(sc.solver.t_max) << '\n';
    out << "n_steps = " << sc.solver.n_steps << '\n';
    out << "abs_tol = " << format_double(sc.quadrature.abs_tol) << '\n';
    out << "rel_tol = " << format_double(sc.quadrature.rel_tol) << '\n';
    if (p.initial_coherence) {
        out << "initial_coherence_re = " << format_double(p.initial_coherence->real()) << '\n';
        out << "initial_coherence_im = " << format_double(p.initial_coherence->imag()) << '\n';
    }
    out << "outputs = ";
    bool first = true;
    for (Output o : sc.outputs) {
        out << (first ? "" : ",") << to_string(o);
        first = false;
    }
    out << '\n';
    return out.str();
}

inline Scenario load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", 0, "cannot open config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.stem().string());
}

// ----------------------------- Comparison report -----------------------------

enum class Winner { zn, renormalized, tie };

inline const char* to_string(Winner w) {
    switch (w) {
        case Winner::zn: return "zn";
        case Winner::renormalized: return "renormalized";
        case Winner::tie: return "tie";
    }
    return "";
}

inline constexpr double tie_epsilon = 1e-12;

struct ComparisonRow {
    double t;
    double gamma_cor;
    double gamma_cor_renorm;
    double gamma_cor_exact;
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;
    double l2_zn{0.0};
    double l2_renorm{0.0};
    Winner winner{Winner::tie};
    double a_init{0.0};
};

/// Trapezoid-weighted discrete L2 distance between two sampled curves on a common grid.
inline double discrete_l2(const std::vector<double>& t, const std::vector<double>& a, const std::vector<double>& b) {
    if (t.size() != a.size() || t.size() != b.size()) throw std::invalid_argument("discrete_l2: grid mismatch");
    double acc = 0.0;
    for (std::size_t j = 0; j < t.size(); ++j) {
        const double left = j > 0 ? t[j] - t[j - 1] : 0.0;
        const double right = j + 1 < t.size() ? t[j + 1] - t[j] : 0.0;
        const double d = a[j] - b[j];
        acc += 0.5 * (left + right) * d * d;
    }
    return std::sqrt(acc);
}

inline Winner decide_winner(double l2_zn, double l2_renorm) {
    if (l2_renorm < l2_zn - tie_epsilon) return Winner::renormalized;
    if (l2_zn < l2_renorm - tie_epsilon) return Winner::zn;
    return Winner::tie;
}

/// gamma_cor (ZN), its renormalized form and the exact value on `points` uniform samples of [0, t_max].
inline ComparisonReport compare_correlational(const QubitBathParams& p, double t_max, std::size_t points,
                                              const QuadratureConfig& cfg = {}) {
    if (points < 2) throw std::invalid_argument("compare_correlational: need at least two points");
    const auto series = breakdown_series(p, t_max, points - 1, cfg);
    ComparisonReport rep;
    rep.a_init = a_init(p);
    std::vector<double> t, zn, rn, ex;
    for (const auto& b : series) {
        if (std::isnan(b.gamma_cor_exact))
            throw std::domain_error("exact correlational decoherence undefined at t=" + format_double(b.t));
        rep.rows.push_back({b.t, b.gamma_cor, b.gamma_cor_renorm, b.gamma_cor_exact});
        t.push_back(b.t);
        zn.push_back(b.gamma_cor);
        rn.push_back(b.gamma_cor_renorm);
        ex.push_back(b.gamma_cor_exact);
    }
    rep.l2_zn = discrete_l2(t, zn, ex);
    rep.l2_renorm = discrete_l2(t, rn, ex);
    rep.winner = decide_winner(rep.l2_zn, rep.l2_renorm);
    return rep;
}

// ----------------------------- CSV / script rendering -----------------------------

inline std::string trajectory_csv(const CoherenceTrajectory& tr) {
    std::ostringstream out;
    out << "t,re_coherence,im_coherence,abs_coherence,watchdog_flag\n";
    for (std::size_t j = 0; j < tr.times.size(); ++j)
        out << format_double(tr.times[j]) << ',' << format_double(tr.values[j].real()) << ','
            << format_double(tr.values[j].imag()) << ',' << format_double(std::abs(tr.values[j])) << ','
            << (tr.watchdog[j] ? 1 : 0) << '\n';
    return out.str();
}

inline std::string breakdown_csv(const std::vector<DecoherenceBreakdown>& rows) {
    std::ostringstream out;
    out << "t,chi,chi_renorm,gamma_vac,gamma_th,gamma_cor,gamma_cor_renorm,gamma_cor_exact,f_of_t\n";
    for (const auto& b : rows)
        out << format_double(b.t) << ',' << format_double(b.chi) << ',' << format_double(b.chi_renorm) << ','
            << format_double(b.gamma_vac) << ',' << format_double(b.gamma_th) << ',' << format_double(b.gamma_cor)
            << ',' << format_double(b.gamma_cor_renorm) << ',' << format_double(b.gamma_cor_exact) << ','
            << format_double(b.f_of_t) << '\n';
    return out.str();
}

inline std::string comparison_csv(const ComparisonReport& rep) {
    std::ostringstream out;
    out << "t,gamma_cor,gamma_cor_renorm,gamma_cor_exact\n";
    for (const auto& r : rep.rows)
        out << format_double(r.t) << ',' << format_double(r.gamma_cor) << ',' << format_double(r.gamma_cor_renorm)
            << ',' << format_double(r.gamma_cor_exact) << '\n';
    return out.str();
}

inline std::string comparison_json(const ComparisonReport& rep, const std::string& label) {
    nlohmann::ordered_json j;
    j["label"] = label;
    j["a_init"] = rep.a_init;
    j["l2_zn"] = rep.l2_zn;
    j["l2_renorm"] = rep.l2_renorm;
    j["winner"] = to_string(rep.winner);
    j["points"] = rep.rows.size();
    j["t_max"] = rep.rows.empty() ? 0.0 : rep.rows.back().t;
    return j.dump(2) + "\n";
}

// Solid = exact, dashed = renormalized, dotted = ZN.
inline std::string comparison_gnuplot(const std::string& csv_name, const std::string& title) {
    std::ostringstream out;
    out << "# " << title << "\n"
        << "set datafile separator ','\n"
        << "set xlabel 'Omega t'\n"
        << "set ylabel 'correlational decoherence'\n"
        << "set key top left\n"
        << "set title '" << title << "'\n"
        << "plot '" << csv_name << "' every ::1 using 1:4 with lines dt 1 lw 2 title 'exact', \\\n"
        << "     '" << csv_name << "' every ::1 using 1:3 with lines dt 2 lw 2 title 'renormalized', \\\n"
        << "     '" << csv_name << "' every ::1 using 1:2 with lines dt 3 lw 2 title 'ZN'\n";
    return out.str();
}

inline std::string trajectory_gnuplot(const std::string& csv_name, const std::string& title) {
    std::ostringstream out;
    out << "# " << title << "\n"
        << "set datafile separator ','\n"
        << "set xlabel 'Omega t'\n"
        << "set ylabel 'coherence'\n"
        << "set title '" << title << "'\n"
        << "plot '" << csv_name << "' every ::1 using 1:4 with lines dt 1 lw 2 title '|<s+>|', \\\n"
        << "     '" << csv_name << "' every ::1 using 1:2 with lines dt 2 title 'Re', \\\n"
        << "     '" << csv_name << "' every ::1 using 1:3 with lines dt 3 title 'Im'\n";
    return out.str();
}

// ----------------------------- File staging -----------------------------

// Collects named outputs in memory; nothing touches disk until commit().
class OutputSet {
public:
    void add(std::string name, std::string content) { files_.emplace_back(std::move(name), std::move(content)); }

    std::vector<std::filesystem::path> commit(const std::filesystem::path& dir) const {
        std::filesystem::create_directories(dir);
        std::vector<std::filesystem::path> staged, written;
        for (const auto& [name, content] : files_) {
            auto tmp = dir / (name + ".tmp");
            std::ofstream out(tmp, std::ios::binary);
            out << content;
            if (!out) throw std::runtime_error("cannot write " + tmp.string());
            staged.push_back(tmp);
        }
        for (std::size_t i = 0; i < files_.size(); ++i) {
            auto final_path = dir / files_[i].first;
            std::filesystem::rename(staged[i], final_path);
            written.push_back(final_path);
        }
        return written;
    }

    const std::vector<std::pair<std::string, std::string>>& files() const noexcept { return files_; }

private:
    std::vector<std::pair<std::string, std::string>> files_;
};

// ----------------------------- Jobs -----------------------------

struct TraceResult {
    CoherenceTrajectory trajectory;
    std::optional<ComparisonReport> comparison;
    OutputSet files;
};

inline TraceResult run_trace(const Scenario& sc) {
    sc.params.validate();
    sc.solver.validate();
    sc.quadrature.validate();
    TraceResult res;
    res.trajectory = solve_full_equation(sc.params, sc.solver, sc.quadrature);
    const std::string traj_name = sc.label + "_trajectory.csv";
    res.files.add(traj_name, trajectory_csv(res.trajectory));
    res.files.add(sc.label + ".gp", trajectory_gnuplot(traj_name, sc.label));
    if (sc.outputs.count(Output::breakdown)) {
        res.trajectory.breakdowns = breakdown_series(sc.params, sc.solver.t_max, sc.solver.n_steps, sc.quadrature);
        res.files.add(sc.label + "_breakdown.csv", breakdown_csv(res.trajectory.breakdowns));
    }
    if (sc.outputs.count(Output::comparison)) {
        res.comparison = compare_correlational(sc.params, sc.solver.t_max, sc.solver.n_steps + 1, sc.quadrature);
        res.files.add(sc.label + "_comparison.csv", comparison_csv(*res.comparison));
        res.files.add(sc.label + "_comparison.json", comparison_json(*res.comparison, sc.label));
    }
    return res;
}

enum class FigurePreset { fig1, fig2 };

inline constexpr double figure_t_max = 10.0;
inline constexpr std::size_t figure_points = 200;

/// Parameters of the two published comparison figures (Ohmic, omega0 / Omega = 1, lambda = 1/3).
inline Scenario figure_scenario(FigurePreset preset) {
    Scenario sc;
    sc.label = preset == FigurePreset::fig1 ? "fig1" : "fig2";
    sc.params.omega0 = 1.0;
    sc.beta_omega0 = preset == FigurePreset::fig1 ? 0.1 : 5.0;
    sc.params.beta = sc.beta_omega0;
    sc.params.sigma3_mean = preset == FigurePreset::fig1 ? 0.2 : 0.99;
    sc.params.spectral = SpectralDensity{1.0 / 3.0, 1.0, 1.0};
    sc.solver.t_max = figure_t_max;
    sc.solver.n_steps = 2000;
    sc.outputs = {Output::comparison};
    return sc;
}

struct FigureResult {
    ComparisonReport report;
    OutputSet files;
};

inline FigureResult run_figure(FigurePreset preset, std::optional<double> lambda_override = std::nullopt,
                               const QuadratureConfig& cfg = {}) {
    Scenario sc = figure_scenario(preset);
    if (lambda_override) sc.params.spectral.lambda = *lambda_override;
    sc.params.validate();
    FigureResult res;
    res.report = compare_correlational(sc.params, figure_t_max, figure_points, cfg);
    const std::string csv = sc.label + ".csv";
    res.files.add(csv, comparison_csv(res.report));
    res.files.add(sc.label + ".gp",
                  comparison_gnuplot(csv, sc.label + ": correlational decoherence (exact, renormalized, ZN)"));
    res.files.add(sc.label + "_report.json", comparison_json(res.report, sc.label));
    return res;
}

// ----------------------------- Sweeps -----------------------------

inline const std::vector<std::string>& sweep_axes() {
    static const std::vector<std::string> axes{"lambda", "beta", "beta_omega0", "sigma3_mean", "s", "t_max",
                                               "t_max_cutoff_units"};
    return axes;
}

struct SweepRow {
    double value{0.0};
    bool ok{false};
    std::string status;
    double a_init{0.0};
    double gamma_cor{0.0};
    double gamma_cor_renorm{0.0};
    double gamma_cor_exact{0.0};
    double renorm_correction{0.0};
    double abs_coherence_zn{0.0};
    double abs_coherence_full{0.0};
    bool watchdog{false};
};

/// Applies one sweep value to a copy of the base scenario. `beta` is in units of 1/Omega.
inline Scenario apply_sweep_value(const Scenario& base, const std::string& axis, double v) {
    Scenario sc = base;
    if (axis == "lambda") sc.params.spectral.lambda = v;
    else if (axis == "beta") {
        sc.params.beta = v;
        sc.beta_omega0 = v * sc.params.omega0;
    } else if (axis == "beta_omega0") {
        sc.beta_omega0 = v;
        sc.params.beta = v / sc.params.omega0;
    } else if (axis == "sigma3_mean") {
        sc.params.sigma3_mean = v;
        // keep the default (maximal) coherence consistent with the new inversion
        if (sc.params.initial_coherence && std::norm(*sc.params.initial_coherence) > 0.25 * (1.0 - v * v))
            sc.params.initial_coherence.reset();
    } else if (axis == "s") sc.params.spectral.s = v;
    else if (axis == "t_max" || axis == "t_max_cutoff_units") sc.solver.t_max = v;
    else throw std::invalid_argument("unknown sweep axis '" + axis + "'");
    return sc;
}

inline SweepRow evaluate_sweep_point(const Scenario& base, const std::string& axis, double v) {
    SweepRow row;
    row.value = v;
    try {
        const Scenario sc = apply_sweep_value(base, axis, v);
        sc.params.validate();
        sc.solver.validate();
        const double t = sc.solver.t_max;
        const auto series = breakdown_series(sc.params, t, 1, sc.quadrature);
        const auto& b = series.back();
        row.a_init = a_init(sc.params);
        row.gamma_cor = b.gamma_cor;
        row.gamma_cor_renorm = b.gamma_cor_renorm;
        row.gamma_cor_exact = b.gamma_cor_exact;
        row.renorm_correction = b.gamma_cor_renorm - b.gamma_cor;
        row.abs_coherence_zn = std::abs(sc.params.coherence0()) * std::exp(-(b.gamma_vac + b.gamma_th + b.gamma_cor));
        const auto traj = solve_full_equation(sc.params, sc.solver, sc.quadrature);
        row.abs_coherence_full = std::abs(traj.values.back());
        row.watchdog = traj.flagged;
        row.ok = true;
        row.status = "ok";
    } catch (const std::exception& e) {
        row.ok = false;
        row.status = e.what();
    }
    return row;
}

/// One row per value in input order; points run on up to `jobs` threads.
inline std::vector<SweepRow> run_sweep(const Scenario& base, const std::string& axis, const std::vector<double>& values,
                                       unsigned jobs = 1) {
    if (values.empty()) throw std::invalid_argument("sweep: empty values list");
    const auto& axes = sweep_axes();
    if (std::find(axes.begin(), axes.end(), axis) == axes.end())
        throw std::invalid_argument("sweep: '" + axis + "' is not a sweepable key");

    std::vector<SweepRow> rows(values.size());
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(values.size())));
    if (jobs == 1) {
        for (std::size_t i = 0; i < values.size(); ++i) rows[i] = evaluate_sweep_point(base, axis, values[i]);
        return rows;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < values.size(); i = next++) rows[i] = evaluate_sweep_point(base, axis, values[i]);
        });
    for (auto& th : pool) th.join();
    return rows;
}

inline std::string csv_escape(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += (c == '\n' ? ' ' : c);
    }
    return out + "\"";
}

inline std::string sweep_csv(const std::string& axis, const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "index," << axis
        << ",a_init,gamma_cor,gamma_cor_renorm,gamma_cor_exact,renorm_correction,abs_coherence_zn,"
           "abs_coherence_full,watchdog_flag,status\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        out << i << ',' << format_double(r.value) << ',';
        if (r.ok)
            out << format_double(r.a_init) << ',' << format_double(r.gamma_cor) << ','
                << format_double(r.gamma_cor_renorm) << ',' << format_double(r.gamma_cor_exact) << ','
                << format_double(r.renorm_correction) << ',' << format_double(r.abs_coherence_zn) << ','
                << format_double(r.abs_coherence_full) << ',' << (r.watchdog ? 1 : 0) << ",ok\n";
        else
            out << ",,,,,,,," << csv_escape(r.status) << '\n';
    }
    return out.str();
}

} // namespace dephase
