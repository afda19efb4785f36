#include "cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "rabi/errors.hpp"
#include "rabi/gfunction.hpp"
#include "rabi/model.hpp"
#include "rabi/oracle.hpp"
#include "rabi/recurrence.hpp"
#include "rabi/spectrum.hpp"
#include "rabi/sweep.hpp"
#include "rabi/wavefunction.hpp"

namespace rabi::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const char* kFooter = R"(Recipes:
  G-functions of both parities on x in [-1, 5]:
    rabi gscan --g 0.7 --delta 0.4 --omega 1 --xmin -1 --xmax 5 --steps 600
  Spectral graph of the Rabi model, levels split by parity:
    rabi sweep --model rabi --delta 0.4 --gmin 0 --gmax 0.8 --steps 80 --levels 8
  Spectral graph of the Jaynes-Cummings model:
    rabi sweep --model jc --delta 0.4 --gmin 0 --gmax 0.8 --steps 81 --cmax 6
  Spectral graph with broken parity:
    rabi sweep --model eps --delta 0.7 --eps 0.2 --gmin 0 --gmax 1 --steps 80 --levels 8
  Minimal-solution residual next to G_+ and G_-:
    rabi schweber --g 0.7 --delta 0.4 --xmin -1 --xmax 5 --steps 600

Exit codes: 0 ok, 2 usage, 3 numeric failure, 4 non-convergence.
RABI_THREADS sets the number of worker threads for sweeps.)";

using Cell = std::variant<double, long long, std::string, bool>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Document {
    std::string schema;
    std::vector<std::pair<std::string, Cell>> meta;
    std::vector<Table> tables;
};

std::string cell_text(const Cell& c) {
    if (const double* d = std::get_if<double>(&c)) {
        return format_number(*d);
    }
    if (const long long* i = std::get_if<long long>(&c)) {
        return std::to_string(*i);
    }
    if (const bool* b = std::get_if<bool>(&c)) {
        return *b ? "1" : "0";
    }
    return std::get<std::string>(c);
}

nlohmann::ordered_json cell_json(const Cell& c) {
    if (const double* d = std::get_if<double>(&c)) {
        return std::isfinite(*d) ? nlohmann::ordered_json(*d) : nlohmann::ordered_json(nullptr);
    }
    if (const long long* i = std::get_if<long long>(&c)) {
        return *i;
    }
    if (const bool* b = std::get_if<bool>(&c)) {
        return *b;
    }
    return std::get<std::string>(c);
}

std::string csv_field(const Cell& c) {
    std::string text = cell_text(c);
    if (text.find_first_of(",\"\n") == std::string::npos) {
        return text;
    }
    std::string quoted = "\"";
    for (char ch : text) {
        quoted += ch;
        if (ch == '"') {
            quoted += '"';
        }
    }
    return quoted + '"';
}

void write_csv(const Document& doc, std::ostream& out) {
    out << "# schema: " << doc.schema << "/v1\n";
    for (const auto& [key, value] : doc.meta) {
        out << "# " << key << ": " << cell_text(value) << '\n';
    }
    for (const Table& t : doc.tables) {
        out << "# table: " << t.name << '\n';
        for (std::size_t i = 0; i < t.columns.size(); ++i) {
            out << (i ? "," : "") << t.columns[i];
        }
        out << '\n';
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                out << (i ? "," : "") << csv_field(row[i]);
            }
            out << '\n';
        }
    }
}

void write_json(const Document& doc, std::ostream& out) {
    nlohmann::ordered_json j;
    j["schema"] = doc.schema + "/v1";
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [key, value] : doc.meta) {
        meta[key] = cell_json(value);
    }
    j["meta"] = meta;
    for (const Table& t : doc.tables) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& row : t.rows) {
            nlohmann::ordered_json r;
            for (std::size_t i = 0; i < row.size(); ++i) {
                r[t.columns[i]] = cell_json(row[i]);
            }
            rows.push_back(r);
        }
        j[t.name] = rows;
    }
    out << j.dump(2) << '\n';
}

struct Common {
    double omega = 1.0;
    double g = 0.0;
    double delta = 0.0;
    double epsilon = 0.0;
    std::string format = "csv";
    std::string output;

    ModelParams params() const {
        ModelParams p;
        p.omega = omega;
        p.g = g;
        p.delta = delta;
        p.epsilon = epsilon;
        validate(p);
        return p;
    }
};

void add_output(CLI::App* sub, Common& c) {
    sub->add_option("--format", c.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_option("--output,-o", c.output, "Write to this file instead of standard output");
}

void add_model(CLI::App* sub, Common& c, bool with_g = true, bool with_eps = true) {
    sub->add_option("--omega", c.omega, "Mode frequency")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    if (with_g) {
        sub->add_option("--g", c.g, "Coupling strength")->check(CLI::NonNegativeNumber);
    }
    sub->add_option("--delta", c.delta, "Qubit splitting term")->capture_default_str();
    if (with_eps) {
        sub->add_option("--eps", c.epsilon, "Parity-breaking bias")->capture_default_str();
    }
    add_output(sub, c);
}

Parity parse_parity(const std::string& s) { return s == "minus" ? Parity::Minus : Parity::Plus; }

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw InvalidArgument(message);
    }
}

std::vector<double> linspace(double a, double b, int steps) {
    std::vector<double> x(steps);
    for (int i = 0; i < steps; ++i) {
        x[i] = i == steps - 1 ? b : a + (b - a) * i / (steps - 1);
    }
    return x;
}

double g_or_nan(Parity p, double x, const NormalizedParams& np, const Tolerances& tol,
                bool* converged) {
    try {
        const GSample s = eval_G(p, x, np, tol);
        *converged = *converged && s.converged;
        return s.value;
    } catch (const PoleError&) {
        return kNaN;
    }
}

// ---- commands -------------------------------------------------------------

struct ScanArgs {
    double xmin = -1.0;
    double xmax = 5.0;
    int steps = 600;
};

void add_scan(CLI::App* sub, ScanArgs& a) {
    sub->add_option("--xmin", a.xmin, "Lower end of the x range (omega = 1 units)")->capture_default_str();
    sub->add_option("--xmax", a.xmax, "Upper end of the x range (omega = 1 units)")->capture_default_str();
    sub->add_option("--steps", a.steps, "Number of grid points")
        ->check(CLI::Range(2, 10000000))
        ->capture_default_str();
}

Document cmd_gscan(const Common& c, const ScanArgs& a) {
    const ModelParams p = c.params();
    require(p.symmetric(), "gscan evaluates G_+ and G_-; epsilon must be 0");
    require(a.xmin < a.xmax, "--xmin must be below --xmax");
    const NormalizedParams np = normalize(p);
    require(np.g > 0.0, "G-functions need g > 0");
    Tolerances tol;
    tol.require_convergence = false;

    Document doc{"gscan", {}, {}};
    doc.meta = {{"omega", p.omega}, {"g", p.g}, {"delta", p.delta}};
    Table t{"gscan",
            {"x", "energy", "g_plus", "g_minus", "nearest_pole", "pole_distance", "converged"},
            {}};
    for (double x : linspace(a.xmin, a.xmax, a.steps)) {
        bool converged = true;
        const double gp = g_or_nan(Parity::Plus, x, np, tol, &converged);
        const double gm = g_or_nan(Parity::Minus, x, np, tol, &converged);
        const auto [pole, dist] = nearest_symmetric_pole(x);
        t.rows.push_back({x, np.energy_from_x(x), gp, gm, static_cast<long long>(pole), dist,
                          converged && std::isfinite(gp)});
    }
    doc.tables.push_back(std::move(t));
    return doc;
}

struct SpectrumArgs {
    std::optional<double> xmin;
    double xmax = 5.0;
    std::string parity = "both";
    bool no_oracle = false;
};

Document cmd_spectrum(const Common& c, const SpectrumArgs& a) {
    const ModelParams p = c.params();
    const double lower = spectral_lower_bound(p) - 0.05;
    const double xmin = a.xmin.value_or(lower);
    require(xmin < a.xmax, "--xmin must be below --xmax");

    std::vector<Eigenvalue> levels;
    OracleModel oracle_model = OracleModel::Rabi;
    if (!p.symmetric()) {
        require(a.parity == "both", "parity sectors do not exist for epsilon != 0");
        levels = spectrum_eps(p, xmin, a.xmax);
        oracle_model = OracleModel::RabiEps;
    } else if (a.parity == "both") {
        for (const Eigenvalue& e : full_spectrum(p, a.xmax)) {
            if (e.x_root >= xmin) {
                levels.push_back(e);
            }
        }
    } else {
        const Parity par = parse_parity(a.parity);
        levels = find_regular(par, xmin, a.xmax, p);
        oracle_model = par == Parity::Plus ? OracleModel::ParityBlockPlus
                                           : OracleModel::ParityBlockMinus;
    }

    std::vector<double> oracle;
    int n_tr = 0;
    // The oracle lists every level from the bottom, so compare only when the
    // range starts at the spectral floor.
    const bool compare = !a.no_oracle && !levels.empty() && xmin <= lower;
    if (compare) {
        const ConvergedSpectrum cs =
            converged_spectrum(oracle_model, p, static_cast<int>(levels.size()));
        oracle = cs.levels;
        n_tr = cs.n_tr_checked;
    }

    Document doc{"spectrum", {}, {}};
    doc.meta = {{"omega", p.omega}, {"g", p.g}, {"delta", p.delta}, {"eps", p.epsilon},
                {"oracle_truncation", static_cast<long long>(n_tr)}};
    Table t{"levels",
            {"index", "parity", "sector_index", "kind", "x", "energy", "residual", "degenerate",
             "oracle_energy", "oracle_diff"},
            {}};
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const Eigenvalue& e = levels[i];
        const double o = compare ? oracle[i] : kNaN;
        t.rows.push_back({static_cast<long long>(i),
                          std::string(e.parity ? to_string(*e.parity) : "none"),
                          static_cast<long long>(e.index), std::string(to_string(e.kind)),
                          e.x_root, e.energy, e.residual, e.degenerate, o,
                          compare ? e.energy - o : kNaN});
    }
    doc.tables.push_back(std::move(t));
    return doc;
}

struct ExceptionalArgs {
    int n = 1;
    double gmin = 1e-3;
    double gmax = 2.0;
    int cells = 4000;
};

Document cmd_exceptional(const Common& c, const ExceptionalArgs& a) {
    ModelParams p = c.params();
    p.g = a.gmin;
    const std::vector<double> gs = find_exceptional(a.n, a.gmin, a.gmax, p, a.cells);
    Document doc{"exceptional", {}, {}};
    doc.meta = {{"omega", p.omega}, {"delta", p.delta}, {"n", static_cast<long long>(a.n)}};
    Table t{"exceptional", {"n", "g", "x", "energy"}, {}};
    for (double g : gs) {
        ModelParams q = p;
        q.g = g;
        t.rows.push_back({static_cast<long long>(a.n), g, static_cast<double>(a.n),
                          baseline_energy(a.n, q)});
    }
    doc.tables.push_back(std::move(t));
    return doc;
}

struct SweepArgs {
    std::string model = "rabi";
    double gmin = 0.0;
    double gmax = 0.8;
    int steps = 80;
    int levels = 8;
    int cmax = 6;
    std::optional<double> threshold;
};

Document cmd_sweep(const Common& c, const SweepArgs& a) {
    require(c.omega > 0.0, "--omega must be positive");
    SweepResult s;
    if (a.model == "rabi") {
        require(c.epsilon == 0.0, "--model rabi needs --eps 0; use --model eps");
        s = sweep_rabi(c.delta, c.omega, a.gmin, a.gmax, a.steps, a.levels);
    } else if (a.model == "jc") {
        s = sweep_jc(c.delta, c.omega, a.gmin, a.gmax, a.steps, a.cmax);
    } else {
        s = sweep_eps(c.delta, c.epsilon, c.omega, a.gmin, a.gmax, a.steps, a.levels);
    }
    if (s.grid.size() < 3) {
        throw InvalidArgument("crossing detection needs at least three grid points");
    }
    const std::vector<CrossingEvent> events = detect_crossings(s, a.threshold);
    const IntegrabilityReport rep = integrability_report(s, events, a.threshold);

    Document doc{"sweep", {}, {}};
    doc.meta = {{"model", std::string(to_string(s.model))}, {"omega", s.omega},
                {"delta", s.delta}, {"eps", s.epsilon}};
    for (const std::string& note : s.notes) {
        doc.meta.push_back({"note", note});
    }
    Table levels{"levels", {"g", "sector", "index", "energy"}, {}};
    for (std::size_t k = 0; k < s.grid.size(); ++k) {
        for (std::size_t l = 0; l < s.labels.size(); ++l) {
            levels.rows.push_back({s.grid[k], static_cast<long long>(s.labels[l].sector),
                                   static_cast<long long>(s.labels[l].index), s.energies[l][k]});
        }
    }
    Table crossings{"crossings",
                    {"g_star", "sector_a", "index_a", "sector_b", "index_b", "gap_min", "kind",
                     "within_sector", "resolution_limited"},
                    {}};
    for (const CrossingEvent& e : events) {
        crossings.rows.push_back({e.g_star, static_cast<long long>(e.a.sector),
                                  static_cast<long long>(e.a.index),
                                  static_cast<long long>(e.b.sector),
                                  static_cast<long long>(e.b.index), e.gap_min,
                                  std::string(to_string(e.kind)), e.within_sector,
                                  e.resolution_limited});
    }
    Table errors{"errors", {"g", "message"}, {}};
    for (std::size_t k = 0; k < s.grid.size(); ++k) {
        if (!s.point_errors[k].empty()) {
            errors.rows.push_back({s.grid[k], s.point_errors[k]});
        }
    }
    Table report{"report",
                 {"ladders", "consistent_labeling", "true_crossings", "within_sector_anomalies",
                  "unresolved_events", "smallest_gap", "verdict", "caveat"},
                 {{static_cast<long long>(rep.ladders), rep.consistent_labeling,
                   static_cast<long long>(rep.true_crossings),
                   static_cast<long long>(rep.within_sector_anomalies),
                   static_cast<long long>(rep.unresolved_events), rep.smallest_gap, rep.verdict,
                   rep.caveat}}};
    doc.tables.push_back(std::move(levels));
    doc.tables.push_back(std::move(crossings));
    doc.tables.push_back(std::move(errors));
    doc.tables.push_back(std::move(report));
    return doc;
}

struct WavefunctionArgs {
    std::string parity = "minus";
    int level = 0;
    int order = 0;
};

Document cmd_wavefunction(const Common& c, const WavefunctionArgs& a) {
    const ModelParams p = c.params();
    require(p.symmetric(), "wavefunctions are available for epsilon = 0 only");
    require(p.g > 0.0, "wavefunctions need g > 0");
    const Parity par = parse_parity(a.parity);
    const Eigenvalue e = lowest_levels(par, a.level + 1, p).back();
    require(e.kind == LevelKind::Regular,
            "the requested level is exceptional; the series representations do not apply");
    const BargmannSeries s2 = psi_from_phi2(e.x_root, par, p, a.order);
    const BargmannSeries s1 = psi_from_phi1(e.x_root, par, p, a.order);
    const FockVector v = fock_amplitudes(s2, p);
    const ConsistencyReport cr =
        consistency_check(e.x_root, par, p, circle_samples(0.5 * normalize(p).g, 20));

    Document doc{"wavefunction", {}, {}};
    doc.meta = {{"omega", p.omega},         {"g", p.g},
                {"delta", p.delta},         {"parity", std::string(to_string(par))},
                {"x", e.x_root},            {"energy", e.energy},
                {"route_difference", cr.max_difference}, {"psi_scale", cr.scale}};
    Table t{"coefficients", {"m", "c_phi2", "c_phi1", "fock_up", "fock_down"}, {}};
    for (std::size_t m = 0; m < s2.taylor.size(); ++m) {
        t.rows.push_back({static_cast<long long>(m), s2.taylor[m],
                          m < s1.taylor.size() ? s1.taylor[m] : kNaN, v.up[m], v.down[m]});
    }
    doc.tables.push_back(std::move(t));
    return doc;
}

struct OracleArgs {
    std::string model = "rabi";
    int ntr = 200;
    int levels = 10;
    bool converge = false;
};

Document cmd_oracle(const Common& c, const OracleArgs& a) {
    const ModelParams p = c.params();
    OracleModel m = OracleModel::Rabi;
    if (a.model == "eps") {
        m = OracleModel::RabiEps;
    } else if (a.model == "plus") {
        m = OracleModel::ParityBlockPlus;
    } else if (a.model == "minus") {
        m = OracleModel::ParityBlockMinus;
    } else if (a.model == "jc") {
        m = OracleModel::JaynesCummings;
    }
    std::vector<double> levels;
    int n_tr = a.ntr;
    if (a.converge) {
        const ConvergedSpectrum cs = converged_spectrum(m, p, a.levels);
        levels = cs.levels;
        n_tr = cs.n_tr;
    } else {
        levels = oracle_levels(m, p, a.ntr, a.levels);
    }
    Document doc{"oracle", {}, {}};
    doc.meta = {{"model", std::string(to_string(m))}, {"omega", p.omega}, {"g", p.g},
                {"delta", p.delta}, {"eps", p.epsilon}, {"truncation", static_cast<long long>(n_tr)}};
    Table t{"levels", {"index", "energy", "x"}, {}};
    for (std::size_t i = 0; i < levels.size(); ++i) {
        t.rows.push_back({static_cast<long long>(i), levels[i],
                          normalize(p).x_from_energy(levels[i])});
    }
    doc.tables.push_back(std::move(t));
    return doc;
}

Document cmd_schweber(const Common& c, const ScanArgs& a) {
    const ModelParams p = c.params();
    require(p.symmetric(), "the minimal-solution residual is defined for epsilon = 0");
    require(a.xmin < a.xmax, "--xmin must be below --xmax");
    const NormalizedParams np = normalize(p);
    require(np.g > 0.0, "the recurrence needs g > 0");
    Tolerances tol;
    tol.require_convergence = false;

    Document doc{"schweber", {}, {}};
    doc.meta = {{"omega", p.omega}, {"g", p.g}, {"delta", p.delta}};
    Table t{"schweber", {"x", "energy", "schweber_residual", "g_plus", "g_minus"}, {}};
    for (double x : linspace(a.xmin, a.xmax, a.steps)) {
        double r = kNaN;
        try {
            r = schweber_residual(x, np);
        } catch (const NumericError&) {
        }
        bool converged = true;
        t.rows.push_back({x, np.energy_from_x(x), r, g_or_nan(Parity::Plus, x, np, tol, &converged),
                          g_or_nan(Parity::Minus, x, np, tol, &converged)});
    }
    doc.tables.push_back(std::move(t));
    return doc;
}

Document cmd_jc(const Common& c, int cmax) {
    const ModelParams p = c.params();
    Document doc{"jc", {}, {}};
    doc.meta = {{"omega", p.omega}, {"g", p.g}, {"delta", p.delta}};
    Table t{"levels", {"c", "rung", "parity", "energy"}, {}};
    for (const JcLevel& l : jc_spectrum(p, cmax)) {
        // Parity sigma_z (-1)^n on the sector {|up, c-1>, |down, c>} is -(-1)^c.
        const Parity parity = (l.c % 2 == 1) ? Parity::Plus : Parity::Minus;
        t.rows.push_back({static_cast<long long>(l.c), static_cast<long long>(l.rung),
                          std::string(to_string(parity)),
                          l.energy});
    }
    doc.tables.push_back(std::move(t));
    return doc;
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectra of the quantum Rabi model and its relatives"};
    app.name("rabi");
    app.footer(kFooter);
    app.require_subcommand(1);

    Common common;
    ScanArgs scan;
    SpectrumArgs spec;
    ExceptionalArgs exc;
    SweepArgs sw;
    WavefunctionArgs wf;
    OracleArgs orc;
    int jc_cmax = 6;

    auto* gscan = app.add_subcommand("gscan", "Tabulate G_+(x) and G_-(x) on a grid");
    add_model(gscan, common);
    add_scan(gscan, scan);

    auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues from the G-function zeros");
    add_model(spectrum, common);
    spectrum->add_option("--xmin", spec.xmin, "Lower end of the x range (default: spectral floor)");
    spectrum->add_option("--xmax", spec.xmax, "Upper end of the x range")->capture_default_str();
    spectrum->add_option("--parity", spec.parity, "Sector")
        ->check(CLI::IsMember({"both", "plus", "minus"}))
        ->capture_default_str();
    spectrum->add_flag("--no-oracle", spec.no_oracle, "Skip the matrix cross-check");

    auto* exceptional = app.add_subcommand("exceptional", "Couplings with a degenerate level on baseline n");
    add_model(exceptional, common, false, false);
    exceptional->add_option("--n", exc.n, "Baseline index")->check(CLI::PositiveNumber)->capture_default_str();
    exceptional->add_option("--gmin", exc.gmin, "Lower coupling")->check(CLI::PositiveNumber)->capture_default_str();
    exceptional->add_option("--gmax", exc.gmax, "Upper coupling")->check(CLI::PositiveNumber)->capture_default_str();
    exceptional->add_option("--cells", exc.cells, "Scan cells")->check(CLI::Range(2, 10000000))->capture_default_str();

    auto* sweep = app.add_subcommand("sweep", "Levels against coupling, with crossing analysis");
    add_model(sweep, common, false, true);
    sweep->add_option("--model", sw.model, "Model")
        ->check(CLI::IsMember({"rabi", "jc", "eps"}))
        ->capture_default_str();
    sweep->add_option("--gmin", sw.gmin, "Lower coupling")->check(CLI::NonNegativeNumber)->capture_default_str();
    sweep->add_option("--gmax", sw.gmax, "Upper coupling")->check(CLI::PositiveNumber)->capture_default_str();
    sweep->add_option("--steps", sw.steps, "Grid points")->check(CLI::Range(3, 100000))->capture_default_str();
    sweep->add_option("--levels", sw.levels, "Levels per sector")->check(CLI::Range(1, 200))->capture_default_str();
    sweep->add_option("--cmax", sw.cmax, "Largest excitation number (jc)")->check(CLI::Range(0, 1000))->capture_default_str();
    sweep->add_option("--threshold", sw.threshold, "Crossing threshold (default 1e-6 omega)")->check(CLI::PositiveNumber);

    auto* wave = app.add_subcommand("wavefunction", "Bargmann series and Fock amplitudes of one level");
    add_model(wave, common, true, false);
    wave->add_option("--parity", wf.parity, "Sector")
        ->check(CLI::IsMember({"plus", "minus"}))
        ->capture_default_str();
    wave->add_option("--level", wf.level, "Index within the sector")->check(CLI::Range(0, 1000))->capture_default_str();
    wave->add_option("--order", wf.order, "Taylor order (0: automatic)")->check(CLI::Range(0, 160))->capture_default_str();

    auto* oracle = app.add_subcommand("oracle", "Eigenvalues of the truncated Fock-space matrix");
    add_model(oracle, common);
    oracle->add_option("--model", orc.model, "Matrix")
        ->check(CLI::IsMember({"rabi", "eps", "plus", "minus", "jc"}))
        ->capture_default_str();
    oracle->add_option("--ntr", orc.ntr, "Boson truncation")->check(CLI::Range(2, kMaxTruncation))->capture_default_str();
    oracle->add_option("--levels", orc.levels, "Levels to print")->check(CLI::Range(1, 4096))->capture_default_str();
    oracle->add_flag("--converge", orc.converge, "Grow the truncation until the levels settle");

    auto* schweber = app.add_subcommand("schweber", "f_0 - V_1 of the minimal solution beside G_+-");
    add_model(schweber, common, true, false);
    add_scan(schweber, scan);

    auto* jc = app.add_subcommand("jc", "Closed-form Jaynes-Cummings levels");
    add_model(jc, common, true, false);
    jc->add_option("--cmax", jc_cmax, "Largest excitation number")->check(CLI::Range(0, 100000))->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    try {
        Document doc;
        if (gscan->parsed()) {
            doc = cmd_gscan(common, scan);
        } else if (spectrum->parsed()) {
            doc = cmd_spectrum(common, spec);
        } else if (exceptional->parsed()) {
            doc = cmd_exceptional(common, exc);
        } else if (sweep->parsed()) {
            doc = cmd_sweep(common, sw);
        } else if (wave->parsed()) {
            doc = cmd_wavefunction(common, wf);
        } else if (oracle->parsed()) {
            doc = cmd_oracle(common, orc);
        } else if (schweber->parsed()) {
            doc = cmd_schweber(common, scan);
        } else {
            doc = cmd_jc(common, jc_cmax);
        }

        std::ofstream file;
        std::ostream* sink = &out;
        if (!common.output.empty()) {
            file.open(common.output);
            if (!file) {
                err << "error: cannot open " << common.output << " for writing\n";
                return kUsage;
            }
            sink = &file;
        }
        if (common.format == "json") {
            write_json(doc, *sink);
        } else {
            write_csv(doc, *sink);
        }
        return kOk;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << " (" << e.iterations() << " iterations)\n";
        return kNonConvergence;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kNumeric;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kNumeric;
    }
}

}  // namespace rabi::cli
