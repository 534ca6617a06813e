// qwork: entanglement monotones, LOCC work functional and filter-protocol
// simulation for bipartite qudit states.
//
// Exit codes: 0 ok, 2 usage / parse / I/O error, 3 state or distribution
// invariant violated, 4 invalid numeric parameter or configuration,
// 1 anything else.

#include "qwork/io.hpp"
#include "qwork/qwork.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using qwork::io::json;

constexpr double kSeparableReference = 0.65;
constexpr double kSeparableWindow = 0.05;

struct RunConfig {
    std::string state_path;
    std::string preset;
    std::string out_path;
    std::size_t grid = 64;
    std::string mode;
    std::uint64_t seed = 42;
    std::size_t rounds = 100000;
    double tolerance = qwork::tol::rank;
    std::size_t param_steps = 21;
    bool json_out = false;

    // bound
    int dim = 3;
    std::size_t restarts = 32;
    // protocol
    std::string direction = "A_measures";
    std::string basis = "computational";
    std::string corrections = "auto";
    double threshold = 1.0 - 1e-6;
    // fig
    std::string family;
};

int exit_code_for(const qwork::Error& e) {
    using K = qwork::Error::Kind;
    switch (e.kind()) {
        case K::Parse: return 2;
        case K::InvalidState:
        case K::InvalidDistribution:
        case K::InvalidUnitary:
        case K::UnsupportedShape: return 3;
        case K::InvalidParameter:
        case K::InvalidConfig: return 4;
    }
    return 1;
}

std::string fmt(double x, int prec = 6) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", prec, x);
    return buf;
}

json complex_vector_json(const qwork::ComplexVector& v) {
    json arr = json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) arr.push_back(json::array({v(k).real(), v(k).imag()}));
    return arr;
}

qwork::io::StateFile load_state(const RunConfig& cfg) {
    if (!cfg.state_path.empty() && !cfg.preset.empty()) throw qwork::ParseError("give either --state or --preset, not both");
    if (!cfg.preset.empty()) return qwork::presets::by_name(cfg.preset);
    if (cfg.state_path.empty()) throw qwork::ParseError("a state is required: --state FILE or --preset NAME");
    return qwork::io::read_state_file(cfg.state_path);
}

qwork::PureState load_pure_state(const RunConfig& cfg, const char* cmd) {
    auto s = load_state(cfg);
    if (auto* p = std::get_if<qwork::PureState>(&s)) return *p;
    throw qwork::UnsupportedShape(std::string(cmd) + " needs a pure state (amplitudes), got a density matrix");
}

void emit(const RunConfig& cfg, const json& report, const std::string& text) {
    if (cfg.json_out)
        std::cout << report.dump(2) << '\n';
    else
        std::cout << text;
    if (!cfg.out_path.empty()) qwork::io::write_json_file(cfg.out_path, report);
}

std::string state_label(const RunConfig& cfg) { return cfg.preset.empty() ? cfg.state_path : "preset:" + cfg.preset; }

int cmd_monotones(const RunConfig& cfg) {
    const auto psi = load_pure_state(cfg, "monotones");
    const auto sch = qwork::schmidt(psi);
    const auto mono = qwork::concurrence_monotones(psi);
    const double conc = qwork::concurrence(psi);
    const auto crit = qwork::criterion_check(psi, cfg.tolerance);

    json report{{"state", state_label(cfg)},
                {"dim", mono.dim},
                {"schmidt_coefficients", std::vector<double>(sch.coefficients.data(), sch.coefficients.data() + sch.coefficients.size())},
                {"lambdas", mono.lambdas},
                {"monotones", mono.raw},
                {"concurrence", conc},
                {"g_concurrence", mono.g_concurrence},
                {"schmidt_rank", crit.schmidt_rank},
                {"criterion", crit.passes ? "PASS" : "FAIL"},
                {"tolerance", cfg.tolerance}};

    std::string text = "state: " + state_label(cfg) + "\nSchmidt coefficients:";
    for (Eigen::Index k = 0; k < sch.coefficients.size(); ++k) text += " " + fmt(sch.coefficients(k));
    text += "\nmonotones e_1..e_d:";
    for (double e : mono.raw) text += " " + fmt(e, 8);
    text += "\nconcurrence = " + fmt(conc) + "\nG = " + fmt(mono.g_concurrence) + "\nSchmidt rank = " +
            std::to_string(crit.schmidt_rank) + "/" + std::to_string(mono.dim) + "\ncriterion " +
            (crit.passes ? "PASS" : "FAIL") + " (tolerance " + qwork::format_sig10(cfg.tolerance) + ")\n";
    emit(cfg, report, text);
    return 0;
}

int cmd_criterion(const RunConfig& cfg) {
    const auto psi = load_pure_state(cfg, "criterion");
    const auto crit = qwork::criterion_check(psi, cfg.tolerance);
    const bool feasible = qwork::feasibility(psi, cfg.tolerance);
    json report{{"state", state_label(cfg)},
                {"schmidt_rank", crit.schmidt_rank},
                {"g_concurrence", crit.g_concurrence},
                {"passes", crit.passes},
                {"feasible", feasible},
                {"column_gram_deviation", crit.column_gram_deviation},
                {"tolerance", crit.tolerance}};
    std::string text = "state: " + state_label(cfg) + "\nSchmidt rank = " + std::to_string(crit.schmidt_rank) +
                       "\nG = " + fmt(crit.g_concurrence) + "\ncolumn Gram deviation = " +
                       fmt(crit.column_gram_deviation, 8) + "\nprotocol feasible = " + (feasible ? "yes" : "no") +
                       "\ncriterion " + (crit.passes ? "PASS" : "FAIL") + "\n";
    emit(cfg, report, text);
    return 0;
}

qwork::AveragingMode mode_for(const RunConfig& cfg, Eigen::Index d) {
    if (!cfg.mode.empty()) return qwork::parse_averaging_mode(cfg.mode);
    return d == 2 ? qwork::AveragingMode::QubitCircle : qwork::AveragingMode::GridAverage;
}

int cmd_work(const RunConfig& cfg) {
    if (cfg.grid < qwork::kMinGrid) throw qwork::InvalidParameter("grid must be at least 8");
    const auto state = load_state(cfg);
    qwork::WorkScanResult res;
    std::visit(
        [&](const auto& s) {
            const Eigen::Index d = qwork::detail::local_dim(s);
            res = qwork::work(s, mode_for(cfg, d), cfg.grid);
        },
        state);
    json report{{"state", state_label(cfg)}, {"mode", qwork::to_string(res.mode)}, {"grid", res.grid_points},
                {"work", res.work}, {"work_doubled_grid", res.work_doubled}, {"converged", res.converged}};
    std::string text = "state: " + state_label(cfg) + "\nmode: " + std::string(qwork::to_string(res.mode)) +
                       "\ngrid: " + std::to_string(res.grid_points) + "\nW = " + fmt(res.work, 8) +
                       "\nW(2x grid) = " + fmt(res.work_doubled, 8) + "\nconverged = " + (res.converged ? "yes" : "no") +
                       "\n";
    emit(cfg, report, text);
    return 0;
}

int cmd_bound(const RunConfig& cfg) {
    if (cfg.grid < qwork::kMinGrid) throw qwork::InvalidParameter("grid must be at least 8");
    if (cfg.dim != 2 && cfg.dim != 3) throw qwork::InvalidParameter("dim must be 2 or 3");
    const auto mode = mode_for(cfg, cfg.dim);
    const auto b = qwork::separable_bound(cfg.dim, mode, cfg.restarts, cfg.seed, cfg.grid);
    json report{{"dim", cfg.dim},          {"mode", qwork::to_string(mode)}, {"grid", cfg.grid},
                {"restarts", cfg.restarts}, {"seed", cfg.seed},              {"bound", b.value},
                {"state_a", complex_vector_json(b.state_a)}, {"state_b", complex_vector_json(b.state_b)}};
    std::string text = "separable bound (d=" + std::to_string(cfg.dim) + ", " + std::string(qwork::to_string(mode)) +
                       ", grid " + std::to_string(cfg.grid) + ", " + std::to_string(cfg.restarts) + " restarts, seed " +
                       std::to_string(cfg.seed) + ") = " + fmt(b.value, 6) + "\n";
    text += "achieved by |a> (x) |b> with\n  a =";
    for (Eigen::Index k = 0; k < b.state_a.size(); ++k)
        text += " (" + fmt(b.state_a(k).real(), 4) + "," + fmt(b.state_a(k).imag(), 4) + ")";
    text += "\n  b =";
    for (Eigen::Index k = 0; k < b.state_b.size(); ++k)
        text += " (" + fmt(b.state_b(k).real(), 4) + "," + fmt(b.state_b(k).imag(), 4) + ")";
    text += "\n";
    if (cfg.dim == 3) {
        const double diff = b.value - kSeparableReference;
        const bool within = std::abs(diff) <= kSeparableWindow;
        report["reference"] = kSeparableReference;
        report["within_reference_window"] = within;
        text += "reference 0.65: difference " + fmt(diff, 4) + (within ? " (within +-0.05)\n" : " (outside +-0.05)\n");
    }
    emit(cfg, report, text);
    return 0;
}

qwork::MeasurementBasis parse_basis(const std::string& spec, Eigen::Index dim) {
    if (spec == "computational") return qwork::computational_basis(dim);
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
    try {
        if (kind == "qubit" && dim == 2) return qwork::qubit_basis(std::stod(args));
        if (kind == "qutrit" && dim == 3) {
            const auto comma = args.find(',');
            if (comma == std::string::npos) throw qwork::ParseError("qutrit basis needs theta,phi");
            return qwork::qutrit_basis(std::stod(args.substr(0, comma)), std::stod(args.substr(comma + 1)));
        }
    } catch (const std::invalid_argument&) {
        throw qwork::ParseError("cannot parse basis angles in '" + spec + "'");
    }
    throw qwork::ParseError("basis '" + spec + "' does not fit local dimension " + std::to_string(dim));
}

int cmd_protocol(const RunConfig& cfg) {
    const auto psi = load_pure_state(cfg, "protocol");
    qwork::ProtocolConfig pc;
    pc.direction = qwork::parse_direction(cfg.direction);
    const Eigen::Index measurer_dim = pc.direction == qwork::Direction::AMeasures ? psi.dim_a() : psi.dim_b();
    pc.basis = parse_basis(cfg.basis, measurer_dim);
    pc.seed = cfg.seed;
    pc.rounds = cfg.rounds;
    pc.tolerance = cfg.tolerance;
    pc.success_fidelity_threshold = cfg.threshold;
    if (cfg.corrections == "phi_me") {
        pc.corrections = qwork::auto_corrections(qwork::presets::phi_me(), qwork::computational_basis(2));
    } else if (cfg.corrections == "qutrit_shift") {
        pc.corrections = qwork::qutrit_shift_corrections();
    } else if (cfg.corrections != "auto") {
        throw qwork::ParseError("unknown correction set '" + cfg.corrections + "'");
    }
    const auto st = qwork::run_protocol(psi, pc);

    json report{{"config",
                 {{"state", state_label(cfg)},
                  {"direction", qwork::to_string(pc.direction)},
                  {"basis", cfg.basis},
                  {"corrections", cfg.corrections},
                  {"success_fidelity_threshold", pc.success_fidelity_threshold},
                  {"tolerance", pc.tolerance},
                  {"seed", pc.seed},
                  {"rounds", pc.rounds}}},
                {"generator", {{"algorithm", st.generator}, {"seed", st.seed}, {"stream", "per-round derive(seed, round)"}}},
                {"rounds_requested", st.rounds_requested},
                {"successes", st.successes},
                {"outcome_counts", st.outcome_counts},
                {"outcome_probabilities", st.outcome_probabilities},
                {"per_outcome_fidelity", st.per_outcome_fidelity},
                {"success_ratio", st.success_ratio},
                {"feasible", st.feasible}};
    std::string text = "N0 = " + std::to_string(st.rounds_requested) + "\nN1 = " + std::to_string(st.successes) +
                       "\nN1/N0 = " + fmt(st.success_ratio, 6) + "\noutcome counts:";
    for (auto c : st.outcome_counts) text += " " + std::to_string(c);
    text += "\nfeasible = " + std::string(st.feasible ? "yes" : "no") + "\n";
    emit(cfg, report, text);
    return 0;
}

int cmd_fig(const RunConfig& cfg) {
    if (cfg.grid < qwork::kMinGrid) throw qwork::InvalidParameter("grid must be at least 8");
    qwork::MixedFamily fam;
    if (cfg.family == "FigB")
        fam = qwork::MixedFamily::FigB;
    else if (cfg.family == "FigC")
        fam = qwork::MixedFamily::FigC;
    else
        throw qwork::ParseError("family must be FigB or FigC");
    const auto mode = cfg.mode.empty() ? qwork::AveragingMode::GridAverage : qwork::parse_averaging_mode(cfg.mode);
    const auto rows = qwork::scan_family(fam, qwork::unit_interval_grid(cfg.param_steps), mode, cfg.grid);
    if (cfg.out_path.empty()) {
        qwork::write_scan_csv(std::cout, rows, mode, cfg.grid);
    } else {
        std::ofstream out(cfg.out_path);
        if (!out) throw qwork::ParseError("cannot write '" + cfg.out_path + "'");
        qwork::write_scan_csv(out, rows, mode, cfg.grid);
        std::cout << "wrote " << rows.size() << " rows to " << cfg.out_path << '\n';
    }
    return 0;
}

int cmd_export(const RunConfig& cfg) {
    const auto state = load_state(cfg);
    const json doc = std::visit([](const auto& s) { return qwork::io::to_json(s); }, state);
    if (cfg.out_path.empty())
        std::cout << doc.dump(2) << '\n';
    else
        qwork::io::write_json_file(cfg.out_path, doc);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qwork: qudit entanglement monotones, LOCC work extraction and filter protocol"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_state = [&](CLI::App* sub) {
        sub->add_option("--state", cfg.state_path, "JSON state file")->check(CLI::ExistingFile);
        sub->add_option("--preset", cfg.preset,
                        "named state: omega_max | omega | omega_tilde:r,s | omega_max_weighted:r,s | phi_me | prod00 | prod00_3");
    };
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", cfg.out_path, "write the report to this file");
        sub->add_flag("--json", cfg.json_out, "print a JSON report on stdout");
    };

    auto* mono = app.add_subcommand("monotones", "Schmidt coefficients, concurrence monotones, G-concurrence");
    add_state(mono);
    add_common(mono);
    mono->add_option("--tolerance", cfg.tolerance, "rank tolerance on squared Schmidt coefficients")->check(CLI::PositiveNumber);

    auto* crit = app.add_subcommand("criterion", "full-Schmidt-rank criterion and protocol feasibility");
    add_state(crit);
    add_common(crit);
    crit->add_option("--tolerance", cfg.tolerance)->check(CLI::PositiveNumber);

    auto* wk = app.add_subcommand("work", "average work functional W");
    add_state(wk);
    add_common(wk);
    wk->add_option("--mode", cfg.mode, "GRID_AVERAGE | THETA_AVERAGE_PHI_MAX | QUBIT_CIRCLE");
    wk->add_option("--grid", cfg.grid, "points per axis (>= 8)");

    auto* bd = app.add_subcommand("bound", "separable upper bound on W over product states");
    add_common(bd);
    bd->add_option("dim,--dim", cfg.dim, "local dimension (2 or 3)");
    bd->add_option("mode,--mode", cfg.mode, "averaging mode");
    bd->add_option("restarts,--restarts", cfg.restarts, "multi-start count")->check(CLI::PositiveNumber);
    bd->add_option("seed,--seed", cfg.seed, "master seed");
    bd->add_option("--grid", cfg.grid, "points per axis for the final score");

    auto* pr = app.add_subcommand("protocol", "Monte Carlo LOCC filter protocol");
    add_state(pr);
    add_common(pr);
    pr->add_option("--rounds", cfg.rounds)->check(CLI::PositiveNumber);
    pr->add_option("--seed", cfg.seed);
    pr->add_option("--direction", cfg.direction, "A_measures | B_measures");
    pr->add_option("--basis", cfg.basis, "computational | qubit:THETA | qutrit:THETA,PHI");
    pr->add_option("--corrections", cfg.corrections, "auto | phi_me | qutrit_shift");
    pr->add_option("--threshold", cfg.threshold, "per-round success fidelity threshold");
    pr->add_option("--tolerance", cfg.tolerance)->check(CLI::PositiveNumber);

    auto* fig = app.add_subcommand("fig", "scan a mixed family and write CSV");
    fig->add_option("family", cfg.family, "FigB | FigC")->required();
    fig->add_option("steps,--steps", cfg.param_steps, "parameter values on [0, 1]");
    fig->add_option("out,--out", cfg.out_path, "CSV output path");
    fig->add_option("--mode", cfg.mode);
    fig->add_option("--grid", cfg.grid);

    auto* ex = app.add_subcommand("export", "write a state file");
    add_state(ex);
    ex->add_option("--out", cfg.out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*mono) return cmd_monotones(cfg);
        if (*crit) return cmd_criterion(cfg);
        if (*wk) return cmd_work(cfg);
        if (*bd) return cmd_bound(cfg);
        if (*pr) return cmd_protocol(cfg);
        if (*fig) return cmd_fig(cfg);
        if (*ex) return cmd_export(cfg);
    } catch (const qwork::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
