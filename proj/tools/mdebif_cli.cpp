// Command-line front end: load a problem (registry name or JSON file), run
// solve / periodic / monodromy / scan / classify / criterion, write reports
// to files and a short human summary to standard output.
//
// Exit codes: 0 ok, 2 validation error, 3 numeric failure.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mdebif/bifurcation.hpp"
#include "mdebif/criteria.hpp"
#include "mdebif/registry.hpp"
#include "mdebif/report_io.hpp"
#include "mdebif/solver.hpp"

namespace {

using namespace mdebif;

struct LoadedProblem {
    ProblemDef def;
    RunSettings settings;
};

LoadedProblem load_problem(const std::string& name_or_file) {
    if (is_builtin(name_or_file)) return {builtin_problem(name_or_file), RunSettings{}};
    std::ifstream in(name_or_file);
    if (!in) throw ValidationError("cannot open problem file '" + name_or_file + "'");
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ValidationError("invalid JSON in '" + name_or_file + "': " + e.what());
    }
    return {problem_from_json(j), settings_from_json(j)};
}

Vec parse_x0(const std::string& text, int n) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            vals.push_back(std::stod(item, &used));
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used])))
                ++used;
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ValidationError("cannot parse state component '" + item + "'");
        }
    }
    if (static_cast<int>(vals.size()) != n)
        throw ValidationError("expected " + std::to_string(n) + " state components, got " +
                              std::to_string(vals.size()));
    return Eigen::Map<const Vec>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

void write_file(const std::string& name, const std::string& content) {
    std::ofstream out(name, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + name + "'");
    out << content;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> make_grid(double lo, double hi, int steps) {
    if (steps < 2) throw ValidationError("scan needs at least 2 grid points");
    if (!(lo < hi)) throw ValidationError("scan interval is empty");
    std::vector<double> g;
    for (int i = 0; i < steps; ++i)
        g.push_back(lo + (hi - lo) * i / (steps - 1));
    return g;
}

int cmd_solve(const std::string& problem, double lambda, const std::string& x0_text,
              const std::string& out) {
    const auto t0 = std::chrono::steady_clock::now();
    LoadedProblem lp = load_problem(problem);
    const Vec x0 = parse_x0(x0_text, lp.def.n);
    if (!lp.def.inside_omega(x0))
        throw ValidationError("initial state outside the domain box Omega");

    RegulatedPath path = solve_ivp(lp.def, lambda, x0, lp.settings.solve);
    const double residual = residual_sie(lp.def, lambda, path, uniform_grid(lp.def.T, 101));

    std::ostringstream csv;
    write_path_csv(csv, path);
    write_file(out + ".csv", csv.str());

    Json j;
    j["residual_sie"] = residual;
    Json jumps = Json::array();
    for (const auto& jr : path.jumps()) {
        Json row;
        row["t"] = jr.time;
        Json left = Json::array(), right = Json::array();
        for (int i = 0; i < lp.def.n; ++i) {
            left.push_back(jr.left[i]);
            right.push_back(jr.right[i]);
        }
        row["left"] = left;
        row["right"] = right;
        jumps.push_back(row);
    }
    j["jumps"] = jumps;
    j["wall_time"] = seconds_since(t0);
    write_file(out + ".json", dump_json(j));

    std::cout << "solved on [0, " << lp.def.T << "]: residual_sie = " << residual << ", "
              << path.jumps().size() << " jump(s); wrote " << out << ".csv, " << out
              << ".json\n";
    return 0;
}

int cmd_periodic(const std::string& problem, double lambda, const std::string& x0_text,
                 double tol, int multi_start, const std::string& out) {
    LoadedProblem lp = load_problem(problem);
    const double shoot_tol = tol > 0 ? tol : lp.settings.shoot_tol;

    if (multi_start > 0) {
        const MultiStartReport rep =
            multi_start_shoot(lp.def, lambda, multi_start, shoot_tol, 50, lp.settings.solve);
        Json j;
        j["attempts"] = rep.attempts;
        j["failures"] = rep.failures;
        Json orbits = Json::array();
        for (const auto& o : rep.orbits) orbits.push_back(shoot_to_json(o));
        j["orbits"] = orbits;
        write_file(out + ".json", dump_json(j));
        std::cout << "multi-start over " << rep.attempts << " guess(es): "
                  << rep.orbits.size() << " distinct orbit(s), " << rep.failures
                  << " failure(s)";
        for (const auto& o : rep.orbits) {
            std::cout << "; x0 = [";
            for (int i = 0; i < o.x0_star.size(); ++i)
                std::cout << (i ? ", " : "") << o.x0_star[i];
            std::cout << "]";
        }
        std::cout << "; wrote " << out << ".json\n";
        return 0;
    }

    if (x0_text.empty())
        throw ValidationError("periodic needs --x0 (or --multi-start for grid exploration)");
    const Vec guess = parse_x0(x0_text, lp.def.n);
    const ShootResult res = shoot(lp.def, lambda, guess, shoot_tol, 50, lp.settings.solve);

    std::ostringstream csv;
    write_path_csv(csv, res.path);
    write_file(out + ".csv", csv.str());
    write_file(out + ".json", dump_json(shoot_to_json(res)));

    std::cout << "periodic orbit found in " << res.iterations
              << " Newton step(s): residual = " << res.residual << ", x0 = [";
    for (int i = 0; i < res.x0_star.size(); ++i)
        std::cout << (i ? ", " : "") << res.x0_star[i];
    std::cout << "]; wrote " << out << ".csv, " << out << ".json\n";
    return 0;
}

int cmd_monodromy(const std::string& problem, double lambda, const std::string& x0_text,
                  const std::string& out) {
    LoadedProblem lp = load_problem(problem);
    const Vec guess = parse_x0(x0_text, lp.def.n);
    const ShootResult res =
        shoot(lp.def, lambda, guess, lp.settings.shoot_tol, 50, lp.settings.solve);
    write_file(out + ".json", dump_json(monodromy_to_json(res.monodromy)));
    std::cout << "monodromy along the periodic branch: det(I - M) = "
              << res.monodromy.det_I_minus_M << "; wrote " << out << ".json\n";
    return 0;
}

int cmd_scan(const std::string& problem, double lo, double hi, int steps,
             const std::string& x0_text, double bisect_tol, const std::string& out) {
    LoadedProblem lp = load_problem(problem);
    const Vec seed = parse_x0(x0_text, lp.def.n);
    const BranchProvider branch =
        make_marching_branch(lp.def, seed, lp.settings.shoot_tol, 50, lp.settings.solve);
    const double bt = bisect_tol > 0 ? bisect_tol : lp.settings.bisect_tol;
    const ScanReport rep = scan(lp.def, branch, make_grid(lo, hi, steps), bt);

    write_file(out + ".json", dump_json(scan_to_json(rep)));
    std::ostringstream csv;
    write_scan_csv(csv, rep);
    write_file(out + ".csv", csv.str());

    std::cout << "scanned " << steps << " point(s) in [" << lo << ", " << hi << "]: "
              << rep.sign_change_intervals.size() << " sign change(s), "
              << rep.candidates.size() << " candidate(s)";
    for (const auto& c : rep.candidates) std::cout << ", lambda0 = " << c.lambda0;
    if (rep.total_degeneracy) std::cout << " [all grid indices degenerate]";
    std::cout << "; wrote " << out << ".json, " << out << ".csv\n";
    return 0;
}

int cmd_classify(const std::string& problem, double lambda, const std::string& x0_text,
                 const std::string& out) {
    LoadedProblem lp = load_problem(problem);
    const Vec seed = parse_x0(x0_text, lp.def.n);
    const BranchProvider branch =
        make_marching_branch(lp.def, seed, lp.settings.shoot_tol, 50, lp.settings.solve);
    const FredholmResult res = fredholm_classify(lp.def, lambda, branch);
    write_file(out + ".json", dump_json(fredholm_to_json(res)));
    std::cout << "linearized periodic problem at lambda = " << lambda << " is "
              << (res.invertible ? "invertible (uniquely solvable for every forcing)"
                                 : "degenerate with kernel dimension " +
                                       std::to_string(res.kernel_dim))
              << "; wrote " << out << ".json\n";
    return 0;
}

int cmd_criterion(const std::string& q_text, double T, double tol, const std::string& out) {
    const ExprPtr q = parse(q_text, 0);
    const CriterionVerdict v = lomtatidze_check(q, T, tol);
    write_file(out + ".json", dump_json(criterion_to_json(v)));
    std::cout << "Qminus = " << v.Qminus << ", Qplus = " << v.Qplus
              << ", lhs_factor = " << v.lhs_factor << ", product = " << v.product
              << ", 2/pi = " << v.two_over_pi << " -> "
              << (v.unique_trivial ? "unique_trivial" : "inconclusive") << "; wrote " << out
              << ".json\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Periodic solutions, monodromy and bifurcation analysis of nonlinear "
                 "measure differential equations Dx = f(lambda,x,t) + g(x,t) Dh"};
    app.require_subcommand(1);

    std::string problem, x0_text, out = "report", q_text;
    double lambda = 0.0, tol = 0.0, lo = 0.0, hi = 0.0, T = 0.0, bisect_tol = 0.0;
    int steps = 0, multi_start = 0;

    auto* solve = app.add_subcommand("solve", "solve the initial value problem");
    solve->add_option("--problem", problem, "registry name or problem JSON file")->required();
    solve->add_option("--lambda", lambda, "parameter value")->required();
    solve->add_option("--x0", x0_text, "initial state, comma separated")->required();
    solve->add_option("--out", out, "output file prefix");

    auto* periodic = app.add_subcommand("periodic", "find a periodic solution by shooting");
    periodic->add_option("--problem", problem)->required();
    periodic->add_option("--lambda", lambda)->required();
    periodic->add_option("--x0", x0_text, "shooting guess");
    periodic->add_option("--multi-start", multi_start,
                         "explore from an NxN.. grid of guesses over the domain box");
    periodic->add_option("--tol", tol, "shooting tolerance");
    periodic->add_option("--out", out);

    auto* monodromy = app.add_subcommand("monodromy", "monodromy along the periodic branch");
    monodromy->add_option("--problem", problem)->required();
    monodromy->add_option("--lambda", lambda)->required();
    monodromy->add_option("--x0", x0_text, "shooting guess for the branch")->required();
    monodromy->add_option("--out", out);

    auto* scan = app.add_subcommand("scan", "scan a lambda interval for bifurcation candidates");
    scan->add_option("--problem", problem)->required();
    scan->add_option("--lambda-min", lo)->required();
    scan->add_option("--lambda-max", hi)->required();
    scan->add_option("--steps", steps, "number of grid points")->required();
    scan->add_option("--x0", x0_text, "shooting seed for the branch")->required();
    scan->add_option("--bisect-tol", bisect_tol, "bisection width tolerance");
    scan->add_option("--out", out);

    auto* classify = app.add_subcommand("classify", "Fredholm alternative at a parameter value");
    classify->add_option("--problem", problem)->required();
    classify->add_option("--lambda", lambda)->required();
    classify->add_option("--x0", x0_text, "shooting seed for the branch")->required();
    classify->add_option("--out", out);

    auto* criterion = app.add_subcommand("criterion", "uniqueness criterion for y'' + q(t) y = 0");
    criterion->add_option("--q", q_text, "coefficient expression in t")->required();
    criterion->add_option("--T", T, "period")->required();
    criterion->add_option("--tol", tol, "guard band for the strict inequalities");
    criterion->add_option("--out", out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        if (solve->parsed()) return cmd_solve(problem, lambda, x0_text, out);
        if (periodic->parsed())
            return cmd_periodic(problem, lambda, x0_text, tol, multi_start, out);
        if (monodromy->parsed()) return cmd_monodromy(problem, lambda, x0_text, out);
        if (scan->parsed()) return cmd_scan(problem, lo, hi, steps, x0_text, bisect_tol, out);
        if (classify->parsed()) return cmd_classify(problem, lambda, x0_text, out);
        if (criterion->parsed())
            return cmd_criterion(q_text, T, tol > 0 ? tol : 1e-9, out);
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "expression error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
