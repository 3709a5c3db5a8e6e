#include "ovp/runner.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "ovp/errors.hpp"
#include "ovp/regularity.hpp"
#include "ovp/report_io.hpp"
#include "ovp/taut_string.hpp"
#include "ovp/theory.hpp"

namespace fs = std::filesystem;

namespace ovp {

namespace {

struct RunContext {
    Scenario sc;
    std::string out_dir;
    std::uint64_t seed;
    RunFlags flags;
};

RunContext make_context(const Scenario& sc, const RunFlags& flags) {
    RunContext ctx{sc, flags.out_dir.value_or(sc.out_dir), flags.seed.value_or(sc.seed),
                   flags};
    fs::create_directories(ctx.out_dir);
    write_manifest(ctx.out_dir, sc.source_path, sc.raw_text, ctx.seed,
                   flags.command_line);
    return ctx;
}

SolveOptions solve_options(const RunContext& ctx) {
    SolveOptions so;
    so.tol = ctx.sc.tol;
    so.max_iter = ctx.sc.max_iter;
    so.seed = ctx.seed;
    return so;
}

// Perturb the converged iterate at the free node nearest the domain midpoint,
// clipped back under g so the perturbed candidate stays admissible.
GridFunction inject_perturbation(const GridFunction& u, const ObstaclePair& obs,
                                 double eps) {
    GridFunction w = u;
    const double mid = 0.5 * (w.a() + w.b());
    size_t best = 1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (size_t i = 1; i + 1 < w.size(); ++i) {
        const double x = w.node(i);
        const bool free_node = w.value(i) > obs.f()(x) + 1e-9 &&
                               w.value(i) < obs.g()(x) - 1e-9;
        if (free_node && std::abs(x - mid) < best_dist) {
            best_dist = std::abs(x - mid);
            best = i;
        }
    }
    const double x = w.node(best);
    w.value(best) = std::min(w.value(best) + eps, obs.g()(x));
    return w;
}

void write_solution_csv(const RunContext& ctx, const GridFunction& u) {
    CsvWriter csv(ctx.out_dir + "/solution.csv");
    csv.header({"x", "u", "f", "g", "slope"});
    ObstaclePair obs = build_obstacles(ctx.sc);
    for (size_t i = 0; i < u.size(); ++i) {
        const double x = u.node(i);
        // slope column: slope of the cell left of node i (first cell for i=0)
        const double slope = u.cell_slope(i == 0 ? 0 : i - 1);
        csv.field(x).field(u.value(i)).field(obs.f()(x)).field(obs.g()(x)).field(slope);
        csv.end_row();
    }
}

int run_solve(const RunContext& ctx) {
    ProblemSpec spec = build_problem(ctx.sc);
    SolveResult sol = solve(spec, solve_options(ctx));
    write_solution_csv(ctx, sol.u);
    std::ofstream energy(ctx.out_dir + "/energy.txt");
    energy << format_double(sol.energy) << "\n";
    std::cout << "solve: energy=" << format_double(sol.energy)
              << " iterations=" << sol.iterations
              << " kkt=" << format_double(sol.kkt_residual)
              << (sol.converged ? "" : " NOT-CONVERGED") << "\n";
    return sol.converged ? 0 : 3;
}

void write_report_txt(const RunContext& ctx, const RegularityReport& rep,
                      const TheoryConstants& tc) {
    std::ofstream out(ctx.out_dir + "/report.txt");
    out << "A1 (graph in band): " << (rep.a1_ok ? "ok" : "VIOLATED") << "\n";
    out << "A2 (energy <= c):   " << (rep.a2_ok ? "ok" : "VIOLATED") << "\n";
    out << "energy J = " << format_double(rep.energy) << "  c = " << format_double(tc.c)
        << "\n";
    out << "N = " << format_double(tc.N) << "  ||u'||_2 = " << format_double(rep.slope_l2)
        << "  delta0 = " << format_double(tc.delta0) << "\n";
    out << "A3: pairs=" << rep.a3.pairs_checked << " min_slack="
        << format_double(rep.a3.min_slack) << " violations=" << rep.a3.violations.size()
        << "\n";
    out << "P3: checked=" << rep.p3.checked << " vacuous=" << rep.p3.vacuous
        << " extrapolated=" << rep.p3.extrapolated
        << " violations=" << rep.p3.violations
        << " max_ratio=" << format_double(rep.p3.max_ratio) << "\n";
    out << "energy estimate: checked=" << rep.energy_est.checked
        << " vacuous=" << rep.energy_est.vacuous
        << " violations=" << rep.energy_est.violations
        << " min_slack=" << format_double(rep.energy_est.min_slack) << "\n";
    out << "dini(H) per k:";
    for (const auto& e : rep.dini_h) out << " k=" << e.k << ":" << to_string(e.ladder.verdict);
    out << "\n";
    out << "condition suite: " << to_string(rep.dini_obstacles.verdict) << "\n";
    out << "singular candidates: " << rep.singular_candidates.size() << "\n";
    for (const auto& c : rep.singular_candidates)
        out << "  x=" << format_double(c.x) << " growth=" << format_double(c.total_growth)
            << "\n";
    for (const auto& note : rep.verdict_notes) out << "note: " << note << "\n";
}

void write_report_csv(const RunContext& ctx, const RegularityReport& rep) {
    CsvWriter csv(ctx.out_dir + "/report.csv");
    csv.header({"check", "status", "detail", "value"});
    csv.field("A1").field(rep.a1_ok ? "ok" : "violated").field("graph in band").field(0.0);
    csv.end_row();
    csv.field("A2").field(rep.a2_ok ? "ok" : "violated").field("energy bound").field(
        rep.energy);
    csv.end_row();
    csv.field("A3")
        .field(rep.a3.violations.empty() ? "ok" : "violated")
        .field("min slack over " + std::to_string(rep.a3.pairs_checked) + " pairs")
        .field(rep.a3.min_slack);
    csv.end_row();
    csv.field("P3")
        .field(rep.p3.violations == 0 ? "ok" : "violated")
        .field("vacuous " + std::to_string(rep.p3.vacuous) + "/" +
               std::to_string(rep.p3.checked))
        .field(rep.p3.max_ratio);
    csv.end_row();
    csv.field("energy_estimate")
        .field(rep.energy_est.violations == 0 ? "ok" : "violated")
        .field("vacuous " + std::to_string(rep.energy_est.vacuous) + "/" +
               std::to_string(rep.energy_est.checked))
        .field(rep.energy_est.min_slack);
    csv.end_row();
    csv.field("dini_suite")
        .field(to_string(rep.dini_obstacles.verdict))
        .field("obstacle condition suite")
        .field(0.0);
    csv.end_row();
    csv.field("norm_bound")
        .field(rep.slope_l2 <= rep.n_bound + 1e-6 ? "ok" : "violated")
        .field("||u'||_2 vs N")
        .field(rep.slope_l2);
    csv.end_row();
    csv.field("singular_set")
        .field(rep.singular_candidates.empty() ? "empty" : "candidates")
        .field(std::to_string(rep.singular_candidates.size()) + " candidates")
        .field(static_cast<double>(rep.singular_candidates.size()));
    csv.end_row();
}

int run_verify(const RunContext& ctx) {
    ProblemSpec spec = build_problem(ctx.sc);
    SolveResult sol = solve(spec, solve_options(ctx));
    if (ctx.flags.inject_perturbation)
        sol.u = inject_perturbation(sol.u, spec.obstacles, *ctx.flags.inject_perturbation);
    sol.energy = functional(spec.lagrangian, sol.u);

    TheoryOptions topt;
    topt.k_grid = ctx.sc.k_grid;
    topt.seed = ctx.seed;
    TheoryConstants tc = build_theory_constants(spec, sol.energy, topt);
    DeltaPipeline pipe(tc, obstacle_omega(spec.obstacles, tc.C0, tc.alpha0));

    ReportOptions ropt;
    ropt.seed = ctx.seed;
    ropt.a3.delta0 = tc.delta0;
    ropt.a3.scales = ctx.sc.scales;
    ropt.a3.pairs_per_scale = ctx.sc.pairs_per_scale;
    ropt.p3.max_width = tc.delta0 / std::exp(1.0);
    ropt.k_grid = ctx.sc.k_grid;
    ropt.eps_ladder = ctx.sc.eps_ladder;
    ropt.thetas = ctx.sc.thetas;
    ropt.refinement_ladder = ctx.sc.refinement_ladder;
    ropt.singular.solve = solve_options(ctx);
    RegularityReport rep = tonelli_report(spec, sol, tc, pipe, ropt);

    write_report_txt(ctx, rep, tc);
    write_report_csv(ctx, rep);
    std::cout << "verify: A1=" << (rep.a1_ok ? "ok" : "violated")
              << " A2=" << (rep.a2_ok ? "ok" : "violated")
              << " A3_violations=" << rep.a3.violations.size()
              << " P3_violations=" << rep.p3.violations
              << " singular=" << rep.singular_candidates.size() << "\n";
    if (!sol.converged && !ctx.flags.inject_perturbation) return 3;
    return rep.violations_present() || !rep.a1_ok || !rep.a2_ok ? 4 : 0;
}

int run_theory(const RunContext& ctx) {
    ProblemSpec spec = build_problem(ctx.sc);
    SolveResult sol = solve(spec, solve_options(ctx));
    TheoryOptions topt;
    topt.k_grid = ctx.sc.k_grid;
    topt.seed = ctx.seed;
    TheoryConstants tc = build_theory_constants(spec, sol.energy, topt);
    DeltaPipeline pipe(tc, obstacle_omega(spec.obstacles, tc.C0, tc.alpha0));

    {
        // scalar constants first (k empty), then the per-k table rows
        CsvWriter csv(ctx.out_dir + "/constants.csv");
        csv.header({"name", "k", "value"});
        auto row = [&](const std::string& n, double v) {
            csv.field(n).field(std::string()).field(v);
            csv.end_row();
        };
        row("mu", tc.mu);
        row("c", tc.c);
        row("c1", tc.c1);
        row("M_growth", tc.M_growth);
        row("N", tc.N);
        row("delta0", tc.delta0);
        row("delta0_hat", tc.delta0_hat);
        row("C0", tc.C0);
        row("alpha0", tc.alpha0);
        row("K_u_lo", tc.K_u_lo);
        row("K_u_hi", tc.K_u_hi);
        row("K0_u_lo", tc.K0_u_lo);
        row("K0_u_hi", tc.K0_u_hi);
        for (const auto& r : tc.per_k) {
            auto krow = [&](const std::string& n, double v) {
                csv.field(n).field(r.k).field(v);
                csv.end_row();
            };
            krow("c_k", r.c_k);
            krow("M_k", r.M_k);
            krow("alpha_k", r.alpha_k);
            krow("C1_k", r.C1_k);
            krow("C2_k", r.C2_k);
        }
    }
    {
        PipelineTable tab = tabulate_pipeline(pipe);
        CsvWriter csv(ctx.out_dir + "/pipeline.csv");
        csv.header({"k", "eps", "delta1", "delta2", "Delta", "omega_bar", "eps_delta",
                    "delta"});
        for (size_t i = 0; i < tab.ks.size(); ++i)
            for (size_t j = 0; j < tab.eps_big.size(); ++j) {
                csv.field(tab.ks[i])
                    .field(tab.eps_big[j])
                    .field(tab.delta1[i][j])
                    .field(tab.delta2[i][j])
                    .field(tab.big[i][j])
                    .field(tab.omega_bar_tab[i][j])
                    .field(tab.eps_delta[j])
                    .field(tab.little[i][j]);
                csv.end_row();
            }
    }
    std::cout << "theory: N=" << format_double(tc.N)
              << " delta0=" << format_double(tc.delta0) << " C0=" << format_double(tc.C0)
              << " alpha0=" << tc.alpha0 << "\n";
    return sol.converged ? 0 : 3;
}

int run_dini(const RunContext& ctx) {
    ObstaclePair obs = build_obstacles(ctx.sc);
    ProblemSpec spec = build_problem(ctx.sc);
    SolveResult sol = solve(spec, solve_options(ctx));
    TheoryOptions topt;
    topt.k_grid = ctx.sc.k_grid;
    topt.seed = ctx.seed;
    TheoryConstants tc = build_theory_constants(spec, sol.energy, topt);

    Condition12Options copt;
    const auto& row0 = tc.row_for(0.0);
    copt.thetas = {0.25 * tc.alpha0 * row0.alpha_k, 0.25 * tc.alpha0, 0.5 * tc.alpha0};
    for (double t : ctx.sc.thetas) copt.thetas.push_back(t);
    std::sort(copt.thetas.begin(), copt.thetas.end());
    copt.thetas.erase(std::unique(copt.thetas.begin(), copt.thetas.end()),
                      copt.thetas.end());
    if (!ctx.sc.eps_ladder.empty()) copt.eps_ladder = ctx.sc.eps_ladder;
    copt.dini.throw_on_underflow = false;
    Condition12Report rep = condition_1_2_suite(obs, tc.N, copt);

    CsvWriter csv(ctx.out_dir + "/dini.csv");
    csv.header({"h", "theta", "eps", "value", "trusted", "verdict", "fitted_slope",
                "analytic_exponent"});
    for (const auto& e : rep.entries)
        for (size_t i = 0; i < e.ladder.eps.size(); ++i) {
            csv.field(e.h)
                .field(e.theta)
                .field(e.ladder.eps[i])
                .field(e.ladder.values[i])
                .field(std::string(e.ladder.trusted[i] ? "yes" : "no"))
                .field(to_string(e.ladder.verdict))
                .field(e.ladder.fitted_slope)
                .field(e.analytic_exponent);
            csv.end_row();
        }
    std::cout << "dini: suite verdict " << to_string(rep.verdict) << "\n";
    return sol.converged ? 0 : 3;
}

int run_plot(const RunContext& ctx) {
    ProblemSpec spec = build_problem(ctx.sc);
    SolveResult sol = solve(spec, solve_options(ctx));
    const GridFunction& u = sol.u;
    PlotSeries su{"u", u.nodes(), u.values()};
    PlotSeries sf{"f", {}, {}}, sg{"g", {}, {}};
    for (size_t i = 0; i < u.size(); ++i) {
        sf.x.push_back(u.node(i));
        sf.y.push_back(spec.obstacles.f()(u.node(i)));
        sg.x.push_back(u.node(i));
        sg.y.push_back(spec.obstacles.g()(u.node(i)));
    }
    write_svg_plot(ctx.out_dir + "/solution.svg", "solution and obstacles", {su, sf, sg});

    TheoryOptions topt;
    topt.k_grid = ctx.sc.k_grid;
    topt.seed = ctx.seed;
    TheoryConstants tc = build_theory_constants(spec, sol.energy, topt);
    DeltaPipeline pipe(tc, obstacle_omega(spec.obstacles, tc.C0, tc.alpha0));
    PipelineTable tab = tabulate_pipeline(pipe);
    std::vector<PlotSeries> curves;
    for (size_t i = 0; i < tab.ks.size(); i += 5) {
        PlotSeries s{"Delta k=" + format_double(tab.ks[i]), {}, {}};
        for (size_t j = 1; j < tab.eps_big.size(); ++j) {
            s.x.push_back(tab.eps_big[j]);
            s.y.push_back(tab.big[i][j]);
        }
        curves.push_back(std::move(s));
    }
    write_svg_plot(ctx.out_dir + "/pipeline.svg", "Delta(k, eps)", curves, true, true);
    std::cout << "plot: wrote solution.svg and pipeline.svg\n";
    return sol.converged ? 0 : 3;
}

int run_sweep(const RunContext& ctx) {
    if (ctx.sc.sweep_params.empty()) {
        std::cerr << "sweep: no [sweep] parameters in the scenario\n";
        return 1;
    }
    // Cartesian product of the sweep parameters.
    std::vector<std::map<std::string, std::string>> points{{}};
    for (const auto& [key, values] : ctx.sc.sweep_params) {
        std::vector<std::map<std::string, std::string>> next;
        for (const auto& pt : points)
            for (const auto& v : values) {
                auto q = pt;
                q[key] = v;
                next.push_back(std::move(q));
            }
        points = std::move(next);
    }

    std::atomic<int> worst{0};
    std::atomic<size_t> cursor{0};
    const int jobs = std::max(1, ctx.flags.jobs);
    auto worker = [&]() {
        for (;;) {
            const size_t i = cursor.fetch_add(1);
            if (i >= points.size()) return;
            // Rewrite the scenario text with the point's key = value lines
            // appended to their sections ([section.key] syntax: section.key).
            std::string text = ctx.sc.raw_text;
            for (const auto& [key, value] : points[i]) {
                const size_t dot = key.find('.');
                const std::string section = dot == std::string::npos ? "problem"
                                                                     : key.substr(0, dot);
                const std::string name = dot == std::string::npos ? key
                                                                  : key.substr(dot + 1);
                text += "\n[" + section + "]\n" + name + " = " + value + "\n";
            }
            char sub[32];
            std::snprintf(sub, sizeof sub, "point_%04zu", i);
            try {
                Scenario sc = parse_scenario_text(text, ctx.sc.source_path + "#" + sub);
                RunFlags flags = ctx.flags;
                flags.out_dir = ctx.out_dir + "/" + sub;
                flags.jobs = 1;
                const int rc = run_on_scenario(ctx.sc.sweep_action, sc, flags);
                int expect = worst.load();
                while (rc > expect && !worst.compare_exchange_weak(expect, rc)) {}
            } catch (const Error& e) {
                std::cerr << "sweep point " << sub << " failed: " << e.what() << "\n";
                int expect = worst.load();
                while (2 > expect && !worst.compare_exchange_weak(expect, 2)) {}
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    std::cout << "sweep: " << points.size() << " points done\n";
    return worst.load();
}

}  // namespace

int run_on_scenario(const std::string& name, const Scenario& scenario,
                    const RunFlags& flags) {
    RunContext ctx = make_context(scenario, flags);
    if (scenario.fd_warning && (name == "solve" || name == "verify" || name == "theory"))
        std::cerr << "warning: L_v/L_vv not supplied; finite-difference fallback "
                     "(reduced accuracy)\n";
    if (name == "solve") return run_solve(ctx);
    if (name == "verify") return run_verify(ctx);
    if (name == "theory") return run_theory(ctx);
    if (name == "dini") return run_dini(ctx);
    if (name == "sweep") return run_sweep(ctx);
    if (name == "plot") return run_plot(ctx);
    std::cerr << "unknown subcommand '" << name << "'\n";
    return 1;
}

int run_subcommand(const std::string& name, const std::string& scenario_path,
                   const RunFlags& flags) {
    try {
        Scenario sc = parse_scenario(scenario_path);
        return run_on_scenario(name, sc, flags);
    } catch (const ParseError& e) {
        std::cerr << "parse error (line " << e.line << "): " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "validation error [" << e.field << "]: " << e.what() << "\n";
        return 2;
    } catch (const MaxIterationsError& e) {
        std::cerr << "solver: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace ovp
