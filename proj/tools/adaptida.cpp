#include <iostream>

#include "CLI11.hpp"
#include "cli/commands.hpp"

using namespace adaptida;
using namespace adaptida::cli;

namespace {

void add_run_flags(CLI::App* app, RunSettings& s) {
    app->add_option("--workers,-P", s.workers, "Number of workers")->check(CLI::PositiveNumber);
    app->add_option("--mode", s.mode, "sim (deterministic) or threads")->check(CLI::IsMember({"sim", "threads"}));
    app->add_option("--latency", s.latency, "Message latency in ticks (sim)")->check(CLI::NonNegativeNumber);
    app->add_option("--seed", s.seed, "Run seed");
    app->add_option("--budget", s.budget, "Shallow search expansion budget")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive parallel IDA* toolkit"};
    app.require_subcommand(1);

    GenOptions gen;
    auto* g = app.add_subcommand("gen", "Write artificial instance specs");
    g->add_option("--out", gen.out_dir, "Output directory")->required();
    g->add_option("--count", gen.count, "Number of instances");
    g->add_option("--seed", gen.seed, "Seed of the first instance");
    g->add_option("--d", gen.d, "Goal depths")->delimiter(',');
    g->add_option("--g", gen.g, "Goal positions")->delimiter(',');
    g->add_option("--b", gen.b, "Branching factors")->delimiter(',');
    g->add_option("--imbalance", gen.imbalance, "Imbalance values")->delimiter(',');
    g->add_option("--density", gen.density, "Extra goal densities")->delimiter(',');
    g->add_option("--herror", gen.herror, "Maximum heuristic errors")->delimiter(',');

    SweepOptions sweep;
    auto* sw = app.add_subcommand("sweep", "Time strategy settings and record training cases");
    sw->add_option("--instances", sweep.instances, "Instance files or directories")->required();
    sw->add_option("--axis", sweep.axis, "Strategy axis, or all")->required();
    sw->add_option("--grid", sweep.grid, "Values to try")->delimiter(',');
    sw->add_option("--base", sweep.base, "Config for the axes not swept");
    sw->add_option("--reps", sweep.repetitions, "Repetitions per setting");
    sw->add_option("--out", sweep.records_out, "Run records (JSONL, appended)");
    sw->add_option("--store", sweep.store, "Training store (JSONL, appended)");
    add_run_flags(sw, sweep.run);

    TrainOptions train;
    auto* tr = app.add_subcommand("train", "Induce a decision tree for one axis");
    tr->add_option("--store", train.store, "Training store")->required();
    tr->add_option("--axis", train.axis, "Strategy axis")->required();
    tr->add_flag("--filter", train.filter, "Keep only the most decisive cases");
    tr->add_option("--folds", train.folds, "Cross-validation folds");
    tr->add_option("--seed", train.seed, "Fold assignment seed");
    tr->add_option("--model", train.model_out, "Model file to write");
    tr->add_option("--out", train.report_out, "Cross-validation report (CSV)");

    AdviseOptions adv;
    auto* ad = app.add_subcommand("advise", "Recommend a configuration per instance");
    ad->add_option("--instances", adv.instances, "Instance files or directories")->required();
    ad->add_option("--model", adv.models, "Model files (repeatable)");
    ad->add_flag("--strict", adv.strict, "Reject advice that does not fit the machine");
    ad->add_option("--out", adv.out, "Output CSV");
    add_run_flags(ad, adv.run);

    SolveOptions solve;
    auto* so = app.add_subcommand("solve", "Profile, configure and solve");
    so->add_option("--instances", solve.instances, "Instance files or directories")->required();
    so->add_option("--model", solve.models, "Model files (repeatable)");
    so->add_option("--config", solve.config, "Fixed configuration instead of advice");
    so->add_flag("--strict", solve.strict, "Reject advice that does not fit the machine");
    so->add_option("--records", solve.records_out, "Run records (JSONL, appended)");
    so->add_option("--out", solve.out, "Output CSV");
    add_run_flags(so, solve.run);

    ReportOptions report;
    auto* re = app.add_subcommand("report", "Summarize run records");
    re->add_option("--records", report.records, "Run record files")->required();
    re->add_option("--out", report.out, "Approach table (CSV)");
    re->add_option("--detail", report.detail_out, "Per-instance table (CSV)");

    CurvesOptions curves;
    std::string balance = "balanced";
    auto* cu = app.add_subcommand("curves", "Tabulate analytic speedup models");
    cu->add_option("model", curves.model, "eq1, eq2, dts or fig6")->required();
    cu->add_option("--P", curves.params.P, "Processors");
    cu->add_option("--b", curves.params.b, "Branching factor");
    cu->add_option("--d", curves.params.d, "Goal depth");
    cu->add_option("--x", curves.params.x, "Distribution depth (-1 = smallest covering P)");
    cu->add_option("--balance", balance, "balanced or exponential")->check(CLI::IsMember({"balanced", "exponential"}));
    cu->add_option("--ratio", curves.params.ratio, "Share ratio for exponential imbalance");
    cu->add_option("--from", curves.from, "First goal position");
    cu->add_option("--to", curves.to, "Last goal position");
    cu->add_option("--step", curves.step, "Goal position step");
    cu->add_option("--depths", curves.depths, "Depths (eq1)")->delimiter(',');
    cu->add_option("--branching", curves.branching, "Branching factors (eq2)")->delimiter(',');
    cu->add_option("--out", curves.out, "Output CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    curves.params.balance = balance == "balanced" ? Balance::Balanced : Balance::ExponentialImbalance;

    try {
        if (*g)
            cmd_gen(gen, std::cout, std::cerr);
        else if (*sw)
            cmd_sweep(sweep, std::cout, std::cerr);
        else if (*tr)
            cmd_train(train, std::cout, std::cerr);
        else if (*ad)
            cmd_advise(adv, std::cout, std::cerr);
        else if (*so)
            cmd_solve(solve, std::cout, std::cerr);
        else if (*re)
            cmd_report(report, std::cout, std::cerr);
        else if (*cu)
            cmd_curves(curves, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return 0;
}
