#include "cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>

#include "adaptida/analytics.hpp"

namespace adaptida::cli {
namespace {

const std::map<std::string, std::string>& axis_keys() {
    static const std::map<std::string, std::string> keys{
        {"distribution", "dist"}, {"clusters", "clusters"}, {"load_balancing", "lb"},
        {"polling", "poll"},      {"fraction", "frac"},     {"donate_from", "end"},
        {"trigger", "trigger"},   {"ordering", "order"},
    };
    return keys;
}

std::string fmt(double v) {
    if (std::isnan(v))
        return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Writes to the named file, or to `fallback` when the name is empty.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_)
                throw DataError("cannot write '" + path + "'");
            out_ = &file_;
        }
    }
    std::ostream& operator*() { return *out_; }

private:
    std::ofstream file_;
    std::ostream* out_;
};

std::size_t count_lines(const std::string& path) {
    std::ifstream in(path);
    std::size_t n = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty())
            ++n;
    return n;
}

std::vector<AxisModel> load_models(const std::vector<std::string>& paths) {
    std::vector<AxisModel> models;
    for (const auto& p : paths)
        models.push_back(parse_model(read_text(p)));
    return models;
}

void warn_threads(const RunSettings& s, std::ostream& err) {
    if (s.mode == "threads")
        err << "warning: threads mode timings are not reproducible\n";
}

}  // namespace

ExecutionMode RunSettings::execution() const {
    if (mode == "sim")
        return ExecutionMode::sim(latency, seed);
    if (mode == "threads")
        return ExecutionMode::threads(seed);
    throw UsageError("mode must be sim or threads, got '" + mode + "'");
}

std::string RunSettings::architecture() const {
    return mode + "-P" + std::to_string(workers);
}

StrategyConfig apply_axis(StrategyConfig base, const std::string& axis, const std::string& value) {
    if (axis == "all")
        return parse_config(value);
    const auto it = axis_keys().find(axis);
    if (it == axis_keys().end())
        throw UsageError("unknown axis '" + axis + "'");
    return parse_config(to_string(base) + ";" + it->second + "=" + value);
}

std::vector<std::string> default_grid(const std::string& axis, int workers) {
    if (axis == "distribution")
        return {"KR", "BF"};
    if (axis == "clusters") {
        std::vector<std::string> out;
        for (int c = 1; c <= workers; c *= 2)
            out.push_back(std::to_string(c));
        return out;
    }
    if (axis == "load_balancing")
        return {"on", "off"};
    if (axis == "polling")
        return {"neighbor", "random"};
    if (axis == "fraction")
        return {"0.1", "0.3", "0.5"};
    if (axis == "donate_from")
        return {"head", "tail"};
    if (axis == "trigger")
        return {"0", "2", "8"};
    if (axis == "ordering")
        return {"fixed", "local", "toida"};
    throw UsageError("axis '" + axis + "' needs an explicit --grid");
}

StrategyConfig resolve_ordering(StrategyConfig config, const ShallowTrace& trace, int operator_count) {
    if (config.ordering.kind == OrderKind::Toida && config.ordering.toida_scores.empty())
        config.ordering.toida_scores = toida_scores_from_trace(trace, operator_count);
    return config;
}

RunRecord run_config(const Instance& inst, const StrategyConfig& config, const RunSettings& settings,
                     const ShallowTrace& trace, std::uint64_t serial_nodes) {
    RunRecord r;
    r.instance = inst.id;
    r.config = to_string(config);
    r.mode = settings.mode;
    r.workers = settings.workers;
    r.latency = settings.mode == "sim" ? settings.latency : 0;
    r.seed = settings.seed;
    r.serial_nodes = serial_nodes;
    const ExecutionMode mode = settings.execution();
    try {
        with_problem(inst, [&](const auto& problem) {
            const StrategyConfig resolved = resolve_ordering(config, trace, problem.operator_count());
            RunOptions options;
            options.serial_nodes = serial_nodes;
            const EngineReport rep = run_parallel(problem, resolved, settings.workers, mode, options);
            r.cost = rep.solution.cost;
            r.time = mode.kind == ExecutionMode::Kind::DeterministicSim ? static_cast<double>(rep.makespan)
                                                                        : rep.wall_seconds;
            r.speedup = rep.speedup;
            r.total_expanded = rep.total_expanded;
        });
    } catch (const ConfigError& e) {
        r.error = e.what();
    }
    return r;
}

std::string format_model(const AxisModel& m) {
    return "axis " + m.axis + "\n" + m.tree.serialize() + "\n";
}

AxisModel parse_model(const std::string& text) {
    std::istringstream in(text);
    std::string header;
    std::getline(in, header);
    if (header.rfind("axis ", 0) != 0)
        throw DataError("model file must start with 'axis <name>'");
    AxisModel m;
    m.axis = header.substr(5);
    if (m.axis != "all" && !is_known_axis(m.axis))
        throw DataError("model names unknown axis '" + m.axis + "'");
    std::ostringstream rest;
    rest << in.rdbuf();
    m.tree = DecisionTree::parse(rest.str());
    return m;
}

Advice advise(const Instance& inst, const std::vector<AxisModel>& models, const RunSettings& settings,
              bool strict) {
    Advice a;
    StrategyConfig config;
    with_problem(inst, [&](const auto& problem) {
        const ShallowTrace trace = shallow_search(problem, settings.budget);
        a.profiling_nodes = trace.total_expanded;
        a.features = extract_features(trace);
        if (trace.goal_found) {
            a.solved = trace.goal_found;
            return;
        }
        const std::string arch = settings.architecture();
        // A whole-configuration model goes first; single-axis models refine it.
        std::vector<const AxisModel*> ordered;
        for (const auto& m : models)
            if (m.axis == "all")
                ordered.push_back(&m);
        for (const auto& m : models)
            if (m.axis != "all")
                ordered.push_back(&m);
        for (const AxisModel* m : ordered)
            config = apply_axis(config, m->axis, m->tree.classify(a.features, arch));
        config = resolve_ordering(config, trace, problem.operator_count());
    });
    if (a.solved)
        return a;
    try {
        validate_config(config, settings.workers);
    } catch (const ConfigError&) {
        if (strict)
            throw;
        // Out-of-range advice, e.g. more clusters than workers: clamp it.
        config.clusters = std::clamp(config.clusters, 1, settings.workers);
        validate_config(config, settings.workers);
    }
    a.config = config;
    return a;
}

void cmd_gen(const GenOptions& o, std::ostream& out, std::ostream&) {
    if (o.out_dir.empty())
        throw UsageError("gen needs --out");
    if (o.count < 1)
        throw UsageError("--count must be at least 1");
    if (o.d.empty() || o.g.empty() || o.b.empty() || o.imbalance.empty() || o.density.empty() ||
        o.herror.empty())
        throw UsageError("every generator list needs at least one value");
    std::filesystem::create_directories(o.out_dir);
    auto pick = [](const auto& v, int i) { return v[static_cast<std::size_t>(i) % v.size()]; };
    std::vector<ArtificialSpec> specs;
    for (int i = 0; i < o.count; ++i) {
        ArtificialSpec s;
        s.d = pick(o.d, i);
        s.g = pick(o.g, i);
        s.b = pick(o.b, i);
        s.imbalance = pick(o.imbalance, i);
        s.density = pick(o.density, i);
        s.herror = pick(o.herror, i);
        s.seed = o.seed + static_cast<std::uint64_t>(i);
        s.validate();  // nothing is written when any spec is out of range
        specs.push_back(s);
    }
    for (int i = 0; i < o.count; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "inst_%03d.spec", i);
        const auto path = (std::filesystem::path(o.out_dir) / name).string();
        write_spec_file(path, specs[static_cast<std::size_t>(i)]);
        out << path << "\n";
    }
}

void cmd_sweep(const SweepOptions& o, std::ostream& out, std::ostream& err) {
    if (o.axis.empty())
        throw UsageError("sweep needs --axis");
    if (o.axis != "all" && !is_known_axis(o.axis))
        throw UsageError("unknown axis '" + o.axis + "'");
    if (o.repetitions < 1)
        throw UsageError("--reps must be at least 1");
    if (o.run.workers < 1)
        throw UsageError("--workers must be at least 1");
    o.run.execution();
    const std::vector<std::string> grid = o.grid.empty() ? default_grid(o.axis, o.run.workers) : o.grid;
    const StrategyConfig base = o.base.empty() ? StrategyConfig{} : parse_config(o.base);
    const auto instances = load_instances(o.instances);
    warn_threads(o.run, err);

    std::uint64_t sequence = o.records_out.empty() ? 0 : count_lines(o.records_out);
    std::vector<std::string> record_lines;
    std::vector<TrainingCase> cases;
    out << "instance,approach,cost,time,speedup,error\n";
    for (const Instance& inst : instances) {
        ShallowTrace trace;
        std::uint64_t serial = 0;
        with_problem(inst, [&](const auto& problem) {
            trace = shallow_search(problem, o.run.budget);
            serial = serial_idastar(problem, OrderPolicy{}).total_expanded;
        });
        const ProblemFeatures features = extract_features(trace);
        std::map<std::string, double> timings;
        for (const std::string& value : grid) {
            const StrategyConfig config = apply_axis(base, o.axis, value);
            double total = 0.0;
            bool ok = true;
            for (int rep = 0; rep < o.repetitions; ++rep) {
                RunSettings s = o.run;
                s.seed = o.run.seed + static_cast<std::uint64_t>(rep);
                RunRecord r;
                try {
                    r = run_config(inst, config, s, trace, serial);
                } catch (const EngineStall& e) {
                    r.instance = inst.id;
                    r.config = to_string(config);
                    r.mode = s.mode;
                    r.workers = s.workers;
                    r.seed = s.seed;
                    r.error = e.what();
                }
                r.approach = value;
                r.sequence = sequence++;
                out << r.instance << "," << value << "," << r.cost << "," << fmt(r.time) << ","
                    << fmt(r.speedup) << "," << r.error << "\n";
                if (!r.error.empty()) {
                    err << "warning: " << inst.id << " " << o.axis << "=" << value << ": " << r.error << "\n";
                    ok = false;
                }
                total += r.time;
                record_lines.push_back(to_json_line(r));
            }
            if (ok)
                timings[value] = total / o.repetitions;
        }
        if (timings.size() >= 2)
            cases.push_back(label_cases(timings, features, o.axis, o.run.architecture()));
        else
            err << "warning: " << inst.id << " has fewer than two successful settings; no training case\n";
    }
    if (!o.records_out.empty())
        append_lines(o.records_out, record_lines);
    if (!o.store.empty()) {
        const std::size_t dup = append_cases(o.store, cases);
        if (dup > 0)
            err << "warning: skipped " << dup << " duplicate training case" << (dup == 1 ? "" : "s") << "\n";
    }
}

void cmd_train(const TrainOptions& o, std::ostream& out, std::ostream& err) {
    if (o.store.empty() || o.axis.empty())
        throw UsageError("train needs --store and --axis");
    Dataset data = read_store(o.store, o.axis);
    if (data.cases.empty())
        throw DataError("store '" + o.store + "' holds no cases for axis '" + o.axis + "'");
    if (o.filter)
        data = variance_filter(data);
    const DecisionTree tree = induce_tree(data);
    if (!o.model_out.empty()) {
        std::ofstream f(o.model_out);
        if (!f)
            throw DataError("cannot write '" + o.model_out + "'");
        f << format_model({o.axis, tree});
    }
    err << "trained on " << data.cases.size() << " cases: " << tree.leaf_count() << " leaves, depth "
        << tree.depth() << "\n";

    Sink sink(o.report_out, out);
    std::ostream& rep = *sink;
    rep << "method,mean_error,t,p\n";
    if (static_cast<std::size_t>(o.folds) > data.cases.size()) {
        err << "warning: " << data.cases.size() << " cases are too few for " << o.folds
            << "-fold cross-validation; report skipped\n";
        return;
    }
    const CrossValidation cv = cross_validate(data, o.folds, o.seed);
    for (std::size_t m = 0; m < cv.methods.size(); ++m) {
        rep << cv.methods[m] << "," << fmt(cv.mean_error[m]) << ",";
        if (m == 0) {
            rep << ",\n";
            continue;
        }
        TTest t{0.0, 1.0};
        try {
            t = paired_t_test(cv.fold_errors[m], cv.fold_errors[0]);
        } catch (const DataError&) {
            // identical fold errors: no difference to test
        }
        rep << fmt(t.t) << "," << fmt(t.p) << "\n";
    }
}

void cmd_advise(const AdviseOptions& o, std::ostream& out, std::ostream&) {
    const auto models = load_models(o.models);
    const auto instances = load_instances(o.instances);
    Sink sink(o.out, out);
    std::ostream& os = *sink;
    os << "instance,config," << features_csv_header() << "\n";
    for (const Instance& inst : instances) {
        const Advice a = advise(inst, models, o.run, o.strict);
        os << inst.id << "," << (a.solved ? std::string(kSolvedSentinel) : to_string(a.config)) << ","
           << to_csv(a.features) << "\n";
    }
}

void cmd_solve(const SolveOptions& o, std::ostream& out, std::ostream& err) {
    if (!o.config.empty() && !o.models.empty())
        throw UsageError("solve takes either --config or --model, not both");
    const auto models = load_models(o.models);
    const auto instances = load_instances(o.instances);
    o.run.execution();
    warn_threads(o.run, err);
    std::uint64_t sequence = o.records_out.empty() ? 0 : count_lines(o.records_out);
    std::vector<std::string> lines;
    Sink sink(o.out, out);
    std::ostream& os = *sink;
    os << "instance,approach,config,cost,time,speedup\n";
    for (const Instance& inst : instances) {
        std::uint64_t serial = 0;
        ShallowTrace trace;
        with_problem(inst, [&](const auto& problem) {
            serial = serial_idastar(problem, OrderPolicy{}).total_expanded;
            trace = shallow_search(problem, o.run.budget);
        });
        RunRecord r;
        if (!o.config.empty()) {
            r = run_config(inst, parse_config(o.config), o.run, trace, serial);
            r.approach = "fixed";
            if (!r.error.empty())
                throw ConfigError(r.error);
        } else {
            const Advice a = advise(inst, models, o.run, o.strict);
            if (a.solved) {
                r.instance = inst.id;
                r.config = kSolvedSentinel;
                r.mode = o.run.mode;
                r.workers = o.run.workers;
                r.latency = o.run.latency;
                r.seed = o.run.seed;
                r.cost = a.solved->cost;
                r.time = static_cast<double>(a.profiling_nodes);
                r.serial_nodes = serial;
                r.speedup = static_cast<double>(serial) / static_cast<double>(std::max<std::uint64_t>(1, a.profiling_nodes));
                r.total_expanded = a.profiling_nodes;
            } else {
                r = run_config(inst, a.config, o.run, trace, serial);
                if (!r.error.empty())
                    throw ConfigError(r.error);
            }
            r.approach = "eureka";
        }
        r.sequence = sequence++;
        os << r.instance << "," << r.approach << "," << r.config << "," << r.cost << "," << fmt(r.time) << ","
           << fmt(r.speedup) << "\n";
        lines.push_back(to_json_line(r));
    }
    if (!o.records_out.empty())
        append_lines(o.records_out, lines);
}

void cmd_report(const ReportOptions& o, std::ostream& out, std::ostream& err) {
    if (o.records.empty())
        throw UsageError("report needs --records");
    std::vector<RunRecord> records;
    for (const auto& p : o.records) {
        auto r = read_records(p);
        records.insert(records.end(), r.begin(), r.end());
    }
    struct Acc {
        std::size_t runs = 0, failures = 0;
        double time = 0.0, speedup = 0.0;
        std::vector<double> times;
    };
    std::map<std::string, Acc> by_approach;
    std::map<std::string, std::map<std::string, Acc>> by_instance;
    for (const RunRecord& r : records) {
        for (Acc* a : {&by_approach[r.approach], &by_instance[r.instance][r.approach]}) {
            ++a->runs;
            if (!r.error.empty()) {
                ++a->failures;
                continue;
            }
            a->time += r.time;
            a->speedup += r.speedup;
            a->times.push_back(r.time);
        }
    }
    auto mean = [](double sum, std::size_t n) { return n ? sum / static_cast<double>(n) : std::nan(""); };

    Sink sink(o.out, out);
    std::ostream& os = *sink;
    os << "approach,runs,failures,total_time,mean_time,mean_speedup\n";
    for (const auto& [approach, a] : by_approach) {
        const std::size_t ok = a.runs - a.failures;
        os << approach << "," << a.runs << "," << a.failures << "," << fmt(a.time) << "," << fmt(mean(a.time, ok))
           << "," << fmt(mean(a.speedup, ok)) << "\n";
    }
    if (o.detail_out.empty())
        return;
    std::ofstream det(o.detail_out);
    if (!det)
        throw DataError("cannot write '" + o.detail_out + "'");
    det << "instance,approach,runs,mean_time,cov,best\n";
    for (const auto& [instance, approaches] : by_instance) {
        double best = INFINITY;
        for (const auto& [approach, a] : approaches)
            if (!a.times.empty())
                best = std::min(best, mean(a.time, a.times.size()));
        for (const auto& [approach, a] : approaches) {
            const double m = mean(a.time, a.times.size());
            double cov = std::nan("");
            if (a.times.size() >= 2 && m > 0)
                cov = coefficient_of_variation(a.times);
            det << instance << "," << approach << "," << a.runs << "," << fmt(m) << "," << fmt(cov) << ","
                << (m == best ? 1 : 0) << "\n";
        }
    }
    err << "report covers " << records.size() << " runs over " << by_instance.size() << " instances\n";
}

void cmd_curves(const CurvesOptions& o, std::ostream& out, std::ostream&) {
    CurveSweep sweep;
    sweep.model = o.model;
    sweep.params = o.params;
    sweep.positions = linear_grid(o.from, o.to, o.step);
    sweep.depths = o.depths.empty() ? std::vector<int>{o.params.d} : o.depths;
    sweep.branching = o.branching.empty() ? std::vector<int>{o.params.b} : o.branching;
    if (sweep.model != "eq2")
        sweep.params.validate();
    Sink sink(o.out, out);
    *sink << curve_table(sweep);
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const UsageError*>(&e) || dynamic_cast<const ConfigError*>(&e))
        return 1;
    if (dynamic_cast<const EngineStall*>(&e))
        return 3;
    return 2;
}

}  // namespace adaptida::cli
