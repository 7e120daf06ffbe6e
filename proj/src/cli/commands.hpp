#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "adaptida/analytics.hpp"
#include "adaptida/engine.hpp"
#include "adaptida/features.hpp"
#include "adaptida/learner.hpp"
#include "adaptida/strategy.hpp"
#include "cli/instances.hpp"
#include "cli/records.hpp"

namespace adaptida::cli {

/// Bad flags or flag combinations; exit code 1.
class UsageError : public Error {
public:
    using Error::Error;
};

struct RunSettings {
    int workers = 4;
    std::string mode = "sim";  // sim | threads
    int latency = 1;
    std::uint64_t seed = 1;
    std::uint64_t budget = kDefaultShallowBudget;

    ExecutionMode execution() const;
    std::string architecture() const;  // e.g. "sim-P16"
};

/// Sets one axis of `base` from its textual value; "all" takes a whole
/// compact config string.
StrategyConfig apply_axis(StrategyConfig base, const std::string& axis, const std::string& value);

/// Values swept when no grid is given.
std::vector<std::string> default_grid(const std::string& axis, int workers);

/// Fills transformation-ordering scores from a shallow trace when needed.
StrategyConfig resolve_ordering(StrategyConfig config, const ShallowTrace& trace, int operator_count);

/// Runs one configuration and summarizes it as a record. Engine failures
/// other than stalls are stored in the record's error field.
RunRecord run_config(const Instance& inst, const StrategyConfig& config, const RunSettings& settings,
                     const ShallowTrace& trace, std::uint64_t serial_nodes);

struct AxisModel {
    std::string axis;
    DecisionTree tree;
};
std::string format_model(const AxisModel& m);
AxisModel parse_model(const std::string& text);

struct Advice {
    StrategyConfig config;
    ProblemFeatures features;
    std::optional<Solution> solved;  // found by the shallow search
    std::uint64_t profiling_nodes = 0;
};
inline constexpr const char* kSolvedSentinel = "solved-during-profiling";

Advice advise(const Instance& inst, const std::vector<AxisModel>& models, const RunSettings& settings,
              bool strict);

struct GenOptions {
    std::string out_dir;
    int count = 1;
    std::uint64_t seed = 1;
    std::vector<int> d{8};
    std::vector<double> g{0.5};
    std::vector<int> b{3};
    std::vector<double> imbalance{0.0};
    std::vector<double> density{0.0};
    std::vector<int> herror{0};
};

struct SweepOptions {
    std::vector<std::string> instances;
    std::string axis;
    std::vector<std::string> grid;
    std::string base;  // compact config for the axes not swept
    RunSettings run;
    int repetitions = 1;
    std::string records_out;
    std::string store;
};

struct TrainOptions {
    std::string store;
    std::string axis;
    bool filter = false;
    int folds = 10;
    std::uint64_t seed = 1;
    std::string model_out;
    std::string report_out;
};

struct AdviseOptions {
    std::vector<std::string> instances;
    std::vector<std::string> models;
    RunSettings run;
    bool strict = false;
    std::string out;
};

struct SolveOptions {
    std::vector<std::string> instances;
    std::vector<std::string> models;
    std::string config;  // run this fixed config instead of advising
    RunSettings run;
    bool strict = false;
    std::string records_out;
    std::string out;
};

struct ReportOptions {
    std::vector<std::string> records;
    std::string out;
    std::string detail_out;
};

struct CurvesOptions {
    std::string model = "fig6";
    ModelParams params;
    double from = 0.0;
    double to = 1.0;
    double step = 0.01;
    std::vector<int> depths;
    std::vector<int> branching;
    std::string out;
};

// Each command writes its primary output to `out` (or the --out file) and
// diagnostics to `err`; failures are thrown.
void cmd_gen(const GenOptions& o, std::ostream& out, std::ostream& err);
void cmd_sweep(const SweepOptions& o, std::ostream& out, std::ostream& err);
void cmd_train(const TrainOptions& o, std::ostream& out, std::ostream& err);
void cmd_advise(const AdviseOptions& o, std::ostream& out, std::ostream& err);
void cmd_solve(const SolveOptions& o, std::ostream& out, std::ostream& err);
void cmd_report(const ReportOptions& o, std::ostream& out, std::ostream& err);
void cmd_curves(const CurvesOptions& o, std::ostream& out, std::ostream& err);

/// Maps an exception to the process exit code (1 usage, 2 data, 3 stall).
int exit_code_for(const std::exception& e);

}  // namespace adaptida::cli
