#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "doctest.h"

using namespace adaptida;
using namespace adaptida::cli;
namespace fs = std::filesystem;

namespace {

// Fresh scratch directory per test case.
fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("adaptida_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t lines_in(const std::string& text) {
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

// Instances hard enough that a small profiling budget does not solve them.
fs::path make_instances(const fs::path& dir, int count) {
    GenOptions g;
    g.out_dir = (dir / "inst").string();
    g.count = count;
    g.seed = 11;
    g.d = {9};
    g.b = {3};
    g.g = {0.2, 0.8};
    g.imbalance = {0.0, 0.5};
    g.herror = {12, 20};
    std::ostringstream out, err;
    cmd_gen(g, out, err);
    return g.out_dir;
}

RunSettings small_run() {
    RunSettings s;
    s.workers = 4;
    s.budget = 50;
    return s;
}

}  // namespace

TEST_CASE("run records round trip through json lines") {
    RunRecord r;
    r.instance = "a.spec";
    r.approach = "eureka";
    r.config = "dist=KR;clusters=2";
    r.workers = 8;
    r.latency = 3;
    r.seed = 42;
    r.cost = 17;
    r.time = 123.5;
    r.serial_nodes = 999;
    r.speedup = 8.0891;
    r.total_expanded = 1500;
    r.sequence = 7;
    CHECK(parse_run_record(to_json_line(r)) == r);
    r.error = "boom";
    CHECK(parse_run_record(to_json_line(r)) == r);
    CHECK(to_json_line(r).find('\n') == std::string::npos);
    CHECK_THROWS_AS(parse_run_record("{not json"), DataError);
    CHECK_THROWS_AS(parse_run_record("{\"instance\":\"x\"}"), DataError);
}

TEST_CASE("training cases round trip and the store skips duplicates") {
    TrainingCase c;
    c.features = {2.5, 3.0, 0.25, 0.75, 2.9};
    c.architecture = "sim-P16";
    c.axis = "clusters";
    c.label = "4";
    c.timings = {{"1", 200.0}, {"4", 120.0}};
    CHECK(parse_training_case(to_json_line(c)) == c);
    CHECK_THROWS_AS(parse_training_case(R"({"features":{"b":1,"herror":0,"imb":0,"loc":0,"hbf":1},)"
                                        R"("architecture":"a","axis":"clusters","label":"1","timings":{}})"),
                    DataError);

    const fs::path dir = scratch("store");
    const std::string store = (dir / "store.jsonl").string();
    TrainingCase other = c;
    other.axis = "polling";
    other.label = "random";
    other.timings = {{"neighbor", 5.0}, {"random", 4.0}};
    CHECK(append_cases(store, {c, other}) == 0);
    CHECK(append_cases(store, {c}) == 1);
    CHECK(read_store(store, "").cases.size() == 2);
    const Dataset only = read_store(store, "clusters");
    REQUIRE(only.cases.size() == 1);
    CHECK(only.cases[0] == c);
}

TEST_CASE("instances load from spec files, puzzle lists and directories") {
    const fs::path dir = scratch("load");
    write_file(dir / "b.txt", "1 0 2 3 4 5 6 7 8 9 10 11 12 13 14 15\n\n0 1 2 3 4 5 6 7 8 9 10 11 12 13 14 15\n");
    ArtificialSpec s;
    s.d = 5;
    s.seed = 9;
    write_spec_file((dir / "a.spec").string(), s);

    const auto all = load_instances({dir.string()});
    REQUIRE(all.size() == 3);
    CHECK(all[0].id == "a.spec");
    CHECK(std::get<ArtificialSpec>(all[0].problem) == s);
    CHECK(all[1].id == "b.txt:1");
    CHECK(all[2].id == "b.txt:3");

    write_file(dir / "bad.txt", "1 2 3 4 5 6 7 8 9 10 11 12 13 14 15 0\n");
    CHECK_THROWS_AS(load_instances({(dir / "bad.txt").string()}), DataError);
    CHECK_THROWS_AS(load_instances({(dir / "missing").string()}), DataError);
    const fs::path empty = scratch("load_empty");
    CHECK_THROWS_AS(load_instances({empty.string()}), DataError);
}

TEST_CASE("gen cycles its value lists and validates before writing") {
    const fs::path dir = scratch("gen");
    GenOptions g;
    g.out_dir = (dir / "out").string();
    g.count = 4;
    g.seed = 100;
    g.d = {6, 7};
    g.b = {2, 3, 4};
    std::ostringstream out, err;
    cmd_gen(g, out, err);
    CHECK(lines_in(out.str()) == 4);
    const auto inst = load_instances({g.out_dir});
    REQUIRE(inst.size() == 4);
    const auto& s3 = std::get<ArtificialSpec>(inst[3].problem);
    CHECK(s3.d == 7);
    CHECK(s3.b == 2);
    CHECK(s3.seed == 103);

    GenOptions bad = g;
    bad.out_dir = (dir / "bad").string();
    bad.g = {0.5, 1.5};
    CHECK_THROWS_AS(cmd_gen(bad, out, err), DataError);
    CHECK(fs::is_empty(bad.out_dir));
}

TEST_CASE("axis values map onto configurations") {
    const StrategyConfig base;
    CHECK(apply_axis(base, "distribution", "KR").distribution == Distribution::KumarRao);
    CHECK(apply_axis(base, "clusters", "4").clusters == 4);
    CHECK_FALSE(apply_axis(base, "load_balancing", "off").load_balancing);
    CHECK(apply_axis(base, "polling", "random").polling == Polling::Random);
    CHECK(apply_axis(base, "fraction", "0.5").donation_fraction == 0.5);
    CHECK(apply_axis(base, "donate_from", "head").donate_from == DonateEnd::HeadOfList);
    CHECK(apply_axis(base, "trigger", "8").anticipation_trigger == 8);
    CHECK(apply_axis(base, "ordering", "local").ordering == OrderPolicy::local());
    const StrategyConfig two = apply_axis(apply_axis(base, "clusters", "2"), "polling", "random");
    CHECK(two.clusters == 2);
    CHECK(two.polling == Polling::Random);
    CHECK(apply_axis(base, "all", "dist=KR;clusters=2").clusters == 2);
    CHECK_THROWS_AS(apply_axis(base, "colour", "red"), UsageError);
    CHECK_THROWS_AS(apply_axis(base, "polling", "sideways"), DataError);
    CHECK(default_grid("clusters", 16) == std::vector<std::string>{"1", "2", "4", "8", "16"});
    CHECK_THROWS_AS(default_grid("all", 4), UsageError);
}

TEST_CASE("exit codes follow the error kind") {
    CHECK(exit_code_for(UsageError("x")) == 1);
    CHECK(exit_code_for(ConfigError("x")) == 1);
    CHECK(exit_code_for(DataError("x")) == 2);
    CHECK(exit_code_for(DomainError("x")) == 2);
    CHECK(exit_code_for(SpaceExhausted()) == 2);
    CHECK(exit_code_for(EngineStall("x")) == 3);
}

TEST_CASE("model files round trip") {
    TrainingCase a{{1, 0, 0.1, 0.5, 1}, "sim-P4", "clusters", "1", {{"1", 1}, {"2", 2}}};
    TrainingCase b{{1, 0, 0.9, 0.5, 1}, "sim-P4", "clusters", "2", {{"1", 2}, {"2", 1}}};
    Dataset d{"clusters", {a, a, b, b}};
    const AxisModel m{"clusters", induce_tree(d)};
    const AxisModel back = parse_model(format_model(m));
    CHECK(back.axis == "clusters");
    CHECK(back.tree == m.tree);
    CHECK_THROWS_AS(parse_model("(leaf \"1\" 1 0)"), DataError);
    CHECK_THROWS_AS(parse_model("axis colour\n(leaf \"1\" 1 0)"), DataError);
}

TEST_CASE("sweep records every run, labels each instance and is reproducible") {
    const fs::path dir = scratch("sweep");
    SweepOptions o;
    o.instances = {make_instances(dir, 4).string()};
    o.axis = "clusters";
    o.grid = {"1", "2", "8"};  // 8 clusters does not fit 4 workers
    o.run = small_run();
    o.records_out = (dir / "runs.jsonl").string();
    o.store = (dir / "store.jsonl").string();
    std::ostringstream out, err;
    cmd_sweep(o, out, err);

    const auto records = read_records(o.records_out);
    REQUIRE(records.size() == 12);
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(records[i].sequence == i);
        CHECK(records[i].error.empty() == (records[i].approach != "8"));
        if (records[i].error.empty())
            CHECK(records[i].cost == 9);
    }
    CHECK(err.str().find("warning") != std::string::npos);

    const Dataset store = read_store(o.store, "clusters");
    REQUIRE(store.cases.size() == 4);
    for (const auto& c : store.cases) {
        CHECK(c.architecture == "sim-P4");
        CHECK(c.timings.size() == 2);
        const auto best = std::min_element(c.timings.begin(), c.timings.end(),
                                           [](auto& x, auto& y) { return x.second < y.second; });
        CHECK(c.timings.at(c.label) == best->second);
    }

    // Same inputs give byte-identical output; the store keeps one copy.
    const std::string first_runs = slurp(o.records_out);
    SweepOptions again = o;
    again.records_out = (dir / "runs2.jsonl").string();
    std::ostringstream out2, err2;
    cmd_sweep(again, out2, err2);
    CHECK(slurp(again.records_out) == first_runs);
    CHECK(out2.str() == out.str());
    CHECK(err2.str().find("skipped 4 duplicate training cases") != std::string::npos);
    CHECK(read_store(o.store, "").cases.size() == 4);
}

TEST_CASE("sweep rejects bad arguments") {
    const fs::path dir = scratch("sweep_bad");
    SweepOptions o;
    o.instances = {make_instances(dir, 1).string()};
    o.run = small_run();
    std::ostringstream out, err;
    o.axis = "colour";
    CHECK_THROWS_AS(cmd_sweep(o, out, err), UsageError);
    o.axis = "clusters";
    o.run.mode = "quantum";
    CHECK_THROWS_AS(cmd_sweep(o, out, err), UsageError);
    o.run.mode = "sim";
    o.grid = {"lots"};
    CHECK_THROWS(cmd_sweep(o, out, err));
}

TEST_CASE("train writes a model and a cross-validation report") {
    const fs::path dir = scratch("train");
    const std::string store = (dir / "store.jsonl").string();
    std::vector<TrainingCase> cases;
    for (int i = 0; i < 20; ++i) {
        const double imb = i / 20.0;
        const bool many = imb > 0.5;
        cases.push_back({{3, 2, imb, 0.5, 3}, "sim-P4", "clusters", many ? "4" : "1",
                         {{"1", many ? 2.0 : 1.0}, {"4", many ? 1.0 : 2.0}}});
    }
    append_cases(store, cases);
    TrainOptions o;
    o.store = store;
    o.axis = "clusters";
    o.folds = 5;
    o.model_out = (dir / "model.txt").string();
    o.report_out = (dir / "report.csv").string();
    std::ostringstream out, err;
    cmd_train(o, out, err);
    const AxisModel m = parse_model(slurp(o.model_out));
    CHECK(m.tree.classify({3, 2, 0.9, 0.5, 3}, "sim-P4") == "4");
    CHECK(m.tree.classify({3, 2, 0.1, 0.5, 3}, "sim-P4") == "1");
    const std::string report = slurp(o.report_out);
    REQUIRE(report.rfind("method,mean_error,t,p\ntree,", 0) == 0);
    CHECK(std::stod(report.substr(27)) <= 0.1);
    CHECK(lines_in(report) == 5);

    o.folds = 50;
    std::ostringstream err2;
    cmd_train(o, out, err2);
    CHECK(err2.str().find("too few") != std::string::npos);

    o.axis = "polling";
    CHECK_THROWS_AS(cmd_train(o, out, err), DataError);
}

namespace {

AxisModel constant_model(const std::string& axis, const std::string& label) {
    return {axis, DecisionTree({DecisionTree::Node{DecisionTree::Node::Kind::Leaf, 0, 0.0, "", -1, -1, label, 1, 0}})};
}

}  // namespace

TEST_CASE("advise applies every model and reports profiling solutions") {
    const fs::path dir = scratch("advise");
    const auto inst = load_instances({make_instances(dir, 2).string()});
    const std::vector<AxisModel> models{constant_model("clusters", "2"), constant_model("polling", "random"),
                                        constant_model("all", "dist=KR;clusters=4;order=toida")};
    RunSettings s = small_run();
    const Advice a = advise(inst[0], models, s, false);
    REQUIRE_FALSE(a.solved);
    CHECK(a.config.distribution == Distribution::KumarRao);  // from the whole-config model
    CHECK(a.config.clusters == 2);                           // refined by the axis model
    CHECK(a.config.polling == Polling::Random);
    CHECK(a.config.ordering.kind == OrderKind::Toida);
    CHECK(a.config.ordering.toida_scores.size() == 3);
    CHECK(a.profiling_nodes == 50);

    const std::vector<AxisModel> too_many{constant_model("clusters", "8")};
    CHECK(advise(inst[0], too_many, s, false).config.clusters == 4);
    CHECK_THROWS_AS(advise(inst[0], too_many, s, true), ConfigError);

    s.budget = kDefaultShallowBudget;
    const Advice solved = advise(inst[0], models, s, false);
    REQUIRE(solved.solved);
    CHECK(solved.solved->cost == 9);

    AdviseOptions o;
    o.instances = {(dir / "inst").string()};
    o.run = s;
    std::ostringstream out, err;
    cmd_advise(o, out, err);
    CHECK(out.str().find(kSolvedSentinel) != std::string::npos);
    CHECK(lines_in(out.str()) == 3);
}

TEST_CASE("solve runs advice or a fixed config and appends records") {
    const fs::path dir = scratch("solve");
    const std::string model = (dir / "m.txt").string();
    write_file(model, format_model(constant_model("clusters", "2")));
    SolveOptions o;
    o.instances = {make_instances(dir, 2).string()};
    o.models = {model};
    o.run = small_run();
    o.records_out = (dir / "runs.jsonl").string();
    std::ostringstream out, err;
    cmd_solve(o, out, err);
    o.models.clear();
    o.config = "clusters=1";
    cmd_solve(o, out, err);
    const auto recs = read_records(o.records_out);
    REQUIRE(recs.size() == 4);
    CHECK(recs[0].approach == "eureka");
    CHECK(parse_config(recs[0].config).clusters == 2);
    CHECK(recs[2].approach == "fixed");
    CHECK(recs[3].sequence == 3);
    for (const auto& r : recs) {
        CHECK(r.cost == 9);
        CHECK(r.speedup > 0.0);
    }
    o.config = "clusters=9";
    CHECK_THROWS_AS(cmd_solve(o, out, err), ConfigError);
    o.models = {model};
    CHECK_THROWS_AS(cmd_solve(o, out, err), UsageError);
}

TEST_CASE("report aggregates approaches and flags the best per instance") {
    const fs::path dir = scratch("report");
    const std::string runs = (dir / "runs.jsonl").string();
    auto rec = [](std::string inst, std::string approach, double time, std::string error = "") {
        RunRecord r;
        r.instance = std::move(inst);
        r.approach = std::move(approach);
        r.time = time;
        r.speedup = time > 0 ? 100.0 / time : 0.0;
        r.error = std::move(error);
        return to_json_line(r);
    };
    append_lines(runs, {rec("x", "A", 10), rec("x", "A", 30), rec("x", "B", 15), rec("y", "A", 50),
                        rec("y", "B", 25), rec("y", "B", 0, "failed")});
    ReportOptions o;
    o.records = {runs};
    o.detail_out = (dir / "detail.csv").string();
    std::ostringstream out, err;
    cmd_report(o, out, err);
    CHECK(out.str() ==
          "approach,runs,failures,total_time,mean_time,mean_speedup\n"
          "A,3,0,90,30,5.11111\n"
          "B,3,1,40,20,5.33333\n");
    // x/A: mean 20, sample sd 14.1421 -> cov 0.707107.
    CHECK(slurp(o.detail_out) ==
          "instance,approach,runs,mean_time,cov,best\n"
          "x,A,2,20,0.707107,0\n"
          "x,B,1,15,,1\n"
          "y,A,1,50,,0\n"
          "y,B,2,25,,1\n");
}

TEST_CASE("curves tabulates the analytic models") {
    CurvesOptions o;
    std::ostringstream out, err;
    cmd_curves(o, out, err);
    CHECK(lines_in(out.str()) == 102);
    o.model = "eq1";
    o.depths = {5, 10, 20};
    std::ostringstream eq1;
    cmd_curves(o, eq1, err);
    CHECK(lines_in(eq1.str()) == 4);
    o.model = "eq2";
    o.branching = {2, 6};
    o.from = 0.5;
    o.step = 0.25;
    std::ostringstream eq2;
    cmd_curves(o, eq2, err);
    CHECK(eq2.str() == "a,b,speedup\n0.5,2,3\n0.75,2,2.33333\n1,2,2\n0.5,6,1.4\n0.75,6,1.26667\n1,6,1.2\n");
    o.model = "nope";
    CHECK_THROWS_AS(cmd_curves(o, out, err), DataError);
    o.model = "dts";
    o.params.P = 0;
    CHECK_THROWS_AS(cmd_curves(o, out, err), DomainError);
}
