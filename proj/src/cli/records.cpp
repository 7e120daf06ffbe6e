#include "cli/records.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace adaptida::cli {

using nlohmann::json;

namespace {

template <class T>
T field(const json& j, const char* key) {
    if (!j.contains(key))
        throw DataError(std::string("record is missing '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw DataError(std::string("record field '") + key + "' has the wrong type");
    }
}

json parse_line(const std::string& line) {
    try {
        return json::parse(line);
    } catch (const json::exception& e) {
        throw DataError(std::string("bad JSON line: ") + e.what());
    }
}

std::vector<std::string> read_lines(const std::string& path) {
    std::vector<std::string> out;
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot read '" + path + "'");
    std::string line;
    while (std::getline(in, line))
        if (line.find_first_not_of(" \t\r") != std::string::npos)
            out.push_back(line);
    return out;
}

}  // namespace

std::string to_json_line(const RunRecord& r) {
    json j = {{"instance", r.instance}, {"approach", r.approach}, {"config", r.config},
              {"mode", r.mode},         {"workers", r.workers},   {"latency", r.latency},
              {"seed", r.seed},         {"cost", r.cost},         {"time", r.time},
              {"serial_nodes", r.serial_nodes}, {"speedup", r.speedup},
              {"total_expanded", r.total_expanded}, {"sequence", r.sequence}};
    if (!r.error.empty())
        j["error"] = r.error;
    return j.dump();
}

RunRecord parse_run_record(const std::string& line) {
    const json j = parse_line(line);
    RunRecord r;
    r.instance = field<std::string>(j, "instance");
    r.approach = field<std::string>(j, "approach");
    r.config = field<std::string>(j, "config");
    r.mode = field<std::string>(j, "mode");
    r.workers = field<int>(j, "workers");
    r.latency = field<int>(j, "latency");
    r.seed = field<std::uint64_t>(j, "seed");
    r.cost = field<std::int64_t>(j, "cost");
    r.time = field<double>(j, "time");
    r.serial_nodes = field<std::uint64_t>(j, "serial_nodes");
    r.speedup = field<double>(j, "speedup");
    r.total_expanded = field<std::uint64_t>(j, "total_expanded");
    r.sequence = field<std::uint64_t>(j, "sequence");
    if (j.contains("error"))
        r.error = field<std::string>(j, "error");
    return r;
}

std::vector<RunRecord> read_records(const std::string& path) {
    std::vector<RunRecord> out;
    for (const auto& line : read_lines(path))
        out.push_back(parse_run_record(line));
    return out;
}

std::string to_json_line(const TrainingCase& c) {
    json features = json::object();
    const auto values = c.features.values();
    for (std::size_t i = 0; i < ProblemFeatures::kCount; ++i)
        features[ProblemFeatures::names()[i]] = values[i];
    json timings = json::object();
    for (const auto& [k, v] : c.timings)
        timings[k] = v;
    return json{{"features", features},
                {"architecture", c.architecture},
                {"axis", c.axis},
                {"label", c.label},
                {"timings", timings}}
        .dump();
}

TrainingCase parse_training_case(const std::string& line) {
    const json j = parse_line(line);
    TrainingCase c;
    const auto features = field<json>(j, "features");
    std::array<double, ProblemFeatures::kCount> values{};
    for (std::size_t i = 0; i < ProblemFeatures::kCount; ++i)
        values[i] = field<double>(features, ProblemFeatures::names()[i]);
    c.features = ProblemFeatures::from_values(values);
    c.architecture = field<std::string>(j, "architecture");
    c.axis = field<std::string>(j, "axis");
    c.label = field<std::string>(j, "label");
    const json timings = field<json>(j, "timings");
    for (const auto& [k, v] : timings.items()) {
        if (!v.is_number())
            throw DataError("timing '" + k + "' is not a number");
        c.timings[k] = v.get<double>();
    }
    if (c.timings.empty())
        throw DataError("training case without timings");
    return c;
}

Dataset read_store(const std::string& path, const std::string& axis) {
    Dataset data;
    data.axis = axis;
    for (const auto& line : read_lines(path)) {
        TrainingCase c = parse_training_case(line);
        if (axis.empty() || c.axis == axis)
            data.cases.push_back(std::move(c));
    }
    return data;
}

std::size_t append_cases(const std::string& path, const std::vector<TrainingCase>& cases) {
    std::set<std::string> seen;
    if (std::filesystem::exists(path))
        for (const auto& line : read_lines(path))
            seen.insert(to_json_line(parse_training_case(line)));
    std::vector<std::string> fresh;
    std::size_t duplicates = 0;
    for (const auto& c : cases) {
        std::string line = to_json_line(c);
        if (!seen.insert(line).second) {
            ++duplicates;
            continue;
        }
        fresh.push_back(std::move(line));
    }
    append_lines(path, fresh);
    return duplicates;
}

void append_lines(const std::string& path, const std::vector<std::string>& lines) {
    std::ofstream out(path, std::ios::app | std::ios::binary);
    if (!out)
        throw DataError("cannot write '" + path + "'");
    for (const auto& l : lines)
        out << l << '\n';
}

}  // namespace adaptida::cli
