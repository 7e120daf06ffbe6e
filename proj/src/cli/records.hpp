#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "adaptida/learner.hpp"

namespace adaptida::cli {

/// One engine run, replayable from (instance, config, seed, mode).
struct RunRecord {
    std::string instance;
    std::string approach;  // grid value, fixed config or "eureka"
    std::string config;    // compact StrategyConfig string
    std::string mode = "sim";
    int workers = 1;
    int latency = 1;
    std::uint64_t seed = 1;
    std::int64_t cost = -1;
    double time = 0.0;  // ticks in sim mode, seconds with threads
    std::uint64_t serial_nodes = 0;
    double speedup = 0.0;
    std::uint64_t total_expanded = 0;
    std::uint64_t sequence = 0;  // logical timestamp within the run file
    std::string error;           // set when the run failed

    bool operator==(const RunRecord&) const = default;
};

std::string to_json_line(const RunRecord& r);
RunRecord parse_run_record(const std::string& line);
std::vector<RunRecord> read_records(const std::string& path);

std::string to_json_line(const TrainingCase& c);
TrainingCase parse_training_case(const std::string& line);

/// Every case of the store; `axis` keeps only that axis when nonempty.
Dataset read_store(const std::string& path, const std::string& axis);

/// Appends the cases that are not already in the store and returns how
/// many were skipped as duplicates.
std::size_t append_cases(const std::string& path, const std::vector<TrainingCase>& cases);

/// Appends lines to a file, creating it when missing.
void append_lines(const std::string& path, const std::vector<std::string>& lines);

}  // namespace adaptida::cli
