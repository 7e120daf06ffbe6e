#pragma once

#include <string>
#include <variant>
#include <vector>

#include "adaptida/artificial.hpp"
#include "adaptida/puzzle.hpp"

namespace adaptida::cli {

struct Instance {
    std::string id;  // file name, or file:line for puzzle sets
    std::variant<ArtificialSpec, PuzzleState> problem;
};

/// Loads every instance named by `paths`. Directories expand to their
/// regular files in name order. A file holding `d=` is an artificial spec;
/// anything else is read as puzzle lines.
std::vector<Instance> load_instances(const std::vector<std::string>& paths);

std::string read_text(const std::string& path);

/// Calls `fn` with the problem object of `inst`.
template <class Fn>
decltype(auto) with_problem(const Instance& inst, Fn&& fn) {
    if (const auto* spec = std::get_if<ArtificialSpec>(&inst.problem))
        return fn(ArtificialTree(*spec));
    return fn(FifteenPuzzle(std::get<PuzzleState>(inst.problem)));
}

}  // namespace adaptida::cli
