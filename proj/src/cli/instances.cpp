#include "cli/instances.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace adaptida::cli {

namespace fs = std::filesystem;

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

namespace {

void load_file(const fs::path& path, std::vector<Instance>& out) {
    const std::string text = read_text(path.string());
    const std::string name = path.filename().string();
    if (text.find("d=") != std::string::npos) {
        out.push_back({name, parse_spec(text)});
        return;
    }
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        PuzzleState s = parse_puzzle_line(line, number);
        if (!is_solvable(s))
            throw DataError(name + " line " + std::to_string(number) + ": unsolvable instance");
        out.push_back({name + ":" + std::to_string(number), s});
    }
}

}  // namespace

std::vector<Instance> load_instances(const std::vector<std::string>& paths) {
    std::vector<Instance> out;
    for (const auto& p : paths) {
        const fs::path path(p);
        if (fs::is_directory(path)) {
            std::vector<fs::path> files;
            for (const auto& entry : fs::directory_iterator(path))
                if (entry.is_regular_file())
                    files.push_back(entry.path());
            std::sort(files.begin(), files.end());
            for (const auto& f : files)
                load_file(f, out);
        } else if (fs::exists(path)) {
            load_file(path, out);
        } else {
            throw DataError("no such instance file '" + p + "'");
        }
    }
    if (out.empty())
        throw DataError("no instances found");
    return out;
}

}  // namespace adaptida::cli
