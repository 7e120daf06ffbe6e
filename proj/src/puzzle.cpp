#include "adaptida/puzzle.hpp"

#include <cstdlib>
#include <sstream>

namespace adaptida {
namespace {

constexpr std::array<std::array<int, 16>, 16> make_distance_table() {
    std::array<std::array<int, 16>, 16> table{};
    for (int tile = 1; tile < 16; ++tile)
        for (int cell = 0; cell < 16; ++cell) {
            const int dr = tile / 4 - cell / 4, dc = tile % 4 - cell % 4;
            table[tile][cell] = (dr < 0 ? -dr : dr) + (dc < 0 ? -dc : dc);
        }
    return table;
}

constexpr auto kDistance = make_distance_table();

std::optional<int> target_cell(int blank, Move move) noexcept {
    switch (move) {
    case Move::Up:
        return blank >= 4 ? std::optional<int>(blank - 4) : std::nullopt;
    case Move::Down:
        return blank < 12 ? std::optional<int>(blank + 4) : std::nullopt;
    case Move::Left:
        return blank % 4 != 0 ? std::optional<int>(blank - 1) : std::nullopt;
    case Move::Right:
        return blank % 4 != 3 ? std::optional<int>(blank + 1) : std::nullopt;
    }
    return std::nullopt;
}

}  // namespace

PuzzleState PuzzleState::goal() noexcept {
    PuzzleState s;
    for (std::uint8_t i = 0; i < 16; ++i)
        s.tiles[i] = i;
    s.blank = 0;
    return s;
}

PuzzleState PuzzleState::from_tiles(std::span<const int> tiles) {
    if (tiles.size() != 16)
        throw DataError("a puzzle needs 16 tiles, got " + std::to_string(tiles.size()));
    PuzzleState s;
    std::array<bool, 16> seen{};
    for (std::size_t i = 0; i < 16; ++i) {
        const int t = tiles[i];
        if (t < 0 || t > 15 || seen[static_cast<std::size_t>(t)])
            throw DataError("tiles are not a permutation of 0..15");
        seen[static_cast<std::size_t>(t)] = true;
        s.tiles[i] = static_cast<std::uint8_t>(t);
        if (t == 0)
            s.blank = static_cast<std::uint8_t>(i);
    }
    return s;
}

int manhattan_heuristic(const PuzzleState& state) noexcept {
    int sum = 0;
    for (int cell = 0; cell < 16; ++cell)
        sum += kDistance[state.tiles[cell]][cell];
    return sum;
}

bool is_solvable(const PuzzleState& state) noexcept {
    std::array<bool, 16> visited{};
    int transpositions = 0;
    for (int i = 0; i < 16; ++i) {
        if (visited[i])
            continue;
        int length = 0;
        for (int j = i; !visited[j]; j = state.tiles[j]) {
            visited[j] = true;
            ++length;
        }
        transpositions += length - 1;
    }
    const int blank_distance = state.blank / 4 + state.blank % 4;
    return transpositions % 2 == blank_distance % 2;
}

std::optional<PuzzleState> apply_move(const PuzzleState& state, Move move) noexcept {
    const auto target = target_cell(state.blank, move);
    if (!target)
        return std::nullopt;
    PuzzleState next = state;
    next.tiles[state.blank] = state.tiles[*target];
    next.tiles[*target] = 0;
    next.blank = static_cast<std::uint8_t>(*target);
    return next;
}

std::vector<Successor<PuzzleState>> puzzle_successors(const PuzzleState& state,
                                                      std::span<const Move> order,
                                                      std::optional<Move> parent) {
    std::vector<Successor<PuzzleState>> out;
    for (const Move m : order) {
        if (parent && m == reverse(*parent))
            continue;
        if (auto next = apply_move(state, m))
            out.push_back({*next, static_cast<int>(m), 1});
    }
    return out;
}

void FifteenPuzzle::successors(const State& s, int parent_op,
                               std::vector<Successor<State>>& out) const {
    for (const Move m : kUpLeftRightDown) {
        if (parent_op >= 0 && static_cast<int>(m) == 3 - parent_op)
            continue;
        if (auto next = apply_move(s, m))
            out.push_back({*next, static_cast<int>(m), 1});
    }
}

PuzzleState parse_puzzle_line(std::string_view line, int line_number) {
    std::istringstream in{std::string(line)};
    std::vector<int> values;
    std::string token;
    while (in >> token) {
        char* end = nullptr;
        const long v = std::strtol(token.c_str(), &end, 10);
        if (*end != '\0')
            throw DataError("line " + std::to_string(line_number) + ": '" + token +
                            "' is not an integer");
        values.push_back(static_cast<int>(v));
    }
    if (values.size() != 16)
        throw DataError("line " + std::to_string(line_number) + ": expected 16 integers, found " +
                        std::to_string(values.size()));
    try {
        return PuzzleState::from_tiles(values);
    } catch (const DataError& e) {
        throw DataError("line " + std::to_string(line_number) + ": " + e.what());
    }
}

std::vector<PuzzleState> parse_instances(std::string_view text) {
    std::vector<PuzzleState> out;
    std::istringstream in{std::string(text)};
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        PuzzleState s = parse_puzzle_line(line, number);
        if (!is_solvable(s))
            throw DataError("line " + std::to_string(number) +
                            ": unsolvable instance (permutation parity differs from blank "
                            "distance parity " +
                            std::to_string((s.blank / 4 + s.blank % 4) % 2) + ")");
        out.push_back(s);
    }
    return out;
}

std::vector<PuzzleState> parse_korf_set(std::string_view text) {
    auto out = parse_instances(text);
    if (out.size() != 100)
        throw DataError("expected 100 instances, found " + std::to_string(out.size()));
    return out;
}

std::string to_string(const PuzzleState& state) {
    std::string out;
    for (std::size_t i = 0; i < 16; ++i) {
        if (i)
            out += ' ';
        out += std::to_string(state.tiles[i]);
    }
    return out;
}

}  // namespace adaptida
