#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adaptida/common.hpp"
#include "adaptida/search.hpp"

namespace adaptida {

// Direction the blank travels. Reverse of op k is 3 - k.
enum class Move : int { Up = 0, Left = 1, Right = 2, Down = 3 };

inline constexpr std::array<Move, 4> kUpLeftRightDown{Move::Up, Move::Left, Move::Right, Move::Down};
inline constexpr std::array<Move, 4> kDownLeftRightUp{Move::Down, Move::Left, Move::Right, Move::Up};

inline constexpr Move reverse(Move m) noexcept { return static_cast<Move>(3 - static_cast<int>(m)); }

/// A 4x4 board; tiles[cell] is the tile in that cell, 0 is the blank.
/// The goal has tile i in cell i (blank top-left).
struct PuzzleState {
    std::array<std::uint8_t, 16> tiles{};
    std::uint8_t blank = 0;

    static PuzzleState goal() noexcept;
    // Validates that `tiles` is a permutation of 0..15.
    static PuzzleState from_tiles(std::span<const int> tiles);

    bool operator==(const PuzzleState&) const = default;
};

int manhattan_heuristic(const PuzzleState& state) noexcept;

/// True when the goal is reachable, i.e. permutation parity matches the
/// parity of the blank's distance from its goal cell.
bool is_solvable(const PuzzleState& state) noexcept;

std::optional<PuzzleState> apply_move(const PuzzleState& state, Move move) noexcept;

/// Legal blank moves in `order`; the move reversing `parent` is skipped.
std::vector<Successor<PuzzleState>> puzzle_successors(const PuzzleState& state,
                                                      std::span<const Move> order,
                                                      std::optional<Move> parent = std::nullopt);

/// One instance: 16 whitespace-separated integers, 0 for the blank.
PuzzleState parse_puzzle_line(std::string_view line, int line_number);

/// Every non-empty line of `text`, each checked for solvability.
std::vector<PuzzleState> parse_instances(std::string_view text);

/// As parse_instances, additionally requiring exactly 100 instances.
std::vector<PuzzleState> parse_korf_set(std::string_view text);

std::string to_string(const PuzzleState& state);

class FifteenPuzzle {
public:
    using State = PuzzleState;

    explicit FifteenPuzzle(PuzzleState start) : start_(start) {}

    State initial() const noexcept { return start_; }
    Cost heuristic(const State& s) const noexcept { return manhattan_heuristic(s); }
    bool is_goal(const State& s) const noexcept { return s == PuzzleState::goal(); }
    int operator_count() const noexcept { return 4; }
    void successors(const State& s, int parent_op, std::vector<Successor<State>>& out) const;

private:
    PuzzleState start_;
};

}  // namespace adaptida
