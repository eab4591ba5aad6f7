#pragma once

#include "bvh/structure.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace bvh {

enum class GameMode { standard, existential, ef_order };
std::string mode_name(GameMode m);
GameMode parse_mode(const std::string& s);

struct GameSpec {
    int pebbles = 2;
    int rounds = 3;
    GameMode mode = GameMode::standard;
};

struct Budget {
    uint64_t max_memo = 100'000'000;
    uint64_t max_nodes = 4'000'000'000ull;
};

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MoveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One round of a principal variation: Spoiler optionally lifts a pair, then
// pebbles `vertex` in structure `side` (0 = A, 1 = B); Duplicator answers with
// the least legal reply, or has none.
struct WitnessRound {
    std::optional<std::pair<size_t, size_t>> lifted;
    int side = 0;
    size_t vertex = 0;
    std::optional<size_t> reply;
};

struct SolveResult {
    bool duplicator_wins = true;
    std::vector<WitnessRound> witness;
    uint64_t nodes = 0;
    uint64_t memo_entries = 0;
};

// Exact AND/OR solver for the m-round r-pebble game on explicit structures.
// Positions are sets of matched pairs; a repeated pair is the same as having
// one more free pebble, so sets lose nothing.
class PebbleGameSolver {
public:
    PebbleGameSolver(const OrderedStructure& A, const OrderedStructure& B, int pebbles, Budget budget = {});

    // Relocating a pebble while a free one is available never helps Spoiler
    // (monotonicity); by default those moves are skipped. Setting this makes
    // the solver branch on them anyway.
    void set_full_branching(bool v) { full_branching_ = v; }

    bool board_valid(const IndexMap& pos) const;
    // Duplicator wins from `pos` with `rounds` rounds to go.
    bool value(const IndexMap& pos, int rounds);
    // Replies to Spoiler's move that keep a Duplicator win. `lift` indexes into
    // `pos` (or -1). Throws MoveError on illegal moves.
    std::vector<size_t> good_replies(const IndexMap& pos, int rounds, int lift, int side, size_t vertex);
    std::vector<WitnessRound> witness(const IndexMap& pos, int rounds);

    uint64_t nodes() const { return nodes_; }
    uint64_t memo_size() const { return memo_.size(); }

private:
    struct Key {
        uint32_t p[8];
        uint8_t cnt;
        uint8_t rounds;
        bool operator==(const Key& o) const {
            if (cnt != o.cnt || rounds != o.rounds) return false;
            for (int i = 0; i < cnt; ++i)
                if (p[i] != o.p[i]) return false;
            return true;
        }
    };
    struct KeyHash {
        size_t operator()(const Key& k) const;
    };
    using Pos = std::vector<uint32_t>;

    const OrderedStructure& A_;
    const OrderedStructure& B_;
    int r_;
    Budget budget_;
    bool full_branching_ = false;
    uint64_t nodes_ = 0;
    std::unordered_map<Key, bool, KeyHash> memo_;
    std::vector<std::pair<size_t, size_t>> consts_;

    static uint32_t enc(size_t a, size_t b) { return static_cast<uint32_t>(a << 16 | b); }
    static size_t ea(uint32_t p) { return p >> 16; }
    static size_t eb(uint32_t p) { return p & 0xffff; }
    bool compatible(uint32_t p, uint32_t q) const;
    bool can_add(const Pos& Q, uint32_t p) const;
    static Pos insert(const Pos& Q, uint32_t p);
    Pos to_pos(const IndexMap& pos) const;
    bool V(const Pos& P, int n);
    bool PV(const Pos& Q, int n);
    std::vector<Pos> lift_options(const Pos& P) const;
    void extract(const Pos& P, int n, std::vector<WitnessRound>& out);
};

SolveResult solve(const OrderedStructure& A, const OrderedStructure& B, const GameSpec& spec, Budget budget = {});

// Which positions count as legal in the existential game.
enum class ExistentialValidity { partial_isomorphism, injective_homomorphism };

struct ExistentialResult {
    bool duplicator_survives = true;
    uint64_t positions = 0;
    uint64_t eliminated = 0;
};

ExistentialResult solve_existential(const OrderedStructure& A, const OrderedStructure& B, int pebbles,
                                    ExistentialValidity validity = ExistentialValidity::partial_isomorphism,
                                    Budget budget = {});

// The boards of the existential game: script-A_k is a k-clique on
// (0,0)..(0,k-1), script-B_k has universe [k-1]x[k] with edges between
// different rows whose (x+y) mod (k-1) differ. Both ordered by (y, x).
OrderedStructure existential_clique_board(int k);
OrderedStructure existential_b_board(int k);

// EF game on pure linear orders: m rounds with m pebbles.
SolveResult solve_ef_orders(int len_a, int len_b, int rounds, Budget budget = {});

}  // namespace bvh

namespace bvh {

// Non-losing Duplicator replies, as target-structure indices. Thin wrapper
// over good_replies so callers do not need to know the solver's internals.
std::vector<size_t> play_step(PebbleGameSolver& solver, const IndexMap& pos, int rounds_left, int lift, int side,
                              size_t vertex);

}  // namespace bvh
