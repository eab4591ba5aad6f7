#pragma once

// Scripted Duplicator for the 2-pebble game on the shifted k=3 pair, and a
// harness that plays it against every Spoiler sequence.

#include "bvh/games.hpp"
#include "bvh/k3.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bvh {

struct StrategyInvariantError : std::runtime_error {
    std::vector<std::string> trace;
    StrategyInvariantError(const std::string& what, std::vector<std::string> t)
        : std::runtime_error(what), trace(std::move(t)) {}
};

struct ConfigurationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Structures plus lookup tables shared by every state of one game.
class K3StrategyContext {
public:
    explicit K3StrategyContext(const K3Pair& pair);

    const AbstractionParams& params() const { return P_; }
    const OrderedStructure& structure(int side) const { return side == 0 ? A_ : B_; }
    int64_t width() const { return W_; }
    bool reduced() const { return P_.variant == Variant::reduced_k3; }
    bool has_constants() const { return !consts_.empty(); }
    const std::vector<std::pair<int64_t, int>>& constant_labels() const { return consts_; }

    size_t index(int side, int64_t x, int y) const { return pos_[side][static_cast<size_t>(y * W_ + x)]; }
    bool adj(int side, int64_t x1, int y1, int64_t x2, int y2) const;
    // order of the (shifted) structure
    bool less(int side, int64_t x1, int y1, int64_t x2, int y2) const {
        return index(side, x1, y1) < index(side, x2, y2);
    }

    // the order-condition threshold for round `round` (1-based)
    int threshold(int round) const { return P_.m - round - (reduced() ? 1 : 0); }
    int64_t row_count(int level) const;  // gamma*_{m-level}

private:
    AbstractionParams P_;
    const OrderedStructure& A_;
    const OrderedStructure& B_;
    int64_t W_;
    std::vector<size_t> pos_[2];
    std::vector<std::pair<int64_t, int>> consts_;
};

struct K3Pebble {
    int64_t xa = 0;  // label in A
    int64_t xb = 0;  // label in B
    int y = 0;
};

struct DuplicatorStateK3 {
    const K3StrategyContext* ctx = nullptr;
    int xi = 0;       // current abstraction
    int theta = 0;    // rounds left
    int round = 0;    // rounds played
    bool mimicking = true;
    std::vector<K3Pebble> board;

    static DuplicatorStateK3 start(const K3StrategyContext& ctx);
    void lift(size_t i);
};

struct K3Reply {
    int64_t x = 0;
    int level = 0;  // abstraction the reply was computed in
    std::string phase;
};

// Spoiler pebbles (x, y) in structure `side` (0 = A, 1 = B). The state must
// have a free pebble. Returns Duplicator's label in the other structure and
// updates the state.
K3Reply respond_k3(DuplicatorStateK3& st, int side, int64_t x, int y, std::vector<std::string>* trace = nullptr);

// Names of the winning conditions (1..6) that fail after the last round.
// `fresh` is the pair just placed, or nullptr.
std::vector<int> k3_condition_failures(const DuplicatorStateK3& st, const K3Pebble* fresh, int spoiler_x_side);

struct StrategyReport {
    int m = 3;
    std::string variant;
    bool constants = false;
    int rounds = 0;
    uint64_t sequences = 0;
    uint64_t responses = 0;
    uint64_t violations = 0;
    uint64_t condition_failures[7] = {0, 0, 0, 0, 0, 0, 0};  // by condition number
    uint64_t resorts = 0;        // rounds where xi went down
    int min_xi = 0;
    uint64_t solver_checks = 0;  // replies cross-checked against the exact solver
    uint64_t solver_disagreements = 0;
    std::vector<std::string> first_violations;
};

struct ValidateOptions {
    int pebbles = 2;
    int jobs = 1;
    double solver_fraction = 0.0;  // share of responses cross-checked
    uint64_t seed = 0;
};

// Every Spoiler sequence of `rounds` rounds against respond_k3.
StrategyReport validate_strategy(const K3Pair& pair, int rounds, const ValidateOptions& opt = {});

}  // namespace bvh
