#pragma once

// Executable checks of the general-k lemmas on toy parameters.

#include "bvh/general.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace bvh {

struct CliqueSampleReport {
    Side side = Side::B;
    int samples = 0;
    uint64_t seed = 0;
    std::vector<std::vector<Vertex>> cliques;  // every sampled k-set that was a clique
    std::vector<int> adjacent_pairs_histogram;  // index = number of adjacent pairs
    bool lemma_clique_adjacent = false;         // the middle witness, on the same side
};

CliqueSampleReport sampled_clique_check(const GeneralModel& M, Side side, int samples, uint64_t seed);

struct UniversalSimReport {
    int level = 0;
    size_t targets = 0;        // (a, R, S) triples per row
    size_t tuples = 0;         // (tuple, row) pairs scanned
    size_t positions = 0;
    size_t missing = 0;        // (tuple, row, target) combinations not realized
    std::string first_missing;
};

// For every tuple of level r and every row, every label <a, f; r; R; S> with
// S ranging over the sets the level-r list can encode must occur in the tuple.
UniversalSimReport universal_simulator_check(const GeneralModel& M, int r);

// bit position used between rows y and v (0-based from the right)
int sw_position(int k, int y, int v);

struct SwInstance {
    int k = 4;
    int y = 1;
    std::vector<int> rows;       // rows of P, distinct, interior, != y
    std::vector<uint64_t> g;     // g-values of P
    std::vector<int> w;          // wanted bits
};

bool sw_satisfies(const SwInstance& in, uint64_t G);
// the adjustment procedure: start from g(u_1), then fix one target at a time
// with trip-point additions and subtractions
std::optional<uint64_t> sw_trip_point(const SwInstance& in);

struct SwFlexReport {
    int k = 4;
    uint64_t instances = 0;
    uint64_t witnessed = 0;       // some G in [0, 2^C) works
    uint64_t procedure_ok = 0;    // the adjustment procedure found one
    std::string first_unwitnessed;
    std::string first_procedure_miss;
};

// every y, every set of rows, every g-assignment and every target string.
// With `rows_below` false, P only uses rows above y, where q_hat(y, v) is
// defined as written; with it true, rows below y use q_hat(v, y).
SwFlexReport sw_flexibility_exhaustive(int k, bool rows_below);

// a level-r point of row `row` inside tuple `tuple` whose g-value is G
std::optional<Vertex> realize_g(const GeneralModel& M, int r, const BigInt& tuple, int row, uint64_t G);

// Scan of a level tuple for a vertex on row y adjacent (B side) to all of H,
// restricted by `filter`. Returns the first hit in order.
std::optional<Vertex> search_tuple(const GeneralModel& M, int level, const BigInt& tuple, int y,
                                   const std::vector<Vertex>& H,
                                   const std::function<bool(const Vertex&)>& filter, uint64_t limit);

}  // namespace bvh

namespace bvh {

// The four parts of the no-missing-edges lemma, probed on random H.
struct NoMissingReport {
    int part = 1;
    int t = 0;
    int trials = 0;
    int applicable = 0;
    int found = 0;
    int exhausted = 0;       // searched the whole admissible region, nothing there
    int limit_hit = 0;       // gave up at the scan limit
    int invalid = 0;         // found witnesses that failed re-validation
    std::vector<std::string> failures;  // first few, verbatim
};

NoMissingReport no_missing_edges_check(const GeneralModel& M, int part, int t, int trials, uint64_t seed,
                                       uint64_t limit);

// level points of `level` whose projection to level+1 is the given parent
std::optional<Vertex> search_below(const GeneralModel& M, int level, const Vertex& parent_proj,
                                   const std::vector<Vertex>& H,
                                   const std::function<bool(const Vertex&)>& filter, uint64_t limit);

}  // namespace bvh
