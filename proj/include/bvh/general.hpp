#pragma once

// Predicate-level model of the k >= 4 structures. Nothing here is
// materialized; every relation is a point query on (possibly huge) coordinates.

#include "bvh/abstraction.hpp"
#include "bvh/structure.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bvh {

enum class Side { A, B };
std::string side_name(Side s);
Side parse_side(const std::string& s);

struct CongruenceLabel {
    int a = 0;      // cc at the vertex's own index
    int row = 0;
    int index = 0;
    int R = -1;     // RngNum at the vertex's own index
    std::vector<CongruenceLabel> S;  // sorted, no duplicates

    bool operator==(const CongruenceLabel& o) const;
    bool operator<(const CongruenceLabel& o) const;
};

std::string label_str(const CongruenceLabel& l);

// Filled slots of a (k-1)-tuple; blanks are implicit and always trail.
struct BoardConfiguration {
    std::vector<Vertex> slots;
    size_t size() const { return slots.size(); }
    bool contains(const Vertex& v) const;
    bool operator==(const BoardConfiguration& o) const { return slots == o.slots; }
};

// configs[0..bc]; trailing blank configurations are not stored.
struct BoardHistory {
    std::vector<BoardConfiguration> configs;
    bool operator==(const BoardHistory& o) const { return configs == o.configs; }
};

struct FullVertex {
    Vertex flat;
    BoardHistory history;
    int bc = 0;
    const BoardConfiguration& config() const { return history.configs.at(static_cast<size_t>(bc)); }
};

std::string config_str(const BoardConfiguration& c);
std::string history_str(const BoardHistory& h);

struct TraceItem {
    std::string rule;
    bool ok = true;
    std::string detail;
};
using EdgeTrace = std::vector<TraceItem>;

class GeneralModel {
public:
    explicit GeneralModel(AbstractionParams P);

    const AbstractionParams& params() const { return P_; }
    int k() const { return P_.k; }
    int m() const { return P_.m; }
    int bits() const { return P_.choose_c(); }

    int rng_num(const BigInt& x, int l) const;
    int idx(const BigInt& x) const { return P_.idx(x); }
    int sgn(const Vertex& a, const Vertex& b) const;
    BigInt g(const BigInt& x) const;
    BigInt sw(const Vertex& a, const Vertex& b) const;
    std::string sw_string(const Vertex& a, const Vertex& b) const;
    static int q_hat(int k, int y, int y2);  // y < y2, both interior
    // BIT(SW(a,b), q_hat(min row, max row)), i.e. bit q_hat-1 from the right
    bool sw_bit(const Vertex& a, const Vertex& b) const;

    std::vector<Vertex> decode_S_elements(const BigInt& x, int i) const;
    // the j-th entry of the list behind S for level-i vertices
    std::vector<Vertex> decode_band(const BigInt& j, int i) const;
    std::vector<CongruenceLabel> decode_S(const BigInt& x, int i) const;
    std::vector<CongruenceLabel> S_of(const Vertex& v) const;
    CongruenceLabel label(const Vertex& v) const;
    bool in_omega(const Vertex& owner, const Vertex& cand) const;

    bool critical_star(const Vertex& a, const Vertex& b) const;
    bool edge_star(const Vertex& a, const Vertex& b, Side side, EdgeTrace* trace = nullptr) const;

    // board configurations and histories
    bool config_valid(const BoardConfiguration& c) const;
    bool bc_evolve(const BoardConfiguration& c1, const Vertex& src, const BoardConfiguration& c2) const;
    bool history_valid(const FullVertex& v) const;
    bool history_step(const FullVertex& a, const FullVertex& b) const;
    bool history_star(const FullVertex& a, const FullVertex& b) const;
    bool continuity(const FullVertex& a, const FullVertex& b) const;
    bool leads(const FullVertex& a, const FullVertex& b) const;     // a ->> b
    bool squiggle(const FullVertex& a, const FullVertex& b) const;  // a ~> b
    int compare_history(const FullVertex& a, const FullVertex& b) const;
    bool full_less(const FullVertex& a, const FullVertex& b) const;

    bool edge_full(const FullVertex& a, const FullVertex& b, Side side, EdgeTrace* trace = nullptr) const;

    // the k-clique sitting at the middle of every row
    std::vector<Vertex> lemma_clique_flat() const;
    std::vector<FullVertex> lemma_clique_full() const;  // needs m >= k

    // first coordinate of the n-th point of level i
    BigInt level_point(const BigInt& n, int i) const;
    BigInt level_count(int i) const;  // number of level-i points per row

private:
    AbstractionParams P_;
    BigInt two_c_;  // 2^C(k-2,2)
    bool rule_e(const Vertex& a, const Vertex& b, int t, std::string* detail) const;
};

}  // namespace bvh
