#include "bvh/games.hpp"

#include "bvh/abstraction.hpp"

#include <algorithm>
#include <map>

namespace bvh {

std::string mode_name(GameMode m) {
    switch (m) {
        case GameMode::standard: return "standard";
        case GameMode::existential: return "existential";
        case GameMode::ef_order: return "ef-order";
    }
    return "?";
}

GameMode parse_mode(const std::string& s) {
    if (s == "standard") return GameMode::standard;
    if (s == "existential") return GameMode::existential;
    if (s == "ef-order" || s == "ef") return GameMode::ef_order;
    throw std::invalid_argument("unknown game mode: " + s);
}

size_t PebbleGameSolver::KeyHash::operator()(const Key& k) const {
    uint64_t h = 0x9e3779b97f4a7c15ull ^ (uint64_t{k.cnt} << 8 | k.rounds);
    for (int i = 0; i < k.cnt; ++i) {
        h ^= k.p[i];
        h *= 0xff51afd7ed558ccdull;
        h ^= h >> 33;
    }
    return static_cast<size_t>(h);
}

PebbleGameSolver::PebbleGameSolver(const OrderedStructure& A, const OrderedStructure& B, int pebbles, Budget budget)
    : A_(A), B_(B), r_(pebbles), budget_(budget) {
    if (!A.is_explicit() || !B.is_explicit()) throw UnsupportedError("solver needs explicit structures");
    if (pebbles < 1 || pebbles > 8) throw DomainError("pebble count must be in [1, 8]");
    if (A.size() >= 65536 || B.size() >= 65536) throw UnsupportedError("structures too large for the solver");
    if (A.constants().size() != B.constants().size()) throw DomainError("constant lists differ in length");
    for (size_t i = 0; i < A.constants().size(); ++i) consts_.emplace_back(A.constants()[i], B.constants()[i]);
}

bool PebbleGameSolver::compatible(uint32_t p, uint32_t q) const {
    size_t a1 = ea(p), b1 = eb(p), a2 = ea(q), b2 = eb(q);
    if ((a1 == a2) != (b1 == b2)) return false;
    if ((a1 < a2) != (b1 < b2)) return false;
    return A_.adj(a1, a2) == B_.adj(b1, b2);
}

bool PebbleGameSolver::can_add(const Pos& Q, uint32_t p) const {
    for (uint32_t q : Q)
        if (!compatible(p, q)) return false;
    for (auto [ca, cb] : consts_)
        if (!compatible(p, enc(ca, cb))) return false;
    return true;
}

PebbleGameSolver::Pos PebbleGameSolver::insert(const Pos& Q, uint32_t p) {
    Pos R = Q;
    auto it = std::lower_bound(R.begin(), R.end(), p);
    if (it == R.end() || *it != p) R.insert(it, p);
    return R;
}

PebbleGameSolver::Pos PebbleGameSolver::to_pos(const IndexMap& pos) const {
    Pos P;
    for (auto [a, b] : pos) {
        if (a >= A_.size() || b >= B_.size()) throw MoveError("pebbled vertex outside universe");
        P = insert(P, enc(a, b));
    }
    if (static_cast<int>(P.size()) > r_) throw MoveError("more pairs than pebbles");
    return P;
}

bool PebbleGameSolver::board_valid(const IndexMap& pos) const {
    Pos P;
    for (auto [a, b] : pos) {
        uint32_t p = enc(a, b);
        if (!can_add(P, p)) return false;
        P = insert(P, p);
    }
    // constants among themselves
    for (size_t i = 0; i < consts_.size(); ++i)
        for (size_t j = i + 1; j < consts_.size(); ++j)
            if (!compatible(enc(consts_[i].first, consts_[i].second), enc(consts_[j].first, consts_[j].second)))
                return false;
    return true;
}

std::vector<PebbleGameSolver::Pos> PebbleGameSolver::lift_options(const Pos& P) const {
    std::vector<Pos> out;
    bool full = static_cast<int>(P.size()) >= r_;
    if (!full) out.push_back(P);
    if (full || full_branching_)
        for (size_t i = 0; i < P.size(); ++i) {
            Pos Q = P;
            Q.erase(Q.begin() + i);
            out.push_back(Q);
        }
    return out;
}

bool PebbleGameSolver::V(const Pos& P, int n) {
    if (n == 0) return true;
    for (auto& Q : lift_options(P))
        if (!PV(Q, n)) return false;
    return true;
}

bool PebbleGameSolver::PV(const Pos& Q, int n) {
    Key key{};
    key.cnt = static_cast<uint8_t>(Q.size());
    key.rounds = static_cast<uint8_t>(n);
    for (size_t i = 0; i < Q.size(); ++i) key.p[i] = Q[i];
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (++nodes_ > budget_.max_nodes) throw BudgetExceeded("node budget exceeded");
    bool result = true;
    for (int side = 0; side < 2 && result; ++side) {
        const OrderedStructure& S = side == 0 ? A_ : B_;
        const OrderedStructure& T = side == 0 ? B_ : A_;
        for (size_t v = 0; v < S.size() && result; ++v) {
            bool found = false;
            // the mirror reply first, then everything else in order
            auto attempt = [&](size_t w) {
                uint32_t p = side == 0 ? enc(v, w) : enc(w, v);
                if (!can_add(Q, p)) return false;
                if (n == 1) return true;
                return V(insert(Q, p), n - 1);
            };
            if (v < T.size() && attempt(v)) found = true;
            for (size_t w = 0; w < T.size() && !found; ++w)
                if (w != v && attempt(w)) found = true;
            if (!found) result = false;
        }
    }
    if (memo_.size() >= budget_.max_memo) throw BudgetExceeded("memo budget exceeded");
    memo_.emplace(key, result);
    return result;
}

bool PebbleGameSolver::value(const IndexMap& pos, int rounds) {
    if (!board_valid(pos)) return false;
    return V(to_pos(pos), rounds);
}

std::vector<size_t> PebbleGameSolver::good_replies(const IndexMap& pos, int rounds, int lift, int side,
                                                   size_t vertex) {
    if (rounds < 1) throw MoveError("no rounds left");
    if (side != 0 && side != 1) throw MoveError("side must be 0 (A) or 1 (B)");
    const OrderedStructure& S = side == 0 ? A_ : B_;
    const OrderedStructure& T = side == 0 ? B_ : A_;
    if (vertex >= S.size()) throw MoveError("vertex outside universe");
    if (lift >= static_cast<int>(pos.size())) throw MoveError("lifted pebble not on the board");
    if (lift < 0 && static_cast<int>(pos.size()) >= r_) throw MoveError("no free pebble; lift one first");
    IndexMap rest = pos;
    if (lift >= 0) rest.erase(rest.begin() + lift);
    Pos Q = to_pos(rest);
    std::vector<size_t> out;
    if (!board_valid(rest)) return out;
    for (size_t w = 0; w < T.size(); ++w) {
        uint32_t p = side == 0 ? enc(vertex, w) : enc(w, vertex);
        if (!can_add(Q, p)) continue;
        if (V(insert(Q, p), rounds - 1)) out.push_back(w);
    }
    return out;
}

void PebbleGameSolver::extract(const Pos& P, int n, std::vector<WitnessRound>& out) {
    for (auto& Q : lift_options(P)) {
        if (PV(Q, n)) continue;
        WitnessRound wr;
        if (Q.size() < P.size()) {
            for (size_t i = 0; i < P.size(); ++i)
                if (i >= Q.size() || P[i] != Q[i]) {
                    wr.lifted = std::make_pair(ea(P[i]), eb(P[i]));
                    break;
                }
        }
        for (int side = 0; side < 2; ++side) {
            const OrderedStructure& S = side == 0 ? A_ : B_;
            const OrderedStructure& T = side == 0 ? B_ : A_;
            for (size_t v = 0; v < S.size(); ++v) {
                bool found = false;
                std::optional<size_t> least;
                for (size_t w = 0; w < T.size() && !found; ++w) {
                    uint32_t p = side == 0 ? enc(v, w) : enc(w, v);
                    if (!can_add(Q, p)) continue;
                    if (!least) least = w;
                    if (n == 1 || V(insert(Q, p), n - 1)) found = true;
                }
                if (found) continue;
                wr.side = side;
                wr.vertex = v;
                wr.reply = least;
                out.push_back(wr);
                if (least) {
                    uint32_t p = side == 0 ? enc(v, *least) : enc(*least, v);
                    extract(insert(Q, p), n - 1, out);
                }
                return;
            }
        }
    }
}

std::vector<WitnessRound> PebbleGameSolver::witness(const IndexMap& pos, int rounds) {
    std::vector<WitnessRound> out;
    if (!board_valid(pos) || V(to_pos(pos), rounds)) return out;
    extract(to_pos(pos), rounds, out);
    return out;
}

SolveResult solve(const OrderedStructure& A, const OrderedStructure& B, const GameSpec& spec, Budget budget) {
    SolveResult res;
    if (spec.mode == GameMode::existential) {
        auto e = solve_existential(A, B, spec.pebbles, ExistentialValidity::partial_isomorphism, budget);
        res.duplicator_wins = e.duplicator_survives;
        res.memo_entries = e.positions;
        return res;
    }
    int r = spec.mode == GameMode::ef_order ? std::max(spec.rounds, 1) : spec.pebbles;
    if (spec.rounds < 0) throw DomainError("rounds must be nonnegative");
    PebbleGameSolver solver(A, B, r, budget);
    res.duplicator_wins = solver.value({}, spec.rounds);
    if (!res.duplicator_wins) res.witness = solver.witness({}, spec.rounds);
    res.nodes = solver.nodes();
    res.memo_entries = solver.memo_size();
    return res;
}

ExistentialResult solve_existential(const OrderedStructure& A, const OrderedStructure& B, int pebbles,
                                    ExistentialValidity validity, Budget budget) {
    if (!A.is_explicit() || !B.is_explicit()) throw UnsupportedError("solver needs explicit structures");
    if (pebbles < 1) throw DomainError("pebble count must be positive");
    using Pos = std::vector<std::pair<size_t, size_t>>;
    auto ok_pair = [&](std::pair<size_t, size_t> p, std::pair<size_t, size_t> q) {
        auto [a1, b1] = p;
        auto [a2, b2] = q;
        if (a1 == a2) return b1 == b2;
        if (b1 == b2) return false;
        if (validity == ExistentialValidity::partial_isomorphism) {
            if ((a1 < a2) != (b1 < b2)) return false;
            return A.adj(a1, a2) == B.adj(b1, b2);
        }
        return !A.adj(a1, a2) || B.adj(b1, b2);
    };
    // enumerate valid positions: sorted by A vertex, distinct A vertices
    std::map<Pos, size_t> id;
    std::vector<Pos> all;
    Pos cur;
    std::function<void(size_t)> gen = [&](size_t fromA) {
        id.emplace(cur, all.size());
        all.push_back(cur);
        if (all.size() > budget.max_memo) throw BudgetExceeded("position budget exceeded");
        if (static_cast<int>(cur.size()) == pebbles) return;
        for (size_t a = fromA; a < A.size(); ++a)
            for (size_t b = 0; b < B.size(); ++b) {
                bool ok = true;
                for (auto& q : cur) ok = ok && ok_pair({a, b}, q);
                if (!ok) continue;
                cur.emplace_back(a, b);
                gen(a + 1);
                cur.pop_back();
            }
    };
    gen(0);
    std::vector<char> alive(all.size(), 1);
    auto lookup = [&](const Pos& p) -> long {
        auto it = id.find(p);
        return it == id.end() ? -1 : static_cast<long>(it->second);
    };
    ExistentialResult res;
    res.positions = all.size();
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < all.size(); ++i) {
            if (!alive[i]) continue;
            const Pos& P = all[i];
            bool keep = true;
            // Spoiler may lift any pebble at any time
            for (size_t j = 0; j < P.size() && keep; ++j) {
                Pos Q = P;
                Q.erase(Q.begin() + j);
                long q = lookup(Q);
                if (q < 0 || !alive[q]) keep = false;
            }
            if (keep && static_cast<int>(P.size()) < pebbles) {
                for (size_t a = 0; a < A.size() && keep; ++a) {
                    bool answered = false;
                    for (auto& pr : P)
                        if (pr.first == a) answered = true;
                    for (size_t b = 0; b < B.size() && !answered; ++b) {
                        Pos Q = P;
                        Q.emplace_back(a, b);
                        std::sort(Q.begin(), Q.end());
                        long q = lookup(Q);
                        if (q >= 0 && alive[q]) answered = true;
                    }
                    if (!answered) keep = false;
                }
            }
            if (!keep) {
                alive[i] = 0;
                ++res.eliminated;
                changed = true;
            }
        }
    }
    res.duplicator_survives = alive[lookup(Pos{})] != 0;
    return res;
}

OrderedStructure existential_clique_board(int k) {
    std::vector<Vertex> vs;
    std::vector<std::pair<size_t, size_t>> es;
    for (int y = 0; y < k; ++y) vs.push_back({0, y});
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) es.emplace_back(i, j);
    return OrderedStructure::make_explicit(k, 0, "existential-A", k - 1, vs, es);
}

OrderedStructure existential_b_board(int k) {
    if (k < 3) throw DomainError("existential board needs k >= 3");
    std::vector<Vertex> vs;
    for (int y = 0; y < k; ++y)
        for (int x = 0; x < k - 1; ++x) vs.push_back({x, y});
    std::vector<std::pair<size_t, size_t>> es;
    for (size_t i = 0; i < vs.size(); ++i)
        for (size_t j = i + 1; j < vs.size(); ++j) {
            int xi = vs[i].x.convert_to<int>(), xj = vs[j].x.convert_to<int>();
            if (vs[i].y != vs[j].y && (xi + vs[i].y) % (k - 1) != (xj + vs[j].y) % (k - 1)) es.emplace_back(i, j);
        }
    return OrderedStructure::make_explicit(k, 0, "existential-B", k - 1, vs, es);
}

SolveResult solve_ef_orders(int len_a, int len_b, int rounds, Budget budget) {
    return solve(edgeless_order(len_a), edgeless_order(len_b), {rounds, rounds, GameMode::ef_order}, budget);
}

}  // namespace bvh

namespace bvh {

std::vector<size_t> play_step(PebbleGameSolver& solver, const IndexMap& pos, int rounds_left, int lift, int side,
                              size_t vertex) {
    return solver.good_replies(pos, rounds_left, lift, side, vertex);
}

}  // namespace bvh
