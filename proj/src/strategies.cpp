#include "bvh/strategies.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

namespace bvh {

K3StrategyContext::K3StrategyContext(const K3Pair& pair) : P_(pair.P), A_(pair.A), B_(pair.B) {
    if (!P_.is_k3()) throw ConfigurationError("the scripted strategy is for k = 3 only");
    if (!A_.is_explicit() || !B_.is_explicit()) throw ConfigurationError("structures must be explicit");
    W_ = P_.width64();
    if (A_.size() != static_cast<size_t>(3 * W_) || B_.size() != A_.size())
        throw ConfigurationError("structures do not match the parameters");
    for (int s = 0; s < 2; ++s) {
        const OrderedStructure& S = structure(s);
        pos_[s].assign(static_cast<size_t>(3 * W_), 0);
        for (size_t i = 0; i < S.size(); ++i) {
            const Vertex& v = S.vertex(i);
            pos_[s][static_cast<size_t>(v.y * W_ + to_i64(v.x))] = i;
        }
    }
    if (A_.constants().size() != B_.constants().size()) throw ConfigurationError("constants differ");
    for (size_t i = 0; i < A_.constants().size(); ++i) {
        const Vertex& va = A_.vertex(A_.constants()[i]);
        const Vertex& vb = B_.vertex(B_.constants()[i]);
        if (!(va == vb)) throw ConfigurationError("constants carry different labels");
        consts_.push_back({to_i64(va.x), va.y});
    }
}

bool K3StrategyContext::adj(int side, int64_t x1, int y1, int64_t x2, int y2) const {
    return structure(side).adj(index(side, x1, y1), index(side, x2, y2));
}

int64_t K3StrategyContext::row_count(int level) const { return to_i64(P_.gamma_star[P_.m - level]); }

DuplicatorStateK3 DuplicatorStateK3::start(const K3StrategyContext& ctx) {
    DuplicatorStateK3 st;
    st.ctx = &ctx;
    st.xi = ctx.params().m;
    st.theta = ctx.params().m;
    return st;
}

void DuplicatorStateK3::lift(size_t i) {
    if (i >= board.size()) throw ConfigurationError("lifted pebble not on the board");
    board.erase(board.begin() + static_cast<long>(i));
}

namespace {

int sgn(int64_t v) { return (v > 0) - (v < 0); }

// Does the pair (x in side s, xr in the other side) agree with pebble q and
// with every constant on the real structures?
bool real_ok(const K3StrategyContext& C, int s, int64_t x, int y, int64_t xr, const K3Pebble* q) {
    int t = 1 - s;
    auto check = [&](int64_t us, int64_t ut, int v) {
        if (v == y) {
            if ((x == us) != (xr == ut)) return false;
            if (C.less(s, x, y, us, v) != C.less(t, xr, y, ut, v)) return false;
            return true;
        }
        return C.adj(s, x, y, us, v) == C.adj(t, xr, y, ut, v);
    };
    if (q && !check(s == 0 ? q->xa : q->xb, s == 0 ? q->xb : q->xa, q->y)) return false;
    for (auto& [cx, cy] : C.constant_labels())
        if (!check(cx, cx, cy)) return false;
    return true;
}

std::string pick_str(int side, int64_t x, int y) {
    std::ostringstream o;
    o << (side == 0 ? "A" : "B") << "(" << x << "," << y << ")";
    return o.str();
}

struct Search {
    const K3StrategyContext& C;
    const AbstractionParams& P;
    int side;
    int64_t x;
    int y;
    const K3Pebble& a;
    int round;
};

// Candidate replies computed in abstraction L, least in the target order.
std::optional<int64_t> search_level(const Search& S, int L, bool resort, std::vector<std::string>* trace) {
    const auto& C = S.C;
    const auto& P = S.P;
    int s = S.side, t = 1 - s;
    int64_t W = C.width();
    int64_t p = P.proj64(S.x, L);
    int64_t r = S.x - p;
    int64_t G = C.row_count(L);
    int64_t np = P.floor64(S.x, L);
    int ip = P.idx64(p);
    int64_t aS = s == 0 ? S.a.xa : S.a.xb;
    int64_t aT = s == 0 ? S.a.xb : S.a.xa;
    int64_t apS = P.proj64(aS, L), apT = P.proj64(aT, L);
    int T = C.threshold(S.round);
    bool edge_case = S.a.y != S.y;
    bool border = np < T || G - np < T;
    std::optional<int64_t> best;
    size_t best_pos = 0;
    uint64_t seen = 0;
    for (int64_t n = 0; n < G; ++n) {
        int64_t c = n * P.unit64(L) + P.off64(L);
        int ic = P.idx64(c);
        if (!resort) {
            if (ic < L || ic > ip) continue;
        } else {
            if (ic != L) continue;
            // a fresh vertex of the lower abstraction: same cc as a genuine pick
            // of that level, otherwise an even coordinate
            if (ip == L) {
                if (P.cc64(c, S.y, L) != P.cc64(p, S.y, L)) continue;
            } else if (n % 2 != 0) {
                continue;
            }
        }
        int64_t xr = c + r;
        if (xr < 0 || xr >= W || P.proj64(xr, L) != c) continue;
        // order over the abstraction
        if (border) {
            if (n != np) continue;
        } else if (n < T || n > G - T) {
            continue;
        }
        if (!edge_case && sgn(np - P.floor64(aS, L)) != sgn(n - P.floor64(aT, L))) continue;
        // edges over the abstraction
        if (edge_case && C.adj(s, p, S.y, apS, S.a.y) != C.adj(t, c, S.y, apT, S.a.y)) continue;
        // the same with the boundary pebbles
        bool ok = true;
        for (auto& [qx, qy] : C.constant_labels()) {
            int64_t qL = P.proj64(qx, L);
            if (qy != S.y) {
                if (C.adj(s, p, S.y, qL, qy) != C.adj(t, c, S.y, qL, qy)) ok = false;
            } else if (sgn(np - P.floor64(qx, L)) != sgn(n - P.floor64(qx, L))) {
                ok = false;
            }
            if (!ok) break;
        }
        if (!ok) continue;
        ++seen;
        if (!real_ok(C, s, S.x, S.y, xr, &S.a)) continue;
        size_t pos = C.index(t, xr, S.y);
        if (!best || pos < best_pos) {
            best = xr;
            best_pos = pos;
        }
    }
    if (trace) {
        std::ostringstream o;
        o << "level " << L << (resort ? " (resort)" : "") << ": virtual pick " << p << ", residue " << r
          << ", threshold " << T << ", " << seen << " candidates pass the abstraction tests";
        if (best) o << ", least board-safe reply " << *best;
        else o << ", none is board-safe";
        trace->push_back(o.str());
    }
    return best;
}

}  // namespace

K3Reply respond_k3(DuplicatorStateK3& st, int side, int64_t x, int y, std::vector<std::string>* trace) {
    if (!st.ctx) throw ConfigurationError("state has no context");
    const K3StrategyContext& C = *st.ctx;
    const AbstractionParams& P = C.params();
    if (side != 0 && side != 1) throw MoveError("side must be 0 (A) or 1 (B)");
    if (y < 0 || y > 2 || x < 0 || x >= C.width()) throw MoveError("vertex outside universe");
    if (st.board.size() >= 2) throw ConfigurationError("no free pebble; the strategy plays with 2 pebbles");
    if (st.round >= 1 && st.theta >= st.xi)
        throw StrategyInvariantError("theta >= xi after the first round", trace ? *trace : std::vector<std::string>{});
    int round = st.round + 1;
    if (trace)
        trace->push_back("round " + std::to_string(round) + ": Spoiler picks " + pick_str(side, x, y) + ", xi = " +
        std::to_string(st.xi) + ", theta = " + std::to_string(st.theta));
    auto finish = [&](int64_t xr, int level, const char* phase, bool place) {
        if (place) {
            K3Pebble q;
            q.y = y;
            q.xa = side == 0 ? x : xr;
            q.xb = side == 0 ? xr : x;
            st.board.push_back(q);
        }
        st.round += 1;
        st.theta -= 1;
        st.xi = level;
        if (trace) trace->push_back(std::string(phase) + ": reply " + pick_str(1 - side, xr, y));
        return K3Reply{xr, level, phase};
    };

    for (auto& q : st.board)
        if (q.y == y && (side == 0 ? q.xa : q.xb) == x) return finish(side == 0 ? q.xb : q.xa, st.xi, "repeat", false);
    if (st.board.empty()) return finish(x, st.xi, "mimic", true);

    const K3Pebble& a = st.board.front();
    int64_t aS = side == 0 ? a.xa : a.xb;
    int m = P.m;
    int64_t mid = to_i64(P.mid());

    if (st.mimicking && !C.reduced()) st.mimicking = false;
    if (st.mimicking) {
        bool ice = (y == 0 || y == 2) && a.y == 2 - y && P.proj64(x, m) == mid && P.proj64(aS, m) == mid;
        if (!ice) return finish(x, st.xi, "mimic", true);
        // icebreak: both middle objects of the outer rows are now touched
        st.mimicking = false;
        int64_t G = C.row_count(m);
        int64_t r = x - P.proj64(x, m);
        std::optional<int64_t> best;
        size_t best_pos = 0;
        for (int64_t n = 1; n + 1 < G; ++n) {
            int64_t c = n * P.unit64(m) + P.off64(m);
            int64_t xr = c + r;
            if (xr < 0 || xr >= C.width() || P.proj64(xr, m) != c) continue;
            int cc = P.cc64(c, y, m);
            if (side == 0 ? cc == 0 : (cc != 0 || c == mid)) continue;
            if (!real_ok(C, side, x, y, xr, &a)) continue;
            size_t pos = C.index(1 - side, xr, y);
            if (!best || pos < best_pos) {
                best = xr;
                best_pos = pos;
            }
        }
        if (!best) throw StrategyInvariantError("no icebreaking reply", trace ? *trace : std::vector<std::string>{});
        return finish(*best, m, "icebreak", true);
    }

    Search S{C, P, side, x, y, a, round};
    if (auto r = search_level(S, st.xi, false, trace)) return finish(*r, st.xi, "abstraction", true);
    if (st.xi - 1 >= P.lo())
        if (auto r = search_level(S, st.xi - 1, true, trace)) return finish(*r, st.xi - 1, "resort", true);
    throw StrategyInvariantError("no reply keeps the winning conditions at xi = " + std::to_string(st.xi),
                                 trace ? *trace : std::vector<std::string>{});
}

std::vector<int> k3_condition_failures(const DuplicatorStateK3& st, const K3Pebble* fresh, int spoiler_side) {
    const K3StrategyContext& C = *st.ctx;
    const AbstractionParams& P = C.params();
    int xi = st.xi;
    std::vector<int> out;
    // 1: horizontal residues agree
    for (auto& q : st.board)
        if (q.xa - P.proj64(q.xa, xi) != q.xb - P.proj64(q.xb, xi)) {
            out.push_back(1);
            break;
        }
    // 2: order over the abstraction for the fresh pair
    if (fresh) {
        int T = C.threshold(st.round);
        int64_t G = C.row_count(xi);
        int64_t n = P.floor64(spoiler_side == 0 ? fresh->xa : fresh->xb, xi);
        int64_t nr = P.floor64(spoiler_side == 0 ? fresh->xb : fresh->xa, xi);
        bool ok = (n < T || G - n < T) ? nr == n : (nr >= T && nr <= G - T);
        if (!ok) out.push_back(2);
    }
    // 3 and 4: projected edges, then with the boundary constants added
    auto proj_edges_ok = [&](bool with_constants) {
        std::vector<K3Pebble> pts;
        for (auto& q : st.board) pts.push_back({P.proj64(q.xa, xi), P.proj64(q.xb, xi), q.y});
        if (with_constants)
            for (auto& [cx, cy] : C.constant_labels()) pts.push_back({P.proj64(cx, xi), P.proj64(cx, xi), cy});
        for (size_t i = 0; i < pts.size(); ++i)
            for (size_t j = i + 1; j < pts.size(); ++j) {
                if (pts[i].y == pts[j].y) continue;
                if (C.adj(0, pts[i].xa, pts[i].y, pts[j].xa, pts[j].y) !=
                    C.adj(1, pts[i].xb, pts[i].y, pts[j].xb, pts[j].y))
                    return false;
            }
        return true;
    };
    if (!proj_edges_ok(false)) out.push_back(3);
    if (C.has_constants() && !proj_edges_ok(true)) out.push_back(4);
    if (st.round >= 1 && !(st.theta < st.xi)) out.push_back(5);
    // 6: the real board
    bool iso = true;
    for (size_t i = 0; i < st.board.size() && iso; ++i) {
        const K3Pebble& q = st.board[i];
        const K3Pebble* other = nullptr;
        for (size_t j = 0; j < i; ++j) other = &st.board[j];
        if (!real_ok(C, 0, q.xa, q.y, q.xb, other)) iso = false;
    }
    if (st.board.size() > 2) iso = false;
    if (!iso) out.push_back(6);
    return out;
}

namespace {

struct Worker {
    const K3Pair& pair;
    const K3StrategyContext& C;
    int rounds;
    ValidateOptions opt;
    StrategyReport rep;
    std::optional<PebbleGameSolver> solver;
    std::mt19937_64 rng;
    std::uniform_real_distribution<double> coin{0.0, 1.0};

    Worker(const K3Pair& p, const K3StrategyContext& c, int r, const ValidateOptions& o)
        : pair(p), C(c), rounds(r), opt(o) {
        rep.min_xi = C.params().m;
        if (opt.solver_fraction > 0) solver.emplace(pair.A, pair.B, opt.pebbles);
    }

    IndexMap index_map(const DuplicatorStateK3& st) const {
        IndexMap im;
        for (auto& q : st.board) im.push_back({C.index(0, q.xa, q.y), C.index(1, q.xb, q.y)});
        return im;
    }

    struct Move {
        int lift, side;
        int64_t x;
        int y;
    };
    std::vector<Move> path;

    // replays the current path with tracing, for the report
    std::vector<std::string> replay() const {
        std::vector<std::string> trace;
        DuplicatorStateK3 st = DuplicatorStateK3::start(C);
        try {
            for (auto& mv : path) {
                if (mv.lift >= 0) st.lift(static_cast<size_t>(mv.lift));
                respond_k3(st, mv.side, mv.x, mv.y, &trace);
            }
        } catch (const std::exception& e) {
            trace.push_back(e.what());
        }
        return trace;
    }

    void record(const std::string& what) {
        ++rep.violations;
        if (rep.first_violations.size() >= 10) return;
        std::string s = what;
        for (auto& t : replay()) s += " | " + t;
        rep.first_violations.push_back(s);
    }

    // one Spoiler move from `st`; descends when the board survives
    void move(const DuplicatorStateK3& st, int depth, int lift, int side, int64_t x, int y) {
        path.push_back({lift, side, x, y});
        step(st, depth, lift, side, x, y);
        path.pop_back();
    }

    void step(const DuplicatorStateK3& st, int depth, int lift, int side, int64_t x, int y) {
        DuplicatorStateK3 nx = st;
        if (lift >= 0) nx.lift(static_cast<size_t>(lift));
        int xi_before = nx.xi;
        K3Reply reply;
        try {
            reply = respond_k3(nx, side, x, y);
        } catch (const StrategyInvariantError& e) {
            ++rep.sequences;
            record(e.what());
            return;
        }
        ++rep.responses;
        if (nx.xi < xi_before) ++rep.resorts;
        rep.min_xi = std::min(rep.min_xi, nx.xi);
        const K3Pebble* fresh = nullptr;
        if (reply.phase != "repeat") fresh = &nx.board.back();
        auto fails = k3_condition_failures(nx, fresh, side);
        for (int f : fails) ++rep.condition_failures[f];
        if (solver && coin(rng) < opt.solver_fraction) {
            ++rep.solver_checks;
            auto good = play_step(*solver, index_map(st), rounds - depth, lift, side, C.index(side, x, y));
            size_t mine = C.index(1 - side, reply.x, y);
            if (!std::binary_search(good.begin(), good.end(), mine)) {
                ++rep.solver_disagreements;
                record("solver rejects reply");
            }
        }
        if (!fails.empty()) {
            std::string w = "conditions failed:";
            for (int f : fails) w += " " + std::to_string(f);
            record(w);
            if (std::find(fails.begin(), fails.end(), 6) != fails.end()) {
                ++rep.sequences;
                return;
            }
        }
        dfs(nx, depth + 1);
    }

    void dfs(const DuplicatorStateK3& st, int depth) {
        if (depth == rounds) {
            ++rep.sequences;
            return;
        }
        std::vector<int> lifts;
        if (static_cast<int>(st.board.size()) < opt.pebbles) lifts.push_back(-1);
        for (size_t i = 0; i < st.board.size(); ++i) lifts.push_back(static_cast<int>(i));
        int64_t W = C.width();
        for (int lift : lifts)
            for (int side = 0; side < 2; ++side)
                for (int y = 0; y < 3; ++y)
                    for (int64_t x = 0; x < W; ++x) move(st, depth, lift, side, x, y);
    }
};

}  // namespace

StrategyReport validate_strategy(const K3Pair& pair, int rounds, const ValidateOptions& opt) {
    if (opt.pebbles != 2) throw ConfigurationError("the scripted strategy is a 2-pebble strategy");
    if (rounds < 0) throw ConfigurationError("negative round count");
    K3StrategyContext C(pair);
    int64_t W = C.width();
    std::vector<std::tuple<int, int, int64_t>> first;
    for (int side = 0; side < 2; ++side)
        for (int y = 0; y < 3; ++y)
            for (int64_t x = 0; x < W; ++x) first.emplace_back(side, y, x);

    StrategyReport total;
    total.m = pair.P.m;
    total.variant = pair.P.variant == Variant::reduced_k3 ? "reduced" : "full";
    total.constants = C.has_constants();
    total.rounds = rounds;
    total.min_xi = pair.P.m;
    if (rounds == 0) {
        total.sequences = 1;
        return total;
    }

    int jobs = std::max(1, opt.jobs);
    std::vector<StrategyReport> parts(first.size());
    auto run = [&](size_t lo, size_t hi) {
        Worker w(pair, C, rounds, opt);
        for (size_t i = lo; i < hi; ++i) {
            w.rep = StrategyReport{};
            w.rep.min_xi = pair.P.m;
            w.rng.seed(opt.seed * 1000003ull + i);
            auto [side, y, x] = first[i];
            w.move(DuplicatorStateK3::start(C), 0, -1, side, x, y);
            parts[i] = std::move(w.rep);
        }
    };
    if (jobs == 1) {
        run(0, first.size());
    } else {
        std::vector<std::thread> th;
        size_t chunk = (first.size() + static_cast<size_t>(jobs) - 1) / static_cast<size_t>(jobs);
        for (size_t lo = 0; lo < first.size(); lo += chunk)
            th.emplace_back(run, lo, std::min(first.size(), lo + chunk));
        for (auto& t : th) t.join();
    }
    for (auto& p : parts) {
        total.sequences += p.sequences;
        total.responses += p.responses;
        total.violations += p.violations;
        for (int c = 0; c < 7; ++c) total.condition_failures[c] += p.condition_failures[c];
        total.resorts += p.resorts;
        total.min_xi = std::min(total.min_xi, p.min_xi);
        total.solver_checks += p.solver_checks;
        total.solver_disagreements += p.solver_disagreements;
        for (auto& v : p.first_violations)
            if (total.first_violations.size() < 10) total.first_violations.push_back(v);
    }
    return total;
}

}  // namespace bvh
