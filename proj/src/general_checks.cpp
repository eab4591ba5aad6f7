#include "bvh/general_checks.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace bvh {

// ---------------------------------------------------------------- clique sampling

namespace {

struct Sampler {
    const GeneralModel& M;
    const AbstractionParams& P;
    std::mt19937_64& rng;

    int pick(int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<uint64_t>(hi - lo + 1)); }

    // a vertex of row y whose index is exactly `level`; cc, RngNum and the
    // residue mod k-1 are steered when requested
    Vertex draw(int y, int level, int t, std::optional<int> cc_target, std::optional<int> third, bool zero_mod) {
        int k = P.k;
        BigInt count = M.level_count(level);
        for (int attempt = 0; attempt < 64; ++attempt) {
            BigInt n = random_below(rng, count);
            if (third && level < P.m) {
                const BigInt& U = P.u_star[level];
                BigInt base = (n / U) * U;
                BigInt span = U / 3;
                n = base + span * *third + random_below(rng, span);
                if (n >= count) continue;
            }
            if (zero_mod) n -= n % (k - 1);
            BigInt x = M.level_point(n, level);
            if (cc_target && level == t) {
                int c = P.cc(x, y, t);
                int delta = ((*cc_target - c) % (k - 1) + (k - 1)) % (k - 1);
                n += delta;
                if (n >= count) continue;
                x = M.level_point(n, level);
            }
            if (M.idx(x) != level) continue;
            return {x, y};
        }
        // fall back to the first point of that level with the right index
        for (BigInt n = 0; n < count; ++n) {
            BigInt x = M.level_point(n, level);
            if (M.idx(x) == level) return {x, y};
        }
        throw InvariantError("no vertex of the requested index");
    }
};

}  // namespace

CliqueSampleReport sampled_clique_check(const GeneralModel& M, Side side, int samples, uint64_t seed) {
    const auto& P = M.params();
    int k = P.k;
    std::mt19937_64 rng(seed);
    Sampler S{M, P, rng};
    CliqueSampleReport rep;
    rep.side = side;
    rep.samples = samples;
    rep.seed = seed;
    int pairs = k * (k - 1) / 2;
    rep.adjacent_pairs_histogram.assign(static_cast<size_t>(pairs) + 1, 0);
    for (int s = 0; s < samples; ++s) {
        int t = S.pick(P.lo(), P.m);
        std::vector<int> level(static_cast<size_t>(k));
        for (int y = 0; y < k; ++y) level[static_cast<size_t>(y)] = S.pick(t, P.m);
        level[static_cast<size_t>(S.pick(0, k - 1))] = t;
        int mode = S.pick(0, 2);  // 0 plain, 1 all residues zero, 2 steered cc on interior rows
        std::vector<Vertex> set;
        for (int y = 0; y < k; ++y) {
            int lv = level[static_cast<size_t>(y)];
            std::optional<int> third;
            if (rng() % 2) third = S.pick(0, 2);
            std::optional<int> cc;
            bool zero = false;
            if (mode == 1) zero = true;
            if (mode == 2 && y > 0 && y < k - 1) cc = S.pick(0, k - 2);
            if (lv > t && (y == 0 || y == k - 1) && rng() % 2) zero = true;
            set.push_back(S.draw(y, lv, t, cc, third, zero));
        }
        int adj = 0;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                if (M.edge_star(set[static_cast<size_t>(i)], set[static_cast<size_t>(j)], side)) ++adj;
        rep.adjacent_pairs_histogram[static_cast<size_t>(adj)]++;
        if (adj == pairs) rep.cliques.push_back(set);
    }
    auto W = M.lemma_clique_flat();
    rep.lemma_clique_adjacent = true;
    for (size_t i = 0; i < W.size(); ++i)
        for (size_t j = i + 1; j < W.size(); ++j)
            if (!M.edge_star(W[i], W[j], side)) rep.lemma_clique_adjacent = false;
    return rep;
}

// ---------------------------------------------------------------- universal simulator

UniversalSimReport universal_simulator_check(const GeneralModel& M, int r) {
    const auto& P = M.params();
    if (r < P.lo() || r >= P.m) throw DomainError("universal simulator needs lo <= r < m");
    int k = P.k;
    UniversalSimReport rep;
    rep.level = r;
    // every S the level-r list can encode
    std::set<std::vector<CongruenceLabel>> sets;
    for (BigInt j = 0; j < P.cl_star[r + 1]; ++j) {
        std::vector<CongruenceLabel> s;
        for (const Vertex& v : M.decode_band(j, r)) s.push_back(M.label(v));
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        sets.insert(s);
    }
    rep.targets = sets.size() * static_cast<size_t>(3 * (k - 1));
    const BigInt& U = P.u_star[r];
    BigInt tuples = M.level_count(r) / U;
    for (BigInt tu = 0; tu < tuples; ++tu) {
        for (int f = 0; f < k; ++f) {
            std::set<std::tuple<int, int, std::vector<CongruenceLabel>>> seen;
            for (BigInt c = 0; c < U; ++c) {
                BigInt x = M.level_point(tu * U + c, r);
                if (M.idx(x) != r) continue;
                CongruenceLabel l = M.label({x, f});
                seen.insert({l.a, l.R, l.S});
                ++rep.positions;
            }
            ++rep.tuples;
            for (const auto& s : sets)
                for (int a = 0; a < k - 1; ++a)
                    for (int R = -1; R <= 1; ++R)
                        if (!seen.count({a, R, s})) {
                            if (rep.missing == 0) {
                                std::ostringstream os;
                                os << "tuple " << tu << " row " << f << " a=" << a << " R=" << R << " |S|=" << s.size();
                                rep.first_missing = os.str();
                            }
                            ++rep.missing;
                        }
        }
    }
    return rep;
}

// ---------------------------------------------------------------- SW flexibility

int sw_position(int k, int y, int v) { return GeneralModel::q_hat(k, std::min(y, v), std::max(y, v)) - 1; }

static bool diff_bit(uint64_t G, uint64_t g, int p) {
    uint64_t d = G > g ? G - g : g - G;
    return (d >> p) & 1;
}

bool sw_satisfies(const SwInstance& in, uint64_t G) {
    for (size_t i = 0; i < in.rows.size(); ++i)
        if (diff_bit(G, in.g[i], sw_position(in.k, in.y, in.rows[i])) != (in.w[i] != 0)) return false;
    return true;
}

std::optional<uint64_t> sw_trip_point(const SwInstance& in) {
    size_t l = in.rows.size();
    if (l == 0) return 0;
    int C = (in.k - 2) * (in.k - 3) / 2;
    uint64_t top = uint64_t{1} << C;
    std::vector<size_t> ord(l);
    std::iota(ord.begin(), ord.end(), 0);
    std::vector<int> pos(l);
    for (size_t i = 0; i < l; ++i) pos[i] = sw_position(in.k, in.y, in.rows[i]);
    std::sort(ord.begin(), ord.end(), [&](size_t a, size_t b) { return pos[a] < pos[b]; });
    auto ok = [&](uint64_t G, size_t i) { return diff_bit(G, in.g[i], pos[i]) == (in.w[i] != 0); };

    size_t first = ord[0];
    uint64_t trip = uint64_t{1} << pos[first];
    uint64_t G = in.g[first] & ((trip << 1) - 1);  // keep bits 0..p
    if (!ok(G, first)) G = G >= trip ? G - trip : G + trip;

    for (size_t c = 1; c < l; ++c) {
        size_t cur = ord[c];
        if (ok(G, cur)) continue;
        uint64_t tp = uint64_t{1} << pos[cur];
        if (in.g[cur] >= G + tp) G += tp;
        else if (G >= tp) G -= tp;
        else if (G + tp < top) G += tp;
        else return std::nullopt;
        if (!ok(G, cur)) {
            // the move carried; restart from g(u) shifted by one trip
            G = in.g[cur] + tp < top ? in.g[cur] + tp : in.g[cur] - tp;
        }
        for (size_t j = 0; j < c; ++j) {
            size_t prev = ord[j];
            if (ok(G, prev)) continue;
            uint64_t tj = uint64_t{1} << pos[prev];
            std::vector<uint64_t> cand;
            if (G + tj < top) cand.push_back(G + tj);
            if (G >= tj) cand.push_back(G - tj);
            bool moved = false;
            for (uint64_t H : cand)
                if (ok(H, prev) && ok(H, cur)) {
                    G = H;
                    moved = true;
                    break;
                }
            if (!moved) return std::nullopt;
        }
    }
    if (G >= top || !sw_satisfies(in, G)) return std::nullopt;
    return G;
}

SwFlexReport sw_flexibility_exhaustive(int k, bool rows_below) {
    if (k < 4 || k > 6) throw DomainError("exhaustive SW scan supports 4 <= k <= 6");
    int C = (k - 2) * (k - 3) / 2;
    uint64_t top = uint64_t{1} << C;
    SwFlexReport rep;
    rep.k = k;
    for (int y = 1; y <= k - 2; ++y) {
        std::vector<int> others;
        for (int v = 1; v <= k - 2; ++v)
            if (v > y || (rows_below && v < y)) others.push_back(v);
        for (unsigned mask = 1; mask < (1u << others.size()); ++mask) {
            SwInstance in;
            in.k = k;
            in.y = y;
            for (size_t i = 0; i < others.size(); ++i)
                if (mask >> i & 1) in.rows.push_back(others[i]);
            size_t l = in.rows.size();
            in.g.assign(l, 0);
            in.w.assign(l, 0);
            std::vector<int> pos(l);
            for (size_t i = 0; i < l; ++i) pos[i] = sw_position(k, y, in.rows[i]);
            uint64_t combos = 1;
            for (size_t i = 0; i < l; ++i) combos *= top;
            for (uint64_t gc = 0; gc < combos; ++gc) {
                uint64_t rest = gc;
                for (size_t i = 0; i < l; ++i) {
                    in.g[i] = rest % top;
                    rest /= top;
                }
                // which bit patterns some G realizes
                std::vector<char> hit(size_t{1} << l, 0);
                for (uint64_t G = 0; G < top; ++G) {
                    unsigned pat = 0;
                    for (size_t i = 0; i < l; ++i)
                        if (diff_bit(G, in.g[i], pos[i])) pat |= 1u << i;
                    hit[pat] = 1;
                }
                for (unsigned wm = 0; wm < (1u << l); ++wm) {
                    for (size_t i = 0; i < l; ++i) in.w[i] = wm >> i & 1;
                    ++rep.instances;
                    auto describe = [&] {
                        std::ostringstream os;
                        os << "k=" << k << " y=" << y << " rows/g/w=";
                        for (size_t i = 0; i < l; ++i) os << " " << in.rows[i] << "/" << in.g[i] << "/" << in.w[i];
                        return os.str();
                    };
                    if (hit[wm]) ++rep.witnessed;
                    else if (rep.first_unwitnessed.empty()) rep.first_unwitnessed = describe();
                    if (sw_trip_point(in)) ++rep.procedure_ok;
                    else if (rep.first_procedure_miss.empty()) rep.first_procedure_miss = describe();
                }
            }
        }
    }
    return rep;
}

std::optional<Vertex> realize_g(const GeneralModel& M, int r, const BigInt& tuple, int row, uint64_t G) {
    const auto& P = M.params();
    if (r < P.lo() || r >= P.m) throw DomainError("realize_g needs lo <= r < m");
    const BigInt& U = P.u_star[r];
    const BigInt& eta = P.eta_star[r];
    BigInt base = tuple * U;
    BigInt blocks = U / eta;
    for (BigInt b = 0; b < blocks; ++b) {
        BigInt start = b * eta;
        if (G != 0 && 3 * start < U) continue;
        for (BigInt s = 0; s < 4 * P.k; ++s) {
            BigInt n = base + start + s;
            BigInt x = M.level_point(n, r);
            if (M.idx(x) != r) continue;
            if (M.g(x) == G) return Vertex{x, row};
            break;
        }
    }
    return std::nullopt;
}

std::optional<Vertex> search_tuple(const GeneralModel& M, int level, const BigInt& tuple, int y,
                                   const std::vector<Vertex>& H,
                                   const std::function<bool(const Vertex&)>& filter, uint64_t limit) {
    const auto& P = M.params();
    const BigInt& U = P.u_star[level];
    BigInt base = tuple * U;
    uint64_t scanned = 0;
    for (BigInt c = 0; c < U && scanned < limit; ++c, ++scanned) {
        Vertex v{M.level_point(base + c, level), y};
        if (filter && !filter(v)) continue;
        bool all = true;
        for (const Vertex& h : H)
            if (!M.edge_star(v, h, Side::B)) {
                all = false;
                break;
            }
        if (all) return v;
    }
    return std::nullopt;
}

}  // namespace bvh

namespace bvh {

std::optional<Vertex> search_below(const GeneralModel& M, int level, const Vertex& parent,
                                   const std::vector<Vertex>& H,
                                   const std::function<bool(const Vertex&)>& filter, uint64_t limit) {
    const auto& P = M.params();
    BigInt beta = P.unit(level + 1) / P.unit(level);
    BigInt start = P.floor_abs(parent.x, level + 1) * beta;
    uint64_t scanned = 0;
    for (BigInt c = 0; c < beta && scanned < limit; ++c, ++scanned) {
        Vertex v{M.level_point(start + c, level), parent.y};
        if (filter && !filter(v)) continue;
        bool all = true;
        for (const Vertex& h : H)
            if (!M.edge_star(v, h, Side::B)) {
                all = false;
                break;
            }
        if (all) return v;
    }
    return std::nullopt;
}

NoMissingReport no_missing_edges_check(const GeneralModel& M, int part, int t, int trials, uint64_t seed,
                                       uint64_t limit) {
    const auto& P = M.params();
    int k = P.k;
    if (part < 1 || part > 4) throw DomainError("part must be 1..4");
    int need = part == 3 ? 2 : 1;
    if (t - need < P.lo() || t > P.m) throw DomainError("level t out of range for this part");
    std::mt19937_64 rng(seed);
    auto point = [&](int lvl, int row) {
        for (;;) {
            BigInt x = M.level_point(random_below(rng, M.level_count(lvl)), lvl);
            if (M.idx(x) >= lvl) return Vertex{x, row};
        }
    };
    auto adjacent_all = [&](const Vertex& v, const std::vector<Vertex>& H) {
        for (const auto& h : H)
            if (!M.edge_star(v, h, Side::B)) return false;
        return true;
    };
    auto plain = [&](int lvl) {
        return [&M, &P, k, lvl](const Vertex& v) {
            return M.idx(v.x) == lvl && P.floor_abs(v.x, lvl) % (k - 1) == 0 && M.g(v.x) == 0 &&
                   M.rng_num(v.x, lvl) == -1;
        };
    };
    NoMissingReport rep;
    rep.part = part;
    rep.t = t;
    rep.trials = trials;
    for (int trial = 0; trial < trials; ++trial) {
        int y = static_cast<int>(rng() % static_cast<uint64_t>(k));
        std::vector<int> rows;
        for (int r = 0; r < k; ++r)
            if (r != y) rows.push_back(r);
        std::shuffle(rows.begin(), rows.end(), rng);
        std::vector<Vertex> H;
        if (part == 3) {
            // two distinct vertices share a row
            rows.resize(static_cast<size_t>(k - 3));
            rows.push_back(rows.front());
        } else {
            rows.resize(static_cast<size_t>(k - 2));
        }
        for (int r : rows) H.push_back(point(t, r));
        if (part == 3 && H[0].x == H.back().x) continue;
        std::optional<Vertex> w;
        bool exhaustive = false;
        std::ostringstream desc;
        desc << "part " << part << " t=" << t << " y=" << y << " H=";
        for (const auto& h : H) desc << " (" << h.x << "," << h.y << ")";
        if (part == 1) {
            bool c_ok = false;
            for (int c = 0; c < k; ++c) {
                bool clash = c % (k - 1) == y % (k - 1);
                for (int r : rows) clash = clash || c % (k - 1) == r % (k - 1);
                if (!clash) c_ok = true;
            }
            if (!c_ok) continue;
            const BigInt& U = P.u_star[t - 1];
            BigInt tu = random_below(rng, M.level_count(t - 1) / U);
            w = search_tuple(M, t - 1, tu, y, H, nullptr, limit);
            exhaustive = U <= limit;
        } else if (part == 2) {
            Vertex xp = point(t - 1, y);
            if (M.idx(xp.x) != t - 1 || !M.S_of(xp).empty()) continue;
            if (!adjacent_all({P.proj(xp.x, t), y}, H)) continue;
            const BigInt& U = P.u_star[t - 1];
            BigInt tu = P.floor_abs(xp.x, t - 1) / U;
            w = search_tuple(M, t - 1, tu, y, H, [&](const Vertex& v) { return M.idx(v.x) == t - 1; }, limit);
            exhaustive = U <= limit;
        } else if (part == 3) {
            // first a level t-1 vertex adjacent to H, then a child of it
            const BigInt& U = P.u_star[t - 1];
            BigInt tuples = M.level_count(t - 1) / U;
            auto upper = [&](const Vertex& v) {
                return M.idx(v.x) == t - 1 && M.S_of(v).empty() && M.rng_num(v.x, t - 1) == -1;
            };
            uint64_t budget = limit;
            for (BigInt tu = 0; tu < tuples && !w && budget > 0; ++tu) {
                auto xp = search_tuple(M, t - 1, tu, y, H, upper, budget);
                if (!xp) continue;
                w = search_below(M, t - 2, *xp, H, plain(t - 2), budget);
                budget = budget > 1000 ? budget - 1000 : 0;
            }
        } else {
            const BigInt& U = P.u_star[t - 1];
            BigInt tuples = M.level_count(t - 1) / U;
            exhaustive = U <= limit;
            for (BigInt tu = 0; tu < tuples && !w; ++tu) w = search_tuple(M, t - 1, tu, y, H, plain(t - 1), limit);
        }
        ++rep.applicable;
        if (w) {
            ++rep.found;
            if (!adjacent_all(*w, H)) ++rep.invalid;
        } else {
            if (exhaustive) ++rep.exhausted;
            else ++rep.limit_hit;
            if (rep.failures.size() < 8) rep.failures.push_back(desc.str() + (exhaustive ? " [none exists]" : " [limit]"));
        }
    }
    return rep;
}

}  // namespace bvh
