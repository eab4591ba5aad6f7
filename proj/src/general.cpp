#include "bvh/general.hpp"

#include <algorithm>
#include <sstream>

namespace bvh {

std::string side_name(Side s) { return s == Side::A ? "A" : "B"; }

Side parse_side(const std::string& s) {
    if (s == "A" || s == "a") return Side::A;
    if (s == "B" || s == "b") return Side::B;
    throw std::invalid_argument("side must be A or B");
}

bool CongruenceLabel::operator==(const CongruenceLabel& o) const {
    return a == o.a && row == o.row && index == o.index && R == o.R && S == o.S;
}

bool CongruenceLabel::operator<(const CongruenceLabel& o) const {
    if (a != o.a) return a < o.a;
    if (row != o.row) return row < o.row;
    if (index != o.index) return index < o.index;
    if (R != o.R) return R < o.R;
    return std::lexicographical_compare(S.begin(), S.end(), o.S.begin(), o.S.end());
}

std::string label_str(const CongruenceLabel& l) {
    std::ostringstream os;
    os << "<" << l.a << "," << l.row << ";" << l.index << ";" << l.R << ";{";
    for (size_t i = 0; i < l.S.size(); ++i) os << (i ? "," : "") << label_str(l.S[i]);
    os << "}>";
    return os.str();
}

bool BoardConfiguration::contains(const Vertex& v) const {
    return std::find(slots.begin(), slots.end(), v) != slots.end();
}

std::string config_str(const BoardConfiguration& c) {
    std::string s = "(";
    for (size_t i = 0; i < c.slots.size(); ++i) s += (i ? " " : "") + vertex_str(c.slots[i]);
    return s + ")";
}

std::string history_str(const BoardHistory& h) {
    std::string s = "[";
    for (size_t i = 0; i < h.configs.size(); ++i) s += (i ? " " : "") + config_str(h.configs[i]);
    return s + "]";
}

GeneralModel::GeneralModel(AbstractionParams P) : P_(std::move(P)) {
    if (P_.variant != Variant::general) throw DomainError("general model needs the general variant");
    two_c_ = pow_big(2, static_cast<unsigned>(P_.choose_c()));
}

BigInt GeneralModel::level_count(int i) const {
    P_.check_level(i);
    return P_.gamma_star[m() - i];
}

BigInt GeneralModel::level_point(const BigInt& n, int i) const {
    if (n < 0 || n >= level_count(i)) throw DomainError("level point out of range");
    return n * P_.unit(i) + P_.offset(i);
}

int GeneralModel::rng_num(const BigInt& x, int l) const {
    P_.check_level(l);
    const BigInt& U = P_.u_star[l];
    BigInt r = P_.floor_abs(x, l) % U;
    return static_cast<int>((3 * r / U).convert_to<long long>()) - 1;
}

int GeneralModel::sgn(const Vertex& a, const Vertex& b) const {
    if (a.y == b.y) throw DomainError("sgn needs distinct rows");
    auto border = [&](int y) { return y == 0 || y == k() - 1; };
    if (!border(a.y) && !border(b.y)) throw DomainError("sgn needs a row in {0,k-1}");
    int ia = idx(a.x), ib = idx(b.x);
    if (ia == ib) return 0;
    const Vertex& hi = ia > ib ? a : b;
    const Vertex& lo = ia > ib ? b : a;
    int t = std::min(ia, ib);
    int R = rng_num(lo.x, t);
    if (hi.y == k() - 1 && lo.y < hi.y && lo.y > 0 && R == 0) return 1;
    if (hi.y == 0 && lo.y > hi.y && lo.y < k() - 1 && R == 1) return 1;
    return 0;
}

BigInt GeneralModel::g(const BigInt& x) const {
    int t = idx(x);
    if (t == m()) return 0;  // eta*_m does not exist
    BigInt f = P_.floor_abs(x, t);
    if (3 * (f % P_.u_star[t]) < P_.u_star[t]) return 0;
    return (f / P_.eta_star[t]) % two_c_;
}

BigInt GeneralModel::sw(const Vertex& a, const Vertex& b) const {
    if (idx(a.x) != idx(b.x)) throw DomainError("SW is undefined on unequal indices");
    BigInt d = g(a.x) - g(b.x);
    return d < 0 ? BigInt(-d) : d;
}

std::string GeneralModel::sw_string(const Vertex& a, const Vertex& b) const {
    BigInt v = sw(a, b);
    std::string s(static_cast<size_t>(bits()), '0');
    for (int i = 0; i < bits(); ++i)
        if (bit_test(v, static_cast<unsigned>(i))) s[s.size() - 1 - static_cast<size_t>(i)] = '1';
    return s;
}

int GeneralModel::q_hat(int k, int y, int y2) {
    if (!(0 < y && y < y2 && y2 < k - 1)) throw DomainError("q_hat needs 0 < y < y' < k-1");
    int q = y2 - y;
    for (int s = 0; s <= y - 2; ++s) q += k - 3 - s;
    return q;
}

bool GeneralModel::sw_bit(const Vertex& a, const Vertex& b) const {
    int q = q_hat(k(), std::min(a.y, b.y), std::max(a.y, b.y));
    return bit_test(sw(a, b), static_cast<unsigned>(q - 1));
}

std::vector<Vertex> GeneralModel::decode_S_elements(const BigInt& x, int i) const {
    if (i >= m()) return {};
    if (idx(x) != i) throw DomainError("decode_S needs idx(x) = i");
    BigInt j = (P_.floor_abs(x, i) / (k() - 1)) % P_.cl_star[i + 1];
    return decode_band(j, i);
}

std::vector<Vertex> GeneralModel::decode_band(const BigInt& j, int i) const {
    if (i < P_.lo() || i >= m()) throw DomainError("decode_band needs lo <= i < m");
    const BigInt& cl = P_.cl_star[i + 1];
    if (j < 0 || j >= cl) throw DomainError("band index out of range");
    const BigInt& G = P_.gamma_star[m() - i - 1];
    if (j < G || j >= cl - G) return {};
    BigInt W = BigInt(k()) * G;
    auto element = [&](const BigInt& e) {
        int row = (e / G).convert_to<int>();
        return Vertex{level_point(e % G, i + 1), row};
    };
    if (j < W) return {element(j)};
    BigInt off = W, pw = 1;
    for (int d = 1; d <= k() - 2; ++d) {
        pw *= W;
        if (j < off + pw) {
            BigInt e = j - off;
            std::vector<Vertex> out(static_cast<size_t>(d));
            for (int p = d - 1; p >= 0; --p) {
                out[static_cast<size_t>(p)] = element(e % W);
                e /= W;
            }
            return out;
        }
        off += pw;
    }
    return {element(j - off)};
}

std::vector<CongruenceLabel> GeneralModel::decode_S(const BigInt& x, int i) const {
    std::vector<CongruenceLabel> out;
    for (const Vertex& v : decode_S_elements(x, i)) out.push_back(label(v));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<CongruenceLabel> GeneralModel::S_of(const Vertex& v) const {
    int i = idx(v.x);
    return i == m() ? std::vector<CongruenceLabel>{} : decode_S(v.x, i);
}

CongruenceLabel GeneralModel::label(const Vertex& v) const {
    if (v.y < 0 || v.y >= k()) throw DomainError("row out of range");
    CongruenceLabel l;
    l.index = idx(v.x);
    l.row = v.y;
    l.a = P_.cc(v.x, v.y, l.index);
    l.R = rng_num(v.x, l.index);
    l.S = S_of(v);
    return l;
}

bool GeneralModel::in_omega(const Vertex& owner, const Vertex& cand) const {
    int y = owner.y, v = cand.y;
    if (y == 0 || y == k() - 1) return false;
    int i = idx(owner.x);
    if (i == m()) return false;
    int iu = idx(cand.x);
    if (iu < i) return false;
    if (P_.floor_abs(owner.x, i) % (k() - 1) != 0) return false;
    if (P_.floor_abs(cand.x, i) % (k() - 1) != 0) return false;
    Vertex pu{P_.proj(cand.x, i + 1), v};
    Vertex px{P_.proj(owner.x, i + 1), y};
    if (edge_star(pu, px, Side::B)) return false;
    if (v == 0 || v == k() - 1) {
        if (iu < i + 1) return false;
        if (sgn(px, pu) != 0) return false;
    }
    return true;
}

bool GeneralModel::critical_star(const Vertex& a, const Vertex& b) const {
    auto border = [&](int y) { return y == 0 || y == k() - 1; };
    if (a.y == b.y || !border(a.y) || !border(b.y)) return false;
    if (idx(a.x) != m() || idx(b.x) != m()) return false;
    return P_.floor_abs(a.x, m()) % (k() - 1) == 0 && P_.floor_abs(b.x, m()) % (k() - 1) == 0;
}

bool GeneralModel::rule_e(const Vertex& a, const Vertex& b, int t, std::string* detail) const {
    int ca = P_.cc(a.x, a.y, t), cb = P_.cc(b.x, b.y, t);
    std::ostringstream os;
    os << "t=" << t << " cc=" << ca << "/" << cb;
    bool ok;
    auto border = [&](int y) { return y == 0 || y == k() - 1; };
    if (border(a.y) || border(b.y)) {
        int s = sgn(a, b);
        os << " sgn=" << s;
        ok = ca != cb && s == 0;
    } else if (idx(a.x) != idx(b.x)) {
        ok = ca != cb;
    } else {
        bool bit = sw_bit(a, b);
        os << " sw=" << sw_string(a, b) << " bit=" << bit;
        long long prod = static_cast<long long>(ca - cb) * (a.y - b.y) * (bit ? -1 : 1);
        ok = prod > 0;
    }
    if (detail) *detail = os.str();
    return ok;
}

bool GeneralModel::edge_star(const Vertex& a, const Vertex& b, Side side, EdgeTrace* trace) const {
    P_.check_x(a.x);
    P_.check_x(b.x);
    auto note = [&](const std::string& r, bool ok, const std::string& d) {
        if (trace) trace->push_back({r, ok, d});
    };
    if (a.y == b.y) {
        note("1", false, "same row");
        return false;
    }
    int ia = idx(a.x), ib = idx(b.x);
    int t = std::min(ia, ib);
    bool ok = true;
    {
        auto la = label(a), lb = label(b);
        auto Sa = la.S, Sb = lb.S;
        bool in_a = std::binary_search(Sa.begin(), Sa.end(), lb);
        bool in_b = std::binary_search(Sb.begin(), Sb.end(), la);
        bool c = !in_a && !in_b;
        note("2c", c, "|S_u|=" + std::to_string(Sa.size()) + " |S_v|=" + std::to_string(Sb.size()) +
                          (in_a ? " cl(v) in S_u" : "") + (in_b ? " cl(u) in S_v" : ""));
        ok = ok && c;
    }
    if (ok || trace) {
        bool oa = in_omega(a, b), ob = in_omega(b, a);
        bool d = !oa && !ob;
        note("2d", d, std::string(oa ? "v in Omega(u) " : "") + (ob ? "u in Omega(v)" : ""));
        ok = ok && d;
    }
    if (ok || trace) {
        std::string det;
        bool e = rule_e(a, b, t, &det);
        note("2e", e, det);
        ok = ok && e;
    }
    if (side == Side::A && !ok) {
        bool plus = critical_star(a, b);
        note("E+", plus, plus ? "critical pair" : "");
        ok = plus;
    }
    return ok;
}

bool GeneralModel::config_valid(const BoardConfiguration& c) const {
    if (c.size() > static_cast<size_t>(k() - 1)) return false;
    for (size_t i = 0; i < c.size(); ++i)
        for (size_t j = i + 1; j < c.size(); ++j)
            if (c.slots[i] == c.slots[j]) return false;
    return true;
}

bool GeneralModel::bc_evolve(const BoardConfiguration& c1, const Vertex& src, const BoardConfiguration& c2) const {
    if (!config_valid(c1) || !config_valid(c2)) return false;
    size_t full = static_cast<size_t>(k() - 1);
    bool has = c1.contains(src);
    // adding: only when c1 can take another vertex
    if (!has && c1.size() < full && c2.size() == c1.size() + 1) {
        if (std::equal(c1.slots.begin(), c1.slots.end(), c2.slots.begin()) && c2.slots.back() == src)
            return true;
    }
    // removing: c1 = c2 o src, i.e. src is the last slot of c1
    if (!c1.slots.empty() && c1.slots.back() == src && c2.size() + 1 == c1.size()) {
        if (std::equal(c2.slots.begin(), c2.slots.end(), c1.slots.begin())) return true;
    }
    // unchanged: the append is a no-op because src is already there
    if (has && c1.size() < full && c1 == c2) return true;
    return false;
}

bool GeneralModel::history_valid(const FullVertex& v) const {
    const auto& H = v.history.configs;
    if (v.bc < 0 || v.bc >= m()) return false;
    if (H.size() != static_cast<size_t>(v.bc) + 1) return false;
    if (!H[0].slots.empty()) return false;
    for (const auto& c : H)
        if (!config_valid(c)) return false;
    for (size_t j = 1; j < H.size(); ++j) {
        // the source of step j is some vertex whose configuration is H[j-1]
        const auto& a = H[j - 1];
        const auto& b = H[j];
        bool ok = false;
        if (b.size() == a.size() + 1) ok = bc_evolve(a, b.slots.back(), b);
        else if (b.size() + 1 == a.size()) ok = bc_evolve(a, a.slots.back(), b);
        else if (a == b && !a.slots.empty()) ok = bc_evolve(a, a.slots.front(), b);
        if (!ok) return false;
    }
    return true;
}

static bool history_prefix(const BoardHistory& a, const BoardHistory& b) {
    if (a.configs.size() > b.configs.size()) return false;
    return std::equal(a.configs.begin(), a.configs.end(), b.configs.begin());
}

bool GeneralModel::history_step(const FullVertex& a, const FullVertex& b) const {
    if (!history_valid(a) || !history_valid(b)) return false;
    if (b.bc != a.bc + 1) return false;
    if (!history_prefix(a.history, b.history)) return false;
    return bc_evolve(a.config(), a.flat, b.config());
}

bool GeneralModel::history_star(const FullVertex& a, const FullVertex& b) const {
    if (!history_valid(a) || !history_valid(b)) return false;
    if (b.bc < a.bc) return false;
    if (!history_prefix(a.history, b.history)) return false;
    if (b.bc == a.bc) return true;
    // later steps are vouched for by the validity of b's history
    const auto& H = b.history.configs;
    return bc_evolve(H[static_cast<size_t>(a.bc)], a.flat, H[static_cast<size_t>(a.bc) + 1]);
}

bool GeneralModel::continuity(const FullVertex& a, const FullVertex& b) const {
    if (!history_star(a, b)) return false;
    const auto& ca = a.config().slots;
    const auto& cb = b.config().slots;
    return ca.size() <= cb.size() && std::equal(ca.begin(), ca.end(), cb.begin());
}

bool GeneralModel::leads(const FullVertex& a, const FullVertex& b) const {
    return continuity(a, b) && b.config().contains(a.flat);
}

bool GeneralModel::squiggle(const FullVertex& a, const FullVertex& b) const {
    // a ~> b  :=  b ->> a, cl(b) in S(a), a-flat not in b[BC]
    if (!leads(b, a)) return false;
    auto S = S_of(a.flat);
    if (!std::binary_search(S.begin(), S.end(), label(b.flat))) return false;
    return !b.config().contains(a.flat);
}

static int compare_config(const BoardConfiguration& a, const BoardConfiguration& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a.slots[i] < b.slots[i]) return -1;
        if (b.slots[i] < a.slots[i]) return 1;
    }
    return 0;
}

int GeneralModel::compare_history(const FullVertex& a, const FullVertex& b) const {
    bool va = history_valid(a), vb = history_valid(b);
    if (va != vb) return va ? 1 : -1;
    const auto& A = a.history.configs;
    const auto& B = b.history.configs;
    for (size_t i = 0; i < std::min(A.size(), B.size()); ++i)
        if (int c = compare_config(A[i], B[i])) return c;
    if (A.size() != B.size()) return A.size() < B.size() ? -1 : 1;
    return 0;
}

bool GeneralModel::full_less(const FullVertex& a, const FullVertex& b) const {
    if (a.flat.y != b.flat.y) return a.flat.y < b.flat.y;
    if (int c = compare_history(a, b)) return c < 0;
    if (a.flat.x != b.flat.x) return a.flat.x < b.flat.x;
    return a.bc < b.bc;
}

bool GeneralModel::edge_full(const FullVertex& a, const FullVertex& b, Side side, EdgeTrace* trace) const {
    auto note = [&](const std::string& r, bool ok, const std::string& d) {
        if (trace) trace->push_back({r, ok, d});
    };
    if (a.flat.y == b.flat.y) {
        note("1", false, "same row");
        return false;
    }
    bool lab = leads(a, b), lba = leads(b, a);
    bool ok = true;
    {
        bool e = edge_star(a.flat, b.flat, Side::B);
        note("2a", e, "flat pair in E*^B");
        ok = e;
    }
    {
        bool r = lab || lba;
        note("2b", r, std::string(lab ? "u->>v " : "") + (lba ? "v->>u" : ""));
        ok = ok && r;
    }
    if (ok || trace) {
        bool s1 = squiggle(a, b), s2 = squiggle(b, a);
        bool r = !s1 && !s2;
        note("2c", r, std::string(s1 ? "u~>v " : "") + (s2 ? "v~>u" : ""));
        ok = ok && r;
    }
    if (ok || trace) {
        bool oa = in_omega(a.flat, b.flat), ob = in_omega(b.flat, a.flat);
        bool r = !oa && !ob;
        note("2d", r, std::string(oa ? "v in Omega(u) " : "") + (ob ? "u in Omega(v)" : ""));
        ok = ok && r;
    }
    if (ok || trace) {
        std::string det;
        bool r = rule_e(a.flat, b.flat, std::min(idx(a.flat.x), idx(b.flat.x)), &det);
        note("2e", r, det);
        ok = ok && r;
    }
    if (side == Side::A && !ok) {
        bool plus = critical_star(a.flat, b.flat) && (lab || lba);
        note("E+", plus, plus ? "critical pair with ->>" : "");
        ok = plus;
    }
    return ok;
}

std::vector<Vertex> GeneralModel::lemma_clique_flat() const {
    std::vector<Vertex> out;
    BigInt x = P_.mid();
    for (int y = 0; y < k(); ++y) out.push_back({x, y});
    return out;
}

std::vector<FullVertex> GeneralModel::lemma_clique_full() const {
    if (m() < k()) throw DomainError("the chained histories need m >= k");
    auto flat = lemma_clique_flat();
    std::vector<FullVertex> out;
    BoardHistory h;
    h.configs.push_back({});
    for (int i = 0; i < k(); ++i) {
        out.push_back({flat[static_cast<size_t>(i)], h, i});
        BoardConfiguration next = h.configs.back();
        next.slots.push_back(flat[static_cast<size_t>(i)]);
        h.configs.push_back(next);
    }
    return out;
}

}  // namespace bvh
