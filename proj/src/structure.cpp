#include "bvh/structure.hpp"

#include "bvh/abstraction.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <deque>
#include <sstream>

namespace bvh {

std::string vertex_str(const Vertex& v) { return v.x.str() + "," + std::to_string(v.y); }

OrderedStructure OrderedStructure::make_explicit(int k, int m, std::string variant, BigInt width,
                                                 std::vector<Vertex> vertices,
                                                 const std::vector<std::pair<size_t, size_t>>& edges,
                                                 std::vector<size_t> constants) {
    OrderedStructure S;
    S.kind_ = Kind::explicit_graph;
    S.k_ = k;
    S.m_ = m;
    S.variant_ = std::move(variant);
    S.width_ = std::move(width);
    S.vertices_ = std::move(vertices);
    S.reindex();
    S.adj_ = BitMatrix(S.vertices_.size());
    for (auto [i, j] : edges) {
        if (i >= S.size() || j >= S.size()) throw DomainError("edge index out of range");
        if (i == j) throw DomainError("self-loop not allowed");
        S.adj_.set(i, j, true);
        S.adj_.set(j, i, true);
    }
    for (size_t c : constants)
        if (c >= S.size()) throw DomainError("constant index out of range");
    S.constants_ = std::move(constants);
    return S;
}

OrderedStructure OrderedStructure::make_virtual(int k, int m, std::string variant, BigInt width, Member contains,
                                                Oracle adjacent, Oracle less) {
    OrderedStructure S;
    S.kind_ = Kind::virtual_graph;
    S.k_ = k;
    S.m_ = m;
    S.variant_ = std::move(variant);
    S.width_ = std::move(width);
    S.member_ = std::move(contains);
    S.oracle_ = std::move(adjacent);
    S.order_ = std::move(less);
    return S;
}

void OrderedStructure::reindex() {
    index_.clear();
    for (size_t i = 0; i < vertices_.size(); ++i)
        if (!index_.emplace(vertices_[i], i).second)
            throw DomainError("duplicate vertex " + vertex_str(vertices_[i]));
}

std::optional<size_t> OrderedStructure::index_of(const Vertex& v) const {
    auto it = index_.find(v);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::pair<size_t, size_t>> OrderedStructure::edges() const {
    std::vector<std::pair<size_t, size_t>> out;
    for (size_t i = 0; i < size(); ++i)
        for (size_t j = i + 1; j < size(); ++j)
            if (adj_.get(i, j)) out.emplace_back(i, j);
    return out;
}

size_t OrderedStructure::edge_count() const {
    size_t c = 0;
    for (size_t i = 0; i < size(); ++i) {
        const uint64_t* r = adj_.row(i);
        for (size_t w = 0; w < adj_.words(); ++w) c += std::popcount(r[w]);
    }
    return c / 2;
}

bool OrderedStructure::contains(const Vertex& v) const {
    if (is_explicit()) return index_.count(v) > 0;
    return member_(v);
}

bool OrderedStructure::is_adjacent(const Vertex& u, const Vertex& v) const {
    if (!contains(u)) throw DomainError("vertex not in universe: " + vertex_str(u));
    if (!contains(v)) throw DomainError("vertex not in universe: " + vertex_str(v));
    if (u == v) return false;
    if (is_explicit()) return adj_.get(index_.at(u), index_.at(v));
    return oracle_(u, v);
}

bool OrderedStructure::less(const Vertex& u, const Vertex& v) const {
    if (is_explicit()) return index_.at(u) < index_.at(v);
    return order_(u, v);
}

OrderedStructure OrderedStructure::with_edge(size_t i, size_t j, bool present) const {
    OrderedStructure S = *this;
    if (i == j) throw DomainError("self-loop not allowed");
    S.adj_.set(i, j, present);
    S.adj_.set(j, i, present);
    return S;
}

OrderedStructure OrderedStructure::with_edges(const std::vector<std::pair<size_t, size_t>>& es, bool present) const {
    OrderedStructure S = *this;
    for (auto [i, j] : es) {
        if (i == j) throw DomainError("self-loop not allowed");
        S.adj_.set(i, j, present);
        S.adj_.set(j, i, present);
    }
    return S;
}

OrderedStructure OrderedStructure::with_constants(std::vector<size_t> c) const {
    OrderedStructure S = *this;
    for (size_t x : c)
        if (x >= size()) throw DomainError("constant index out of range");
    S.constants_ = std::move(c);
    return S;
}

OrderedStructure OrderedStructure::reordered(const std::vector<size_t>& new_order) const {
    if (new_order.size() != size()) throw DomainError("reorder size mismatch");
    std::vector<size_t> where(size());
    std::vector<Vertex> vs;
    vs.reserve(size());
    for (size_t p = 0; p < new_order.size(); ++p) {
        where[new_order[p]] = p;
        vs.push_back(vertices_[new_order[p]]);
    }
    std::vector<std::pair<size_t, size_t>> es;
    for (auto [i, j] : edges()) es.emplace_back(where[i], where[j]);
    std::vector<size_t> cs;
    for (size_t c : constants_) cs.push_back(where[c]);
    return make_explicit(k_, m_, variant_, width_, std::move(vs), es, std::move(cs));
}

bool OrderedStructure::operator==(const OrderedStructure& o) const {
    if (!is_explicit() || !o.is_explicit()) return false;
    return k_ == o.k_ && m_ == o.m_ && variant_ == o.variant_ && width_ == o.width_ && vertices_ == o.vertices_ &&
           adj_ == o.adj_ && constants_ == o.constants_;
}

bool partial_isomorphism_idx(const OrderedStructure& A, const OrderedStructure& B, const IndexMap& p) {
    if (A.constants().size() != B.constants().size()) return false;
    IndexMap all = p;
    for (size_t i = 0; i < A.constants().size(); ++i) all.emplace_back(A.constants()[i], B.constants()[i]);
    for (size_t i = 0; i < all.size(); ++i) {
        auto [a1, b1] = all[i];
        if (a1 >= A.size() || b1 >= B.size()) throw DomainError("pebbled vertex outside universe");
        for (size_t j = i + 1; j < all.size(); ++j) {
            auto [a2, b2] = all[j];
            if ((a1 == a2) != (b1 == b2)) return false;
            if ((a1 < a2) != (b1 < b2)) return false;
            if (A.adj(a1, a2) != B.adj(b1, b2)) return false;
        }
    }
    return true;
}

bool partial_isomorphism(const OrderedStructure& A, const OrderedStructure& B, const PartialMap& p) {
    if (A.is_explicit() && B.is_explicit()) {
        IndexMap q;
        for (auto& [u, v] : p) {
            auto iu = A.index_of(u), iv = B.index_of(v);
            if (!iu) throw DomainError("vertex not in A: " + vertex_str(u));
            if (!iv) throw DomainError("vertex not in B: " + vertex_str(v));
            q.emplace_back(*iu, *iv);
        }
        return partial_isomorphism_idx(A, B, q);
    }
    if (!A.constants().empty() || !B.constants().empty())
        throw UnsupportedError("constants on virtual structures");
    for (size_t i = 0; i < p.size(); ++i) {
        for (size_t j = i + 1; j < p.size(); ++j) {
            const auto& [a1, b1] = p[i];
            const auto& [a2, b2] = p[j];
            if ((a1 == a2) != (b1 == b2)) return false;
            if (A.less(a1, a2) != B.less(b1, b2)) return false;
            if (A.is_adjacent(a1, a2) != B.is_adjacent(b1, b2)) return false;
        }
    }
    return true;
}

static void require_explicit(const OrderedStructure& S, const char* what) {
    if (!S.is_explicit()) throw UnsupportedError(std::string(what) + " needs an explicit structure");
}

std::optional<std::vector<size_t>> has_clique(const OrderedStructure& S, int size) {
    require_explicit(S, "has_clique");
    if (size < 1) throw DomainError("clique size must be positive");
    size_t n = S.size();
    size_t words = S.matrix().words();
    std::vector<size_t> chosen;
    // candidates are later vertices adjacent to everything chosen so far
    std::function<bool(std::vector<uint64_t>&)> rec = [&](std::vector<uint64_t>& cand) -> bool {
        if (static_cast<int>(chosen.size()) == size) return true;
        int need = size - static_cast<int>(chosen.size());
        size_t avail = 0;
        for (auto w : cand) avail += std::popcount(w);
        if (static_cast<int>(avail) < need) return false;
        for (size_t wi = 0; wi < words; ++wi) {
            uint64_t w = cand[wi];
            while (w) {
                size_t v = wi * 64 + std::countr_zero(w);
                w &= w - 1;
                std::vector<uint64_t> next(words, 0);
                const uint64_t* r = S.matrix().row(v);
                bool any = false;
                for (size_t t = 0; t < words; ++t) {
                    next[t] = cand[t] & r[t];
                    if (t < v / 64) next[t] = 0;
                    else if (t == v / 64) next[t] &= (v % 64 == 63) ? 0 : (~uint64_t{0} << (v % 64 + 1));
                    any |= next[t] != 0;
                }
                chosen.push_back(v);
                if (need == 1 || (any && rec(next))) return true;
                chosen.pop_back();
            }
        }
        return false;
    };
    if (n == 0) return std::nullopt;
    std::vector<uint64_t> all(words, 0);
    for (size_t i = 0; i < n; ++i) all[i / 64] |= uint64_t{1} << (i % 64);
    if (rec(all)) return chosen;
    return std::nullopt;
}

std::vector<std::array<size_t, 3>> list_triangles(const OrderedStructure& S) {
    require_explicit(S, "list_triangles");
    std::vector<std::array<size_t, 3>> out;
    const auto& M = S.matrix();
    for (size_t u = 0; u < S.size(); ++u)
        for (size_t v = u + 1; v < S.size(); ++v) {
            if (!M.get(u, v)) continue;
            const uint64_t* ru = M.row(u);
            const uint64_t* rv = M.row(v);
            for (size_t t = (v + 1) / 64; t < M.words(); ++t) {
                uint64_t w = ru[t] & rv[t];
                while (w) {
                    size_t x = t * 64 + std::countr_zero(w);
                    w &= w - 1;
                    if (x > v) out.push_back({u, v, x});
                }
            }
        }
    return out;
}

uint64_t count_triangles(const OrderedStructure& S) {
    require_explicit(S, "count_triangles");
    uint64_t c = 0;
    const auto& M = S.matrix();
    for (size_t u = 0; u < S.size(); ++u)
        for (size_t v = u + 1; v < S.size(); ++v) {
            if (!M.get(u, v)) continue;
            const uint64_t* ru = M.row(u);
            const uint64_t* rv = M.row(v);
            size_t t0 = (v + 1) / 64;
            for (size_t t = t0; t < M.words(); ++t) {
                uint64_t w = ru[t] & rv[t];
                if (t == t0 && (v + 1) % 64) w &= ~uint64_t{0} << ((v + 1) % 64);
                c += std::popcount(w);
            }
        }
    return c;
}

std::optional<int> girth(const OrderedStructure& S) {
    require_explicit(S, "girth");
    size_t n = S.size();
    int best = -1;
    std::vector<int> dist(n), parent(n);
    for (size_t root = 0; root < n; ++root) {
        std::fill(dist.begin(), dist.end(), -1);
        std::deque<size_t> q{root};
        dist[root] = 0;
        parent[root] = -1;
        while (!q.empty()) {
            size_t u = q.front();
            q.pop_front();
            if (best != -1 && 2 * dist[u] + 1 >= best) break;
            const uint64_t* r = S.matrix().row(u);
            for (size_t t = 0; t < S.matrix().words(); ++t) {
                uint64_t w = r[t];
                while (w) {
                    size_t v = t * 64 + std::countr_zero(w);
                    w &= w - 1;
                    if (dist[v] == -1) {
                        dist[v] = dist[u] + 1;
                        parent[v] = static_cast<int>(u);
                        q.push_back(v);
                    } else if (parent[u] != static_cast<int>(v)) {
                        int len = dist[u] + dist[v] + 1;
                        if (best == -1 || len < best) best = len;
                    }
                }
            }
        }
    }
    if (best == -1) return std::nullopt;
    return best;
}

std::string export_json(const OrderedStructure& S) {
    require_explicit(S, "export");
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["k"] = S.k();
    j["m"] = S.m();
    j["variant"] = S.variant();
    j["width"] = S.width().str();
    auto vs = nlohmann::ordered_json::array();
    for (auto& v : S.vertices()) vs.push_back(nlohmann::ordered_json::array({v.x.str(), v.y}));
    j["vertices"] = vs;
    auto es = nlohmann::ordered_json::array();
    for (auto [a, b] : S.edges()) es.push_back(nlohmann::ordered_json::array({a, b}));
    j["edges"] = es;
    j["constants"] = S.constants();
    return j.dump() + "\n";
}

static std::string dot_id(const Vertex& v) { return "v" + v.x.str() + "_" + std::to_string(v.y); }

std::string export_dot(const OrderedStructure& S) {
    require_explicit(S, "export");
    std::ostringstream os;
    os << "graph G {\n";
    for (auto& v : S.vertices()) os << "  " << dot_id(v) << " [label=\"" << vertex_str(v) << "\"];\n";
    for (auto [a, b] : S.edges()) os << "  " << dot_id(S.vertex(a)) << " -- " << dot_id(S.vertex(b)) << ";\n";
    os << "}\n";
    return os.str();
}

OrderedStructure import_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("parse error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    try {
        std::vector<Vertex> vs;
        for (auto& v : j.at("vertices")) {
            if (!v.is_array() || v.size() != 2) throw ParseError("vertex must be [x-string, y-int]");
            vs.push_back(Vertex{from_dec(v.at(0).get<std::string>()), v.at(1).get<int>()});
        }
        std::vector<std::pair<size_t, size_t>> es;
        for (auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2) throw ParseError("edge must be [i, j]");
            es.emplace_back(e.at(0).get<size_t>(), e.at(1).get<size_t>());
        }
        std::vector<size_t> cs;
        if (j.contains("constants"))
            for (auto& c : j.at("constants")) cs.push_back(c.get<size_t>());
        return OrderedStructure::make_explicit(j.at("k").get<int>(), j.at("m").get<int>(),
                                               j.at("variant").get<std::string>(),
                                               from_dec(j.at("width").get<std::string>()), std::move(vs), es,
                                               std::move(cs));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("schema error: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("schema error: ") + e.what());
    }
}

OrderedStructure complete_graph(int n) {
    std::vector<Vertex> vs;
    std::vector<std::pair<size_t, size_t>> es;
    for (int i = 0; i < n; ++i) vs.push_back({0, i});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) es.emplace_back(i, j);
    return OrderedStructure::make_explicit(n, 0, "fixture", 1, vs, es);
}

OrderedStructure edgeless_order(int n) {
    std::vector<Vertex> vs;
    for (int i = 0; i < n; ++i) vs.push_back({i, 0});
    return OrderedStructure::make_explicit(1, 0, "order", n, vs, {});
}

OrderedStructure ordered_path(int n) {
    std::vector<Vertex> vs;
    std::vector<std::pair<size_t, size_t>> es;
    for (int i = 0; i < n; ++i) vs.push_back({i, 0});
    for (int i = 0; i + 1 < n; ++i) es.emplace_back(i, i + 1);
    return OrderedStructure::make_explicit(1, 0, "path", n, vs, es);
}

}  // namespace bvh
