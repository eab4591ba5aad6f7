#pragma once

#include "bvh/bigint.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bvh {

struct Vertex {
    BigInt x;
    int y = 0;
    bool operator==(const Vertex& o) const { return y == o.y && x == o.x; }
    bool operator<(const Vertex& o) const { return y != o.y ? y < o.y : x < o.x; }
};

std::string vertex_str(const Vertex& v);  // "x,y"

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Row-major bit matrix used for explicit adjacency.
class BitMatrix {
public:
    BitMatrix() = default;
    explicit BitMatrix(size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}
    size_t size() const { return n_; }
    size_t words() const { return words_; }
    bool get(size_t i, size_t j) const { return (bits_[i * words_ + j / 64] >> (j % 64)) & 1; }
    void set(size_t i, size_t j, bool v) {
        uint64_t& w = bits_[i * words_ + j / 64];
        if (v) w |= uint64_t{1} << (j % 64);
        else w &= ~(uint64_t{1} << (j % 64));
    }
    const uint64_t* row(size_t i) const { return bits_.data() + i * words_; }
    bool operator==(const BitMatrix&) const = default;

private:
    size_t n_ = 0, words_ = 0;
    std::vector<uint64_t> bits_;
};

class OrderedStructure {
public:
    enum class Kind { explicit_graph, virtual_graph };
    using Oracle = std::function<bool(const Vertex&, const Vertex&)>;
    using Member = std::function<bool(const Vertex&)>;

    // Vertices must be given in the structure's order. Edges are index pairs.
    static OrderedStructure make_explicit(int k, int m, std::string variant, BigInt width, std::vector<Vertex> vertices,
                                          const std::vector<std::pair<size_t, size_t>>& edges,
                                          std::vector<size_t> constants = {});
    static OrderedStructure make_virtual(int k, int m, std::string variant, BigInt width, Member contains,
                                         Oracle adjacent, Oracle less);

    Kind kind() const { return kind_; }
    bool is_explicit() const { return kind_ == Kind::explicit_graph; }
    int k() const { return k_; }
    int m() const { return m_; }
    const std::string& variant() const { return variant_; }
    const BigInt& width() const { return width_; }

    // explicit only
    size_t size() const { return vertices_.size(); }
    const Vertex& vertex(size_t i) const { return vertices_.at(i); }
    const std::vector<Vertex>& vertices() const { return vertices_; }
    std::optional<size_t> index_of(const Vertex& v) const;
    bool adj(size_t i, size_t j) const { return adj_.get(i, j); }
    const BitMatrix& matrix() const { return adj_; }
    std::vector<std::pair<size_t, size_t>> edges() const;  // i < j, sorted
    size_t edge_count() const;
    const std::vector<size_t>& constants() const { return constants_; }

    bool contains(const Vertex& v) const;
    bool is_adjacent(const Vertex& u, const Vertex& v) const;
    bool less(const Vertex& u, const Vertex& v) const;

    // builders used by construction code
    OrderedStructure with_edge(size_t i, size_t j, bool present) const;
    OrderedStructure with_edges(const std::vector<std::pair<size_t, size_t>>& es, bool present) const;
    OrderedStructure with_constants(std::vector<size_t> c) const;
    OrderedStructure reordered(const std::vector<size_t>& new_order) const;  // new_order[p] = old index

    bool operator==(const OrderedStructure& o) const;

private:
    Kind kind_ = Kind::explicit_graph;
    int k_ = 0, m_ = 0;
    std::string variant_;
    BigInt width_;
    std::vector<Vertex> vertices_;
    std::map<Vertex, size_t> index_;
    BitMatrix adj_;
    std::vector<size_t> constants_;
    Member member_;
    Oracle oracle_, order_;
    void reindex();
};

using PartialMap = std::vector<std::pair<Vertex, Vertex>>;
using IndexMap = std::vector<std::pair<size_t, size_t>>;

// Edges, order, equality and constants (paired by position) are all checked.
bool partial_isomorphism(const OrderedStructure& A, const OrderedStructure& B, const PartialMap& p);
bool partial_isomorphism_idx(const OrderedStructure& A, const OrderedStructure& B, const IndexMap& p);

std::optional<std::vector<size_t>> has_clique(const OrderedStructure& S, int size);
uint64_t count_triangles(const OrderedStructure& S);
std::vector<std::array<size_t, 3>> list_triangles(const OrderedStructure& S);
std::optional<int> girth(const OrderedStructure& S);  // nullopt means infinite

std::string export_json(const OrderedStructure& S);
std::string export_dot(const OrderedStructure& S);
OrderedStructure import_json(const std::string& text);

// Small fixtures.
OrderedStructure complete_graph(int n);        // vertices (0,i), one per row
OrderedStructure edgeless_order(int n);        // vertices (i,0)
OrderedStructure ordered_path(int n);          // K2 for n=2

}  // namespace bvh
