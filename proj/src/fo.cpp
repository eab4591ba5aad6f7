#include "bvh/fo.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>
#include <set>
#include <sstream>

namespace bvh {

using K = Formula::Kind;

FormulaPtr Formula::truth(bool v) {
    auto f = std::make_shared<Formula>();
    f->kind = v ? K::True : K::False;
    return f;
}

FormulaPtr Formula::atom(Kind k, std::string a, std::string b) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->v1 = std::move(a);
    f->v2 = std::move(b);
    return f;
}

FormulaPtr Formula::neg(FormulaPtr g) {
    auto f = std::make_shared<Formula>();
    f->kind = K::Not;
    f->kids = {std::move(g)};
    return f;
}

FormulaPtr Formula::conj(std::vector<FormulaPtr> fs) {
    auto f = std::make_shared<Formula>();
    f->kind = K::And;
    f->kids = std::move(fs);
    return f;
}

FormulaPtr Formula::disj(std::vector<FormulaPtr> fs) {
    auto f = std::make_shared<Formula>();
    f->kind = K::Or;
    f->kids = std::move(fs);
    return f;
}

FormulaPtr Formula::exists(std::string v, FormulaPtr g) {
    auto f = std::make_shared<Formula>();
    f->kind = K::Exists;
    f->v1 = std::move(v);
    f->kids = {std::move(g)};
    return f;
}

FormulaPtr Formula::forall(std::string v, FormulaPtr g) {
    auto f = std::make_shared<Formula>();
    f->kind = K::Forall;
    f->v1 = std::move(v);
    f->kids = {std::move(g)};
    return f;
}

// ---- parsing and printing

namespace {

struct Parser {
    std::vector<std::string> tok;
    size_t p = 0;

    explicit Parser(const std::string& s) {
        std::string cur;
        auto flush = [&] {
            if (!cur.empty()) tok.push_back(cur);
            cur.clear();
        };
        for (char c : s) {
            if (c == '(' || c == ')') {
                flush();
                tok.emplace_back(1, c);
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                flush();
            } else {
                cur += c;
            }
        }
        flush();
    }

    const std::string& peek() const {
        if (p >= tok.size()) throw ParseError("unexpected end of formula");
        return tok[p];
    }
    std::string next() {
        const std::string& t = peek();
        ++p;
        return t;
    }
    void expect(const std::string& t) {
        if (next() != t) throw ParseError("expected '" + t + "' at token " + std::to_string(p));
    }

    static bool reserved(const std::string& s) {
        static const std::set<std::string> r = {"E", "=", "<=", "BIT", "not", "and", "or",
                                                "exists", "forall", "true", "false", "(", ")"};
        return r.count(s) > 0;
    }
    std::string var() {
        std::string v = next();
        bool ok = !v.empty() && (std::isalpha(static_cast<unsigned char>(v[0])) || v[0] == '_') && !reserved(v);
        for (char c : v)
            if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) ok = false;
        if (!ok) throw ParseError("bad variable name '" + v + "'");
        return v;
    }

    FormulaPtr formula() {
        std::string t = next();
        if (t == "true") return Formula::truth(true);
        if (t == "false") return Formula::truth(false);
        if (t != "(") throw ParseError("expected '(' or a constant, got '" + t + "'");
        std::string op = next();
        FormulaPtr out;
        if (op == "E" || op == "=" || op == "<=" || op == "BIT") {
            K k = op == "E" ? K::Edge : op == "=" ? K::Eq : op == "<=" ? K::Le : K::Bit;
            std::string a = var();
            std::string b = var();
            out = Formula::atom(k, a, b);
        } else if (op == "not") {
            out = Formula::neg(formula());
        } else if (op == "and" || op == "or") {
            std::vector<FormulaPtr> fs;
            while (peek() != ")") fs.push_back(formula());
            out = op == "and" ? Formula::conj(std::move(fs)) : Formula::disj(std::move(fs));
        } else if (op == "exists" || op == "forall") {
            std::string v = var();
            FormulaPtr g = formula();
            out = op == "exists" ? Formula::exists(v, g) : Formula::forall(v, g);
        } else {
            throw ParseError("unknown operator '" + op + "'");
        }
        expect(")");
        return out;
    }
};

void print(const FormulaPtr& f, std::ostringstream& o) {
    switch (f->kind) {
    case K::True: o << "true"; return;
    case K::False: o << "false"; return;
    case K::Edge: o << "(E " << f->v1 << " " << f->v2 << ")"; return;
    case K::Eq: o << "(= " << f->v1 << " " << f->v2 << ")"; return;
    case K::Le: o << "(<= " << f->v1 << " " << f->v2 << ")"; return;
    case K::Bit: o << "(BIT " << f->v1 << " " << f->v2 << ")"; return;
    case K::Not: o << "(not "; print(f->kids[0], o); o << ")"; return;
    case K::And:
    case K::Or:
        o << (f->kind == K::And ? "(and" : "(or");
        for (auto& g : f->kids) {
            o << " ";
            print(g, o);
        }
        o << ")";
        return;
    case K::Exists:
    case K::Forall:
        o << (f->kind == K::Exists ? "(exists " : "(forall ") << f->v1 << " ";
        print(f->kids[0], o);
        o << ")";
        return;
    }
}

bool is_atom(K k) { return k == K::Edge || k == K::Eq || k == K::Le || k == K::Bit; }

void collect_vars(const FormulaPtr& f, std::set<std::string>& out) {
    if (is_atom(f->kind)) {
        out.insert(f->v1);
        out.insert(f->v2);
    }
    if (f->kind == K::Exists || f->kind == K::Forall) out.insert(f->v1);
    for (auto& g : f->kids) collect_vars(g, out);
}

void collect_free(const FormulaPtr& f, std::set<std::string>& bound, std::set<std::string>& out) {
    if (is_atom(f->kind)) {
        if (!bound.count(f->v1)) out.insert(f->v1);
        if (!bound.count(f->v2)) out.insert(f->v2);
        return;
    }
    if (f->kind == K::Exists || f->kind == K::Forall) {
        bool had = bound.count(f->v1) > 0;
        bound.insert(f->v1);
        collect_free(f->kids[0], bound, out);
        if (!had) bound.erase(f->v1);
        return;
    }
    for (auto& g : f->kids) collect_free(g, bound, out);
}

}  // namespace

FormulaPtr parse_formula(const std::string& text) {
    Parser p(text);
    FormulaPtr f = p.formula();
    if (p.p != p.tok.size()) throw ParseError("trailing tokens after formula");
    return f;
}

std::string formula_str(const FormulaPtr& f) {
    std::ostringstream o;
    print(f, o);
    return o.str();
}

int quantifier_rank(const FormulaPtr& f) {
    int best = 0;
    for (auto& g : f->kids) best = std::max(best, quantifier_rank(g));
    if (f->kind == K::Exists || f->kind == K::Forall) return best + 1;
    return best;
}

int num_variables(const FormulaPtr& f) {
    std::set<std::string> s;
    collect_vars(f, s);
    return static_cast<int>(s.size());
}

std::vector<std::string> free_variables(const FormulaPtr& f) {
    std::set<std::string> bound, out;
    collect_free(f, bound, out);
    return {out.begin(), out.end()};
}

size_t formula_size(const FormulaPtr& f) {
    size_t n = 1;
    for (auto& g : f->kids) n += formula_size(g);
    return n;
}

// ---- evaluation

namespace {

bool bit_of(size_t x, size_t y) { return y < 64 && ((static_cast<uint64_t>(x) >> y) & 1u); }

bool atom_value(const OrderedStructure& S, K k, size_t a, size_t b) {
    switch (k) {
    case K::Edge: return S.adj(a, b);
    case K::Eq: return a == b;
    case K::Le: return a <= b;  // indices follow the structure order
    case K::Bit: return bit_of(a, b);
    default: return false;
    }
}

bool naive(const OrderedStructure& S, const FormulaPtr& f, Assignment& asg) {
    auto get = [&](const std::string& v) {
        auto it = asg.find(v);
        if (it == asg.end()) throw EvalError("unbound variable '" + v + "'");
        return it->second;
    };
    switch (f->kind) {
    case K::True: return true;
    case K::False: return false;
    case K::Edge:
    case K::Eq:
    case K::Le:
    case K::Bit: return atom_value(S, f->kind, get(f->v1), get(f->v2));
    case K::Not: return !naive(S, f->kids[0], asg);
    case K::And:
        for (auto& g : f->kids)
            if (!naive(S, g, asg)) return false;
        return true;
    case K::Or:
        for (auto& g : f->kids)
            if (naive(S, g, asg)) return true;
        return false;
    case K::Exists:
    case K::Forall: {
        auto it = asg.find(f->v1);
        std::optional<size_t> saved;
        if (it != asg.end()) saved = it->second;
        bool want = f->kind == K::Exists;
        bool res = !want;
        for (size_t v = 0; v < S.size(); ++v) {
            asg[f->v1] = v;
            if (naive(S, f->kids[0], asg) == want) {
                res = want;
                break;
            }
        }
        if (saved) asg[f->v1] = *saved;
        else asg.erase(f->v1);
        return res;
    }
    }
    return false;
}

// Dense truth tables over every variable of the formula.
struct Tables {
    const OrderedStructure& S;
    size_t n;
    std::map<std::string, size_t> dim;
    std::vector<size_t> stride;
    size_t N;

    std::vector<uint8_t> run(const FormulaPtr& f) {
        switch (f->kind) {
        case K::True: return std::vector<uint8_t>(N, 1);
        case K::False: return std::vector<uint8_t>(N, 0);
        case K::Edge:
        case K::Eq:
        case K::Le:
        case K::Bit: {
            std::vector<uint8_t> t(N);
            size_t sa = stride[dim.at(f->v1)], sb = stride[dim.at(f->v2)];
            for (size_t i = 0; i < N; ++i) t[i] = atom_value(S, f->kind, (i / sa) % n, (i / sb) % n);
            return t;
        }
        case K::Not: {
            auto t = run(f->kids[0]);
            for (auto& v : t) v = !v;
            return t;
        }
        case K::And:
        case K::Or: {
            bool is_and = f->kind == K::And;
            std::vector<uint8_t> t(N, is_and ? 1 : 0);
            for (auto& g : f->kids) {
                auto u = run(g);
                for (size_t i = 0; i < N; ++i) t[i] = is_and ? (t[i] & u[i]) : (t[i] | u[i]);
            }
            return t;
        }
        case K::Exists:
        case K::Forall: {
            auto u = run(f->kids[0]);
            bool want = f->kind == K::Exists;
            size_t s = stride[dim.at(f->v1)];
            std::vector<uint8_t> t(N);
            for (size_t i = 0; i < N; ++i) {
                if ((i / s) % n != 0) continue;
                uint8_t res = !want;
                for (size_t v = 0; v < n; ++v)
                    if (u[i + v * s] == want) {
                        res = want;
                        break;
                    }
                for (size_t v = 0; v < n; ++v) t[i + v * s] = res;
            }
            return t;
        }
        }
        return {};
    }
};

constexpr size_t kTableLimit = size_t{1} << 22;

}  // namespace

bool eval_naive(const OrderedStructure& S, const FormulaPtr& f, const Assignment& asg) {
    if (!S.is_explicit()) throw EvalError("evaluation needs an explicit structure");
    for (auto& v : free_variables(f))
        if (!asg.count(v)) throw EvalError("unbound variable '" + v + "'");
    for (auto& [v, i] : asg)
        if (i >= S.size()) throw EvalError("assignment of '" + v + "' is outside the universe");
    Assignment a = asg;
    return naive(S, f, a);
}

bool eval(const OrderedStructure& S, const FormulaPtr& f, const Assignment& asg) {
    if (!S.is_explicit()) throw EvalError("evaluation needs an explicit structure");
    auto fv = free_variables(f);
    for (auto& v : fv)
        if (!asg.count(v)) throw EvalError("unbound variable '" + v + "'");
    for (auto& [v, i] : asg)
        if (i >= S.size()) throw EvalError("assignment of '" + v + "' is outside the universe");
    std::set<std::string> vars;
    collect_vars(f, vars);
    size_t n = S.size();
    size_t N = 1;
    bool small = n > 0;
    for (size_t i = 0; i < vars.size() && small; ++i) {
        if (N > kTableLimit / std::max<size_t>(n, 1)) small = false;
        N *= n;
    }
    if (!small || n == 0) {
        Assignment a = asg;
        return naive(S, f, a);
    }
    Tables T{S, n, {}, {}, N};
    size_t st = 1;
    for (auto& v : vars) {
        T.dim[v] = T.stride.size();
        T.stride.push_back(st);
        st *= n;
    }
    auto t = T.run(f);
    size_t at = 0;
    for (auto& v : fv) at += asg.at(v) * T.stride[T.dim.at(v)];
    return t[at] != 0;
}

FormulaPtr clique_sentence(int k) {
    if (k < 1) throw std::invalid_argument("clique size must be at least 1");
    std::vector<FormulaPtr> parts;
    // per pair i < j: the inequality once, then both edge directions
    for (int i = 1; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j) {
            std::string a = "x" + std::to_string(i), b = "x" + std::to_string(j);
            parts.push_back(Formula::neg(Formula::atom(K::Eq, a, b)));
            parts.push_back(Formula::atom(K::Edge, a, b));
            parts.push_back(Formula::atom(K::Edge, b, a));
        }
    FormulaPtr f = Formula::conj(std::move(parts));
    for (int i = k; i >= 1; --i) f = Formula::exists("x" + std::to_string(i), f);
    return f;
}

// ---- random sentences

namespace {

struct Gen {
    std::mt19937_64& rng;
    const SentenceShape& sh;
    int budget;

    int pick(const std::vector<double>& w) {
        std::discrete_distribution<int> d(w.begin(), w.end());
        return d(rng);
    }
    std::string pool_var() {
        std::uniform_int_distribution<int> d(1, sh.pool);
        return "x" + std::to_string(d(rng));
    }
    std::string bound_var(const std::vector<std::string>& bound) {
        std::uniform_int_distribution<size_t> d(0, bound.size() - 1);
        return bound[d(rng)];
    }

    FormulaPtr atom(const std::vector<std::string>& bound) {
        // E, =, <=, BIT
        int k = pick({0.4, 0.2, 0.25, 0.15});
        K kinds[] = {K::Edge, K::Eq, K::Le, K::Bit};
        return Formula::atom(kinds[k], bound_var(bound), bound_var(bound));
    }

    FormulaPtr quant(std::vector<std::string> bound, int qr) {
        // mostly a variable not bound yet, but reuse happens too
        std::string v = pool_var();
        if (bound.size() < static_cast<size_t>(sh.pool) && pick({0.3, 0.7}) == 1)
            while (std::find(bound.begin(), bound.end(), v) != bound.end()) v = pool_var();
        if (std::find(bound.begin(), bound.end(), v) == bound.end()) bound.push_back(v);
        FormulaPtr body = gen(bound, qr - 1);
        return pick({0.5, 0.5}) == 0 ? Formula::exists(v, body) : Formula::forall(v, body);
    }

    FormulaPtr gen(const std::vector<std::string>& bound, int qr) {
        --budget;
        if (bound.empty()) {
            if (qr > 0) return quant(bound, qr);
            return Formula::truth(pick({0.5, 0.5}) == 0);
        }
        if (budget <= 1) return atom(bound);
        // atom, not, and, or, quantifier
        std::vector<double> w = {qr > 0 ? 0.1 : 0.35, 0.15, 0.17, 0.13, qr > 0 ? 0.45 : 0.0};
        switch (pick(w)) {
        case 0: return atom(bound);
        case 1: return Formula::neg(gen(bound, qr));
        case 2: {
            FormulaPtr a = gen(bound, qr);
            return Formula::conj({a, gen(bound, qr)});
        }
        case 3: {
            FormulaPtr a = gen(bound, qr);
            return Formula::disj({a, gen(bound, qr)});
        }
        default: return quant(bound, qr);
        }
    }
};

}  // namespace

FormulaPtr random_sentence(std::mt19937_64& rng, const SentenceShape& shape) {
    if (shape.pool < 1 || shape.qr_max < 1) throw std::invalid_argument("sentence shape needs pool and rank >= 1");
    Gen g{rng, shape, shape.max_size};
    return g.gen({}, shape.qr_max);
}

AgreementReport sample_agreement(const OrderedStructure& A, const OrderedStructure& B, int pool, int qr_max, int n,
                                 uint64_t seed, const std::vector<FormulaPtr>& extra) {
    AgreementReport rep;
    rep.pool = pool;
    rep.qr_max = qr_max;
    rep.seed = seed;
    std::mt19937_64 rng(seed);
    SentenceShape shape{pool, qr_max, 24};
    auto check = [&](const FormulaPtr& f) {
        ++rep.samples;
        bool a = eval(A, f), b = eval(B, f);
        if (a == b) {
            ++rep.agree;
            if (a) ++rep.true_on_both;
        } else {
            rep.disagreements.push_back(formula_str(f));
        }
    };
    for (int i = 0; i < n; ++i) check(random_sentence(rng, shape));
    for (auto& f : extra) {
        if (num_variables(f) > pool || quantifier_rank(f) > qr_max)
            throw std::invalid_argument("extra sentence exceeds the pool or the rank: " + formula_str(f));
        check(f);
    }
    return rep;
}

}  // namespace bvh
