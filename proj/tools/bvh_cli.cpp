// Command-line front end. Every verification subcommand prints one JSON
// document on stdout; progress and summaries go to stderr.

#include "bvh/abstraction.hpp"
#include "bvh/fo.hpp"
#include "bvh/games.hpp"
#include "bvh/general.hpp"
#include "bvh/k3.hpp"
#include "bvh/strategies.hpp"
#include "bvh/structure.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace bvh;
using json = nlohmann::ordered_json;

namespace {

constexpr int kSchemaVersion = 1;
constexpr int kExitFalse = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json header(const std::string& cmd) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = cmd;
    return j;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_out(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
}

Vertex parse_vertex(const std::string& s) {
    auto c = s.find(',');
    if (c == std::string::npos) throw UsageError("vertex must be written x,y");
    try {
        return Vertex{from_dec(s.substr(0, c)), std::stoi(s.substr(c + 1))};
    } catch (const std::exception&) {
        throw UsageError("vertex must be written x,y");
    }
}

json big_list(const std::vector<BigInt>& v, int from, int to) {
    json a = json::array();
    for (int i = from; i <= to; ++i) a.push_back(to_dec(v.at(static_cast<size_t>(i))));
    return a;
}

struct ParamFlags {
    int k = 3;
    int m = 3;
    std::string variant;
    bool toy = false;
    std::string u_factor, g_factor;

    void add(CLI::App* app, bool need_k = true) {
        if (need_k) app->add_option("--k", k, "clique size (rows)")->check(CLI::Range(3, 64));
        app->add_option("--m", m, "number of abstractions")->check(CLI::Range(1, 64));
        app->add_option("--variant", variant, "full, reduced or general (default: full for k=3, general otherwise)");
        app->add_flag("--toy", toy, "general variant with small replacement factors");
        app->add_option("--u-factor", u_factor, "toy factor in the U* recurrence (implies --toy)");
        app->add_option("--g-factor", g_factor, "toy factor in the gamma* recurrence (implies --toy)");
    }

    AbstractionParams make() const {
        Variant v = variant.empty() ? (k == 3 ? Variant::full_k3 : Variant::general) : parse_variant(variant);
        std::optional<ToyFactors> t;
        if (toy || !u_factor.empty() || !g_factor.empty()) {
            if (v != Variant::general) throw UsageError("toy factors only apply to the general variant");
            ToyFactors f;
            if (!u_factor.empty()) f.u_factor = from_dec(u_factor);
            if (!g_factor.empty()) f.g_factor = from_dec(g_factor);
            t = f;
        }
        return AbstractionParams::make(k, m, v, t);
    }
};

json params_json(const AbstractionParams& P) {
    json j = header("params");
    j["k"] = P.k;
    j["m"] = P.m;
    j["variant"] = variant_name(P.variant);
    j["toy"] = P.toy.has_value();
    if (P.toy) {
        j["u_factor"] = to_dec(P.toy->u_factor);
        j["g_factor"] = to_dec(P.toy->g_factor);
    }
    j["gamma_star"] = big_list(P.gamma_star, 0, P.top());
    j["width"] = to_dec(P.width());
    j["mid"] = to_dec(P.mid());
    json units = json::object(), offs = json::object();
    for (int i = P.lo(); i <= P.m; ++i) {
        units[std::to_string(i)] = to_dec(P.unit(i));
        offs[std::to_string(i)] = to_dec(P.offset(i));
    }
    j["unit"] = units;
    j["offset"] = offs;
    json tr = json::array();
    for (int r = 0; r < P.k; ++r) tr.push_back(to_dec(P.tr(r)));
    j["tr"] = tr;
    if (P.variant == Variant::general) {
        j["u_star"] = big_list(P.u_star, 1, P.m);
        j["eta_star"] = P.m >= 2 ? big_list(P.eta_star, 1, P.m - 1) : json::array();
        j["cl_star"] = P.m >= 2 ? big_list(P.cl_star, 2, P.m) : json::array();
        j["width_digits"] = to_dec(P.width()).size();
    }
    return j;
}

struct BuildFlags {
    int m = 3;
    std::string variant = "reduced";
    std::string side = "A";
    bool plain = false;
    bool constants = false;

    void add(CLI::App* app) {
        app->add_option("--m", m, "number of abstractions")->check(CLI::Range(3, 6));
        app->add_option("--variant", variant, "full or reduced");
        app->add_option("--side", side, "A (with the critical edge) or B");
        app->add_flag("--plain", plain, "skip the circular shift of the rows");
        app->add_flag("--constants", constants, "attach the six boundary constants");
    }

    OrderedStructure make() const {
        Variant v = parse_variant(variant);
        if (v == Variant::general) throw UsageError("explicit structures exist for k = 3 only");
        if (side != "A" && side != "B") throw UsageError("side must be A or B");
        return build_k3(K3BuildSpec{m, v, !plain, constants, side == "A"});
    }
};

json vertex_json(const Vertex& v) { return json::array({to_dec(v.x), v.y}); }

json witness_json(const OrderedStructure& A, const OrderedStructure& B, const std::vector<WitnessRound>& w) {
    json a = json::array();
    for (auto& r : w) {
        json o;
        if (r.lifted) o["lift"] = json::array({vertex_json(A.vertex(r.lifted->first)), vertex_json(B.vertex(r.lifted->second))});
        o["side"] = r.side == 0 ? "A" : "B";
        o["pick"] = vertex_json((r.side == 0 ? A : B).vertex(r.vertex));
        if (r.reply) o["reply"] = vertex_json((r.side == 0 ? B : A).vertex(*r.reply));
        else o["reply"] = nullptr;
        a.push_back(o);
    }
    return a;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ordered-graph pebble games, constructions and checks"};
    app.require_subcommand(1);
    app.fallthrough();
    uint64_t seed = 0;
    int jobs = 1;
    app.add_option("--seed", seed, "seed for every randomized step")->capture_default_str();
    app.add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1, 256))->capture_default_str();

    // params
    ParamFlags pf;
    auto* c_params = app.add_subcommand("params", "parameter tables");
    pf.add(c_params);

    // build / export
    BuildFlags bf;
    std::string out_path, format = "json";
    auto* c_build = app.add_subcommand("build", "build one k=3 structure");
    bf.add(c_build);
    c_build->add_option("--format", format, "json or dot");
    c_build->add_option("-o,--output", out_path, "output file (default stdout)");

    std::string export_in;
    auto* c_export = app.add_subcommand("export", "convert a structure file");
    c_export->add_option("input", export_in, "structure JSON")->required();
    c_export->add_option("--format", format, "json or dot");
    c_export->add_option("-o,--output", out_path, "output file (default stdout)");

    // probe
    ParamFlags qf;
    std::string probe_vertex;
    std::vector<std::string> probe_edge;
    std::string probe_side = "B";
    auto* c_probe = app.add_subcommand("probe", "point queries on vertices and edges");
    qf.add(c_probe);
    c_probe->add_option("--vertex", probe_vertex, "x,y");
    c_probe->add_option("--edge", probe_edge, "two vertices x,y")->expected(2);
    c_probe->add_option("--side", probe_side, "A or B");

    // solve
    std::string file_a, file_b, mode = "standard";
    int pebbles = 2, rounds = 3, len_a = 0, len_b = 0;
    uint64_t max_memo = Budget{}.max_memo, max_nodes = Budget{}.max_nodes;
    bool witness_off = false;
    auto* c_solve = app.add_subcommand("solve", "exact game value");
    c_solve->add_option("a", file_a, "structure A (JSON)");
    c_solve->add_option("b", file_b, "structure B (JSON)");
    c_solve->add_option("--pebbles", pebbles)->check(CLI::Range(1, 8));
    c_solve->add_option("--rounds", rounds)->check(CLI::Range(0, 64));
    c_solve->add_option("--mode", mode, "standard, existential or ef-order");
    c_solve->add_option("--len-a", len_a, "ef-order: length of the first order");
    c_solve->add_option("--len-b", len_b, "ef-order: length of the second order");
    c_solve->add_option("--max-memo", max_memo, "memo entries before giving up");
    c_solve->add_option("--max-nodes", max_nodes, "search nodes before giving up");
    c_solve->add_flag("--no-witness", witness_off, "skip the principal variation");

    // play
    auto* c_play = app.add_subcommand("play", "interactive game; Spoiler moves are read from stdin");
    c_play->add_option("a", file_a, "structure A (JSON)")->required();
    c_play->add_option("b", file_b, "structure B (JSON)")->required();
    c_play->add_option("--pebbles", pebbles)->check(CLI::Range(1, 8));
    c_play->add_option("--rounds", rounds)->check(CLI::Range(1, 64));

    // verify-strategy
    int vs_m = 3, vs_rounds = -1;
    std::string vs_variant = "reduced";
    bool vs_constants = false, vs_plain = false;
    double vs_fraction = 0.01;
    auto* c_vs = app.add_subcommand("verify-strategy", "play the scripted Duplicator against every Spoiler sequence");
    c_vs->add_option("--m", vs_m)->check(CLI::Range(3, 6));
    c_vs->add_option("--variant", vs_variant, "full or reduced");
    c_vs->add_option("--rounds", vs_rounds, "default m");
    c_vs->add_flag("--constants", vs_constants, "add the boundary constants");
    c_vs->add_flag("--plain", vs_plain, "skip the circular shift");
    c_vs->add_option("--solver-fraction", vs_fraction, "share of replies checked by the exact solver")
        ->check(CLI::Range(0.0, 1.0));
    c_vs->add_option("--pebbles", pebbles)->check(CLI::Range(1, 8));

    // eval
    std::string eval_file, sentence;
    std::vector<std::string> assigns;
    auto* c_eval = app.add_subcommand("eval", "evaluate a sentence on a structure");
    c_eval->add_option("structure", eval_file, "structure JSON")->required();
    c_eval->add_option("sentence", sentence, "s-expression")->required();
    c_eval->add_option("--assign", assigns, "name=vertex-index for free variables");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*c_params) {
            emit(params_json(pf.make()));
            return 0;
        }
        if (*c_build || *c_export) {
            OrderedStructure S = *c_build ? bf.make() : import_json(read_file(export_in));
            if (format == "json") write_out(out_path, export_json(S));
            else if (format == "dot") write_out(out_path, export_dot(S));
            else throw UsageError("format must be json or dot");
            std::cerr << S.size() << " vertices, " << S.edge_count() << " edges\n";
            return 0;
        }
        if (*c_probe) {
            AbstractionParams P = qf.make();
            json j = header("probe");
            j["k"] = P.k;
            j["m"] = P.m;
            j["variant"] = variant_name(P.variant);
            Side side = parse_side(probe_side);
            auto vinfo = [&](const Vertex& v) {
                P.check_x(v.x);
                if (v.y < 0 || v.y >= P.k) throw DomainError("row out of range");
                json o;
                o["x"] = to_dec(v.x);
                o["y"] = v.y;
                o["idx"] = P.idx(v.x);
                json lv = json::array();
                for (int i = P.lo(); i <= P.m; ++i) {
                    json l;
                    l["level"] = i;
                    l["floor"] = to_dec(P.floor_abs(v.x, i));
                    l["proj"] = to_dec(P.proj(v.x, i));
                    l["cc"] = P.cc(v.x, v.y, i);
                    lv.push_back(l);
                }
                o["levels"] = lv;
                if (P.variant == Variant::general) {
                    GeneralModel M(P);
                    o["label"] = label_str(M.label(v));
                    o["g"] = to_dec(M.g(v.x));
                }
                return o;
            };
            if (!probe_vertex.empty()) j["vertex"] = vinfo(parse_vertex(probe_vertex));
            if (!probe_edge.empty()) {
                Vertex a = parse_vertex(probe_edge.at(0)), b = parse_vertex(probe_edge.at(1));
                json e;
                e["u"] = vinfo(a);
                e["v"] = vinfo(b);
                e["side"] = side_name(side);
                if (P.variant == Variant::general) {
                    GeneralModel M(P);
                    EdgeTrace tr;
                    e["adjacent"] = M.edge_star(a, b, side, &tr);
                    json t = json::array();
                    for (auto& it : tr) t.push_back(json{{"rule", it.rule}, {"ok", it.ok}, {"detail", it.detail}});
                    e["trace"] = t;
                    e["sgn"] = nullptr;
                    if (a.y != b.y && (a.y == 0 || a.y == P.k - 1 || b.y == 0 || b.y == P.k - 1)) e["sgn"] = M.sgn(a, b);
                } else {
                    OrderedStructure S = build_k3(K3BuildSpec{P.m, P.variant, true, false, side == Side::A});
                    auto ia = S.index_of(a), ib = S.index_of(b);
                    if (!ia || !ib) throw DomainError("vertex not in the structure");
                    e["adjacent"] = S.adj(*ia, *ib);
                    e["prime_rule"] = k3_prime_rule(P, to_i64(a.x), a.y, to_i64(b.x), b.y);
                }
                j["edge"] = e;
            }
            if (probe_vertex.empty() && probe_edge.empty()) throw UsageError("probe needs --vertex or --edge");
            emit(j);
            return 0;
        }
        if (*c_solve) {
            Budget budget{max_memo, max_nodes};
            GameMode gm = parse_mode(mode);
            json j = header("solve");
            j["mode"] = mode_name(gm);
            j["pebbles"] = pebbles;
            bool dup = false;
            if (gm == GameMode::ef_order) {
                if (len_a < 1 || len_b < 1) throw UsageError("ef-order needs --len-a and --len-b");
                auto r = solve_ef_orders(len_a, len_b, rounds, budget);
                dup = r.duplicator_wins;
                j["rounds"] = rounds;
                j["len_a"] = len_a;
                j["len_b"] = len_b;
                j["nodes"] = r.nodes;
                j["result"] = dup ? "duplicator-wins" : "spoiler-wins";
            } else {
                if (file_a.empty() || file_b.empty()) throw UsageError("solve needs two structure files");
                OrderedStructure A = import_json(read_file(file_a)), B = import_json(read_file(file_b));
                if (gm == GameMode::existential) {
                    auto r = solve_existential(A, B, pebbles, ExistentialValidity::partial_isomorphism, budget);
                    dup = r.duplicator_survives;
                    j["positions"] = r.positions;
                    j["eliminated"] = r.eliminated;
                    j["result"] = dup ? "duplicator-survives" : "spoiler-wins";
                } else {
                    PebbleGameSolver s(A, B, pebbles, budget);
                    dup = s.value({}, rounds);
                    j["rounds"] = rounds;
                    j["result"] = dup ? "duplicator-wins" : "spoiler-wins";
                    if (!dup && !witness_off) j["witness"] = witness_json(A, B, s.witness({}, rounds));
                    j["nodes"] = s.nodes();
                    j["memo_entries"] = s.memo_size();
                }
            }
            emit(j);
            std::cerr << (dup ? "Duplicator" : "Spoiler") << " wins\n";
            return dup ? 0 : kExitFalse;
        }
        if (*c_play) {
            OrderedStructure A = import_json(read_file(file_a)), B = import_json(read_file(file_b));
            PebbleGameSolver s(A, B, pebbles);
            IndexMap pos;
            int left = rounds;
            std::cerr << "moves: [lift N] A|B x,y   (" << rounds << " rounds, " << pebbles << " pebbles)\n";
            std::string line;
            bool lost = false;
            while (left > 0 && !lost && std::getline(std::cin, line)) {
                std::istringstream in(line);
                std::string w;
                int lift = -1;
                in >> w;
                if (w.empty()) continue;
                if (w == "lift") {
                    in >> lift >> w;
                }
                json out = header("play");
                try {
                    if (w != "A" && w != "B") throw MoveError("expected A or B");
                    int side = w == "A" ? 0 : 1;
                    std::string vs;
                    in >> vs;
                    const OrderedStructure& S = side == 0 ? A : B;
                    const OrderedStructure& T = side == 0 ? B : A;
                    auto vi = S.index_of(parse_vertex(vs));
                    if (!vi) throw MoveError("vertex not in the structure");
                    auto good = play_step(s, pos, left, lift, side, *vi);
                    if (lift >= 0) pos.erase(pos.begin() + lift);
                    out["round"] = rounds - left + 1;
                    out["pick"] = json{{"side", w}, {"vertex", vertex_json(S.vertex(*vi))}};
                    json g = json::array();
                    for (auto r : good) g.push_back(vertex_json(T.vertex(r)));
                    out["good_replies"] = g;
                    if (good.empty()) {
                        out["reply"] = nullptr;
                        lost = true;
                    } else {
                        out["reply"] = vertex_json(T.vertex(good.front()));
                        pos.emplace_back(side == 0 ? *vi : good.front(), side == 0 ? good.front() : *vi);
                    }
                    --left;
                } catch (const MoveError& e) {
                    out["error"] = e.what();
                }
                std::cout << out.dump() << "\n" << std::flush;
            }
            std::cerr << (lost ? "Duplicator has no winning reply" : "Duplicator survives") << "\n";
            return lost ? kExitFalse : 0;
        }
        if (*c_vs) {
            Variant v = parse_variant(vs_variant);
            if (v == Variant::general) throw UsageError("the scripted strategy is for k = 3");
            int r = vs_rounds < 0 ? vs_m : vs_rounds;
            K3Pair pair = build_k3_pair(vs_m, v, !vs_plain, vs_constants);
            ValidateOptions o;
            o.pebbles = pebbles;
            o.jobs = jobs;
            o.solver_fraction = vs_fraction;
            o.seed = seed;
            StrategyReport rep;
            try {
                rep = validate_strategy(pair, r, o);
            } catch (const ConfigurationError& e) {
                json j = header("verify-strategy");
                j["error"] = e.what();
                emit(j);
                return kExitUsage;
            }
            json j = header("verify-strategy");
            j["m"] = rep.m;
            j["variant"] = rep.variant;
            j["constants"] = rep.constants;
            j["shifted"] = !vs_plain;
            j["rounds"] = rep.rounds;
            j["seed"] = seed;
            j["sequences"] = rep.sequences;
            j["responses"] = rep.responses;
            j["violations"] = rep.violations;
            json cf;
            for (int c = 1; c <= 6; ++c) cf[std::to_string(c)] = rep.condition_failures[c];
            j["condition_failures"] = cf;
            j["resorts"] = rep.resorts;
            j["min_xi"] = rep.min_xi;
            j["solver_checks"] = rep.solver_checks;
            j["solver_disagreements"] = rep.solver_disagreements;
            j["first_violations"] = rep.first_violations;
            emit(j);
            bool ok = rep.violations == 0 && rep.solver_disagreements == 0;
            std::cerr << rep.sequences << " sequences, " << rep.violations << " violations\n";
            return ok ? 0 : kExitFalse;
        }
        if (*c_eval) {
            OrderedStructure S = import_json(read_file(eval_file));
            FormulaPtr f = parse_formula(sentence);
            Assignment asg;
            for (auto& a : assigns) {
                auto e = a.find('=');
                if (e == std::string::npos) throw UsageError("--assign expects name=index");
                asg[a.substr(0, e)] = std::stoul(a.substr(e + 1));
            }
            bool val = eval(S, f, asg);
            json j = header("eval");
            j["sentence"] = formula_str(f);
            j["value"] = val;
            j["quantifier_rank"] = quantifier_rank(f);
            j["variables"] = num_variables(f);
            emit(j);
            return 0;
        }
    } catch (const BudgetExceeded& e) {
        json j = header("error");
        j["error"] = "budget exceeded";
        j["detail"] = e.what();
        emit(j);
        std::cerr << e.what() << "\n";
        return kExitBudget;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
