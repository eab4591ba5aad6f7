#pragma once

// First-order sentences over ordered graphs with a finite variable pool.

#include "bvh/structure.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace bvh {

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    enum class Kind { True, False, Edge, Eq, Le, Bit, Not, And, Or, Exists, Forall };
    Kind kind = Kind::True;
    std::string v1, v2;            // atom arguments, or the quantified variable in v1
    std::vector<FormulaPtr> kids;  // Not: 1, And/Or: any, quantifiers: 1

    static FormulaPtr truth(bool v);
    static FormulaPtr atom(Kind k, std::string a, std::string b);
    static FormulaPtr neg(FormulaPtr f);
    static FormulaPtr conj(std::vector<FormulaPtr> fs);
    static FormulaPtr disj(std::vector<FormulaPtr> fs);
    static FormulaPtr exists(std::string v, FormulaPtr f);
    static FormulaPtr forall(std::string v, FormulaPtr f);
};

// s-expression syntax, see README
FormulaPtr parse_formula(const std::string& text);
std::string formula_str(const FormulaPtr& f);

int quantifier_rank(const FormulaPtr& f);
int num_variables(const FormulaPtr& f);  // distinct names, free or bound
std::vector<std::string> free_variables(const FormulaPtr& f);
size_t formula_size(const FormulaPtr& f);

using Assignment = std::map<std::string, size_t>;  // variable -> vertex index

// Tarskian semantics on the structure's vertex indices. E is the adjacency
// matrix, <= the structure order, BIT(x, y) holds when bit rank(y) of rank(x)
// is set. Sentences with few variables go through a table evaluator.
bool eval(const OrderedStructure& S, const FormulaPtr& f, const Assignment& asg = {});
// the direct recursive evaluator, kept for cross-checks
bool eval_naive(const OrderedStructure& S, const FormulaPtr& f, const Assignment& asg = {});

FormulaPtr clique_sentence(int k);

struct SentenceShape {
    int pool = 2;        // variables x1..x_pool
    int qr_max = 3;
    int max_size = 24;   // node budget
};

FormulaPtr random_sentence(std::mt19937_64& rng, const SentenceShape& shape);

struct AgreementReport {
    int pool = 2;
    int qr_max = 3;
    int samples = 0;
    uint64_t seed = 0;
    int agree = 0;
    int true_on_both = 0;
    std::vector<std::string> disagreements;  // sentences, verbatim
};

// `extra` sentences are checked as well (they must fit the pool and rank).
AgreementReport sample_agreement(const OrderedStructure& A, const OrderedStructure& B, int pool, int qr_max, int n,
                                 uint64_t seed, const std::vector<FormulaPtr>& extra = {});

}  // namespace bvh
