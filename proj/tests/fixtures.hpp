#pragma once

#include "proofgram/grammar.hpp"
#include "proofgram/error.hpp"
#include "proofgram/pgt.hpp"

#include <random>
#include <string>
#include <vector>

namespace proofgram::testing {

// D, ax-1 and ax-2 with '=>' written as the binary functor i.
inline PresuppositionBase detachment_base() {
  return parse_pgt(R"(
axiom D/2 : ?y <- i(?x,?y), ?x
axiom ax-1/0 : i(?x1,i(?x2,?x1))
axiom ax-2/0 : i(i(?x1,i(?x2,?x3)),i(i(?x1,?x2),i(?x1,?x3)))
)").base;
}

inline ProofTerm pt(std::string_view s) { return parse_proof_term(s); }
inline Clause cl(std::string_view s) { return parse_clause(s); }

/// Random proof term over D/2, ax-1, ax-2 and parameters $1..$k.
class ProofTermGen {
public:
  explicit ProofTermGen(std::uint64_t seed) : rng_(seed) {}

  ProofTerm ground(int depth) { return term(depth, 0, nullptr); }

  /// Linear term using each of $1..$k exactly once, in random positions.
  ProofTerm linear(int depth, std::uint32_t k) {
    std::vector<std::uint32_t> pool;
    for (std::uint32_t i = 1; i <= k; ++i) pool.push_back(i);
    std::shuffle(pool.begin(), pool.end(), rng_);
    ProofTerm t = term(depth, 0, &pool);
    // Attach any parameters not placed yet.
    while (!pool.empty()) {
      ProofTerm v = ProofTerm::param(pool.back());
      pool.pop_back();
      t = coin() ? ProofTerm::node("D", {t, v}) : ProofTerm::node("D", {v, t});
    }
    return t;
  }

  /// Term over parameters $1..$k, repeats allowed.
  ProofTerm with_params(int depth, std::uint32_t k) { return term(depth, k, nullptr); }

  std::mt19937_64& rng() { return rng_; }
  bool coin() { return std::uniform_int_distribution<int>(0, 1)(rng_) == 1; }

private:
  ProofTerm term(int depth, std::uint32_t k, std::vector<std::uint32_t>* pool) {
    std::uniform_int_distribution<int> pick(0, 9);
    int r = pick(rng_);
    if (depth <= 0 || r < 3) {
      if (pool && !pool->empty() && r == 0) {
        auto v = pool->back();
        pool->pop_back();
        return ProofTerm::param(v);
      }
      if (k > 0 && r == 0) return ProofTerm::param(std::uniform_int_distribution<std::uint32_t>(1, k)(rng_));
      return ProofTerm::node(coin() ? "ax-1" : "ax-2");
    }
    return ProofTerm::node("D", {term(depth - 1, k, pool), term(depth - 1, k, pool)});
  }

  std::mt19937_64 rng_;
};

} // namespace proofgram::testing
