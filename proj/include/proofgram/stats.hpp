#pragma once

// Statistics of a KB and formula overlap between KBs.

#include "proofgram/bigint.hpp"
#include "proofgram/grammar.hpp"

#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

namespace proofgram {

/// Minimum, lower median, average rounded half to even, maximum.
struct Distribution {
  std::size_t count = 0;
  BigInt min, median, mean, max, sum;

  static Distribution of(std::vector<BigInt> values);
};

struct KbStats {
  BigInt grammar_size;
  std::size_t productions = 0;

  Distribution ref;
  double ref_zero = 0, ref_one = 0;  // percentages
  Distribution rhs_size;             // |p|
  Distribution val_size;             // |val_G(p)|
  Distribution sav;                  // productions with ref > 0
  double sav_negative = 0, sav_zero = 0;  // percentages of productions with ref > 0
  Distribution arity;
  double arity_zero = 0;
  double nonlinear = 0;
  Distribution voccs;  // per LHS parameter
  Distribution vmult;
  Distribution clause_size;    // |F|
  Distribution clause_height;  // h(F)
  std::optional<double> strict_mgt;  // >mgt; empty when some presupposition has no clause
  double duplicates = 0;       // ≐
  double subsumed = 0;         // ≥
};

KbStats kb_stats(const KB& kb);

/// Percentage of clauses removed by keeping one copy per variant class
/// (renaming and body permutation).
double duplicate_share(std::span<const Clause> clauses);
/// Percentage removed by first dropping strictly subsumed members (equal body
/// length, modulo body permutation), then duplicates.
double subsumed_share(std::span<const Clause> clauses);

/// Rendered as `metric,min,median,mean,max,extra` rows.
std::string stats_csv(const KbStats& s);
/// Human-readable summary.
std::string stats_text(const KbStats& s);

/// Big values with at most 15 digits in full, larger ones as m.mm×10^e.
std::string csv_big(const BigInt& v);

struct Overlap {
  std::size_t considered = 0;
  std::size_t found = 0;
  double percent() const { return considered == 0 ? 0.0 : 100.0 * double(found) / double(considered); }
};

/// Share of `clauses` (skipping indices in `exclude`) that are variants,
/// modulo body permutation, of some reference clause.
Overlap compare_clauses(std::span<const Clause> clauses, std::span<const Clause> reference,
                        const std::unordered_set<std::size_t>& exclude = {});

/// compare_clauses over K's theorem clauses; productions named in `top_level`
/// are not counted.
Overlap compare_kb(const KB& k, std::span<const Clause> reference, const std::unordered_set<Symbol>& top_level = {});

} // namespace proofgram
