#pragma once

// Proof-dependency network of a grammar and power-law fitting of its degrees.

#include "proofgram/grammar.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace proofgram {

struct PdEdge {
  std::size_t src = 0;  // production indices
  std::size_t dst = 0;
  std::uint64_t count = 0;
};

/// Node i is production i; edge p -> q counts the occurrences of q in p's RHS.
struct PdNet {
  std::vector<Symbol> nodes;
  std::vector<PdEdge> edges;  // sorted by (src, dst)
  std::vector<std::uint64_t> in_degree;
  std::vector<std::uint64_t> out_degree;

  std::uint64_t edge_occurrences() const;
};

PdNet build_pdnet(const ProofGrammar& g);

/// `src<TAB>dst<TAB>count` rows.
std::string edges_tsv(const PdNet& net);

/// Positive in-degrees; zero-degree nodes are left out.
std::vector<std::uint64_t> positive_in_degrees(const PdNet& net);

enum class PowerLawMethod {
  Discrete,     // maximizes -n ln zeta(alpha, kmin) - alpha sum ln k_i
  Approximate,  // alpha = 1 + n / sum ln(k_i / (kmin - 1/2))
};

std::string to_string(PowerLawMethod m);
PowerLawMethod parse_power_law_method(std::string_view s);

struct PowerLawFit {
  PowerLawMethod method = PowerLawMethod::Discrete;
  double alpha = 0;
  std::uint64_t kmin = 1;
  double ks_distance = 0;
  std::size_t tail = 0;     // samples >= kmin
  bool degenerate = false;  // tail holds a single distinct value
};

/// Tail samples required for a fit.
inline constexpr std::size_t kMinTail = 10;

/// Maximum-likelihood exponent of p(k) ~ k^-alpha over samples >= kmin.
/// Without `kmin` every observed
/// value with at least kMinTail tail samples is tried and the one with the
/// smallest KS distance between empirical and fitted CCDFs is kept (ties: the
/// smallest). Zero samples are ignored. Throws PreconditionError when fewer
/// than kMinTail samples are >= kmin.
PowerLawFit fit_power_law(std::span<const std::uint64_t> degrees, std::optional<std::uint64_t> kmin = std::nullopt,
                          PowerLawMethod method = PowerLawMethod::Discrete);

/// Fitted P(K >= k) for k >= fit.kmin.
double fitted_ccdf(const PowerLawFit& fit, std::uint64_t k);

/// `k,ccdf_empirical,ccdf_fitted` rows, one per distinct positive degree.
/// The fitted CCDF is scaled to meet the empirical one at kmin and left empty
/// below it.
std::string ccdf_csv(std::span<const std::uint64_t> degrees, const PowerLawFit& fit);

} // namespace proofgram
