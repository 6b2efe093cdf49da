#include "proofgram/pdnet.hpp"
#include "proofgram/error.hpp"

#include <boost/math/tools/minima.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_zeta.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace proofgram {

std::uint64_t PdNet::edge_occurrences() const {
  std::uint64_t n = 0;
  for (const auto& e : edges) n += e.count;
  return n;
}

PdNet build_pdnet(const ProofGrammar& g) {
  PdNet net;
  net.in_degree.assign(g.size(), 0);
  net.out_degree.assign(g.size(), 0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    net.nodes.push_back(g[i].nonterminal);
    std::map<std::size_t, std::uint64_t> out;
    std::vector<ProofTerm> stack{g[i].rhs};
    while (!stack.empty()) {
      ProofTerm u = stack.back();
      stack.pop_back();
      if (u.is_param()) continue;
      if (auto j = g.index_of(u.name())) ++out[*j];
      for (ProofTerm c : u.children()) stack.push_back(c);
    }
    for (auto [j, count] : out) {
      net.edges.push_back({i, j, count});
      net.out_degree[i] += count;
      net.in_degree[j] += count;
    }
  }
  return net;
}

std::string edges_tsv(const PdNet& net) {
  std::ostringstream o;
  for (const auto& e : net.edges) o << net.nodes[e.src].str() << '\t' << net.nodes[e.dst].str() << '\t' << e.count << '\n';
  return o.str();
}

std::vector<std::uint64_t> positive_in_degrees(const PdNet& net) {
  std::vector<std::uint64_t> out;
  for (auto d : net.in_degree)
    if (d > 0) out.push_back(d);
  return out;
}

std::string to_string(PowerLawMethod m) { return m == PowerLawMethod::Discrete ? "discrete" : "approximate"; }

PowerLawMethod parse_power_law_method(std::string_view s) {
  if (s == "discrete") return PowerLawMethod::Discrete;
  if (s == "approximate") return PowerLawMethod::Approximate;
  throw InputError("unknown power-law method '" + std::string(s) + "' (expected discrete or approximate)");
}

namespace {

constexpr double kAlphaLow = 1.0 + 1e-6;

double hurwitz(double s, double q) {
  static const bool quiet = (gsl_set_error_handler_off(), true);
  (void)quiet;
  gsl_sf_result r;
  if (gsl_sf_hzeta_e(s, q, &r) != GSL_SUCCESS) throw InternalError("Hurwitz zeta failed at s=" + std::to_string(s));
  return r.val;
}

// Keeps k^-alpha above the double range for every sample.
double alpha_high(std::uint64_t kmax) { return std::min(50.0, 600.0 / std::log(double(kmax) + 1.0)); }

double ccdf_at(PowerLawMethod m, double alpha, double kmin, double k) {
  if (m == PowerLawMethod::Discrete) return hurwitz(alpha, k) / hurwitz(alpha, kmin);
  return std::pow((k - 0.5) / (kmin - 0.5), 1.0 - alpha);
}

// `sorted` ascending; the tail starts at index `from`, the first sample >= k0.
PowerLawFit fit_tail(const std::vector<std::uint64_t>& sorted, std::size_t from, std::uint64_t k0, PowerLawMethod m) {
  PowerLawFit f;
  f.method = m;
  f.kmin = k0;
  f.tail = sorted.size() - from;
  const double kmin = double(k0), n = double(f.tail);
  double sum_log = 0, sum_log_rel = 0;
  for (std::size_t i = from; i < sorted.size(); ++i) {
    sum_log += std::log(double(sorted[i]));
    sum_log_rel += std::log(double(sorted[i]) / (kmin - 0.5));
  }
  f.degenerate = sorted.back() == sorted[from];
  if (m == PowerLawMethod::Approximate) {
    f.alpha = 1.0 + n / sum_log_rel;
  } else {
    auto neg_log_likelihood = [&](double a) { return n * std::log(hurwitz(a, kmin)) + a * sum_log; };
    f.alpha = boost::math::tools::brent_find_minima(neg_log_likelihood, kAlphaLow, alpha_high(sorted.back()), 40).first;
  }
  if (f.degenerate) {
    f.ks_distance = 1.0;
    return f;
  }
  // Empirical CCDF at each distinct value: share of tail samples >= k.
  double ks = 0;
  for (std::size_t i = from; i < sorted.size();) {
    double emp = double(sorted.size() - i) / n;
    ks = std::max(ks, std::abs(emp - ccdf_at(m, f.alpha, kmin, double(sorted[i]))));
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    i = j;
  }
  f.ks_distance = ks;
  return f;
}

std::vector<std::uint64_t> sorted_positive(std::span<const std::uint64_t> degrees) {
  std::vector<std::uint64_t> out;
  for (auto d : degrees)
    if (d > 0) out.push_back(d);
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace

double fitted_ccdf(const PowerLawFit& fit, std::uint64_t k) {
  return ccdf_at(fit.method, fit.alpha, double(fit.kmin), double(k));
}

PowerLawFit fit_power_law(std::span<const std::uint64_t> degrees, std::optional<std::uint64_t> kmin,
                          PowerLawMethod method) {
  auto sorted = sorted_positive(degrees);
  if (kmin) {
    if (*kmin == 0) throw PreconditionError("kmin must be positive");
    auto from = std::size_t(std::lower_bound(sorted.begin(), sorted.end(), *kmin) - sorted.begin());
    if (sorted.size() - from < kMinTail)
      throw PreconditionError("insufficient data: fewer than " + std::to_string(kMinTail) + " degrees >= kmin");
    return fit_tail(sorted, from, *kmin, method);
  }
  if (sorted.size() < kMinTail)
    throw PreconditionError("insufficient data: fewer than " + std::to_string(kMinTail) + " positive degrees");
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i + kMinTail <= sorted.size(); ++i)
    if (i == 0 || sorted[i] != sorted[i - 1]) starts.push_back(i);
  std::vector<PowerLawFit> fits(starts.size());
  std::transform(starts.begin(), starts.end(), fits.begin(),
                 [&](std::size_t i) { return fit_tail(sorted, i, sorted[i], method); });
  // First minimum: the smallest kmin among ties.
  return *std::min_element(fits.begin(), fits.end(),
                           [](const PowerLawFit& a, const PowerLawFit& b) { return a.ks_distance < b.ks_distance; });
}

std::string ccdf_csv(std::span<const std::uint64_t> degrees, const PowerLawFit& fit) {
  auto sorted = sorted_positive(degrees);
  const double n = double(sorted.size());
  const auto tail_from = std::size_t(std::lower_bound(sorted.begin(), sorted.end(), fit.kmin) - sorted.begin());
  const double at_kmin = double(sorted.size() - tail_from) / n;
  std::ostringstream o;
  o.precision(10);
  o << "k,ccdf_empirical,ccdf_fitted\n";
  for (std::size_t i = 0; i < sorted.size();) {
    const std::uint64_t k = sorted[i];
    o << k << ',' << double(sorted.size() - i) / n << ',';
    if (k >= fit.kmin) o << at_kmin * fitted_ccdf(fit, k);
    o << '\n';
    while (i < sorted.size() && sorted[i] == k) ++i;
  }
  return o.str();
}

} // namespace proofgram
