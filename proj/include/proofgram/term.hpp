#pragma once

#include "proofgram/symbol.hpp"

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace proofgram {

namespace detail {

enum class NodeKind : std::uint8_t { Param, Var, App };

// Hash-consed, immutable node shared by proof terms and formula terms.
// Structural equality of terms is pointer equality of nodes.
struct Node {
  NodeKind kind;
  std::uint32_t payload;  // parameter index, or symbol id
  std::uint32_t max_param;
  std::uint32_t height;
  std::uint64_t size;     // edge count, saturating at UINT64_MAX
  std::size_t hash;
  std::vector<const Node*> kids;
};

const Node* make_node(NodeKind kind, std::uint32_t payload, std::span<const Node* const> kids);

template <class T>
class ChildRange {
public:
  class iterator {
  public:
    using value_type = T;
    using difference_type = std::ptrdiff_t;
    iterator() = default;
    explicit iterator(const Node* const* p) : p_(p) {}
    T operator*() const { return T::from_node(*p_); }
    iterator& operator++() { ++p_; return *this; }
    iterator operator++(int) { auto t = *this; ++p_; return t; }
    bool operator==(const iterator&) const = default;
  private:
    const Node* const* p_ = nullptr;
  };

  explicit ChildRange(const Node* n) : n_(n) {}
  iterator begin() const { return iterator(n_->kids.data()); }
  iterator end() const { return iterator(n_->kids.data() + n_->kids.size()); }
  std::size_t size() const { return n_->kids.size(); }
  T operator[](std::size_t i) const { return T::from_node(n_->kids[i]); }

private:
  const Node* n_;
};

} // namespace detail

/// Proof term: a parameter V_i (i >= 1) or a named node over child proof terms.
/// Values are hash-consed, so copies are pointer-sized and equality is O(1).
class ProofTerm {
public:
  ProofTerm() = default;

  static ProofTerm param(std::uint32_t index);
  static ProofTerm node(Symbol name, std::span<const ProofTerm> children = {});
  static ProofTerm node(Symbol name, std::initializer_list<ProofTerm> children) {
    return node(name, std::span<const ProofTerm>(children.begin(), children.size()));
  }
  static ProofTerm node(std::string_view name, std::initializer_list<ProofTerm> children = {}) {
    return node(Symbol(name), children);
  }

  bool valid() const { return n_ != nullptr; }
  bool is_param() const { return n_->kind == detail::NodeKind::Param; }
  std::uint32_t param_index() const { return n_->payload; }
  Symbol name() const;
  std::size_t arity() const { return n_->kids.size(); }
  ProofTerm child(std::size_t i) const { return from_node(n_->kids[i]); }
  detail::ChildRange<ProofTerm> children() const { return detail::ChildRange<ProofTerm>(n_); }

  /// Largest parameter index occurring, 0 if ground.
  std::uint32_t max_param() const { return n_->max_param; }
  bool is_ground() const { return n_->max_param == 0; }
  /// Edge count if it fits 64 bits, otherwise UINT64_MAX. See term_size() for the exact value.
  std::uint64_t size_saturated() const { return n_->size; }
  std::uint32_t height() const { return n_->height; }

  const detail::Node* node_ptr() const { return n_; }
  static ProofTerm from_node(const detail::Node* n) { ProofTerm t; t.n_ = n; return t; }

  friend bool operator==(ProofTerm a, ProofTerm b) { return a.n_ == b.n_; }
  friend bool operator!=(ProofTerm a, ProofTerm b) { return a.n_ != b.n_; }

private:
  const detail::Node* n_ = nullptr;
};

/// First-order term over formula variables and function symbols.
class FormulaTerm {
public:
  FormulaTerm() = default;

  static FormulaTerm var(Symbol name);
  static FormulaTerm var(std::string_view name) { return var(Symbol(name)); }
  static FormulaTerm app(Symbol functor, std::span<const FormulaTerm> args = {});
  static FormulaTerm app(Symbol functor, std::initializer_list<FormulaTerm> args) {
    return app(functor, std::span<const FormulaTerm>(args.begin(), args.size()));
  }
  static FormulaTerm app(std::string_view functor, std::initializer_list<FormulaTerm> args = {}) {
    return app(Symbol(functor), args);
  }

  bool valid() const { return n_ != nullptr; }
  bool is_var() const { return n_->kind == detail::NodeKind::Var; }
  /// Variable name or functor.
  Symbol symbol() const;
  std::size_t arity() const { return n_->kids.size(); }
  FormulaTerm arg(std::size_t i) const { return from_node(n_->kids[i]); }
  detail::ChildRange<FormulaTerm> args() const { return detail::ChildRange<FormulaTerm>(n_); }
  std::uint64_t size_saturated() const { return n_->size; }

  const detail::Node* node_ptr() const { return n_; }
  static FormulaTerm from_node(const detail::Node* n) { FormulaTerm t; t.n_ = n; return t; }

  friend bool operator==(FormulaTerm a, FormulaTerm b) { return a.n_ == b.n_; }
  friend bool operator!=(FormulaTerm a, FormulaTerm b) { return a.n_ != b.n_; }

private:
  const detail::Node* n_ = nullptr;
};

/// Definite clause head <- body[0], ..., body[n-1]; the "provable" predicate is implicit.
struct Clause {
  FormulaTerm head;
  std::vector<FormulaTerm> body;

  friend bool operator==(const Clause&, const Clause&) = default;
};

/// Variables in first-occurrence order (head, then body left to right).
std::vector<Symbol> variables_of(const Clause& c);
void collect_variables(FormulaTerm t, std::vector<Symbol>& out);

/// Renames variables to x1, x2, ... in first-occurrence order.
Clause canonical_rename(const Clause& c, std::string_view prefix = "x");

// Textual forms follow the PGT syntax: `name(a,b)`, `$1`, `?x`.
std::string to_string(ProofTerm t);
std::string to_string(FormulaTerm t);
std::string to_string(const Clause& c);
/// Quotes a symbol if it is not a plain PGT name.
std::string quote_name(std::string_view name);

} // namespace proofgram

template <>
struct std::hash<proofgram::ProofTerm> {
  std::size_t operator()(proofgram::ProofTerm t) const noexcept { return t.node_ptr()->hash; }
};
template <>
struct std::hash<proofgram::FormulaTerm> {
  std::size_t operator()(proofgram::FormulaTerm t) const noexcept { return t.node_ptr()->hash; }
};
