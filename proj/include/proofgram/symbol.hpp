#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace proofgram {

/// Interned name. Two symbols are equal iff their spellings are equal.
class Symbol {
public:
  Symbol() = default;
  explicit Symbol(std::string_view name);

  /// Rebuilds a symbol from id(); the id must come from an existing symbol.
  static Symbol from_id(std::uint32_t id) { Symbol s; s.id_ = id; return s; }

  std::string_view name() const;
  std::string str() const { return std::string(name()); }
  std::uint32_t id() const { return id_; }
  bool valid() const { return id_ != 0; }

  friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }
  friend bool operator!=(Symbol a, Symbol b) { return a.id_ != b.id_; }

  /// Lexicographic on spelling, so orderings do not depend on interning order.
  friend bool lexically_less(Symbol a, Symbol b) { return a.name() < b.name(); }

private:
  std::uint32_t id_ = 0;
};

/// Orders by id; cheap, but not stable across runs with different interning order.
struct SymbolIdLess {
  bool operator()(Symbol a, Symbol b) const { return a.id() < b.id(); }
};

} // namespace proofgram

template <>
struct std::hash<proofgram::Symbol> {
  std::size_t operator()(proofgram::Symbol s) const noexcept { return std::hash<std::uint32_t>{}(s.id()); }
};
