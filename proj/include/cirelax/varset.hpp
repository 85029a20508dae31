#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cirelax {

/// Hard cap on the number of variables any universe may hold.
inline constexpr int kMaxVariables = 24;

/// A set of variable indices stored as a bitmask. Index i is bit i.
class VarSet {
 public:
  using Mask = std::uint32_t;

  constexpr VarSet() = default;
  constexpr explicit VarSet(Mask bits) : bits_(bits) {}

  static constexpr VarSet single(int index) { return VarSet(Mask{1} << index); }
  /// {0, ..., n-1}
  static constexpr VarSet full(int n) {
    return VarSet(n >= 32 ? ~Mask{0} : (Mask{1} << n) - 1);
  }

  constexpr Mask bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool contains(int index) const { return (bits_ >> index) & 1u; }
  constexpr bool contains(VarSet other) const { return (other.bits_ & ~bits_) == 0; }
  constexpr bool intersects(VarSet other) const { return (bits_ & other.bits_) != 0; }
  /// Smallest index, or -1 when empty.
  constexpr int lowest() const { return bits_ == 0 ? -1 : std::countr_zero(bits_); }
  /// Largest index, or -1 when empty.
  constexpr int highest() const { return bits_ == 0 ? -1 : 31 - std::countl_zero(bits_); }

  constexpr VarSet with(int index) const { return VarSet(bits_ | (Mask{1} << index)); }
  constexpr VarSet without(int index) const { return VarSet(bits_ & ~(Mask{1} << index)); }
  constexpr VarSet complement(int n) const { return VarSet(~bits_ & full(n).bits_); }

  constexpr VarSet operator|(VarSet o) const { return VarSet(bits_ | o.bits_); }
  constexpr VarSet operator&(VarSet o) const { return VarSet(bits_ & o.bits_); }
  constexpr VarSet operator-(VarSet o) const { return VarSet(bits_ & ~o.bits_); }
  constexpr VarSet& operator|=(VarSet o) { bits_ |= o.bits_; return *this; }
  constexpr VarSet& operator&=(VarSet o) { bits_ &= o.bits_; return *this; }
  constexpr VarSet& operator-=(VarSet o) { bits_ &= ~o.bits_; return *this; }

  constexpr auto operator<=>(const VarSet&) const = default;

  std::vector<int> indices() const {
    std::vector<int> out;
    for (Mask m = bits_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
    return out;
  }

 private:
  Mask bits_ = 0;
};

/// Calls fn(VarSet) for every subset of `set`, including the empty set, in
/// increasing mask order.
template <typename Fn>
void for_each_subset(VarSet set, Fn&& fn) {
  const VarSet::Mask full = set.bits();
  VarSet::Mask sub = 0;
  while (true) {
    fn(VarSet(sub));
    if (sub == full) break;
    sub = (sub - full) & full;
  }
}

/// Ordered, named variables. Indices are assigned in declaration order.
class Universe {
 public:
  Universe() = default;
  explicit Universe(std::vector<std::string> names) {
    for (auto& name : names) add(std::move(name));
  }

  /// Named X1..Xn.
  static Universe numbered(int n, std::string_view prefix = "X") {
    Universe u;
    for (int i = 1; i <= n; ++i) u.add(std::string(prefix) + std::to_string(i));
    return u;
  }

  int add(std::string name) {
    if (auto it = index_.find(name); it != index_.end()) return it->second;
    if (static_cast<int>(names_.size()) >= kMaxVariables)
      throw std::length_error("too many variables (max " + std::to_string(kMaxVariables) + ")");
    const int id = static_cast<int>(names_.size());
    index_.emplace(name, id);
    names_.push_back(std::move(name));
    return id;
  }

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int index) const { return names_.at(index); }
  const std::vector<std::string>& names() const { return names_; }

  /// -1 when the name is unknown.
  int find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    return it == index_.end() ? -1 : it->second;
  }

  /// Comma-separated names in index order, no braces.
  std::string join(VarSet set, std::string_view sep = ",") const {
    std::string out;
    for (int i : set.indices()) {
      if (!out.empty()) out += sep;
      out += names_.at(i);
    }
    return out;
  }

  /// `{X1,X3}`
  std::string braces(VarSet set) const { return "{" + join(set) + "}"; }

 private:
  std::vector<std::string> names_;
  std::map<std::string, int, std::less<>> index_;
};

}  // namespace cirelax
