#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cirelax/ci_triple.hpp"
#include "cirelax/dag.hpp"
#include "cirelax/distribution.hpp"
#include "cirelax/polymatroid.hpp"
#include "cirelax/rational.hpp"
#include "cirelax/text.hpp"

namespace cirelax {

// File formats are line based; `#` starts a comment.
//
//   DAG:          var <name>            (index order)
//                 edge <parent> <child>
//   CI set:       [var <name>]          (optional, fixes index order)
//                 I(<list>;<list>|<list>)
//   distribution: vars <name:card> ...
//                 <v1> ... <vn> <p>     (p decimal or num/den; omitted outcomes have p = 0)
//   polymatroid:  polymatroid vars <name> ...
//                 h <name,name,...> <value>   (one line per nonempty subset)

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

namespace detail {

/// Calls fn(line_number, stripped_line, raw_line) for each non-blank line.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view raw = text.substr(pos, end - pos);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    ++number;
    const std::string_view line = strip_comment(raw);
    if (!line.empty()) fn(number, line, raw);
    if (end == text.size()) break;
    pos = end + 1;
  }
}

inline int column_in(std::string_view raw, std::string_view word) {
  return static_cast<int>(word.data() - raw.data()) + 1;
}

/// Re-throws single-line parse errors with the file line attached.
template <typename Fn>
auto at_line(int line, int column_offset, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    if (e.line() != 0) throw;
    const std::string what = e.what();
    const auto colon = what.find(": ");
    throw ParseError(line, e.column() + column_offset, colon == std::string::npos ? what : what.substr(colon + 2));
  } catch (const std::invalid_argument& e) {
    throw ParseError(line, column_offset + 1, e.what());
  }
}

}  // namespace detail

inline Dag parse_dag(std::string_view text) {
  Universe universe;
  std::vector<std::pair<int, int>> edges;
  detail::for_each_line(text, [&](int line, std::string_view content, std::string_view raw) {
    const auto words = detail::split_words(content);
    auto col = [&](std::size_t i) { return detail::column_in(raw, words[i]); };
    if (words[0] == "var") {
      if (words.size() != 2) throw ParseError(line, col(0), "expected 'var <name>'");
      if (!edges.empty()) throw ParseError(line, col(0), "variables must be declared before edges");
      const std::string name(words[1]);
      if (universe.find(name) >= 0) throw ParseError(line, col(1), "variable '" + name + "' declared twice");
      if (!detail::is_name_start(name[0])) throw ParseError(line, col(1), "invalid variable name '" + name + "'");
      try {
        universe.add(name);
      } catch (const std::length_error& e) {
        throw ParseError(line, col(1), e.what());
      }
    } else if (words[0] == "edge") {
      if (words.size() != 3) throw ParseError(line, col(0), "expected 'edge <parent> <child>'");
      const int parent = universe.find(words[1]);
      const int child = universe.find(words[2]);
      if (parent < 0) throw ParseError(line, col(1), "unknown variable '" + std::string(words[1]) + "'");
      if (child < 0) throw ParseError(line, col(2), "unknown variable '" + std::string(words[2]) + "'");
      if (parent == child) throw ParseError(line, col(1), "self loop");
      edges.emplace_back(parent, child);
    } else {
      throw ParseError(line, col(0), "expected 'var' or 'edge'");
    }
  });
  try {
    return Dag::from_edges(std::move(universe), edges);
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, 1, e.what());
  }
}

/// Parses a CI-set file against `universe`. With `extend`, `var` lines and
/// unseen names are appended to the universe; otherwise unknown names fail.
inline CISet parse_ci_set(std::string_view text, Universe& universe, bool extend = true) {
  CISet out;
  detail::for_each_line(text, [&](int line, std::string_view content, std::string_view raw) {
    const int offset = detail::column_in(raw, content) - 1;
    const auto words = detail::split_words(content);
    if (words[0] == "var") {
      if (words.size() != 2) throw ParseError(line, offset + 1, "expected 'var <name>'");
      if (!detail::is_name_start(words[1][0]))
        throw ParseError(line, detail::column_in(raw, words[1]), "invalid variable name");
      if (extend) universe.add(std::string(words[1]));
      else if (universe.find(words[1]) < 0)
        throw ParseError(line, detail::column_in(raw, words[1]), "unknown variable '" + std::string(words[1]) + "'");
      return;
    }
    out.add(detail::at_line(line, offset, [&] {
      return extend ? parse_ci_triple_extending(content, universe) : parse_ci_triple(content, universe);
    }));
  });
  return out;
}

/// Reads a distribution file into an exact table; the sum must be exactly 1.
inline std::pair<Universe, JointDistribution<Rational>> parse_distribution(std::string_view text) {
  Universe universe;
  std::vector<int> cards;
  std::map<std::size_t, Rational> given;
  std::vector<std::size_t> strides;
  bool header = false;
  detail::for_each_line(text, [&](int line, std::string_view content, std::string_view raw) {
    const auto words = detail::split_words(content);
    auto col = [&](std::size_t i) { return detail::column_in(raw, words[i]); };
    if (!header) {
      if (words[0] != "vars" || words.size() < 2) throw ParseError(line, col(0), "expected 'vars <name:card> ...'");
      std::size_t outcomes = 1;
      for (std::size_t i = 1; i < words.size(); ++i) {
        const auto w = words[i];
        const auto colon = w.find(':');
        if (colon == std::string_view::npos || colon == 0) throw ParseError(line, col(i), "expected <name:card>");
        const std::string name(w.substr(0, colon));
        if (!detail::is_name_start(name[0])) throw ParseError(line, col(i), "invalid variable name");
        if (universe.find(name) >= 0) throw ParseError(line, col(i), "variable '" + name + "' declared twice");
        int card = 0;
        try {
          std::size_t used = 0;
          card = std::stoi(std::string(w.substr(colon + 1)), &used);
          if (used != w.size() - colon - 1) card = 0;
        } catch (const std::exception&) {
          card = 0;
        }
        if (card < 1) throw ParseError(line, col(i), "cardinality must be a positive integer");
        strides.push_back(outcomes);
        outcomes *= static_cast<std::size_t>(card);
        if (outcomes > kMaxOutcomes) throw ParseError(line, col(i), "outcome count exceeds 2^20");
        try {
          universe.add(name);
        } catch (const std::length_error& e) {
          throw ParseError(line, col(i), e.what());
        }
        cards.push_back(card);
      }
      header = true;
      return;
    }
    if (words.size() != cards.size() + 1)
      throw ParseError(line, col(0), "expected " + std::to_string(cards.size()) + " values and a probability");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < cards.size(); ++i) {
      int v = -1;
      try {
        std::size_t used = 0;
        v = std::stoi(std::string(words[i]), &used);
        if (used != words[i].size()) v = -1;
      } catch (const std::exception&) {
        v = -1;
      }
      if (v < 0 || v >= cards[i]) throw ParseError(line, col(i), "value out of range for '" + universe.name(static_cast<int>(i)) + "'");
      idx += strides[i] * static_cast<std::size_t>(v);
    }
    const auto p = parse_rational(words.back());
    if (!p || sgn(*p) < 0) throw ParseError(line, col(words.size() - 1), "invalid probability");
    if (!given.emplace(idx, *p).second) throw ParseError(line, col(0), "outcome listed twice");
  });
  if (!header) throw ParseError(1, 1, "missing 'vars' header");
  std::size_t outcomes = 1;
  for (int c : cards) outcomes *= static_cast<std::size_t>(c);
  std::vector<Rational> probs(outcomes, Rational(0));
  Rational total(0);
  for (auto& [idx, p] : given) {
    total += p;
    probs[idx] = p;
  }
  if (total != 1) throw ParseError(0, 1, "probabilities sum to " + to_string(total) + ", not 1");
  return {std::move(universe), JointDistribution<Rational>(std::move(cards), std::move(probs))};
}

/// Lists every outcome with nonzero probability as an exact rational.
inline std::string format_distribution(const JointDistribution<Rational>& d, const Universe& u) {
  std::ostringstream os;
  os << "vars";
  for (int i = 0; i < d.size(); ++i) os << " " << u.name(i) << ":" << d.domain_sizes()[i];
  os << "\n";
  for (std::size_t o = 0; o < d.outcomes(); ++o) {
    if (sgn(d.probs()[o]) == 0) continue;
    for (int i = 0; i < d.size(); ++i) os << d.value(o, i) << " ";
    os << to_string(d.probs()[o]) << "\n";
  }
  return os.str();
}

inline std::string format_polymatroid(const PolymatroidTable<Rational>& h, const Universe& u) {
  std::ostringstream os;
  os << "polymatroid vars";
  for (int i = 0; i < h.size(); ++i) os << " " << u.name(i);
  os << "\n";
  for (VarSet::Mask s = 1; s < (VarSet::Mask{1} << h.size()); ++s)
    os << "h " << u.join(VarSet(s)) << " " << to_string(h[VarSet(s)]) << "\n";
  return os.str();
}

inline std::pair<Universe, PolymatroidTable<Rational>> parse_polymatroid(std::string_view text) {
  Universe universe;
  std::optional<PolymatroidTable<Rational>> table;
  std::vector<bool> seen;
  detail::for_each_line(text, [&](int line, std::string_view content, std::string_view raw) {
    const auto words = detail::split_words(content);
    auto col = [&](std::size_t i) { return detail::column_in(raw, words[i]); };
    if (!table) {
      if (words.size() < 3 || words[0] != "polymatroid" || words[1] != "vars")
        throw ParseError(line, col(0), "expected 'polymatroid vars <name> ...'");
      for (std::size_t i = 2; i < words.size(); ++i) {
        if (!detail::is_name_start(words[i][0]) || universe.find(words[i]) >= 0)
          throw ParseError(line, col(i), "invalid or repeated variable name");
        universe.add(std::string(words[i]));
      }
      if (universe.size() > 20) throw ParseError(line, col(0), "polymatroid tables support at most 20 variables");
      table.emplace(universe.size());
      seen.assign(std::size_t{1} << universe.size(), false);
      return;
    }
    if (words.size() != 3 || words[0] != "h") throw ParseError(line, col(0), "expected 'h <names> <value>'");
    VarSet s;
    std::string_view names = words[1];
    while (!names.empty()) {
      const auto comma = names.find(',');
      const auto name = names.substr(0, comma);
      const int id = universe.find(name);
      if (id < 0) throw ParseError(line, col(1), "unknown variable '" + std::string(name) + "'");
      s = s.with(id);
      names = comma == std::string_view::npos ? std::string_view{} : names.substr(comma + 1);
    }
    if (s.empty()) throw ParseError(line, col(1), "empty subset");
    if (seen[s.bits()]) throw ParseError(line, col(1), "subset listed twice");
    const auto v = parse_rational(words[2]);
    if (!v) throw ParseError(line, col(2), "invalid value");
    table->set(s, *v);
    seen[s.bits()] = true;
  });
  if (!table) throw ParseError(1, 1, "missing 'polymatroid vars' header");
  for (std::size_t s = 1; s < seen.size(); ++s)
    if (!seen[s]) throw ParseError(0, 1, "missing value for subset " + universe.braces(VarSet(static_cast<VarSet::Mask>(s))));
  return {std::move(universe), std::move(*table)};
}

}  // namespace cirelax
