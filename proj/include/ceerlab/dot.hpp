#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "ceerlab/ceer.hpp"
#include "ceerlab/segments.hpp"
#include "ceerlab/transversals.hpp"

namespace ceerlab::dot {

/// Graphviz rendering of a partition: one cluster per non-singleton class.
inline std::string partition(const FrozenCeer& r, const std::string& name = "ceer") {
  std::ostringstream out;
  out << "graph " << name << " {\n  node [shape=circle];\n";
  for (const ClassView& c : r.classes()) {
    if (c.is_singleton) {
      out << "  " << c.representative << ";\n";
      continue;
    }
    out << "  subgraph cluster_" << c.representative << " {\n    label=\"[" << c.representative << "]\";\n";
    for (Nat x : c.members) out << "    " << x << ";\n";
    for (std::size_t k = 1; k < c.members.size(); ++k) {
      out << "    " << c.members[k - 1] << " -- " << c.members[k] << " [style=dotted];\n";
    }
    out << "  }\n";
  }
  out << "}\n";
  return out.str();
}

namespace detail {

inline std::string node_id(const Bits& b) { return "\"n" + bits_to_string(b) + "\""; }

inline void tree_nodes(const TransversalTree& tree, Bits& sigma, Nat depth, std::ostringstream& out) {
  out << "  " << node_id(sigma) << " [label=\"" << (sigma.empty() ? "()" : bits_to_string(sigma)) << "\"];\n";
  if (sigma.size() == depth) return;
  for (bool bit : {false, true}) {
    sigma.push_back(bit);
    if (tree.member(sigma)) {
      Bits parent(sigma.begin(), sigma.end() - 1);
      out << "  " << node_id(parent) << " -> " << node_id(sigma) << " [label=\"" << (bit ? 1 : 0) << "\"];\n";
      tree_nodes(tree, sigma, depth, out);
    }
    sigma.pop_back();
  }
}

}  // namespace detail

/// The tree down to `depth`, edges labelled by the appended bit.
inline std::string tree(const TransversalTree& t, Nat depth, const std::string& name = "tree") {
  std::ostringstream out;
  out << "digraph " << name << " {\n  node [shape=box];\n";
  Bits sigma;
  if (t.member(sigma)) detail::tree_nodes(t, sigma, depth, out);
  out << "}\n";
  return out.str();
}

}  // namespace ceerlab::dot
