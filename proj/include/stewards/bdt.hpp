#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "stewards/bits.hpp"
#include "stewards/numeric.hpp"

namespace stewards {

using Symbol = std::uint32_t;
/// Root-to-node sequence of symbols; the root is the empty path.
using NodePath = std::vector<Symbol>;

std::string path_key(const NodePath& path);  // "0,1"; root is ""
NodePath parse_path_key(const std::string& key);

/// Depth-k tree over alphabet [sigma] that reads one n-bit block per level.
class BlockDecisionTree {
 public:
  using Transition = std::function<Symbol(const NodePath& node, const BitString& block)>;
  /// Row of 2^n symbols per internal node, indexed by the block's little-endian value.
  using Table = std::map<NodePath, std::vector<Symbol>>;

  static BlockDecisionTree from_callback(std::size_t k, std::size_t n, std::uint64_t sigma, Transition transition);
  static BlockDecisionTree from_table(std::size_t k, std::size_t n, std::uint64_t sigma, Table table);
  /// {"k":..,"n":..,"sigma":..,"nodes":{"": [..], "0": [..], ...}}
  static BlockDecisionTree from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;  // table form only

  std::size_t k() const { return k_; }
  std::size_t n() const { return n_; }
  std::uint64_t sigma() const { return sigma_; }
  bool has_table() const { return !table_.empty(); }

  Symbol step(const NodePath& node, const BitString& block) const;
  /// Reads k consecutive n-bit blocks.
  NodePath evaluate(const BitString& blocks) const;

 private:
  BlockDecisionTree(std::size_t k, std::size_t n, std::uint64_t sigma) : k_(k), n_(n), sigma_(sigma) {}

  std::size_t k_, n_;
  std::uint64_t sigma_;
  Table table_;
  Transition transition_;
};

using NodeDistribution = std::map<NodePath, Rat>;

constexpr std::size_t kDefaultEnumerationCap = 24;

/// Leaf distribution under uniform input, exact. Enumerates every block at
/// every reachable node, which is the full enumeration of {0,1}^{nk}
/// grouped by prefix.
NodeDistribution exact_node_distribution(const BlockDecisionTree& tree,
                                         std::size_t cap = kDefaultEnumerationCap);
/// Leaf distribution of the tree fed gen(seed) over every seed.
NodeDistribution exact_node_distribution(const BlockDecisionTree& tree,
                                         const std::function<BitString(const BitString&)>& gen,
                                         std::size_t seed_len, std::size_t cap = kDefaultEnumerationCap);

/// Half the l1 distance; missing keys count as probability 0.
Rat tv_distance(const NodeDistribution& p, const NodeDistribution& q);

nlohmann::json to_json(const NodeDistribution& dist);

}  // namespace stewards
