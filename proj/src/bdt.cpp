#include "stewards/bdt.hpp"

#include <sstream>
#include <stdexcept>

namespace stewards {

std::string path_key(const NodePath& path) {
  std::string key;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) key += ',';
    key += std::to_string(path[i]);
  }
  return key;
}

NodePath parse_path_key(const std::string& key) {
  NodePath path;
  if (key.empty()) return path;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("bad node path '" + key + "'");
    path.push_back(static_cast<Symbol>(std::stoul(part)));
  }
  return path;
}

BlockDecisionTree BlockDecisionTree::from_callback(std::size_t k, std::size_t n, std::uint64_t sigma,
                                                   Transition transition) {
  if (sigma < 1) throw std::invalid_argument("block decision tree: sigma must be >= 1");
  BlockDecisionTree t(k, n, sigma);
  t.transition_ = std::move(transition);
  return t;
}

BlockDecisionTree BlockDecisionTree::from_table(std::size_t k, std::size_t n, std::uint64_t sigma, Table table) {
  if (sigma < 1) throw std::invalid_argument("block decision tree: sigma must be >= 1");
  if (n > 24) throw std::invalid_argument("block decision tree: table form needs n <= 24");
  for (const auto& [path, row] : table) {
    if (path.size() >= k) throw std::invalid_argument("table row at depth >= k: '" + path_key(path) + "'");
    if (row.size() != (std::size_t{1} << n))
      throw std::invalid_argument("table row '" + path_key(path) + "' must have 2^n entries");
    for (auto s : row)
      if (s >= sigma) throw std::invalid_argument("symbol out of range in row '" + path_key(path) + "'");
    for (auto s : path)
      if (s >= sigma) throw std::invalid_argument("path symbol out of range in '" + path_key(path) + "'");
  }
  BlockDecisionTree t(k, n, sigma);
  t.table_ = std::move(table);
  return t;
}

BlockDecisionTree BlockDecisionTree::from_json(const nlohmann::json& doc) {
  Table table;
  for (const auto& [key, row] : doc.at("nodes").items()) table[parse_path_key(key)] = row.get<std::vector<Symbol>>();
  return from_table(doc.at("k").get<std::size_t>(), doc.at("n").get<std::size_t>(),
                    doc.at("sigma").get<std::uint64_t>(), std::move(table));
}

nlohmann::json BlockDecisionTree::to_json() const {
  if (!has_table()) throw std::logic_error("callback trees have no JSON form");
  nlohmann::json nodes = nlohmann::json::object();
  for (const auto& [path, row] : table_) nodes[path_key(path)] = row;
  return {{"k", k_}, {"n", n_}, {"sigma", sigma_}, {"nodes", nodes}};
}

Symbol BlockDecisionTree::step(const NodePath& node, const BitString& block) const {
  if (block.size() != n_) throw std::invalid_argument("block must have n bits");
  if (transition_) {
    Symbol s = transition_(node, block);
    if (s >= sigma_) throw std::out_of_range("transition returned a symbol outside the alphabet");
    return s;
  }
  auto it = table_.find(node);
  if (it == table_.end()) throw std::out_of_range("no table row for node '" + path_key(node) + "'");
  return it->second[block.to_uint()];
}

NodePath BlockDecisionTree::evaluate(const BitString& blocks) const {
  if (blocks.size() != n_ * k_)
    throw std::invalid_argument("evaluate: expected " + std::to_string(n_ * k_) + " bits, got " +
                                std::to_string(blocks.size()));
  NodePath path;
  for (std::size_t i = 0; i < k_; ++i) path.push_back(step(path, blocks.slice(i * n_, n_)));
  return path;
}

namespace {

void descend(const BlockDecisionTree& tree, NodePath& path, const BigInt& weight, std::map<NodePath, BigInt>& acc) {
  if (path.size() == tree.k()) {
    acc[path] += weight;
    return;
  }
  std::map<Symbol, BigInt> children;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << tree.n()); ++b)
    children[tree.step(path, BitString::from_uint(b, tree.n()))] += 1;
  for (const auto& [sym, count] : children) {
    path.push_back(sym);
    descend(tree, path, weight * count, acc);
    path.pop_back();
  }
}

NodeDistribution normalize(const std::map<NodePath, BigInt>& counts, const BigInt& total) {
  NodeDistribution dist;
  for (const auto& [path, c] : counts) dist[path] = Rat(c, total);
  return dist;
}

}  // namespace

NodeDistribution exact_node_distribution(const BlockDecisionTree& tree, std::size_t cap) {
  if (tree.n() * tree.k() > cap)
    throw std::length_error("exact_node_distribution: nk = " + std::to_string(tree.n() * tree.k()) +
                            " exceeds the enumeration cap " + std::to_string(cap));
  std::map<NodePath, BigInt> counts;
  NodePath path;
  descend(tree, path, BigInt(1), counts);
  BigInt total = 1;
  total <<= static_cast<mp_bitcnt_t>(tree.n() * tree.k());
  return normalize(counts, total);
}

NodeDistribution exact_node_distribution(const BlockDecisionTree& tree,
                                         const std::function<BitString(const BitString&)>& gen,
                                         std::size_t seed_len, std::size_t cap) {
  if (seed_len > cap)
    throw std::length_error("exact_node_distribution: seed length " + std::to_string(seed_len) +
                            " exceeds the enumeration cap " + std::to_string(cap));
  std::map<NodePath, BigInt> counts;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << seed_len); ++s) {
    BitString out = gen(BitString::from_uint(s, seed_len));
    if (out.size() < tree.n() * tree.k()) throw std::invalid_argument("generator output shorter than nk bits");
    counts[tree.evaluate(out.resized(tree.n() * tree.k()))] += 1;
  }
  BigInt total = 1;
  total <<= static_cast<mp_bitcnt_t>(seed_len);
  return normalize(counts, total);
}

Rat tv_distance(const NodeDistribution& p, const NodeDistribution& q) {
  Rat sum = 0;
  for (const auto& [path, pr] : p) {
    auto it = q.find(path);
    sum += (it == q.end() ? pr : (pr - it->second).abs());
  }
  for (const auto& [path, pr] : q)
    if (!p.contains(path)) sum += pr;
  return sum / Rat(2);
}

nlohmann::json to_json(const NodeDistribution& dist) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [path, pr] : dist) out[path_key(path)] = pr.str();
  return out;
}

}  // namespace stewards
