#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "stewards/bits.hpp"
#include "stewards/numeric.hpp"

namespace stewards {

/// Vertex (x, y) of Z_m x Z_m.
struct Vertex {
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

/// 8-regular Margulis / Gabber-Galil expander on Z_m x Z_m.
///
/// Labels 0..3 apply (x + 2y, y), (x + 2y + 1, y), (x, y + 2x), (x, y + 2x + 1)
/// mod m; labels 4..7 are the respective inverses, so label l and l ^ 4 undo
/// each other. The normalized second eigenvalue is at most 5*sqrt(2)/8.
class GabberGalilGraph {
 public:
  static constexpr unsigned kDegree = 8;

  explicit GabberGalilGraph(std::uint64_t m);

  std::uint64_t modulus() const { return m_; }
  std::uint64_t vertex_count() const { return m_ * m_; }

  Vertex neighbor(Vertex v, unsigned label) const;
  Vertex walk(Vertex start, std::span<const std::uint8_t> labels) const;

  std::uint64_t index(Vertex v) const { return v.x + v.y * m_; }
  Vertex vertex(std::uint64_t index) const { return {index % m_, index / m_}; }

  /// neighbors[v * 8 + label] for every vertex index; m*m must fit in 32 bits.
  std::vector<std::uint32_t> neighbor_table() const;

  /// Rational upper bound on the normalized second eigenvalue: 221/250 = 0.884,
  /// which is >= 5*sqrt(2)/8 = 0.88388...
  static Rat lambda_hat();

 private:
  std::uint64_t m_;
};

/// Power-iteration estimate of the second largest singular value of the
/// normalized adjacency operator (the constant vector projected out).
double estimate_second_singular_value(const GabberGalilGraph& g, std::size_t iterations = 3000,
                                      std::uint64_t seed = 1);

/// Vertex of the Gabber-Galil graph with m = 2^h for arbitrary h, coordinates
/// stored as little-endian word arrays. This is the vertex form used when a
/// bit string is walked on.
class WideVertex {
 public:
  explicit WideVertex(std::size_t half_bits);

  /// Splits s bits into x = bits [0, h) and y = bits [h, 2h), h = ceil(s/2);
  /// odd s is padded with one zero bit at the top.
  static WideVertex embed(const BitString& bits);
  /// Concatenates x and y and truncates to `size` bits.
  BitString decode(std::size_t size) const;

  std::size_t half_bits() const { return h_; }

  void step(unsigned label);
  /// Walks labels parsed as consecutive little-endian 3-bit groups of `labels`.
  void walk(const BitString& labels);

  std::vector<std::uint64_t>& x() { return x_; }
  std::vector<std::uint64_t>& y() { return y_; }

 private:
  void mask(std::vector<std::uint64_t>& v) const;

  std::size_t h_;
  std::vector<std::uint64_t> x_, y_;
};

/// Reads label j of a label string: bits [3j, 3j+3) little-endian.
unsigned label_at(const BitString& labels, std::size_t j);

}  // namespace stewards
