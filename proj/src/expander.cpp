#include "stewards/expander.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace stewards {

GabberGalilGraph::GabberGalilGraph(std::uint64_t m) : m_(m) {
  if (m == 0) throw std::invalid_argument("GabberGalilGraph: modulus must be positive");
  if (m > (std::uint64_t{1} << 31)) throw std::invalid_argument("GabberGalilGraph: modulus too large");
}

Vertex GabberGalilGraph::neighbor(Vertex v, unsigned label) const {
  if (label >= kDegree) throw std::invalid_argument("GabberGalilGraph: label must be < 8");
  const std::uint64_t m = m_;
  auto twice = [m](std::uint64_t a, std::uint64_t c) { return (2 * a + c) % m; };
  switch (label) {
    case 0: return {(v.x + twice(v.y, 0)) % m, v.y};
    case 1: return {(v.x + twice(v.y, 1)) % m, v.y};
    case 2: return {v.x, (v.y + twice(v.x, 0)) % m};
    case 3: return {v.x, (v.y + twice(v.x, 1)) % m};
    case 4: return {(v.x + m - twice(v.y, 0)) % m, v.y};
    case 5: return {(v.x + m - twice(v.y, 1)) % m, v.y};
    case 6: return {v.x, (v.y + m - twice(v.x, 0)) % m};
    default: return {v.x, (v.y + m - twice(v.x, 1)) % m};
  }
}

Vertex GabberGalilGraph::walk(Vertex start, std::span<const std::uint8_t> labels) const {
  for (auto l : labels) start = neighbor(start, l);
  return start;
}

std::vector<std::uint32_t> GabberGalilGraph::neighbor_table() const {
  if (vertex_count() > (std::uint64_t{1} << 32)) throw std::length_error("neighbor_table: graph too large");
  std::vector<std::uint32_t> table(vertex_count() * kDegree);
  for (std::uint64_t i = 0; i < vertex_count(); ++i)
    for (unsigned l = 0; l < kDegree; ++l)
      table[i * kDegree + l] = static_cast<std::uint32_t>(index(neighbor(vertex(i), l)));
  return table;
}

Rat GabberGalilGraph::lambda_hat() { return Rat(221, 250); }

double estimate_second_singular_value(const GabberGalilGraph& g, std::size_t iterations, std::uint64_t seed) {
  const auto table = g.neighbor_table();
  const std::size_t n = g.vertex_count();
  if (n < 2) return 0.0;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> v(n), next(n);
  for (auto& x : v) x = normal(rng);

  auto project_and_normalize = [n](std::vector<double>& u) {
    double mean = std::accumulate(u.begin(), u.end(), 0.0) / static_cast<double>(n);
    double norm = 0;
    for (auto& x : u) {
      x -= mean;
      norm += x * x;
    }
    norm = std::sqrt(norm);
    if (norm > 0)
      for (auto& x : u) x /= norm;
    return norm;
  };
  // The edge set is closed under inverses, so A is symmetric and the
  // singular values are the absolute eigenvalues; iterate with A^2.
  auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0;
      for (unsigned l = 0; l < GabberGalilGraph::kDegree; ++l) acc += in[table[i * GabberGalilGraph::kDegree + l]];
      out[i] = acc / GabberGalilGraph::kDegree;
    }
  };
  project_and_normalize(v);
  double estimate = 0;
  for (std::size_t it = 0; it < iterations; ++it) {
    apply(v, next);
    apply(next, v);
    estimate = std::sqrt(project_and_normalize(v));
  }
  return estimate;
}

WideVertex::WideVertex(std::size_t half_bits)
    : h_(half_bits), x_((half_bits + 63) / 64, 0), y_((half_bits + 63) / 64, 0) {}

WideVertex WideVertex::embed(const BitString& bits) {
  std::size_t h = (bits.size() + 1) / 2;
  WideVertex v(h);
  BitString xs = bits.slice(0, h);
  BitString ys = bits.slice(h, bits.size() - h).resized(h);
  auto xw = xs.words();
  auto yw = ys.words();
  std::copy(xw.begin(), xw.end(), v.x_.begin());
  std::copy(yw.begin(), yw.end(), v.y_.begin());
  return v;
}

BitString WideVertex::decode(std::size_t size) const {
  if (size > 2 * h_) throw std::invalid_argument("WideVertex::decode: size exceeds vertex bits");
  BitString xs(h_), ys(h_);
  std::copy(x_.begin(), x_.end(), xs.mutable_words().begin());
  std::copy(y_.begin(), y_.end(), ys.mutable_words().begin());
  xs.append(ys);
  return xs.slice(0, size);
}

void WideVertex::mask(std::vector<std::uint64_t>& v) const {
  if (h_ % 64 != 0 && !v.empty()) v.back() &= (std::uint64_t{1} << (h_ % 64)) - 1;
}

namespace {

// dst += 2*src + carry (mod 2^(64*words)); caller masks to h bits.
void add_twice(std::vector<std::uint64_t>& dst, const std::vector<std::uint64_t>& src, std::uint64_t carry) {
  std::uint64_t shifted_in = 0;
  for (std::size_t i = 0; i < dst.size(); ++i) {
    std::uint64_t s = (src[i] << 1) | shifted_in;
    shifted_in = src[i] >> 63;
    unsigned __int128 sum = static_cast<unsigned __int128>(dst[i]) + s + carry;
    dst[i] = static_cast<std::uint64_t>(sum);
    carry = static_cast<std::uint64_t>(sum >> 64);
  }
}

// dst -= 2*src + borrow.
void sub_twice(std::vector<std::uint64_t>& dst, const std::vector<std::uint64_t>& src, std::uint64_t borrow) {
  std::uint64_t shifted_in = 0;
  for (std::size_t i = 0; i < dst.size(); ++i) {
    std::uint64_t s = (src[i] << 1) | shifted_in;
    shifted_in = src[i] >> 63;
    unsigned __int128 take = static_cast<unsigned __int128>(s) + borrow;
    std::uint64_t old = dst[i];
    dst[i] = static_cast<std::uint64_t>(static_cast<unsigned __int128>(old) - take);
    borrow = take > old ? 1 : 0;
  }
}

}  // namespace

void WideVertex::step(unsigned label) {
  if (h_ == 0) return;
  switch (label) {
    case 0: add_twice(x_, y_, 0); mask(x_); break;
    case 1: add_twice(x_, y_, 1); mask(x_); break;
    case 2: add_twice(y_, x_, 0); mask(y_); break;
    case 3: add_twice(y_, x_, 1); mask(y_); break;
    case 4: sub_twice(x_, y_, 0); mask(x_); break;
    case 5: sub_twice(x_, y_, 1); mask(x_); break;
    case 6: sub_twice(y_, x_, 0); mask(y_); break;
    case 7: sub_twice(y_, x_, 1); mask(y_); break;
    default: throw std::invalid_argument("WideVertex::step: label must be < 8");
  }
}

unsigned label_at(const BitString& labels, std::size_t j) {
  return static_cast<unsigned>(labels.read_uint(3 * j, 3));
}

void WideVertex::walk(const BitString& labels) {
  if (labels.size() % 3 != 0) throw std::invalid_argument("WideVertex::walk: label bits must be a multiple of 3");
  for (std::size_t j = 0; j < labels.size() / 3; ++j) step(label_at(labels, j));
}

}  // namespace stewards
