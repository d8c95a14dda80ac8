// Test-only helpers shared by the unit suite and the acceptance binary:
// a scripted random stream, an independent dense truss solver and a
// brute-force elite archive.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "memopt/core/candidate.hpp"
#include "memopt/core/random.hpp"
#include "memopt/fem/truss.hpp"

namespace oracle {

/// Replays recorded uniforms. Index draws come from `indices` when given,
/// else from floor(u * n) of the next uniform.
class ScriptedStream final : public memopt::RandomStream {
 public:
  explicit ScriptedStream(std::vector<double> uniforms, std::vector<std::size_t> indices = {})
      : uniforms_(std::move(uniforms)), indices_(std::move(indices)) {}

  double uniform() override {
    if (next_u_ >= uniforms_.size()) throw std::runtime_error("scripted stream exhausted");
    return uniforms_[next_u_++];
  }

  std::size_t index(std::size_t n) override {
    if (next_i_ < indices_.size()) {
      const std::size_t v = indices_[next_i_++];
      if (v >= n) throw std::runtime_error("scripted index out of range");
      return v;
    }
    return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
  }

  using memopt::RandomStream::uniform;

  std::size_t uniforms_used() const { return next_u_; }
  std::size_t indices_used() const { return next_i_; }

 private:
  std::vector<double> uniforms_;
  std::vector<std::size_t> indices_;
  std::size_t next_u_ = 0;
  std::size_t next_i_ = 0;
};

/// Every uniform equals `value`; index(n) = floor(value * n).
class ConstantStream final : public memopt::RandomStream {
 public:
  explicit ConstantStream(double value) : value_(value) {}
  double uniform() override { return value_; }
  std::size_t index(std::size_t n) override {
    return std::min(n - 1, static_cast<std::size_t>(value_ * static_cast<double>(n)));
  }
  using memopt::RandomStream::uniform;

 private:
  double value_;
};

/// Textbook displacement method on plain arrays: explicit c^2/cs/s^2 element
/// entries, supports imposed by zeroing rows and columns with a unit
/// diagonal, Gaussian elimination with partial pivoting. Returns the full
/// DOF vector.
inline std::vector<double> dense_truss_displacements(const memopt::fem::TrussModel& m) {
  const std::size_t n = 2 * m.nodes.size();
  std::vector<std::vector<double>> k(n, std::vector<double>(n, 0.0));
  for (const auto& e : m.elements) {
    const double dx = m.nodes[e.b].x - m.nodes[e.a].x;
    const double dy = m.nodes[e.b].y - m.nodes[e.a].y;
    const double len = std::sqrt(dx * dx + dy * dy);
    const double c = dx / len;
    const double s = dy / len;
    const double ea_l = m.material.young_modulus * e.area / len;
    const double block[2][2] = {{c * c, c * s}, {c * s, s * s}};
    const std::size_t base[2] = {2 * e.a, 2 * e.b};
    for (int p = 0; p < 2; ++p) {
      for (int q = 0; q < 2; ++q) {
        const double sign = p == q ? 1.0 : -1.0;
        for (int r = 0; r < 2; ++r) {
          for (int t = 0; t < 2; ++t) k[base[p] + r][base[q] + t] += sign * ea_l * block[r][t];
        }
      }
    }
  }
  std::vector<double> f(n, 0.0);
  for (std::size_t i = 0; i < m.nodes.size(); ++i) {
    f[2 * i] = m.loads[i].fx;
    f[2 * i + 1] = m.loads[i].fy;
  }
  for (std::size_t i = 0; i < m.nodes.size(); ++i) {
    const bool fixed[2] = {m.supports[i].fix_x, m.supports[i].fix_y};
    for (int a = 0; a < 2; ++a) {
      if (!fixed[a]) continue;
      const std::size_t d = 2 * i + a;
      for (std::size_t j = 0; j < n; ++j) k[d][j] = k[j][d] = 0.0;
      k[d][d] = 1.0;
      f[d] = 0.0;
    }
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(k[r][col]) > std::abs(k[piv][col])) piv = r;
    }
    std::swap(k[col], k[piv]);
    std::swap(f[col], f[piv]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = k[r][col] / k[col][col];
      if (factor == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) k[r][c] -= factor * k[col][c];
      f[r] -= factor * f[col];
    }
  }
  std::vector<double> u(n, 0.0);
  for (std::size_t r = n; r-- > 0;) {
    double acc = f[r];
    for (std::size_t c = r + 1; c < n; ++c) acc -= k[r][c] * u[c];
    u[r] = acc / k[r][r];
  }
  return u;
}

/// Complete-graph truss on 3..6 random, well-separated nodes: node 0 pinned,
/// node 1 on a vertical roller, random areas and loads.
inline memopt::fem::TrussModel random_truss(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> coord(0.0, 10.0);
  std::uniform_real_distribution<double> area(1e-4, 1e-3);
  std::uniform_real_distribution<double> load(-5e4, 5e4);
  const std::size_t n = 3 + gen() % 4;
  memopt::fem::TrussModel m;
  m.material = {2.1e11, 7800.0};
  while (m.nodes.size() < n) {
    const memopt::fem::Node p{coord(gen), coord(gen)};
    bool ok = true;
    for (const auto& q : m.nodes) ok = ok && std::hypot(p.x - q.x, p.y - q.y) > 1.0;
    // Keep the first three nodes clearly non-collinear.
    if (ok && m.nodes.size() == 2) {
      const auto& a = m.nodes[0];
      const auto& b = m.nodes[1];
      const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
      ok = std::abs(cross) > 5.0;
    }
    if (ok) m.nodes.push_back(p);
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) m.elements.push_back({a, b, area(gen), 0});
  }
  m.supports.assign(n, {});
  m.supports[0] = {true, true};
  m.supports[1] = {false, true};
  m.loads.resize(n);
  for (auto& l : m.loads) l = {load(gen), load(gen)};
  m.lumped_masses.assign(n, 0.0);
  return m;
}

/// Top-M of a stream by brute force: first arrival of each position, stable
/// sort by fitness, first M.
inline std::vector<memopt::Candidate> brute_force_top(const std::vector<memopt::Candidate>& stream,
                                                      std::size_t m) {
  std::vector<memopt::Candidate> unique;
  for (const auto& c : stream) {
    const bool seen = std::any_of(unique.begin(), unique.end(),
                                  [&](const memopt::Candidate& u) { return u.position == c.position; });
    if (!seen) unique.push_back(c);
  }
  std::stable_sort(unique.begin(), unique.end(),
                   [](const memopt::Candidate& a, const memopt::Candidate& b) { return a.fitness < b.fitness; });
  if (unique.size() > m) unique.resize(m);
  return unique;
}

/// Random evaluation stream with deliberate fitness ties and repeated
/// positions (a repeated position always repeats its fitness).
inline std::vector<memopt::Candidate> random_stream(std::mt19937_64& gen, std::size_t length) {
  std::vector<memopt::Candidate> out;
  out.reserve(length);
  for (std::size_t k = 0; k < length; ++k) {
    if (!out.empty() && gen() % 10 == 0) {
      out.push_back(out[gen() % out.size()]);
      continue;
    }
    memopt::Candidate c;
    c.position = {static_cast<double>(gen() % 1000), static_cast<double>(k)};
    c.fitness = c.objective = static_cast<double>(gen() % 50);  // coarse values force ties
    out.push_back(c);
  }
  return out;
}

}  // namespace oracle
