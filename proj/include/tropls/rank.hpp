#pragma once
// Reduced divisors (Dhar burning), linear equivalence and Baker-Norine rank.

#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "tropls/pl_function.hpp"

namespace tropls {

// The model G_N: every edge cut into pieces of length 1/N. Chip firing on G_N
// keeps divisors supported on its vertices, so reduction is purely combinatorial.
class ChipLattice {
 public:
  ChipLattice(GraphPtr g, const Integer& n) : g_(std::move(g)), n_(n) {
    if (!n_.fits_slong_p() || n_ <= 0) throw input_error("lattice too fine");
    long N = n_.get_si();
    size_ = g_->num_vertices();
    for (int e = 0; e < g_->num_edges(); ++e) {
      Rational pieces = g_->edge(e).length * N;
      long k = to_long(pieces);
      base_.push_back(size_);
      count_.push_back(k);
      size_ += k - 1;
      if (size_ > 5'000'000) throw input_error("lattice too fine");
    }
    adj_.assign(size_, {});
    for (int e = 0; e < g_->num_edges(); ++e) {
      const Edge& ed = g_->edge(e);
      int prev = ed.tail;
      for (long k = 1; k <= count_[e]; ++k) {
        int next = k == count_[e] ? ed.head : static_cast<int>(base_[e] + k - 1);
        if (prev != next) {
          adj_[prev].push_back(next);
          adj_[next].push_back(prev);
        }
        prev = next;
      }
    }
  }

  // Smallest N placing every given point and every edge length on the lattice.
  static Integer fineness(const MetricGraph& g, const std::vector<Point>& pts) {
    Integer n = 1;
    for (const Edge& e : g.edges()) n = lcm(n, e.length.get_den());
    for (const Point& p : pts)
      if (!p.is_vertex()) n = lcm(n, Rational(p.t).get_den());
    return n;
  }

  int size() const { return size_; }
  const Integer& N() const { return n_; }
  const std::vector<std::vector<int>>& adjacency() const { return adj_; }
  const MetricGraph& graph() const { return *g_; }

  int index(const Point& p) const {
    if (p.is_vertex()) return p.vertex;
    Rational k = p.t * Rational(n_);
    if (!is_integer(k)) throw std::logic_error("point not on lattice");
    return static_cast<int>(base_[p.edge] + to_long(k) - 1);
  }

  Point point(int i) const {
    if (i < g_->num_vertices()) return Point::at_vertex(i);
    int e = static_cast<int>(std::upper_bound(base_.begin(), base_.end(), i) - base_.begin()) - 1;
    while (count_[e] <= 1 || i >= base_[e] + count_[e] - 1) --e;  // skip edges with no interior lattice points
    return Point{-1, e, Rational(i - base_[e] + 1) / Rational(n_)};
  }

  std::vector<long long> chips(const Divisor& d) const {
    std::vector<long long> c(size_, 0);
    for (const auto& [p, n] : d.coeffs) c[index(p)] += n;
    return c;
  }

  Divisor divisor(const std::vector<long long>& c) const {
    Divisor d;
    for (int i = 0; i < size_; ++i)
      if (c[i] != 0) d.add(point(i), static_cast<long>(c[i]));
    return d;
  }

  // Reduces chips in place to the q-reduced representative; sigma accumulates firings.
  void reduce(std::vector<long long>& c, int q, std::vector<long long>& sigma) const {
    sigma.assign(size_, 0);
    std::vector<int> depth(size_, -1);
    std::vector<int> order{q};
    depth[q] = 0;
    for (std::size_t h = 0; h < order.size(); ++h)
      for (int w : adj_[order[h]])
        if (depth[w] < 0) {
          depth[w] = depth[order[h]] + 1;
          order.push_back(w);
        }
    int maxd = depth[order.back()];
    // Step 1: push debt toward q level by level.
    for (int L = maxd; L >= 1; --L) {
      long long m = 0;
      for (int u : order) {
        if (depth[u] != L || c[u] >= 0) continue;
        long long inward = 0;
        for (int w : adj_[u]) inward += depth[w] < L;
        m = std::max(m, (-c[u] + inward - 1) / inward);
      }
      if (m == 0) continue;
      for (int v = 0; v < size_; ++v) {
        if (depth[v] < 0 || depth[v] >= L) continue;
        sigma[v] += m;
        for (int w : adj_[v])
          if (depth[w] >= L) {
            c[v] -= m;
            c[w] += m;
          }
      }
    }
    // Step 2: Dhar burning until every vertex burns.
    std::vector<int> burnt_edges(size_);
    std::vector<char> burnt(size_);
    while (true) {
      std::fill(burnt_edges.begin(), burnt_edges.end(), 0);
      std::fill(burnt.begin(), burnt.end(), 0);
      std::vector<int> queue{q};
      burnt[q] = 1;
      for (std::size_t h = 0; h < queue.size(); ++h)
        for (int w : adj_[queue[h]]) {
          if (burnt[w]) continue;
          if (++burnt_edges[w] > c[w]) {
            burnt[w] = 1;
            queue.push_back(w);
          }
        }
      if (static_cast<int>(queue.size()) == size_) break;
      long long k = -1;
      for (int v = 0; v < size_; ++v)
        if (!burnt[v] && burnt_edges[v] > 0) {
          long long kk = c[v] / burnt_edges[v];
          if (k < 0 || kk < k) k = kk;
        }
      if (k < 1) throw std::logic_error("burning stalled");
      for (int v = 0; v < size_; ++v) {
        if (burnt[v]) continue;
        sigma[v] += k;
        for (int w : adj_[v])
          if (burnt[w]) {
            c[v] -= k;
            c[w] += k;
          }
      }
    }
  }

  // The function -sigma/N, linear between lattice points; div of it moves the input to the output.
  PLFunction potential(const std::vector<long long>& sigma) const {
    std::vector<std::vector<Breakpoint>> p;
    Rational inv = Rational(1) / Rational(n_);
    for (int e = 0; e < g_->num_edges(); ++e) {
      const Edge& ed = g_->edge(e);
      std::vector<Breakpoint> bp;
      for (long k = 0; k <= count_[e]; ++k) {
        int i = k == 0 ? ed.tail : k == count_[e] ? ed.head : static_cast<int>(base_[e] + k - 1);
        bp.push_back({inv * k, Rational(static_cast<long>(-sigma[i])) * inv});
      }
      p.push_back(bp);
    }
    return PLFunction(g_, p);
  }

 private:
  GraphPtr g_;
  Integer n_;
  int size_ = 0;
  std::vector<long> base_;
  std::vector<long> count_;
  std::vector<std::vector<int>> adj_;
};

struct Reduction {
  Divisor reduced;
  PLFunction witness;  // reduced = input + div(witness)
};

inline Reduction dhar_reduce(const GraphPtr& g, const Divisor& d, const Point& q) {
  std::vector<Point> pts = d.support();
  pts.push_back(q);
  ChipLattice lat(g, ChipLattice::fineness(*g, pts));
  auto c = lat.chips(d);
  std::vector<long long> sigma;
  lat.reduce(c, lat.index(q), sigma);
  return {lat.divisor(c), lat.potential(sigma)};
}

inline bool is_equivalent_effective(const GraphPtr& g, const Divisor& d) {
  Point q = Point::at_vertex(0);
  return dhar_reduce(g, d, q).reduced.at(q) >= 0;
}

inline bool linearly_equivalent(const GraphPtr& g, const Divisor& a, const Divisor& b) {
  return dhar_reduce(g, a - b, Point::at_vertex(0)).reduced.is_zero();
}

// phi with D + div(phi) >= E when D - E is equivalent to an effective divisor.
inline std::optional<PLFunction> extremal_function(const GraphPtr& g, const Divisor& d, const Divisor& e,
                                                   const Point& q = Point::at_vertex(0)) {
  Reduction r = dhar_reduce(g, d - e, q);
  if (!r.reduced.effective()) return std::nullopt;
  return r.witness;
}

// Rank by recursion over the vertices of a loopless model refined at supp D.
class RankSolver {
 public:
  RankSolver(GraphPtr g, const Divisor& d) : g_(std::move(g)) {
    for (int v = 0; v < g_->num_vertices(); ++v) R_.push_back(Point::at_vertex(v));
    for (int e = 0; e < g_->num_edges(); ++e)
      if (g_->edge(e).is_loop()) R_.push_back(Point{-1, e, g_->edge(e).length / 2});
    for (const Point& p : d.support())
      if (!p.is_vertex()) R_.push_back(p);
    lat_.emplace(g_, ChipLattice::fineness(*g_, R_));
    for (const Point& p : R_) Ridx_.push_back(lat_->index(p));
  }

  int rank(const Divisor& d) { return rank_chips(lat_->chips(d)); }

  const std::vector<Point>& rank_determining_set() const { return R_; }

 private:
  int rank_chips(std::vector<long long> c) {
    std::vector<long long> sigma;
    lat_->reduce(c, 0, sigma);
    if (c[0] < 0) return -1;
    auto it = memo_.find(c);
    if (it != memo_.end()) return it->second;
    int best = -1;
    for (int i : Ridx_) {
      auto c2 = c;
      c2[i] -= 1;
      int r = rank_chips(std::move(c2));
      if (best < 0 || r < best) best = r;
      if (best == -1) break;
    }
    int res = best + 1;
    memo_.emplace(std::move(c), res);
    return res;
  }

  GraphPtr g_;
  std::vector<Point> R_;
  std::vector<int> Ridx_;
  std::optional<ChipLattice> lat_;
  std::map<std::vector<long long>, int> memo_;
};

inline int bn_rank(const GraphPtr& g, const Divisor& d) { return RankSolver(g, d).rank(d); }

inline long riemann_roch_residual(const GraphPtr& g, const Divisor& d) {
  Divisor k = canonical_divisor(*g);
  Divisor kd = k - d;
  long lhs = bn_rank(g, d) - RankSolver(g, kd).rank(kd);
  return lhs - (d.degree() - g->genus() + 1);
}

}  // namespace tropls
