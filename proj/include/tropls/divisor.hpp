#pragma once
// Divisors: finite integer combinations of canonical points.

#include <map>
#include <string>
#include <vector>

#include "tropls/graph.hpp"

namespace tropls {

struct Divisor {
  std::map<Point, long> coeffs;  // zero coefficients are never stored

  Divisor() = default;
  Divisor(std::initializer_list<std::pair<const Point, long>> init) {
    for (const auto& [p, n] : init) add(p, n);
  }

  void add(const Point& p, long n) {
    if (n == 0) return;
    long& c = coeffs[p];
    c += n;
    if (c == 0) coeffs.erase(p);
  }
  long at(const Point& p) const {
    auto it = coeffs.find(p);
    return it == coeffs.end() ? 0 : it->second;
  }
  long degree() const {
    long d = 0;
    for (const auto& [p, n] : coeffs) d += n;
    return d;
  }
  bool effective() const {
    for (const auto& [p, n] : coeffs)
      if (n < 0) return false;
    return true;
  }
  bool is_zero() const { return coeffs.empty(); }
  std::vector<Point> support() const {
    std::vector<Point> s;
    for (const auto& [p, n] : coeffs) s.push_back(p);
    return s;
  }

  Divisor& operator+=(const Divisor& o) {
    for (const auto& [p, n] : o.coeffs) add(p, n);
    return *this;
  }
  Divisor& operator-=(const Divisor& o) {
    for (const auto& [p, n] : o.coeffs) add(p, -n);
    return *this;
  }
  friend Divisor operator+(Divisor a, const Divisor& b) { return a += b; }
  friend Divisor operator-(Divisor a, const Divisor& b) { return a -= b; }
  friend Divisor operator*(long k, const Divisor& d) {
    Divisor r;
    for (const auto& [p, n] : d.coeffs) r.add(p, k * n);
    return r;
  }
  friend bool operator==(const Divisor& a, const Divisor& b) { return a.coeffs == b.coeffs; }
  friend bool operator!=(const Divisor& a, const Divisor& b) { return !(a == b); }

  // Coefficientwise partial order.
  friend bool operator>=(const Divisor& a, const Divisor& b) { return (a - b).effective(); }
};

inline Divisor point_divisor(const Point& p, long n = 1) {
  Divisor d;
  d.add(p, n);
  return d;
}

inline std::string describe(const MetricGraph& g, const Divisor& d) {
  if (d.is_zero()) return "0";
  std::string s;
  for (const auto& [p, n] : d.coeffs) {
    if (!s.empty()) s += (n < 0 ? " - " : " + ");
    else if (n < 0) s += "-";
    long a = n < 0 ? -n : n;
    if (a != 1) s += std::to_string(a) + "*";
    s += g.describe(p);
  }
  return s;
}

inline Divisor canonical_divisor(const MetricGraph& g) {
  if (!g.rays().empty()) throw input_error("canonical divisor needs a graph without rays");
  Divisor k;
  for (int v = 0; v < g.num_vertices(); ++v) k.add(Point::at_vertex(v), g.valence(v) - 2);
  return k;
}

}  // namespace tropls
