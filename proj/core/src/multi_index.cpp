#include "recu/multi_index.hpp"

#include <algorithm>
#include <numeric>

namespace recu {

int total_degree(const MultiIndex& a) { return std::accumulate(a.begin(), a.end(), 0); }

std::vector<MultiIndex> box_indices(int dims, int n) {
  std::vector<MultiIndex> out;
  MultiIndex cur(static_cast<std::size_t>(dims), 0);
  while (true) {
    out.push_back(cur);
    int pos = dims - 1;
    while (pos >= 0 && cur[static_cast<std::size_t>(pos)] == n) {
      cur[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++cur[static_cast<std::size_t>(pos)];
  }
  return out;
}

std::size_t box_position(const MultiIndex& a, int n) {
  std::size_t pos = 0;
  for (int v : a) pos = pos * static_cast<std::size_t>(n + 1) + static_cast<std::size_t>(v);
  return pos;
}

std::vector<MultiIndex> indices_of_degree(int dims, int degree) {
  std::vector<MultiIndex> out;
  if (dims == 0) {
    if (degree == 0) out.emplace_back();
    return out;
  }
  for (int first = degree; first >= 0; --first) {
    for (auto& rest : indices_of_degree(dims - 1, degree - first)) {
      MultiIndex a;
      a.reserve(static_cast<std::size_t>(dims));
      a.push_back(first);
      a.insert(a.end(), rest.begin(), rest.end());
      out.push_back(std::move(a));
    }
  }
  return out;
}

std::vector<MultiIndex> graded_indices(int dims, int max_degree) {
  std::vector<MultiIndex> out;
  for (int deg = 0; deg <= max_degree; ++deg) {
    auto level = indices_of_degree(dims, deg);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return factorial(n) / (factorial(k) * factorial(n - k));
}

double multi_factorial(const MultiIndex& a) {
  double f = 1.0;
  for (int v : a) f *= factorial(v);
  return f;
}

double multi_binomial(const MultiIndex& a, const MultiIndex& b) {
  double c = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) c *= binomial(a[i], b[i]);
  return c;
}

bool dominates(const MultiIndex& a, const MultiIndex& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (b[i] > a[i]) return false;
  }
  return true;
}

double integer_power(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

}  // namespace recu
