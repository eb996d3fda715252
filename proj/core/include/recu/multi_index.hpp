#pragma once

#include <cstddef>
#include <vector>

namespace recu {

/// Exponents or grid positions over (t, x_1, ..., x_d); entry 0 is time.
using MultiIndex = std::vector<int>;

int total_degree(const MultiIndex& a);

/// All of {0, ..., n}^dims in lexicographic order (last entry fastest).
std::vector<MultiIndex> box_indices(int dims, int n);

/// Position of `a` inside box_indices(a.size(), n).
std::size_t box_position(const MultiIndex& a, int n);

/// All multi-indices with total degree <= max_degree, grouped by degree and
/// lexicographically descending inside a degree: 1, t, x1, ..., t^2, t x1, ...
std::vector<MultiIndex> graded_indices(int dims, int max_degree);

/// All multi-indices with total degree exactly `degree`.
std::vector<MultiIndex> indices_of_degree(int dims, int degree);

double factorial(int n);
double binomial(int n, int k);
double multi_factorial(const MultiIndex& a);
double multi_binomial(const MultiIndex& a, const MultiIndex& b);

/// True when b <= a componentwise.
bool dominates(const MultiIndex& a, const MultiIndex& b);

double integer_power(double x, int n);

}  // namespace recu
