#ifndef STACKLAB_PERM_HPP
#define STACKLAB_PERM_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace stacklab {

/// A permutation of {0, ..., n-1}, stored as its image table.
using Perm = std::vector<std::uint32_t>;

Perm perm_identity(std::uint32_t degree);

/// first p, then q: (p;q)(x) = q(p(x)).
Perm perm_then(const Perm &p, const Perm &q);

Perm perm_inverse(const Perm &p);

bool is_permutation(const Perm &p);

/// Disjoint-cycle form with 1-based points, fixed points omitted;
/// "()" for the identity.
std::string perm_to_cycles(const Perm &p);

/// Cycles of one permutation as point lists (1-based), e.g. {{1,2},{3,4,5}}.
std::vector<std::vector<std::uint32_t>> perm_cycles(const Perm &p);

/// Builds a permutation of the given degree from 1-based cycles.
Perm perm_from_cycles(std::uint32_t degree,
                      const std::vector<std::vector<std::uint32_t>> &cycles);

} // namespace stacklab

#endif
