#include "stacklab/perm.hpp"

#include <algorithm>

#include "stacklab/errors.hpp"

namespace stacklab {

Perm perm_identity(std::uint32_t degree) {
  Perm p(degree);
  for (std::uint32_t i = 0; i < degree; ++i)
    p[i] = i;
  return p;
}

Perm perm_then(const Perm &p, const Perm &q) {
  Perm r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    r[i] = q[p[i]];
  return r;
}

Perm perm_inverse(const Perm &p) {
  Perm r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    r[p[i]] = static_cast<std::uint32_t>(i);
  return r;
}

bool is_permutation(const Perm &p) {
  std::vector<bool> seen(p.size(), false);
  for (auto v : p) {
    if (v >= p.size() || seen[v])
      return false;
    seen[v] = true;
  }
  return true;
}

std::vector<std::vector<std::uint32_t>> perm_cycles(const Perm &p) {
  std::vector<std::vector<std::uint32_t>> cycles;
  std::vector<bool> seen(p.size(), false);
  for (std::uint32_t i = 0; i < p.size(); ++i) {
    if (seen[i] || p[i] == i)
      continue;
    std::vector<std::uint32_t> cycle;
    std::uint32_t j = i;
    while (!seen[j]) {
      seen[j] = true;
      cycle.push_back(j + 1);
      j = p[j];
    }
    cycles.push_back(std::move(cycle));
  }
  return cycles;
}

std::string perm_to_cycles(const Perm &p) {
  auto cycles = perm_cycles(p);
  if (cycles.empty())
    return "()";
  std::string out;
  for (const auto &cycle : cycles) {
    out += "(";
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      if (i)
        out += " ";
      out += std::to_string(cycle[i]);
    }
    out += ")";
  }
  return out;
}

Perm perm_from_cycles(std::uint32_t degree,
                      const std::vector<std::vector<std::uint32_t>> &cycles) {
  Perm p = perm_identity(degree);
  for (const auto &cycle : cycles) {
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      std::uint32_t from = cycle[i];
      std::uint32_t to = cycle[(i + 1) % cycle.size()];
      if (from == 0 || to == 0 || from > degree || to > degree)
        throw Error(ErrorKind::SchemaError,
                    "cycle point out of range 1.." + std::to_string(degree));
      if (p[from - 1] != from - 1)
        throw Error(ErrorKind::SchemaError, "cycles are not disjoint");
      p[from - 1] = to - 1;
    }
  }
  return p;
}

} // namespace stacklab
