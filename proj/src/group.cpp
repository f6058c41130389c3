#include "stacklab/group.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "stacklab/errors.hpp"

namespace stacklab {

namespace {

void check_table_axioms(const std::string &name, std::uint32_t n,
                        const std::vector<ElemId> &t) {
  if (t.size() != static_cast<std::size_t>(n) * n)
    throw Error(ErrorKind::ValidationError,
                "group '" + name + "': table size is not order^2");
  for (ElemId v : t)
    if (v >= n)
      throw Error(ErrorKind::ValidationError,
                  "group '" + name + "': table entry out of range");
  for (ElemId a = 0; a < n; ++a) {
    if (t[0 * n + a] != a || t[a * n + 0] != a)
      throw Error(ErrorKind::ValidationError,
                  "group '" + name + "': 0 is not a two-sided identity at " +
                      std::to_string(a));
  }
  for (ElemId a = 0; a < n; ++a) {
    bool left = false, right = false;
    for (ElemId b = 0; b < n; ++b) {
      if (t[a * n + b] == 0)
        right = true;
      if (t[b * n + a] == 0)
        left = true;
    }
    if (!left || !right)
      throw Error(ErrorKind::ValidationError,
                  "group '" + name + "': element " + std::to_string(a) +
                      " has no two-sided inverse");
  }
  for (ElemId a = 0; a < n; ++a)
    for (ElemId b = 0; b < n; ++b)
      for (ElemId c = 0; c < n; ++c)
        if (t[t[a * n + b] * n + c] != t[a * n + t[b * n + c]])
          throw Error(ErrorKind::ValidationError,
                      "group '" + name + "': associativity fails at (" +
                          std::to_string(a) + ", " + std::to_string(b) + ", " +
                          std::to_string(c) + ")");
}

std::vector<ElemId> invert_table(std::uint32_t n,
                                 const std::vector<ElemId> &t) {
  std::vector<ElemId> inv(n);
  for (ElemId a = 0; a < n; ++a)
    for (ElemId b = 0; b < n; ++b)
      if (t[a * n + b] == 0) {
        inv[a] = b;
        break;
      }
  return inv;
}

/// BFS closure of permutation generators. Identity first, then discovery
/// order with generators applied in input order.
std::vector<Perm> enumerate_perm_group(std::uint32_t degree,
                                       const std::vector<Perm> &gens) {
  for (const auto &g : gens) {
    if (g.size() != degree || !is_permutation(g))
      throw Error(ErrorKind::ValidationError,
                  "generator is not a permutation of the stated degree");
  }
  std::vector<Perm> elems;
  std::map<Perm, ElemId> index;
  Perm id = perm_identity(degree);
  elems.push_back(id);
  index.emplace(id, 0);
  std::deque<ElemId> queue{0};
  while (!queue.empty()) {
    ElemId cur = queue.front();
    queue.pop_front();
    for (const auto &g : gens) {
      Perm next = perm_then(elems[cur], g);
      if (index.emplace(next, static_cast<ElemId>(elems.size())).second) {
        elems.push_back(std::move(next));
        queue.push_back(static_cast<ElemId>(elems.size() - 1));
      }
    }
  }
  return elems;
}

} // namespace

GroupPtr FiniteGroup::from_table(std::string name, std::vector<ElemId> table) {
  std::uint32_t n = static_cast<std::uint32_t>(std::lround(
      std::sqrt(static_cast<double>(table.size()))));
  if (static_cast<std::size_t>(n) * n != table.size() || n == 0)
    throw Error(ErrorKind::ValidationError,
                "group '" + name + "': table size is not a perfect square");
  if (n > kTableCap)
    throw Error(ErrorKind::CapExceeded,
                "group '" + name + "' exceeds the table cap " +
                    std::to_string(kTableCap) +
                    "; supply permutation generators instead");
  check_table_axioms(name, n, table);
  auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
  g->name_ = std::move(name);
  g->order_ = n;
  g->table_ = std::move(table);
  g->inverse_ = invert_table(n, g->table_);
  return g;
}

GroupPtr FiniteGroup::from_perm_gens(std::string name, std::uint32_t degree,
                                     std::vector<Perm> gens) {
  auto elems = enumerate_perm_group(degree, gens);
  auto n = static_cast<std::uint32_t>(elems.size());
  auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
  g->name_ = std::move(name);
  g->order_ = n;
  g->perm_degree_ = degree;
  g->perm_gens_ = std::move(gens);
  for (ElemId i = 0; i < n; ++i)
    g->perm_index_.emplace(elems[i], i);
  g->elem_perms_ = std::move(elems);
  if (n <= kTableCap) {
    g->table_.assign(static_cast<std::size_t>(n) * n, 0);
    for (ElemId a = 0; a < n; ++a)
      for (ElemId b = 0; b < n; ++b) {
        // a*b acts as first b, then a (left action convention).
        Perm prod = perm_then(g->elem_perms_[b], g->elem_perms_[a]);
        g->table_[a * n + b] = g->perm_index_.at(prod);
      }
    g->inverse_ = invert_table(n, g->table_);
  } else {
    g->inverse_.resize(n);
    for (ElemId a = 0; a < n; ++a)
      g->inverse_[a] = g->perm_index_.at(perm_inverse(g->elem_perms_[a]));
  }
  return g;
}

GroupPtr FiniteGroup::from_table_and_perm_gens(std::string name,
                                               std::vector<ElemId> table,
                                               std::uint32_t degree,
                                               std::vector<Perm> gens) {
  auto from_perms = from_perm_gens(name, degree, std::move(gens));
  auto from_tab = from_table(from_perms->name(), std::move(table));
  if (from_tab->order() != from_perms->order())
    throw Error(ErrorKind::ValidationError,
                "group '" + from_tab->name() +
                    "': permutation generators generate a group of order " +
                    std::to_string(from_perms->order()) +
                    ", table has order " + std::to_string(from_tab->order()));
  for (ElemId a = 0; a < from_tab->order(); ++a)
    for (ElemId b = 0; b < from_tab->order(); ++b)
      if (from_tab->mul(a, b) != from_perms->mul(a, b))
        throw Error(ErrorKind::ValidationError,
                    "group '" + from_tab->name() +
                        "': table disagrees with the permutation realization "
                        "at (" +
                        std::to_string(a) + ", " + std::to_string(b) + ")");
  auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup(*from_perms));
  return g;
}

ElemId FiniteGroup::mul(ElemId a, ElemId b) const {
  if (!table_.empty())
    return table_[static_cast<std::size_t>(a) * order_ + b];
  return perm_index_.at(perm_then(elem_perms_[b], elem_perms_[a]));
}

ElemId FiniteGroup::inv(ElemId a) const { return inverse_[a]; }

ElemId FiniteGroup::conj(ElemId g, ElemId a) const {
  return mul(mul(g, a), inv(g));
}

std::uint32_t FiniteGroup::element_order(ElemId a) const {
  std::uint32_t k = 1;
  ElemId cur = a;
  while (cur != 0) {
    cur = mul(cur, a);
    ++k;
  }
  return k;
}

std::vector<std::uint32_t> FiniteGroup::element_order_multiset() const {
  std::vector<std::uint32_t> orders(order_);
  for (ElemId a = 0; a < order_; ++a)
    orders[a] = element_order(a);
  std::sort(orders.begin(), orders.end());
  return orders;
}

bool FiniteGroup::is_abelian() const {
  for (ElemId a = 0; a < order_; ++a)
    for (ElemId b = a + 1; b < order_; ++b)
      if (mul(a, b) != mul(b, a))
        return false;
  return true;
}

std::vector<ElemId>
FiniteGroup::generated_subgroup(const std::vector<ElemId> &gens) const {
  std::vector<bool> in(order_, false);
  in[0] = true;
  std::deque<ElemId> queue{0};
  while (!queue.empty()) {
    ElemId cur = queue.front();
    queue.pop_front();
    for (ElemId g : gens) {
      for (ElemId next : {mul(cur, g), mul(cur, inv(g))}) {
        if (!in[next]) {
          in[next] = true;
          queue.push_back(next);
        }
      }
    }
  }
  std::vector<ElemId> out;
  for (ElemId a = 0; a < order_; ++a)
    if (in[a])
      out.push_back(a);
  return out;
}

std::vector<ElemId> FiniteGroup::small_generating_set() const {
  std::vector<ElemId> gens;
  std::vector<ElemId> have = generated_subgroup(gens);
  while (have.size() < order_) {
    ElemId next = 0;
    std::size_t pos = 0;
    for (ElemId a = 0; a < order_; ++a) {
      if (pos < have.size() && have[pos] == a) {
        ++pos;
        continue;
      }
      next = a;
      break;
    }
    gens.push_back(next);
    have = generated_subgroup(gens);
  }
  return gens;
}

bool GroupHom::is_homomorphism() const {
  if (image.size() != domain->order())
    return false;
  if (image[0] != 0)
    return false;
  for (ElemId v : image)
    if (v >= codomain->order())
      return false;
  for (ElemId a = 0; a < domain->order(); ++a)
    for (ElemId b = 0; b < domain->order(); ++b)
      if (image[domain->mul(a, b)] != codomain->mul(image[a], image[b]))
        return false;
  return true;
}

bool GroupHom::is_injective() const {
  std::vector<bool> seen(codomain->order(), false);
  for (ElemId v : image) {
    if (seen[v])
      return false;
    seen[v] = true;
  }
  return true;
}

GroupHom identity_hom(GroupPtr g) {
  GroupHom h;
  h.domain = g;
  h.codomain = g;
  h.image.resize(g->order());
  for (ElemId a = 0; a < g->order(); ++a)
    h.image[a] = a;
  return h;
}

GroupHom compose_homs(const GroupHom &first, const GroupHom &second) {
  GroupHom h;
  h.domain = first.domain;
  h.codomain = second.codomain;
  h.image.resize(first.image.size());
  for (std::size_t a = 0; a < first.image.size(); ++a)
    h.image[a] = second.image[first.image[a]];
  return h;
}

Subgroup subgroup_from_elements(GroupPtr parent, std::vector<ElemId> elements,
                                std::string name) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()),
                 elements.end());
  if (elements.empty() || elements[0] != 0)
    throw Error(ErrorKind::ValidationError,
                "subgroup must contain the identity");
  std::vector<ElemId> back(parent->order(), UINT32_MAX);
  for (std::size_t i = 0; i < elements.size(); ++i)
    back[elements[i]] = static_cast<ElemId>(i);
  std::uint32_t n = static_cast<std::uint32_t>(elements.size());
  std::vector<ElemId> table(static_cast<std::size_t>(n) * n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) {
      ElemId prod = parent->mul(elements[i], elements[j]);
      if (back[prod] == UINT32_MAX)
        throw Error(ErrorKind::ValidationError,
                    "subset is not closed under multiplication");
      table[i * n + j] = back[prod];
    }
  Subgroup out;
  out.group = FiniteGroup::from_table(std::move(name), std::move(table));
  out.inclusion.domain = out.group;
  out.inclusion.codomain = parent;
  out.inclusion.image = std::move(elements);
  return out;
}

ElemId DirectProduct::pair(ElemId h, ElemId k) const {
  return h * proj_right.codomain->order() + k;
}

std::pair<ElemId, ElemId> DirectProduct::unpair(ElemId e) const {
  std::uint32_t ko = proj_right.codomain->order();
  return {e / ko, e % ko};
}

DirectProduct direct_product(GroupPtr h, GroupPtr k) {
  std::uint32_t nh = h->order(), nk = k->order();
  std::uint32_t n = nh * nk;
  if (n > FiniteGroup::kTableCap)
    throw Error(ErrorKind::CapExceeded,
                "direct product of order " + std::to_string(n) +
                    " exceeds the table cap");
  std::vector<ElemId> table(static_cast<std::size_t>(n) * n);
  for (ElemId a = 0; a < n; ++a)
    for (ElemId b = 0; b < n; ++b) {
      ElemId ah = a / nk, ak = a % nk;
      ElemId bh = b / nk, bk = b % nk;
      table[static_cast<std::size_t>(a) * n + b] =
          h->mul(ah, bh) * nk + k->mul(ak, bk);
    }
  DirectProduct out;
  out.group = FiniteGroup::from_table(h->name() + "x" + k->name(),
                                      std::move(table));
  out.proj_left.domain = out.group;
  out.proj_left.codomain = h;
  out.proj_right.domain = out.group;
  out.proj_right.codomain = k;
  out.proj_left.image.resize(n);
  out.proj_right.image.resize(n);
  for (ElemId a = 0; a < n; ++a) {
    out.proj_left.image[a] = a / nk;
    out.proj_right.image[a] = a % nk;
  }
  return out;
}

std::vector<std::vector<ElemId>> conjugacy_classes(const FiniteGroup &g) {
  std::vector<std::vector<ElemId>> classes;
  std::vector<bool> seen(g.order(), false);
  for (ElemId a = 0; a < g.order(); ++a) {
    if (seen[a])
      continue;
    std::vector<ElemId> cls;
    for (ElemId x = 0; x < g.order(); ++x) {
      ElemId c = g.conj(x, a);
      if (!seen[c]) {
        seen[c] = true;
        cls.push_back(c);
      }
    }
    std::sort(cls.begin(), cls.end());
    classes.push_back(std::move(cls));
  }
  return classes;
}

std::vector<ElemId> centralizer_elements(const FiniteGroup &g, ElemId a) {
  std::vector<ElemId> out;
  for (ElemId x = 0; x < g.order(); ++x)
    if (g.mul(x, a) == g.mul(a, x))
      out.push_back(x);
  return out;
}

GroupPtr make_trivial_group(std::string name) {
  return FiniteGroup::from_table(std::move(name), {0});
}

GroupPtr make_cyclic_group(std::uint32_t n, std::string name) {
  if (name.empty())
    name = "Z" + std::to_string(n);
  std::vector<ElemId> table(static_cast<std::size_t>(n) * n);
  for (ElemId a = 0; a < n; ++a)
    for (ElemId b = 0; b < n; ++b)
      table[a * n + b] = (a + b) % n;
  return FiniteGroup::from_table(std::move(name), std::move(table));
}

GroupPtr make_symmetric_group(std::uint32_t n, std::string name) {
  if (name.empty())
    name = "S" + std::to_string(n);
  std::vector<Perm> gens;
  if (n >= 2)
    gens.push_back(perm_from_cycles(n, {{1, 2}}));
  if (n >= 3) {
    std::vector<std::uint32_t> cycle;
    for (std::uint32_t i = 1; i <= n; ++i)
      cycle.push_back(i);
    gens.push_back(perm_from_cycles(n, {cycle}));
  }
  return FiniteGroup::from_perm_gens(std::move(name), n, std::move(gens));
}

GroupPtr make_dihedral_group(std::uint32_t n, std::string name) {
  if (name.empty())
    name = "D" + std::to_string(n);
  std::vector<std::uint32_t> rot;
  for (std::uint32_t i = 1; i <= n; ++i)
    rot.push_back(i);
  std::vector<std::vector<std::uint32_t>> refl;
  for (std::uint32_t i = 1; i <= n / 2; ++i)
    refl.push_back({1 + i, n + 1 - i});
  return FiniteGroup::from_perm_gens(
      std::move(name), n,
      {perm_from_cycles(n, {rot}), perm_from_cycles(n, refl)});
}

GroupPtr make_quaternion_group() {
  // Q8 as a subgroup of S8 acting on {1,i,-1,-i,j,k,-j,-k}.
  return FiniteGroup::from_perm_gens(
      "Q8", 8,
      {perm_from_cycles(8, {{1, 2, 3, 4}, {5, 6, 7, 8}}),
       perm_from_cycles(8, {{1, 5, 3, 7}, {2, 8, 4, 6}})});
}

GroupPtr make_alternating_group(std::uint32_t n, std::string name) {
  if (name.empty())
    name = "A" + std::to_string(n);
  std::vector<Perm> gens;
  if (n >= 3)
    gens.push_back(perm_from_cycles(n, {{1, 2, 3}}));
  if (n >= 4) {
    std::vector<std::uint32_t> cycle;
    if (n % 2 == 1) {
      for (std::uint32_t i = 1; i <= n; ++i)
        cycle.push_back(i);
    } else {
      for (std::uint32_t i = 2; i <= n; ++i)
        cycle.push_back(i);
    }
    gens.push_back(perm_from_cycles(n, {cycle}));
  }
  return FiniteGroup::from_perm_gens(std::move(name), n, std::move(gens));
}

GroupPtr make_klein_four_group() {
  return FiniteGroup::from_perm_gens(
      "V4", 4,
      {perm_from_cycles(4, {{1, 2}, {3, 4}}),
       perm_from_cycles(4, {{1, 3}, {2, 4}})});
}

} // namespace stacklab
