#include "systolab/rootsys.hpp"

#include <algorithm>
#include <bitset>
#include <cctype>
#include <cmath>
#include <functional>

#include "systolab/error.hpp"

namespace systolab::rootsys {

void validate(const CartanType& t) {
  const std::string why = "invalid Cartan type " + t.name();
  switch (t.family) {
    case 'A':
    case 'B':
    case 'C':
      if (t.rank < 1) throw InvalidType(why);
      break;
    case 'D':
      if (t.rank < 2) throw InvalidType(why);
      break;
    case 'E':
      if (t.rank < 6 || t.rank > 8) throw InvalidType(why);
      break;
    case 'F':
      if (t.rank != 4) throw InvalidType(why);
      break;
    case 'G':
      if (t.rank != 2) throw InvalidType(why);
      break;
    default:
      throw InvalidType(why);
  }
}

CartanType parse_cartan_type(const std::string& text) {
  if (text.size() < 2) throw InvalidType("cannot parse Cartan type '" + text + "'");
  CartanType t;
  t.family = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
  try {
    size_t used = 0;
    t.rank = std::stoi(text.substr(1), &used);
    if (used != text.size() - 1) throw InvalidType("cannot parse Cartan type '" + text + "'");
  } catch (const std::logic_error&) {
    throw InvalidType("cannot parse Cartan type '" + text + "'");
  }
  validate(t);
  return t;
}

std::string Root::to_string() const {
  std::string s = "(";
  for (size_t i = 0; i < doubled.size(); ++i) {
    if (i) s += ",";
    int d = doubled[i];
    s += d % 2 == 0 ? std::to_string(d / 2) : std::to_string(d) + "/2";
  }
  return s + ")";
}

Root operator+(const Root& a, const Root& b) {
  Root r = a;
  for (size_t i = 0; i < r.doubled.size(); ++i) r.doubled[i] += b.doubled[i];
  return r;
}

Root operator-(const Root& a, const Root& b) {
  Root r = a;
  for (size_t i = 0; i < r.doubled.size(); ++i) r.doubled[i] -= b.doubled[i];
  return r;
}

Root operator-(const Root& a) {
  Root r = a;
  for (auto& x : r.doubled) x = -x;
  return r;
}

int inner_doubled(const Root& a, const Root& b) {
  int s = 0;
  for (size_t i = 0; i < a.doubled.size(); ++i) s += a.doubled[i] * b.doubled[i];
  return s;
}

bool is_zero(const Root& a) {
  return std::all_of(a.doubled.begin(), a.doubled.end(), [](int x) { return x == 0; });
}

bool RootSystem::contains(const Root& r) const {
  return r.doubled.size() == static_cast<size_t>(dimension) && std::binary_search(roots.begin(), roots.end(), r);
}

namespace {

bool lex_positive(const Root& r) {
  for (int x : r.doubled)
    if (x != 0) return x > 0;
  return false;
}

// +-a e_i +- b e_j for all i < j (doubled coordinates).
void add_pairs(std::vector<Root>& out, int dim, int n, int a, int b) {
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int si : {1, -1})
        for (int sj : {1, -1}) {
          Root r{std::vector<int>(static_cast<size_t>(dim), 0)};
          r.doubled[static_cast<size_t>(i)] = si * a;
          r.doubled[static_cast<size_t>(j)] = sj * b;
          out.push_back(std::move(r));
        }
}

void add_axes(std::vector<Root>& out, int dim, int n, int len) {
  for (int i = 0; i < n; ++i)
    for (int s : {1, -1}) {
      Root r{std::vector<int>(static_cast<size_t>(dim), 0)};
      r.doubled[static_cast<size_t>(i)] = s * len;
      out.push_back(std::move(r));
    }
}

// All (+-1, ..., +-1) in doubled coordinates, i.e. half-vectors.
void add_half_vectors(std::vector<Root>& out, int dim, bool even_minus_only) {
  for (int mask = 0; mask < (1 << dim); ++mask) {
    if (even_minus_only && __builtin_popcount(static_cast<unsigned>(mask)) % 2 != 0) continue;
    Root r{std::vector<int>(static_cast<size_t>(dim), 1)};
    for (int i = 0; i < dim; ++i)
      if (mask & (1 << i)) r.doubled[static_cast<size_t>(i)] = -1;
    out.push_back(std::move(r));
  }
}

std::vector<Root> e8_roots() {
  std::vector<Root> out;
  add_pairs(out, 8, 8, 2, 2);
  add_half_vectors(out, 8, true);
  return out;
}

}  // namespace

RootSystem generate_root_system(const CartanType& type) {
  validate(type);
  const int n = type.rank;
  RootSystem sys;
  sys.type = type;
  std::vector<Root>& roots = sys.roots;
  switch (type.family) {
    case 'A':
      sys.dimension = n + 1;
      for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
          if (i == j) continue;
          Root r{std::vector<int>(static_cast<size_t>(n + 1), 0)};
          r.doubled[static_cast<size_t>(i)] = 2;
          r.doubled[static_cast<size_t>(j)] = -2;
          roots.push_back(std::move(r));
        }
      break;
    case 'B':
      sys.dimension = n;
      add_axes(roots, n, n, 2);
      add_pairs(roots, n, n, 2, 2);
      break;
    case 'C':
      sys.dimension = n;
      add_axes(roots, n, n, 4);
      add_pairs(roots, n, n, 2, 2);
      break;
    case 'D':
      sys.dimension = n;
      add_pairs(roots, n, n, 2, 2);
      break;
    case 'G':
      sys.dimension = 3;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          if (i == j) continue;
          Root shortr{{0, 0, 0}};
          shortr.doubled[static_cast<size_t>(i)] = 2;
          shortr.doubled[static_cast<size_t>(j)] = -2;
          roots.push_back(shortr);
        }
      for (int i = 0; i < 3; ++i)
        for (int s : {1, -1}) {
          Root longr{{-2 * s, -2 * s, -2 * s}};
          longr.doubled[static_cast<size_t>(i)] = 4 * s;
          roots.push_back(longr);
        }
      break;
    case 'F':
      sys.dimension = 4;
      add_axes(roots, 4, 4, 2);
      add_pairs(roots, 4, 4, 2, 2);
      add_half_vectors(roots, 4, false);
      break;
    case 'E': {
      sys.dimension = 8;
      for (auto& r : e8_roots()) {
        const auto& d = r.doubled;
        if (n == 7 && d[6] != -d[7]) continue;
        if (n == 6 && (d[5] != d[6] || d[6] != -d[7])) continue;
        roots.push_back(r);
      }
      break;
    }
    default:
      throw InvalidType("unknown family");
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());

  // Heights via <alpha, rho_check> with rho_check = sum over positive beta of beta / |beta|^2.
  std::vector<Root> pos;
  for (const auto& r : roots)
    if (lex_positive(r)) pos.push_back(r);
  std::vector<std::pair<int, Root>> keyed;
  for (const auto& a : pos) {
    double h = 0;
    for (const auto& b : pos) h += static_cast<double>(inner_doubled(a, b)) / inner_doubled(b, b);
    keyed.emplace_back(static_cast<int>(std::lround(h)), a);
  }
  std::sort(keyed.begin(), keyed.end());
  for (auto& [h, r] : keyed) {
    sys.heights.push_back(h);
    sys.positives.push_back(std::move(r));
  }
  return sys;
}

bool is_strongly_orthogonal(const Root& a, const Root& b, const RootSystem& sys) {
  if (!sys.contains(a)) throw NotMember(a.to_string() + " is not a root of " + sys.type.name());
  if (!sys.contains(b)) throw NotMember(b.to_string() + " is not a root of " + sys.type.name());
  Root s = a + b, d = a - b;
  if (is_zero(s) || is_zero(d)) return false;
  return !sys.contains(s) && !sys.contains(d);
}

bool is_maximal(const std::vector<Root>& members, const RootSystem& sys) {
  for (const auto& cand : sys.positives) {
    bool ok = true;
    for (const auto& m : members)
      if (!is_strongly_orthogonal(cand, m, sys)) {
        ok = false;
        break;
      }
    if (ok) return false;
  }
  return true;
}

OrthoSet max_strongly_orthogonal(const RootSystem& sys) {
  using Bits = std::bitset<128>;
  const size_t m = sys.positives.size();
  if (m > 128) throw InvalidType("root system too large for the clique search");
  std::vector<Bits> adj(m);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i + 1; j < m; ++j)
      if (is_strongly_orthogonal(sys.positives[i], sys.positives[j], sys)) {
        adj[i].set(j);
        adj[j].set(i);
      }

  std::vector<size_t> best, current;
  // Candidates are coloured greedily in height order; a vertex with colour k
  // can extend the current clique by at most k.
  std::function<void(Bits)> expand = [&](Bits cand) {
    std::vector<std::pair<size_t, size_t>> order;  // (vertex, colour)
    Bits uncolored = cand;
    size_t colour = 0;
    while (uncolored.any()) {
      ++colour;
      Bits avail = uncolored;
      for (size_t v = 0; v < m; ++v) {
        if (!avail.test(v)) continue;
        order.emplace_back(v, colour);
        uncolored.reset(v);
        avail.reset(v);
        avail &= ~adj[v];
      }
    }
    for (size_t k = order.size(); k-- > 0;) {
      auto [v, c] = order[k];
      if (current.size() + c <= best.size()) return;
      current.push_back(v);
      Bits next = cand & adj[v];
      if (next.none()) {
        if (current.size() > best.size()) best = current;
      } else {
        expand(next);
      }
      current.pop_back();
      cand.reset(v);
    }
  };
  Bits all;
  for (size_t i = 0; i < m; ++i) all.set(i);
  expand(all);

  OrthoSet out;
  out.system = sys.type;
  std::sort(best.begin(), best.end());
  for (size_t v : best) out.members.push_back(sys.positives[v]);
  out.maximal_flag = is_maximal(out.members, sys);
  return out;
}

std::vector<CartanType> table_types(int max_rank) {
  if (max_rank < 2) throw InvalidArgument("table needs max_rank >= 2");
  if (max_rank > 8) throw InvalidArgument("table supports max_rank <= 8");
  std::vector<CartanType> types;
  for (int n = 1; n <= max_rank; ++n) types.push_back({'A', n});
  for (int n = 2; n <= max_rank; ++n) types.push_back({'B', n});
  for (int n = 2; n <= max_rank; ++n) types.push_back({'C', n});
  for (int n = 4; n <= max_rank; ++n) types.push_back({'D', n});
  types.push_back({'E', 6});
  types.push_back({'E', 7});
  types.push_back({'E', 8});
  types.push_back({'F', 4});
  types.push_back({'G', 2});
  return types;
}

int closed_form_N(const CartanType& t) {
  validate(t);
  switch (t.family) {
    case 'A':
      return (t.rank + 1) / 2;
    case 'D':
      return 2 * (t.rank / 2);
    case 'E':
      return t.rank == 6 ? 4 : t.rank;
    default:
      return t.rank;
  }
}

std::map<CartanType, int> table_N(int max_rank) {
  const auto types = table_types(max_rank);
  std::vector<int> values(types.size(), 0);
  const long count = static_cast<long>(types.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    auto sys = generate_root_system(types[static_cast<size_t>(i)]);
    values[static_cast<size_t>(i)] = static_cast<int>(max_strongly_orthogonal(sys).members.size());
  }
  std::map<CartanType, int> out;
  for (size_t i = 0; i < types.size(); ++i) out[types[i]] = values[i];
  return out;
}

std::map<CartanType, int> table_N_serial(int max_rank) {
  std::map<CartanType, int> out;
  for (const auto& t : table_types(max_rank))
    out[t] = static_cast<int>(max_strongly_orthogonal(generate_root_system(t)).members.size());
  return out;
}

}  // namespace systolab::rootsys
