#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

namespace systolab::rootsys {

/// Cartan type of an irreducible root system (plus D2, D3 by coordinates).
struct CartanType {
  char family = 'A';
  int rank = 1;

  std::string name() const { return std::string(1, family) + std::to_string(rank); }
  friend auto operator<=>(const CartanType&, const CartanType&) = default;
};

/// Throws InvalidType unless the family/rank pair names a root system.
void validate(const CartanType& type);
/// Parses "E8", "A3", "d4".
CartanType parse_cartan_type(const std::string& text);

/// A root in the standard orthonormal realization. Coordinates are stored
/// doubled so that the half-integers of E and F types stay exact.
struct Root {
  std::vector<int> doubled;

  std::string to_string() const;
  friend auto operator<=>(const Root&, const Root&) = default;
};

Root operator+(const Root& a, const Root& b);
Root operator-(const Root& a, const Root& b);
Root operator-(const Root& a);
int inner_doubled(const Root& a, const Root& b);  // 4 <a, b>
bool is_zero(const Root& a);

struct RootSystem {
  CartanType type;
  int dimension = 0;
  std::vector<Root> roots;      // sorted
  std::vector<Root> positives;  // sorted by height, then coordinates
  std::vector<int> heights;     // parallel to positives

  bool contains(const Root& r) const;
};

/// Full root system with lexicographic positivity (first nonzero coordinate > 0).
RootSystem generate_root_system(const CartanType& type);

/// a +- b lie outside roots and are nonzero. Throws NotMember if a or b is not a root.
bool is_strongly_orthogonal(const Root& a, const Root& b, const RootSystem& sys);

struct OrthoSet {
  CartanType system;
  std::vector<Root> members;
  bool maximal_flag = false;
};

/// Maximum-cardinality strongly orthogonal subset of the positive roots
/// (branch and bound over roots ordered by height, greedy-colouring bound).
OrthoSet max_strongly_orthogonal(const RootSystem& sys);

/// True when no positive root can be added to `members`.
bool is_maximal(const std::vector<Root>& members, const RootSystem& sys);

/// Types covered by the table: A1..An, B2..Bn, C2..Cn, D4..Dn (n = max_rank)
/// and E6, E7, E8, F4, G2.
std::vector<CartanType> table_types(int max_rank);
/// Known closed form for N(type).
int closed_form_N(const CartanType& type);

/// N for every type of table_types(max_rank); the systems are solved in parallel.
std::map<CartanType, int> table_N(int max_rank);
/// Single-threaded reference for table_N.
std::map<CartanType, int> table_N_serial(int max_rank);

}  // namespace systolab::rootsys
