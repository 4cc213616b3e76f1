#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace sfd {

// Sorted vertex tuple of dimension 0..3; unused slots hold -1.
struct Simplex {
  std::array<int, 4> v{-1, -1, -1, -1};
  int dim = -1;

  Simplex() = default;
  explicit Simplex(std::initializer_list<int> ids) {
    dim = int(ids.size()) - 1;
    std::copy(ids.begin(), ids.end(), v.begin());
    std::sort(v.begin(), v.begin() + dim + 1);
  }
  static Simplex from(const int* ids, int count) {
    Simplex s;
    s.dim = count - 1;
    std::copy(ids, ids + count, s.v.begin());
    std::sort(s.v.begin(), s.v.begin() + count);
    return s;
  }

  int size() const { return dim + 1; }
  const int* begin() const { return v.data(); }
  const int* end() const { return v.data() + dim + 1; }
  bool contains(int id) const { return std::find(begin(), end(), id) != end(); }
  bool is_face_of(const Simplex& other) const {
    return std::includes(other.begin(), other.end(), begin(), end());
  }
  std::vector<Simplex> faces() const;  // proper faces, all dimensions
  std::string str() const;

  auto operator<=>(const Simplex&) const = default;
};

struct SimplexHash {
  std::size_t operator()(const Simplex& s) const noexcept {
    std::size_t h = std::size_t(s.dim + 1);
    for (int x : s.v) h = h * 1000003u ^ std::hash<int>{}(x);
    return h;
  }
};

}  // namespace sfd
