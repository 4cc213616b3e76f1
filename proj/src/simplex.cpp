#include "sfd/simplex.hpp"

namespace sfd {

std::vector<Simplex> Simplex::faces() const {
  std::vector<Simplex> out;
  const int n = size();
  for (int mask = 1; mask < (1 << n) - 1; ++mask) {
    int ids[4];
    int c = 0;
    for (int b = 0; b < n; ++b)
      if (mask & (1 << b)) ids[c++] = v[b];
    out.push_back(from(ids, c));
  }
  return out;
}

std::string Simplex::str() const {
  std::string s = "(";
  for (int i = 0; i < size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s + ")";
}

}  // namespace sfd
