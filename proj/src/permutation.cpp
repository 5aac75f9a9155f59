#include "cosetlab/permutation.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "cosetlab/errors.hpp"

namespace cosetlab {

Permutation identity_permutation(int n) {
  Permutation p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw UsageError("compose: permutation sizes differ");
  Permutation out(a.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = a[static_cast<std::size_t>(b[i])];
  return out;
}

Permutation invert(const Permutation& p) {
  Permutation out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[static_cast<std::size_t>(p[i])] = static_cast<int>(i);
  return out;
}

bool is_permutation(const Permutation& p) {
  std::vector<bool> seen(p.size(), false);
  for (int v : p) {
    if (v < 0 || static_cast<std::size_t>(v) >= p.size() || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = true;
  }
  return true;
}

std::vector<int> cycle_type(const Permutation& p) {
  std::vector<int> lengths;
  std::vector<bool> seen(p.size(), false);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(p[j])) {
      seen[j] = true;
      ++len;
    }
    lengths.push_back(len);
  }
  std::sort(lengths.begin(), lengths.end());
  return lengths;
}

std::string to_cycle_string(const Permutation& p) {
  std::string out;
  std::vector<bool> seen(p.size(), false);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i] || p[i] == static_cast<int>(i)) continue;
    out += '(';
    bool first = true;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(p[j])) {
      seen[j] = true;
      if (!first) out += ' ';
      out += std::to_string(j + 1);
      first = false;
    }
    out += ')';
  }
  return out.empty() ? "()" : out;
}

Permutation parse_cycles(std::string_view text, int n) {
  Permutation p = identity_permutation(n);
  std::size_t i = 0;
  auto skip_space = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_space();
  while (i < text.size()) {
    if (text[i] != '(') throw UsageError("cycle notation: expected '(' in \"" + std::string(text) + "\"");
    ++i;
    std::vector<int> cycle;
    for (;;) {
      skip_space();
      if (i >= text.size()) throw UsageError("cycle notation: unterminated cycle");
      if (text[i] == ')') {
        ++i;
        break;
      }
      if (text[i] == ',') {
        ++i;
        continue;
      }
      if (!std::isdigit(static_cast<unsigned char>(text[i])))
        throw UsageError("cycle notation: unexpected character in \"" + std::string(text) + "\"");
      int v = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) v = v * 10 + (text[i++] - '0');
      if (v < 1 || v > n) throw UsageError("cycle notation: point " + std::to_string(v) + " out of range");
      cycle.push_back(v - 1);
    }
    // Cycles are applied right to left, consistent with compose().
    Permutation c = identity_permutation(n);
    for (std::size_t j = 0; j < cycle.size(); ++j)
      c[static_cast<std::size_t>(cycle[j])] = cycle[(j + 1) % cycle.size()];
    if (!is_permutation(c)) throw UsageError("cycle notation: repeated point in a cycle");
    p = compose(p, c);
    skip_space();
  }
  return p;
}

std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

std::uint64_t lex_rank(const Permutation& p) {
  const int n = static_cast<int>(p.size());
  std::uint64_t rank = 0;
  std::vector<bool> used(p.size(), false);
  for (int i = 0; i < n; ++i) {
    int smaller = 0;
    for (int v = 0; v < p[static_cast<std::size_t>(i)]; ++v)
      if (!used[static_cast<std::size_t>(v)]) ++smaller;
    rank += static_cast<std::uint64_t>(smaller) * factorial(n - 1 - i);
    used[static_cast<std::size_t>(p[static_cast<std::size_t>(i)])] = true;
  }
  return rank;
}

Permutation lex_unrank(std::uint64_t rank, int n) {
  std::vector<int> pool = identity_permutation(n);
  Permutation p;
  p.reserve(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    const std::uint64_t f = factorial(i);
    const auto idx = static_cast<std::size_t>(rank / f);
    rank %= f;
    p.push_back(pool[idx]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
  }
  return p;
}

}  // namespace cosetlab
