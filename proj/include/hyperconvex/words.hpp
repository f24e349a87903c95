#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "core.hpp"
#include "repgen.hpp"

namespace hcx {

/// Letter code: 2*i is generator i, 2*i+1 its inverse. Numeric order is the
/// canonical letter order g1 < g1^-1 < g2 < g2^-1 < ...
using Letter = std::uint8_t;

constexpr Letter inverse_letter(Letter x) { return static_cast<Letter>(x ^ 1u); }
constexpr Letter generator_letter(int i) { return static_cast<Letter>(2 * i); }

/// A freely reduced word in F_k.
struct Word {
  std::vector<Letter> letters;

  std::size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
  friend auto operator<=>(const Word&, const Word&) = default;
};

/// A conjugacy class, stored as the least rotation of a cyclically reduced word.
struct ConjugacyClass {
  Word cyclic_word;
  friend auto operator<=>(const ConjugacyClass&, const ConjugacyClass&) = default;
};

inline Word reduce(std::span<const Letter> letters, int k) {
  Word out;
  out.letters.reserve(letters.size());
  for (Letter x : letters) {
    require(x < 2 * k, ErrorKind::kInvalidInput, "letter outside the alphabet");
    if (!out.letters.empty() && out.letters.back() == inverse_letter(x)) {
      out.letters.pop_back();
    } else {
      out.letters.push_back(x);
    }
  }
  return out;
}

inline bool is_reduced(std::span<const Letter> w) {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] == inverse_letter(w[i - 1])) return false;
  return true;
}

inline bool is_cyclically_reduced(std::span<const Letter> w) {
  return is_reduced(w) && (w.size() < 2 || w.front() != inverse_letter(w.back()));
}

inline Word inverse(const Word& w) {
  Word out;
  out.letters.assign(w.letters.rbegin(), w.letters.rend());
  for (auto& x : out.letters) x = inverse_letter(x);
  return out;
}

inline Word concat(const Word& a, const Word& b, int k) {
  std::vector<Letter> raw = a.letters;
  raw.insert(raw.end(), b.letters.begin(), b.letters.end());
  return reduce(raw, k);
}

inline Word rotate(const Word& w, std::size_t j) {
  Word out = w;
  if (!w.empty()) std::rotate(out.letters.begin(), out.letters.begin() + static_cast<std::ptrdiff_t>(j % w.size()), out.letters.end());
  return out;
}

/// Smallest p > 0 such that rotating by p fixes w (p divides |w|).
inline std::size_t rotation_period(std::span<const Letter> w) {
  const std::size_t n = w.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool same = true;
    for (std::size_t i = 0; i < n && same; ++i) same = w[i] == w[(i + p) % n];
    if (same) return p;
  }
  return n;
}

/// True if w is lexicographically <= every rotation of itself.
inline bool is_least_rotation(std::span<const Letter> w) {
  const std::size_t n = w.size();
  for (std::size_t r = 1; r < n; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      const Letter a = w[i];
      const Letter b = w[(i + r) % n];
      if (a < b) break;
      if (a > b) return false;
    }
  }
  return true;
}

inline ConjugacyClass canonical_conj(const Word& w) {
  require(!w.empty(), ErrorKind::kInvalidInput, "the empty word has no conjugacy class");
  require(is_reduced(w.letters), ErrorKind::kInvalidInput, "word is not reduced");
  std::size_t lo = 0, hi = w.size();
  while (hi - lo >= 2 && w.letters[lo] == inverse_letter(w.letters[hi - 1])) {
    ++lo;
    --hi;
  }
  Word core;
  core.letters.assign(w.letters.begin() + static_cast<std::ptrdiff_t>(lo),
                      w.letters.begin() + static_cast<std::ptrdiff_t>(hi));
  Word best = core;
  for (std::size_t j = 1; j < core.size(); ++j) best = std::min(best, rotate(core, j));
  return ConjugacyClass{std::move(best)};
}

// ---------------------------------------------------------------------------
// Text form: whitespace-separated labels; an inverse is written label^-1
// (label⁻¹ is also accepted on input).

inline std::vector<Letter> parse_letters(const std::string& text, const std::vector<std::string>& labels) {
  std::istringstream is(text);
  std::vector<Letter> out;
  std::string tok;
  while (is >> tok) {
    bool inv = false;
    for (const std::string suffix : {"^-1", "⁻¹"}) {
      if (tok.size() > suffix.size() && tok.compare(tok.size() - suffix.size(), suffix.size(), suffix) == 0) {
        tok.resize(tok.size() - suffix.size());
        inv = true;
        break;
      }
    }
    auto it = std::find(labels.begin(), labels.end(), tok);
    require(it != labels.end(), ErrorKind::kInvalidInput, "unknown letter '" + tok + "'");
    const auto g = static_cast<int>(it - labels.begin());
    out.push_back(static_cast<Letter>(generator_letter(g) + (inv ? 1 : 0)));
  }
  return out;
}

inline Word parse_word(const std::string& text, const std::vector<std::string>& labels) {
  return reduce(parse_letters(text, labels), static_cast<int>(labels.size()));
}

inline std::string to_string(const Word& w, const std::vector<std::string>& labels) {
  std::string out;
  for (Letter x : w.letters) {
    if (!out.empty()) out += ' ';
    out += labels.at(x / 2u);
    if (x & 1u) out += "^-1";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Enumeration. Both enumerations are depth-first in lexicographic letter
// order; shard s covers the words whose first letter is s.

inline std::size_t reduced_word_count(int k, int n) {
  if (n == 0) return 1;
  std::size_t c = static_cast<std::size_t>(2 * k);
  for (int i = 1; i < n; ++i) c *= static_cast<std::size_t>(2 * k - 1);
  return c;
}

namespace detail {

template <typename Visit>
void reduced_dfs(int k, int n, std::vector<Letter>& buf, Visit& visit) {
  if (static_cast<int>(buf.size()) == n) {
    visit(std::span<const Letter>(buf));
    return;
  }
  for (Letter x = 0; x < 2 * k; ++x) {
    if (!buf.empty() && x == inverse_letter(buf.back())) continue;
    buf.push_back(x);
    reduced_dfs(k, n, buf, visit);
    buf.pop_back();
  }
}

// Depth-first search over prenecklaces (Fredricksen-Kessler-Maiorana
// pruning) restricted to reduced words; leaves are filtered for cyclic
// reduction and minimality among rotations.
template <typename Visit>
void necklace_dfs(int k, int n, std::vector<Letter>& buf, std::size_t lyndon_period, Visit& visit) {
  const std::size_t t = buf.size();
  if (static_cast<int>(t) == n) {
    if (is_cyclically_reduced(buf) && is_least_rotation(buf)) visit(std::span<const Letter>(buf));
    return;
  }
  const Letter lower = buf[t - lyndon_period];
  for (Letter x = lower; x < 2 * k; ++x) {
    if (x == inverse_letter(buf.back())) continue;
    buf.push_back(x);
    necklace_dfs(k, n, buf, x == lower ? lyndon_period : t + 1, visit);
    buf.pop_back();
  }
}

}  // namespace detail

/// Visits every reduced word of length exactly n starting with letter `shard`.
template <typename Visit>
void for_each_reduced_word_in_shard(int k, int n, Letter shard, Visit&& visit) {
  require(k >= 1 && n >= 1, ErrorKind::kInvalidParameter, "need k >= 1 and n >= 1");
  std::vector<Letter> buf{shard};
  buf.reserve(static_cast<std::size_t>(n));
  detail::reduced_dfs(k, n, buf, visit);
}

template <typename Visit>
void for_each_reduced_word(int k, int n, Visit&& visit) {
  require(k >= 2 && n >= 0, ErrorKind::kInvalidParameter, "need k >= 2 and n >= 0");
  if (n == 0) {
    visit(std::span<const Letter>());
    return;
  }
  for (Letter s = 0; s < 2 * k; ++s) for_each_reduced_word_in_shard(k, n, s, visit);
}

inline std::vector<Word> enumerate_words(int k, int n) {
  std::vector<Word> out;
  out.reserve(reduced_word_count(k, n));
  for_each_reduced_word(k, n, [&](std::span<const Letter> w) { out.push_back(Word{{w.begin(), w.end()}}); });
  return out;
}

/// Visits the canonical words of conjugacy classes of cyclic length n whose
/// first letter is `shard`.
template <typename Visit>
void for_each_conj_class_in_shard(int k, int n, Letter shard, Visit&& visit) {
  require(k >= 1 && n >= 1, ErrorKind::kInvalidParameter, "need n >= 1");
  std::vector<Letter> buf{shard};
  buf.reserve(static_cast<std::size_t>(n));
  detail::necklace_dfs(k, n, buf, 1, visit);
}

template <typename Visit>
void for_each_conj_class(int k, int n, Visit&& visit) {
  require(k >= 2 && n >= 1, ErrorKind::kInvalidParameter, "need k >= 2 and n >= 1");
  for (Letter s = 0; s < 2 * k; ++s) for_each_conj_class_in_shard(k, n, s, visit);
}

inline std::vector<ConjugacyClass> enumerate_conj_classes(int k, int n) {
  std::vector<ConjugacyClass> out;
  for_each_conj_class(k, n, [&](std::span<const Letter> w) {
    out.push_back(ConjugacyClass{Word{{w.begin(), w.end()}}});
  });
  return out;
}

/// Number of cyclically reduced words of length n in F_k, i.e. the number of
/// periodic points of period n of the shift on reduced sequences.
inline double cyclically_reduced_count(int k, int n) {
  const double q = 2.0 * k - 1.0;
  return std::pow(q, n) + 1.0 + (k - 1.0) * (1.0 + (n % 2 == 0 ? 1.0 : -1.0));
}

// ---------------------------------------------------------------------------
// Evaluation

inline Matrix evaluate(const Representation& rep, const Word& w) {
  Matrix m = Matrix::Identity(rep.dim(), rep.dim());
  for (Letter x : w.letters) {
    require(x < 2 * rep.rank(), ErrorKind::kInvalidInput, "letter outside the representation's alphabet");
    const auto g = static_cast<std::size_t>(x / 2u);
    m = m * ((x & 1u) ? rep.inverses()[g] : rep.generators()[g]);
  }
  return m;
}

inline const Matrix& letter_matrix(const Representation& rep, Letter x) {
  const auto g = static_cast<std::size_t>(x / 2u);
  return (x & 1u) ? rep.inverses()[g] : rep.generators()[g];
}

/// Depth-first walk over all reduced words of length 1..max_len starting with
/// `shard`, carrying prefix products. `visit(word, m, m_inv)` receives
/// m = rho(word) and m_inv = rho(word^-1) built from inverse generators.
/// One pair of matrix products per visited word.
template <typename Visit>
void for_each_word_product_in_shard(const Representation& rep, int max_len, Letter shard, Visit&& visit) {
  const int k = rep.rank();
  require(shard < 2 * k, ErrorKind::kInvalidParameter, "shard outside alphabet");
  std::vector<Letter> buf;
  std::vector<Matrix> prefix(static_cast<std::size_t>(max_len) + 1), prefix_inv(static_cast<std::size_t>(max_len) + 1);
  prefix[0] = Matrix::Identity(rep.dim(), rep.dim());
  prefix_inv[0] = prefix[0];
  auto step = [&](auto&& self, Letter x) -> void {
    const std::size_t depth = buf.size();
    buf.push_back(x);
    prefix[depth + 1].noalias() = prefix[depth] * letter_matrix(rep, x);
    prefix_inv[depth + 1].noalias() = letter_matrix(rep, inverse_letter(x)) * prefix_inv[depth];
    visit(std::span<const Letter>(buf), prefix[depth + 1], prefix_inv[depth + 1]);
    if (static_cast<int>(depth + 1) < max_len) {
      for (Letter y = 0; y < 2 * k; ++y)
        if (y != inverse_letter(x)) self(self, y);
    }
    buf.pop_back();
  };
  if (max_len >= 1) step(step, shard);
}

}  // namespace hcx
