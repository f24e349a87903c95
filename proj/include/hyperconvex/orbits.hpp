#pragma once

#include <functional>
#include <span>
#include <vector>

#include "core.hpp"
#include "repgen.hpp"
#include "spectra.hpp"
#include "words.hpp"

namespace hcx {

/// Period data of all conjugacy classes of one cyclic length. Each class
/// carries its period vector (for representations: the Jordan projection)
/// and the number of distinct rotations of its cyclic word, i.e. the number
/// of periodic points of the shift lying on that orbit.
struct PeriodLevel {
  int length = 0;
  int dim = 0;
  std::vector<Word> words;
  std::vector<double> rotations;
  std::vector<double> periods;  // row-major, dim entries per class

  std::size_t size() const { return rotations.size(); }
  Eigen::Map<const Vector> period(std::size_t i) const {
    return Eigen::Map<const Vector>(periods.data() + i * static_cast<std::size_t>(dim), dim);
  }
  /// phi(period) for every class, in class order.
  std::vector<double> values(const Vector& phi) const {
    require(phi.size() == dim, ErrorKind::kInvalidParameter, "functional dimension mismatch");
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = phi.dot(period(i));
    return out;
  }
};

/// Periods for every cyclic length 1..n_max. levels[n] is length n;
/// levels[0] is empty.
struct PeriodTable {
  int rank = 0;
  int dim = 0;
  int n_max = 0;
  std::vector<PeriodLevel> levels;

  const PeriodLevel& level(int n) const {
    require(n >= 1 && n <= n_max, ErrorKind::kInvalidParameter, "level outside the table");
    return levels[static_cast<std::size_t>(n)];
  }
};


namespace detail {

inline PeriodLevel build_level(int k, int n, int dim, unsigned threads,
                               const std::function<Vector(const Word&)>& period_of) {
  const std::size_t shards = static_cast<std::size_t>(2 * k);
  std::vector<PeriodLevel> parts(shards);
  for_each_shard(shards, threads, [&](std::size_t s) {
    PeriodLevel& part = parts[s];
    for_each_conj_class_in_shard(k, n, static_cast<Letter>(s), [&](std::span<const Letter> w) {
      Word word{{w.begin(), w.end()}};
      const Vector p = period_of(word);
      part.periods.insert(part.periods.end(), p.data(), p.data() + p.size());
      part.rotations.push_back(static_cast<double>(rotation_period(w)));
      part.words.push_back(std::move(word));
    });
  });
  PeriodLevel out;
  out.length = n;
  out.dim = dim;
  for (auto& part : parts) {
    out.words.insert(out.words.end(), std::make_move_iterator(part.words.begin()), std::make_move_iterator(part.words.end()));
    out.rotations.insert(out.rotations.end(), part.rotations.begin(), part.rotations.end());
    out.periods.insert(out.periods.end(), part.periods.begin(), part.periods.end());
  }
  return out;
}

}  // namespace detail

/// Test seam: periods given by an arbitrary function of the cyclic word.
inline PeriodTable period_table(int k, int n_max, int dim, const std::function<Vector(const Word&)>& period_of,
                                unsigned threads = default_threads()) {
  require(k >= 2 && n_max >= 1, ErrorKind::kInvalidParameter, "need k >= 2 and n_max >= 1");
  PeriodTable t{k, dim, n_max, std::vector<PeriodLevel>(static_cast<std::size_t>(n_max) + 1)};
  for (int n = 1; n <= n_max; ++n) t.levels[static_cast<std::size_t>(n)] = detail::build_level(k, n, dim, threads, period_of);
  return t;
}

/// One-dimensional periods equal to the cyclic word length.
inline PeriodTable word_length_periods(int k, int n_max, unsigned threads = default_threads()) {
  return period_table(k, n_max, 1, [](const Word& w) { return Vector::Constant(1, static_cast<double>(w.size())); }, threads);
}

/// Jordan projections lambda(rho w) of every conjugacy class up to n_max.
inline PeriodTable class_spectra(const Representation& rep, int n_max, unsigned threads = default_threads()) {
  return period_table(rep.rank(), n_max, rep.dim(), [&rep](const Word& w) {
    Matrix m = Matrix::Identity(rep.dim(), rep.dim());
    Matrix m_inv = m;
    for (Letter x : w.letters) {
      m = m * letter_matrix(rep, x);
      m_inv = letter_matrix(rep, inverse_letter(x)) * m_inv;
    }
    return jordan(m, m_inv, 0.0).coords;
  }, threads);
}

/// Per-element data for all reduced words of length 1..max_len, in shard
/// (first letter) order, depth-first within a shard.
struct ElementTable {
  int rank = 0;
  int dim = 0;
  int max_len = 0;
  std::vector<int> lengths;
  std::vector<double> values;  // row-major, dim entries per word

  std::size_t size() const { return lengths.size(); }
  Eigen::Map<const Vector> value(std::size_t i) const {
    return Eigen::Map<const Vector>(values.data() + i * static_cast<std::size_t>(dim), dim);
  }
};

/// Cartan projections a(rho w) of every reduced word of length 1..max_len.
inline ElementTable element_cartan(const Representation& rep, int max_len, unsigned threads = default_threads()) {
  require(max_len >= 1, ErrorKind::kInvalidParameter, "max_len must be >= 1");
  const int k = rep.rank();
  const std::size_t shards = static_cast<std::size_t>(2 * k);
  std::vector<ElementTable> parts(shards);
  for_each_shard(shards, threads, [&](std::size_t s) {
    auto& part = parts[s];
    for_each_word_product_in_shard(rep, max_len, static_cast<Letter>(s),
                                   [&](std::span<const Letter> w, const Matrix& m, const Matrix& m_inv) {
                                     const Vector a = cartan(m, m_inv, 0.0).coords;
                                     part.lengths.push_back(static_cast<int>(w.size()));
                                     part.values.insert(part.values.end(), a.data(), a.data() + a.size());
                                   });
  });
  ElementTable out{k, rep.dim(), max_len, {}, {}};
  for (auto& p : parts) {
    out.lengths.insert(out.lengths.end(), p.lengths.begin(), p.lengths.end());
    out.values.insert(out.values.end(), p.values.begin(), p.values.end());
  }
  return out;
}

/// Test seam: one-dimensional element values equal to the word length.
inline ElementTable word_length_elements(int k, int max_len) {
  ElementTable out{k, 1, max_len, {}, {}};
  for (int n = 1; n <= max_len; ++n) {
    const std::size_t c = reduced_word_count(k, n);
    out.lengths.insert(out.lengths.end(), c, n);
    out.values.insert(out.values.end(), c, static_cast<double>(n));
  }
  return out;
}

}  // namespace hcx
