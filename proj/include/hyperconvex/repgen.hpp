#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "core.hpp"

namespace hcx {

/// Generator-indexed matrices in SL(d, R). Generator i is paired with its
/// inverse; both are stored so word products never need a numerical inverse.
class Representation {
 public:
  Representation() = default;

  /// Validates and rescales every generator to determinant one.
  Representation(std::vector<Matrix> generators, std::vector<std::string> labels)
      : labels_(std::move(labels)) {
    require(generators.size() >= 2, ErrorKind::kInvalidParameter,
            "a representation needs at least two generators");
    require(labels_.size() == generators.size(), ErrorKind::kInvalidParameter,
            "one label per generator");
    dim_ = static_cast<int>(generators.front().rows());
    require(dim_ >= 2, ErrorKind::kInvalidParameter, "dimension must be at least 2");
    std::set<std::string> seen;
    for (const auto& l : labels_) {
      require(!l.empty() && l.find_first_of(" \t\n,") == std::string::npos,
              ErrorKind::kInvalidParameter, "labels must be non-empty tokens");
      require(seen.insert(l).second, ErrorKind::kInvalidParameter, "duplicate label " + l);
    }
    generators_.reserve(generators.size());
    for (auto& g : generators) {
      require(g.rows() == dim_ && g.cols() == dim_, ErrorKind::kInvalidParameter,
              "generators must all be square of the same size");
      require(g.allFinite(), ErrorKind::kInvalidParameter, "non-finite generator entry");
      generators_.push_back(normalize_determinant(std::move(g)));
    }
    inverses_.reserve(generators_.size());
    for (const auto& g : generators_) inverses_.push_back(g.inverse());
  }

  /// Scales `m` by a real scalar so that det = 1. Throws kPerturbationFailed
  /// when no real scalar exists (det <= 0 in even dimension, or det = 0).
  static Matrix normalize_determinant(Matrix m) {
    const double det = m.determinant();
    const auto d = static_cast<double>(m.rows());
    require(std::isfinite(det) && det != 0.0, ErrorKind::kPerturbationFailed,
            "singular generator");
    // Already unimodular up to rounding: keep the entries bit for bit.
    if (std::abs(det - 1.0) <= 1e-12) return m;
    if (det < 0) {
      require(m.rows() % 2 == 1, ErrorKind::kPerturbationFailed,
              "negative determinant in even dimension cannot be rescaled");
      m /= -std::pow(-det, 1.0 / d);
    } else {
      m /= std::pow(det, 1.0 / d);
    }
    return m;
  }

  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(generators_.size()); }
  const std::vector<Matrix>& generators() const { return generators_; }
  const std::vector<Matrix>& inverses() const { return inverses_; }
  const std::vector<std::string>& labels() const { return labels_; }

  friend bool operator==(const Representation& a, const Representation& b) {
    if (a.dim_ != b.dim_ || a.labels_ != b.labels_) return false;
    for (std::size_t i = 0; i < a.generators_.size(); ++i)
      if (a.generators_[i] != b.generators_[i]) return false;
    return true;
  }

 private:
  int dim_ = 0;
  std::vector<Matrix> generators_;
  std::vector<Matrix> inverses_;
  std::vector<std::string> labels_;
};

inline std::vector<std::string> default_labels(std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) {
    out.push_back(i < 26 ? std::string(1, static_cast<char>('a' + i)) : "g" + std::to_string(i + 1));
  }
  return out;
}

inline Matrix rotation2(double angle) {
  Matrix r(2, 2);
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

/// Hyperbolic generators of SL(2, R): generator i translates by
/// `translation_lengths[i]` along the geodesic through the origin of the disk
/// at angle `axis_angles[i]` (conjugation by the rotation R(angle / 2)).
inline Representation make_schottky(const std::vector<double>& translation_lengths,
                                    const std::vector<double>& axis_angles) {
  const std::size_t k = translation_lengths.size();
  require(k >= 2, ErrorKind::kInvalidParameter, "need at least two generators");
  require(axis_angles.size() == k, ErrorKind::kInvalidParameter, "one angle per length");
  for (double l : translation_lengths)
    require(std::isfinite(l) && l > 0, ErrorKind::kInvalidParameter, "translation length must be positive");
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      require(std::abs(std::sin(axis_angles[i] - axis_angles[j])) > 1e-12,
              ErrorKind::kInvalidParameter, "axis angles must be distinct mod pi");

  std::vector<Matrix> gens;
  for (std::size_t i = 0; i < k; ++i) {
    Matrix h = Matrix::Zero(2, 2);
    h(0, 0) = std::exp(translation_lengths[i] / 2);
    h(1, 1) = std::exp(-translation_lengths[i] / 2);
    const Matrix r = rotation2(axis_angles[i] / 2);
    gens.push_back(r * h * r.transpose());
  }
  return Representation(std::move(gens), default_labels(k));
}

/// Action of a 2x2 matrix on homogeneous polynomials of degree d-1 in (x, y),
/// basis x^{d-1}, x^{d-2}y, ..., y^{d-1}. Row j holds the image of the j-th
/// monomial under x -> g00 x + g01 y, y -> g10 x + g11 y.
inline Matrix sym_power(const Matrix& g, int d) {
  require(g.rows() == 2 && g.cols() == 2, ErrorKind::kInvalidParameter, "sym_power needs a 2x2 matrix");
  require(d >= 2, ErrorKind::kInvalidParameter, "target dimension must be at least 2");
  const int m = d - 1;
  // Polynomials in y/x are coefficient vectors indexed by the power of y.
  auto multiply = [](const std::vector<double>& p, const std::vector<double>& q) {
    std::vector<double> r(p.size() + q.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
    return r;
  };
  const std::vector<double> x_image{g(0, 0), g(0, 1)};
  const std::vector<double> y_image{g(1, 0), g(1, 1)};
  Matrix out = Matrix::Zero(d, d);
  for (int j = 0; j <= m; ++j) {
    std::vector<double> p{1.0};
    for (int a = 0; a < m - j; ++a) p = multiply(p, x_image);
    for (int b = 0; b < j; ++b) p = multiply(p, y_image);
    for (int i = 0; i <= m; ++i) out(j, i) = p[static_cast<std::size_t>(i)];
  }
  return out;
}

/// Composes a two-dimensional representation with the irreducible
/// representation SL(2, R) -> SL(d, R).
inline Representation sym_power_embed(const Representation& rep2, int d) {
  require(rep2.dim() == 2, ErrorKind::kInvalidParameter, "sym_power_embed expects a 2-dimensional representation");
  std::vector<Matrix> gens;
  for (const auto& g : rep2.generators()) gens.push_back(sym_power(g, d));
  return Representation(std::move(gens), rep2.labels());
}

/// Entrywise uniform noise in [-epsilon, epsilon], then determinant
/// renormalization. epsilon == 0 returns the input unchanged.
inline Representation perturb(const Representation& rep, double epsilon, std::uint64_t seed) {
  require(std::isfinite(epsilon) && epsilon >= 0, ErrorKind::kInvalidParameter, "epsilon must be >= 0");
  if (epsilon == 0.0) return rep;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(-epsilon, epsilon);
  std::vector<Matrix> gens;
  for (const auto& g : rep.generators()) {
    Matrix p = g;
    for (Eigen::Index r = 0; r < p.rows(); ++r)
      for (Eigen::Index c = 0; c < p.cols(); ++c) p(r, c) += noise(rng);
    gens.push_back(std::move(p));
  }
  return Representation(std::move(gens), rep.labels());
}

/// Contragredient representation: g -> (g^{-1})^T.
inline Representation dual_rep(const Representation& rep) {
  std::vector<Matrix> gens;
  for (const auto& inv : rep.inverses()) {
    require(inv.allFinite(), ErrorKind::kInternal, "singular generator");
    gens.push_back(inv.transpose());
  }
  return Representation(std::move(gens), rep.labels());
}

// ---------------------------------------------------------------------------
// File formats

inline std::string write_rep_text(const Representation& rep) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "dim=" << rep.dim() << " gens=" << rep.rank() << '\n';
  for (int i = 0; i < rep.rank(); ++i) {
    os << rep.labels()[static_cast<std::size_t>(i)];
    const Matrix& g = rep.generators()[static_cast<std::size_t>(i)];
    for (int r = 0; r < rep.dim(); ++r)
      for (int c = 0; c < rep.dim(); ++c) os << ' ' << g(r, c);
    os << '\n';
  }
  return os.str();
}

inline nlohmann::json rep_to_json(const Representation& rep) {
  nlohmann::json j;
  j["dim"] = rep.dim();
  j["labels"] = rep.labels();
  j["generators"] = nlohmann::json::array();
  for (const auto& g : rep.generators()) {
    std::vector<double> flat;
    for (int r = 0; r < rep.dim(); ++r)
      for (int c = 0; c < rep.dim(); ++c) flat.push_back(g(r, c));
    j["generators"].push_back(flat);
  }
  return j;
}

inline Representation rep_from_json(const nlohmann::json& j) {
  try {
    const int d = j.at("dim").get<int>();
    require(d >= 2, ErrorKind::kInvalidInput, "dim must be >= 2");
    auto labels = j.at("labels").get<std::vector<std::string>>();
    std::vector<Matrix> gens;
    for (const auto& entry : j.at("generators")) {
      std::vector<double> flat;
      // Accept both flat row-major arrays and arrays of rows.
      if (!entry.empty() && entry.front().is_array()) {
        for (const auto& row : entry)
          for (const auto& x : row) flat.push_back(x.get<double>());
      } else {
        flat = entry.get<std::vector<double>>();
      }
      require(flat.size() == static_cast<std::size_t>(d * d), ErrorKind::kInvalidInput,
              "generator has wrong number of entries");
      Matrix g(d, d);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) g(r, c) = flat[static_cast<std::size_t>(r * d + c)];
      gens.push_back(std::move(g));
    }
    return Representation(std::move(gens), std::move(labels));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kInvalidInput, std::string("malformed representation JSON: ") + e.what());
  }
}

inline Representation parse_rep_text(const std::string& text) {
  std::istringstream is(text);
  std::string header;
  int d = 0, k = 0;
  {
    std::string line;
    while (std::getline(is, line) && line.find_first_not_of(" \t\r") == std::string::npos) {}
    std::istringstream hs(line);
    std::string a, b;
    hs >> a >> b;
    require(a.rfind("dim=", 0) == 0 && b.rfind("gens=", 0) == 0, ErrorKind::kInvalidInput,
            "expected header 'dim=<d> gens=<k>'");
    try {
      d = std::stoi(a.substr(4));
      k = std::stoi(b.substr(5));
    } catch (const std::exception&) {
      throw Error(ErrorKind::kInvalidInput, "unparsable header");
    }
  }
  require(d >= 2 && k >= 1, ErrorKind::kInvalidInput, "bad header values");
  std::vector<Matrix> gens;
  std::vector<std::string> labels;
  for (int i = 0; i < k; ++i) {
    std::string label;
    require(static_cast<bool>(is >> label), ErrorKind::kInvalidInput, "missing generator line");
    Matrix g(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) {
        std::string tok;
        require(static_cast<bool>(is >> tok), ErrorKind::kInvalidInput, "truncated generator " + label);
        try {
          g(r, c) = std::stod(tok);
        } catch (const std::exception&) {
          throw Error(ErrorKind::kInvalidInput, "bad number '" + tok + "'");
        }
      }
    labels.push_back(label);
    gens.push_back(std::move(g));
  }
  return Representation(std::move(gens), std::move(labels));
}

/// Reads either the text form or the JSON form (detected by a leading '{').
inline Representation parse_rep(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  require(first != std::string::npos, ErrorKind::kInvalidInput, "empty representation file");
  if (text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kInvalidInput, std::string("bad JSON: ") + e.what());
    }
    return rep_from_json(j);
  }
  return parse_rep_text(text);
}

inline Representation load_rep(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::kFile, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_rep(buf.str());
}

inline void save_rep(const Representation& rep, const std::string& path, bool as_json = false) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::kFile, "cannot write " + path);
  if (as_json) {
    out << rep_to_json(rep).dump(2) << '\n';
  } else {
    out << write_rep_text(rep);
  }
}

}  // namespace hcx
