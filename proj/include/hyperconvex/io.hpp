#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "core.hpp"
#include "counting.hpp"
#include "growth.hpp"
#include "pressure.hpp"
#include "words.hpp"

namespace hcx::io {

/// 17 significant digits, locale independent.
inline std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

inline std::string psi_text(const PsiValue& p) { return p.is_minus_infinity() ? "-inf" : num(p.value()); }

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : header_(std::move(header)) {}

  void row(const std::vector<std::string>& fields) {
    require(fields.size() == header_.size(), ErrorKind::kInternal, "csv row width mismatch");
    rows_.push_back(fields);
  }

  std::string str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& f) {
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (i) out += ',';
        out += f[i];
      }
      out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

inline std::vector<std::string> indexed(const std::string& stem, int d) {
  std::vector<std::string> out;
  for (int i = 1; i <= d; ++i) out.push_back(stem + std::to_string(i));
  return out;
}

inline std::vector<std::string> nums(const Vector& v) {
  std::vector<std::string> out;
  for (double x : v) out.push_back(num(x));
  return out;
}

inline std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

/// `word,len,a1..ad,l1..ld` for every reduced word of length 1..max_len.
inline std::string spectra_csv(const Representation& rep, int max_len) {
  require(max_len >= 1, ErrorKind::kInvalidParameter, "max_len must be >= 1");
  std::vector<std::string> header{"word", "len"};
  for (auto& s : indexed("a", rep.dim())) header.push_back(s);
  for (auto& s : indexed("l", rep.dim())) header.push_back(s);
  Csv csv(header);
  for (int s = 0; s < 2 * rep.rank(); ++s) {
    for_each_word_product_in_shard(rep, max_len, static_cast<Letter>(s),
                                   [&](std::span<const Letter> w, const Matrix& m, const Matrix& m_inv) {
                                     std::vector<std::string> f{to_string(Word{{w.begin(), w.end()}}, rep.labels()),
                                                                std::to_string(w.size())};
                                     for (auto& x : nums(cartan(m, m_inv, 0.0).coords)) f.push_back(x);
                                     for (auto& x : nums(jordan(m, m_inv, 0.0).coords)) f.push_back(x);
                                     csv.row(f);
                                   });
  }
  return csv.str();
}

inline std::string hull_csv(const ConeHull& h) {
  Csv csv(indexed("dir_", h.dim));
  for (const auto& v : h.hull) csv.row(nums(v));
  return csv.str();
}

inline std::string exponent_csv(const ExponentEstimate& e) {
  Csv csv({"threshold", "count", "log_count"});
  for (std::size_t j = 0; j < e.thresholds.size(); ++j)
    csv.row({num(e.thresholds[j]), num(e.counts[j]), num(e.counts[j] > 0 ? std::log(e.counts[j]) : -INFINITY)});
  return csv.str();
}

inline std::string indicator_csv(const std::vector<GrowthIndicatorSample>& samples, int d) {
  auto header = indexed("dir_", d);
  header.push_back("psi");
  Csv csv(header);
  for (const auto& s : samples) {
    auto f = nums(s.direction);
    f.push_back(psi_text(s.value));
    csv.row(f);
  }
  return csv.str();
}

struct PsiComparison {
  Vector v;
  PsiValue psi;
  PsiMethod method;
};

inline std::string comparison_csv(const std::vector<PsiComparison>& rows, int d) {
  auto header = indexed("v", d);
  header.push_back("psi");
  header.push_back("method");
  Csv csv(header);
  for (const auto& r : rows) {
    auto f = nums(r.v);
    f.push_back(psi_text(r.psi));
    f.push_back(to_string(r.method));
    csv.row(f);
  }
  return csv.str();
}

inline std::string ratio_csv(const OrbitCountRatio& r) {
  Csv csv({"t", "ratio"});
  for (const auto& row : r.rows) csv.row({num(row.t), num(row.ratio)});
  return csv.str();
}

inline std::string pressure_csv(const PressureTable& p) {
  Csv csv({"n", "t", "P_n"});
  for (const auto& [n, v] : p.levels) csv.row({std::to_string(n), num(p.t), num(v)});
  return csv.str();
}

inline std::string continuity_csv(const std::vector<ContinuityRow>& rows) {
  Csv csv({"epsilon", "hausdorff", "dpsi_max", "dh"});
  const double nan = std::nan("");
  for (const auto& r : rows)
    csv.row({num(r.epsilon), num(r.failed ? nan : r.hausdorff), num(r.failed ? nan : r.dpsi_max), num(r.failed ? nan : r.dh)});
  return csv.str();
}

inline nlohmann::json root_json(const Vector& phi, const PressureRoot& r) {
  return {{"phi", to_std(phi)}, {"root", r.root}, {"n_max", r.n_max}, {"extrapolation_flag", r.extrapolation_flag}};
}

inline nlohmann::json boundary_json(const DualBody& body) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& b : body.boundary)
    arr.push_back({{"direction", to_std(b.direction)},
                   {"s_star", b.s_star},
                   {"gibbs_dir", to_std(b.gibbs_dir)},
                   {"entropy", b.entropy}});
  return arr;
}

/// Writes `content` to `path` through a temporary sibling, so a failed run
/// never leaves a partial file behind.
inline void write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::kFile, "cannot open " + tmp + " for writing");
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error(ErrorKind::kFile, "write failed: " + path);
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::kFile, "cannot move output into place: " + path);
  }
}

}  // namespace hcx::io
