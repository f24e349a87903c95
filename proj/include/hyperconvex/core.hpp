#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

namespace hcx {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Failure categories. The CLI maps these onto exit codes.
enum class ErrorKind {
  kInvalidParameter,
  kInvalidInput,
  kPerturbationFailed,
  kSpectralFailure,
  kUndefinedGap,
  kNotInDualCone,
  kInsufficientData,
  kDegenerateCone,
  kBracketFailure,
  kNotOnBoundary,
  kFile,
  kInternal,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidParameter: return "invalid-parameter";
    case ErrorKind::kInvalidInput: return "invalid-input";
    case ErrorKind::kPerturbationFailed: return "perturbation-failed";
    case ErrorKind::kSpectralFailure: return "spectral-failure";
    case ErrorKind::kUndefinedGap: return "undefined-gap";
    case ErrorKind::kNotInDualCone: return "not-in-dual-cone";
    case ErrorKind::kInsufficientData: return "insufficient-data";
    case ErrorKind::kDegenerateCone: return "degenerate-cone";
    case ErrorKind::kBracketFailure: return "bracket-failure";
    case ErrorKind::kNotOnBoundary: return "not-on-boundary";
    case ErrorKind::kFile: return "file-error";
    case ErrorKind::kInternal: return "internal-error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool ok, ErrorKind kind, const std::string& what) {
  if (!ok) throw Error(kind, what);
}

/// Runs `fn(shard)` for every shard index in [0, num_shards) on up to
/// `threads` workers. Shards are claimed in a fixed round-robin pattern, so
/// per-shard outputs never depend on the worker count; callers merge them in
/// shard order.
template <typename Fn>
void for_each_shard(std::size_t num_shards, unsigned threads, Fn&& fn) {
  if (threads <= 1 || num_shards <= 1) {
    for (std::size_t s = 0; s < num_shards; ++s) fn(s);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, num_shards);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t s = w; s < num_shards; s += workers) fn(s);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Process-wide default worker count, set once by front ends.
inline unsigned& default_threads() {
  static unsigned threads = 1;
  return threads;
}

}  // namespace hcx
