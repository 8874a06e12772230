#pragma once

// Dense row-major matrices, seeded randomness, and the handful of numeric
// helpers shared by every other header in this library.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace csl {

// ---------------------------------------------------------------------------
// Matrix

/// Row-major dense matrix of doubles. All experiment state in this library is
/// 64-bit: the test suite leans on finite-difference gradient checks at 1e-5
/// relative tolerance, which single precision cannot support.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m;
    m.rows_ = rows.size();
    m.cols_ = rows.size() == 0 ? 0 : rows.begin()->size();
    m.data_.reserve(m.rows_ * m.cols_);
    for (const auto& r : rows) {
      if (r.size() != m.cols_) throw std::invalid_argument("ragged rows");
      m.data_.insert(m.data_.end(), r.begin(), r.end());
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](double v) { return std::isfinite(v); });
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

// ---------------------------------------------------------------------------
// Rng

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Deterministic random generator: a std::mt19937_64 engine with hand-rolled
/// distributions. The engine's output sequence is pinned by the standard, and
/// keeping the int/real/normal transforms in this header (instead of using
/// std::*_distribution, whose algorithms are implementation-defined) makes
/// every experiment bit-reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1), 53 bits of randomness.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer on [lo, hi], inclusive, unbiased (rejection sampling).
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
    std::uint64_t range = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    if (range == 0) return static_cast<std::int64_t>(next_u64());  // full 64-bit span
    std::uint64_t min_accept = (0 - range) % range;  // 2^64 mod range
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x < min_accept);
    return lo + static_cast<std::int64_t>(x % range);
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller (cosine branch); two uniforms per draw.
  double normal() {
    double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  /// k distinct indices drawn uniformly from [0, n), in draw order.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k) {
    if (k > n) throw std::invalid_argument("sample_without_replacement: k > n");
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    std::vector<std::size_t> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t j = static_cast<std::size_t>(
          uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(n - 1)));
      std::swap(pool[i], pool[j]);
      out.push_back(pool[i]);
    }
    return out;
  }

  /// Independent child stream; a pure function of this generator's seed and
  /// the stream id, unaffected by draws already made.
  Rng child(std::uint64_t stream) const {
    return Rng(splitmix64(seed_ ^ splitmix64(stream + 0x51ED270EEA02D8Bull)));
  }

  /// Engine state as text, for checkpointing. Pairs with set_state.
  std::string state() const {
    std::ostringstream os;
    os << seed_ << ' ' << engine_;
    return os.str();
  }

  void set_state(const std::string& s) {
    std::istringstream is(s);
    is >> seed_ >> engine_;
    if (!is) throw std::runtime_error("Rng: bad state string");
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// Pick an index from a discrete distribution (probabilities summing to ~1).
/// Entries with probability exactly 0 are never selected.
inline std::size_t sample_discrete(std::span<const double> probs, Rng& rng) {
  if (probs.empty()) throw std::invalid_argument("sample_discrete: empty");
  double u = rng.uniform();
  double acc = 0.0;
  std::size_t last_positive = probs.size();
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) last_positive = i;
    acc += probs[i];
    if (u < acc && probs[i] > 0.0) return i;
  }
  if (last_positive == probs.size())
    throw std::invalid_argument("sample_discrete: all probabilities zero");
  return last_positive;  // u landed in the trailing rounding gap
}

// ---------------------------------------------------------------------------
// Row normalization and log-sum-exp

struct RowNormalized {
  Matrix matrix;
  std::vector<std::size_t> zero_rows;  // rows passed through unchanged
};

/// Scale every row to unit Euclidean norm. Zero rows cannot be normalized;
/// they pass through unchanged and are reported in `zero_rows` so the caller
/// can decide (degenerate embeddings do occur at initialization).
inline RowNormalized normalize_rows(const Matrix& m) {
  if (!m.all_finite()) throw std::invalid_argument("non-finite value");
  RowNormalized out;
  out.matrix = m;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double n = norm(m.row(r));
    if (n == 0.0) {
      out.zero_rows.push_back(r);
      continue;
    }
    auto row = out.matrix.row(r);
    for (double& v : row) v /= n;
  }
  return out;
}

/// log(sum(exp(v))) with max-subtraction stability.
inline double log_sum_exp(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("log_sum_exp: empty sequence");
  double m = *std::max_element(values.begin(), values.end());
  double s = 0.0;
  for (double v : values) s += std::exp(v - m);
  return m + std::log(s);
}

// ---------------------------------------------------------------------------
// Formatting

/// Shortest decimal form that parses back to the identical double. Used for
/// every CSV cell so that reruns produce byte-identical files.
inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace csl
