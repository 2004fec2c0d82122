#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace xmlkit {

// Toolkit version stamped into every report.
inline constexpr const char* kVersion = "0.1.0";

// Error raised for malformed input data (bad CSV, dimension mismatch, ...).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Error raised when a numerical procedure fails (divergence, singularity).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Deterministic randomness.
//
// All randomness in the toolkit flows through this generator so that a run is
// reproducible bit-for-bit from a single master seed, independent of the
// platform's standard-library distributions. The core step is splitmix64.
// ---------------------------------------------------------------------------

inline constexpr const char* kRngAlgorithm = "splitmix64-v1";

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derive an independent stream seed for a numbered subtask.
// Injective in task_index for any fixed seed (splitmix64 is a bijection on
// the state, and distinct indices give distinct states).
inline std::uint64_t derive_subseed(std::uint64_t seed, std::uint64_t task_index) {
  std::uint64_t s = seed ^ (task_index * 0xd6e8feb86659fd93ULL + 0xa0761d6478bd642fULL);
  return splitmix64(s);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound). Lemire's multiply-shift, no rejection
  // needed at the bias levels relevant here (bound << 2^64).
  std::size_t uniform_index(std::size_t bound) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

  // Standard normal via Box-Muller (one value per call, no caching, so the
  // consumed stream length is predictable).
  double normal();

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = uniform_index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
};

// Exact sum of doubles (Shewchuk expansion). The result depends only on the
// multiset of inputs, not their order, which makes full-batch gradients
// invariant to row permutation.
double exact_sum(const std::vector<double>& values);

// ---------------------------------------------------------------------------
// Value types shared by every module.
// ---------------------------------------------------------------------------

struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // dense, row-major
  std::vector<std::string> feature_names;

  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  std::vector<double> row(std::size_t r) const {
    return std::vector<double>(values.begin() + static_cast<std::ptrdiff_t>(r * cols),
                               values.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols));
  }
  void validate() const;
};

struct LabelVector {
  std::vector<int> labels;  // 0 = benign, 1 = malignant
  std::size_t size() const { return labels.size(); }
};

struct Dataset {
  FeatureMatrix x;
  LabelVector y;

  std::size_t size() const { return y.size(); }
  // Rows of this dataset selected by index, in the given order.
  Dataset subset(const std::vector<std::size_t>& indices) const;
};

// Uniform probability-prediction contract. Every trained model satisfies it
// and it is the only surface the explainers see.
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual double predict_proba(const std::vector<double>& x) const = 0;
  int predict(const std::vector<double>& x) const {
    return predict_proba(x) >= 0.5 ? 1 : 0;
  }
};

}  // namespace xmlkit
