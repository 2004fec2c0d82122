#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xmlkit/core.hpp"

namespace xmlkit {

// Column-wise Min-Max scaler, fitted on training data only.
struct Scaler {
  std::vector<double> min;
  std::vector<double> max;
};

// Stratified split specification. Two fractions give (train, test), three
// give (train, val, test). Fractions must sum to 1.
struct SplitSpec {
  std::vector<double> ratios;
  std::uint64_t seed = 0;

  void validate() const;
};

struct FoldAssignment {
  std::size_t k = 0;
  std::vector<std::size_t> fold_of;  // fold index per sample, in [0, k)

  std::vector<std::size_t> train_indices(std::size_t fold) const;
  std::vector<std::size_t> test_indices(std::size_t fold) const;
};

// Load a WDBC-format CSV: column 1 = id (dropped), column 2 = diagnosis
// (M -> 1, B -> 0), columns 3..32 = real features. Header auto-detected.
Dataset load_wdbc_csv(const std::string& path);

Scaler fit_minmax(const FeatureMatrix& train);

// Applies (x - min) / (max - min) per column. Degenerate columns (max == min)
// map to 0. Values outside the training range are not clipped.
FeatureMatrix apply_minmax(const Scaler& s, const FeatureMatrix& x);

// Per-class seeded shuffle, floor(fraction * class_count) per partition,
// remainders distributed to partitions in declaration order.
std::vector<std::vector<std::size_t>> stratified_split_indices(const LabelVector& y,
                                                               const SplitSpec& spec);

std::vector<Dataset> stratified_split(const Dataset& d, const SplitSpec& spec);

FoldAssignment stratified_kfold(const LabelVector& y, std::size_t k, std::uint64_t seed);

}  // namespace xmlkit
