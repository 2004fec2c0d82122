#include "xmlkit/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace xmlkit {

namespace {

constexpr std::size_t kWdbcFeatureCount = 30;

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // strip surrounding whitespace and CR
    std::size_t b = cell.find_first_not_of(" \t\r");
    std::size_t e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return out;
}

std::optional<double> parse_double(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

Dataset load_wdbc_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);

  Dataset d;
  d.x.cols = kWdbcFeatureCount;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> cells = split_line(line);
    if (first) {
      first = false;
      // Header auto-detection: a header row has a non-numeric third cell.
      if (cells.size() >= 3 && !parse_double(cells[2])) {
        if (cells.size() != kWdbcFeatureCount + 2)
          throw DataError("header row " + std::to_string(line_no) + " has " +
                          std::to_string(cells.size()) + " columns, expected 32");
        d.x.feature_names.assign(cells.begin() + 2, cells.end());
        continue;
      }
    }
    if (cells.size() != kWdbcFeatureCount + 2)
      throw DataError("row " + std::to_string(line_no) + " has " +
                      std::to_string(cells.size()) + " columns, expected 32");
    const std::string& diag = cells[1];
    if (diag == "M")
      d.y.labels.push_back(1);
    else if (diag == "B")
      d.y.labels.push_back(0);
    else
      throw DataError("row " + std::to_string(line_no) + ": diagnosis '" + diag +
                      "' not in {M, B}");
    for (std::size_t c = 0; c < kWdbcFeatureCount; ++c) {
      auto v = parse_double(cells[c + 2]);
      if (!v || !std::isfinite(*v))
        throw DataError("row " + std::to_string(line_no) + ": feature cell '" +
                        cells[c + 2] + "' is not a finite number");
      d.x.values.push_back(*v);
    }
    ++d.x.rows;
  }
  if (d.x.rows == 0) throw DataError("no data rows in " + path);
  if (d.x.feature_names.empty()) {
    for (std::size_t c = 0; c < kWdbcFeatureCount; ++c)
      d.x.feature_names.push_back("f" + std::to_string(c));
  }
  return d;
}

Scaler fit_minmax(const FeatureMatrix& train) {
  if (train.rows == 0) throw DataError("cannot fit scaler on empty matrix");
  Scaler s;
  s.min.assign(train.cols, std::numeric_limits<double>::infinity());
  s.max.assign(train.cols, -std::numeric_limits<double>::infinity());
  for (std::size_t r = 0; r < train.rows; ++r) {
    for (std::size_t c = 0; c < train.cols; ++c) {
      double v = train.at(r, c);
      s.min[c] = std::min(s.min[c], v);
      s.max[c] = std::max(s.max[c], v);
    }
  }
  return s;
}

FeatureMatrix apply_minmax(const Scaler& s, const FeatureMatrix& x) {
  if (x.cols != s.min.size())
    throw DataError("scaler fitted on " + std::to_string(s.min.size()) +
                    " columns, matrix has " + std::to_string(x.cols));
  FeatureMatrix out = x;
  for (std::size_t c = 0; c < x.cols; ++c) {
    double range = s.max[c] - s.min[c];
    for (std::size_t r = 0; r < x.rows; ++r) {
      out.at(r, c) = range == 0.0 ? 0.0 : (x.at(r, c) - s.min[c]) / range;
    }
  }
  return out;
}

void SplitSpec::validate() const {
  if (ratios.size() != 2 && ratios.size() != 3)
    throw DataError("split spec needs 2 or 3 fractions");
  double sum = 0.0;
  for (double f : ratios) {
    if (f <= 0.0) throw DataError("split fractions must be positive");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw DataError("split fractions must sum to 1");
}

std::vector<std::vector<std::size_t>> stratified_split_indices(const LabelVector& y,
                                                               const SplitSpec& spec) {
  spec.validate();
  const std::size_t parts = spec.ratios.size();
  std::vector<std::vector<std::size_t>> by_class(2);
  for (std::size_t i = 0; i < y.size(); ++i) by_class[static_cast<std::size_t>(y.labels[i])].push_back(i);

  std::vector<std::vector<std::size_t>> out(parts);
  for (std::size_t cls = 0; cls < 2; ++cls) {
    auto& members = by_class[cls];
    if (members.empty()) throw DataError("class " + std::to_string(cls) + " is empty");
    Rng rng(derive_subseed(spec.seed, cls));
    rng.shuffle(members);

    std::vector<std::size_t> counts(parts);
    std::size_t assigned = 0;
    for (std::size_t p = 0; p < parts; ++p) {
      counts[p] = static_cast<std::size_t>(std::floor(spec.ratios[p] * static_cast<double>(members.size())));
      if (counts[p] == 0)
        throw DataError("split fraction allocates zero samples of class " + std::to_string(cls));
      assigned += counts[p];
    }
    // Remainders go to partitions in declaration order (train first).
    for (std::size_t p = 0; assigned < members.size(); p = (p + 1) % parts) {
      ++counts[p];
      ++assigned;
    }
    std::size_t pos = 0;
    for (std::size_t p = 0; p < parts; ++p)
      for (std::size_t i = 0; i < counts[p]; ++i) out[p].push_back(members[pos++]);
  }
  for (auto& part : out) std::sort(part.begin(), part.end());
  return out;
}

std::vector<Dataset> stratified_split(const Dataset& d, const SplitSpec& spec) {
  auto idx = stratified_split_indices(d.y, spec);
  std::vector<Dataset> out;
  out.reserve(idx.size());
  for (auto& part : idx) out.push_back(d.subset(part));
  return out;
}

FoldAssignment stratified_kfold(const LabelVector& y, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw DataError("k-fold needs k >= 2");
  std::vector<std::vector<std::size_t>> by_class(2);
  for (std::size_t i = 0; i < y.size(); ++i) by_class[static_cast<std::size_t>(y.labels[i])].push_back(i);
  for (std::size_t cls = 0; cls < 2; ++cls)
    if (by_class[cls].size() < k)
      throw DataError("class " + std::to_string(cls) + " has fewer samples than k");

  FoldAssignment fa;
  fa.k = k;
  fa.fold_of.assign(y.size(), 0);
  for (std::size_t cls = 0; cls < 2; ++cls) {
    auto& members = by_class[cls];
    Rng rng(derive_subseed(seed, cls));
    rng.shuffle(members);
    for (std::size_t i = 0; i < members.size(); ++i) fa.fold_of[members[i]] = i % k;
  }
  return fa;
}

std::vector<std::size_t> FoldAssignment::train_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i)
    if (fold_of[i] != fold) out.push_back(i);
  return out;
}

std::vector<std::size_t> FoldAssignment::test_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i)
    if (fold_of[i] == fold) out.push_back(i);
  return out;
}

}  // namespace xmlkit
