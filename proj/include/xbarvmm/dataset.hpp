#pragma once

#include <string>
#include <vector>

#include "xbarvmm/matrix.hpp"
#include "xbarvmm/rng.hpp"

namespace xbarvmm {

struct Dataset {
    Matrix features;          // samples × F
    std::vector<int> labels;  // B → 0, M → 1
    int samples() const { return features.rows; }
    int feature_count() const { return features.cols; }
};

inline constexpr int kWdbcSamples = 569;
inline constexpr int kWdbcFeatures = 30;
inline constexpr int kWdbcBenign = 357;
inline constexpr int kWdbcMalignant = 212;

// WDBC CSV layout: id, diagnosis (M/B), 30 real features. The id column is
// dropped. When the file has the canonical 569 rows, class counts are
// validated against 357 B / 212 M. Malformed rows raise DataError with the
// line number.
Dataset load_wdbc(const std::string& path);

struct Split {
    Dataset train;
    Dataset test;
};

// Seeded shuffle then split; train gets floor(fraction × n) samples.
Split split_dataset(const Dataset& data, double fraction, Rng& rng);

}  // namespace xbarvmm
