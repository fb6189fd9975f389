#pragma once

#include <cstdint>

#include "minirel/dataset.hpp"

namespace minirel {

// Deterministic census-like table: numeric and categorical columns, an
// "income" target, and a "race" column where the minority rate is roughly
// 15% independent of the features. Mirrors the structure that makes plain
// k-means produce clusters the majority group dominates everywhere.
RawTable synthetic_census(std::size_t rows, std::uint64_t seed);

// Two well-separated Gaussian-ish blobs in R^dim, blob id as the sensitive
// group; handy for toy runs and smoke tests.
RawTable synthetic_blobs(std::size_t rows_per_blob, int blobs, int dim, double separation,
                         std::uint64_t seed);

}  // namespace minirel
