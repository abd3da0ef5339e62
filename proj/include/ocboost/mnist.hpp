#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "ocboost/core.hpp"

namespace ocboost {

struct IdxImages {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::vector<std::uint8_t>> pixels;
};

// IDX3 images: big-endian magic 2051, count, rows, cols, then row-major bytes.
// `max_count` (0 = all) stops reading early; the header count is still validated against the stream size.
IdxImages read_idx_images(std::istream& in, std::size_t max_count = 0);
// IDX1 labels: big-endian magic 2049, count, then one byte per label.
std::vector<std::uint8_t> read_idx_labels(std::istream& in, std::size_t max_count = 0);

struct DigitSet {
    std::vector<std::vector<double>> images;  // scaled to [0,1], then standardised per image
    std::vector<int> digits;
};

DigitSet load_mnist_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
                        std::size_t max_count = 0);

// Binary relabelling: +1 for `digit`, -1 otherwise.
std::vector<LabeledExample> one_vs_all(const DigitSet& set, int digit);

}  // namespace ocboost
