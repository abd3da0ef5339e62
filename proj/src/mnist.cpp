#include "ocboost/mnist.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <string>

#include "ocboost/errors.hpp"
#include "ocboost/weak_learners.hpp"

namespace ocboost {

namespace {

constexpr std::uint32_t kImageMagic = 2051;
constexpr std::uint32_t kLabelMagic = 2049;

std::uint32_t read_be32(std::istream& in, std::size_t offset, const char* what) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4))
        throw FormatError(std::string("IDX: truncated ") + what + " at byte offset " + std::to_string(offset));
    return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) | (std::uint32_t(b[2]) << 8) | b[3];
}

void expect_magic(std::uint32_t got, std::uint32_t want) {
    if (got != want)
        throw FormatError("IDX: bad magic " + std::to_string(got) + " at byte offset 0, expected " +
                          std::to_string(want));
}

std::uint32_t header_count(std::istream& in, std::uint32_t magic) {
    expect_magic(read_be32(in, 0, "magic"), magic);
    return read_be32(in, 4, "count");
}

}  // namespace

IdxImages read_idx_images(std::istream& in, std::size_t max_count) {
    expect_magic(read_be32(in, 0, "magic"), kImageMagic);
    const std::size_t count = read_be32(in, 4, "image count");
    IdxImages out;
    out.rows = read_be32(in, 8, "row count");
    out.cols = read_be32(in, 12, "column count");
    const std::size_t size = out.rows * out.cols;
    const std::size_t take = max_count ? std::min(count, max_count) : count;
    out.pixels.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        std::vector<std::uint8_t> img(size);
        if (!in.read(reinterpret_cast<char*>(img.data()), static_cast<std::streamsize>(size)))
            throw FormatError("IDX: image data truncated at byte offset " + std::to_string(16 + i * size) +
                              " (image " + std::to_string(i) + " of " + std::to_string(count) + ")");
        out.pixels.push_back(std::move(img));
    }
    if (take == count) {
        in.peek();
        if (!in.eof()) throw FormatError("IDX: trailing bytes after " + std::to_string(count) + " images");
    }
    return out;
}

std::vector<std::uint8_t> read_idx_labels(std::istream& in, std::size_t max_count) {
    expect_magic(read_be32(in, 0, "magic"), kLabelMagic);
    const std::size_t count = read_be32(in, 4, "label count");
    const std::size_t take = max_count ? std::min(count, max_count) : count;
    std::vector<std::uint8_t> labels(take);
    if (!in.read(reinterpret_cast<char*>(labels.data()), static_cast<std::streamsize>(take)))
        throw FormatError("IDX: label data truncated at byte offset " + std::to_string(8 + in.gcount()));
    if (take == count) {
        in.peek();
        if (!in.eof()) throw FormatError("IDX: trailing bytes after " + std::to_string(count) + " labels");
    }
    return labels;
}

DigitSet load_mnist_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
                        std::size_t max_count) {
    std::ifstream img_in(images, std::ios::binary);
    if (!img_in) throw FormatError("cannot open " + images.string());
    std::ifstream lbl_in(labels, std::ios::binary);
    if (!lbl_in) throw FormatError("cannot open " + labels.string());

    // Header counts must agree even when only a prefix is loaded.
    const auto img_count = header_count(img_in, kImageMagic);
    const auto lbl_count = header_count(lbl_in, kLabelMagic);
    if (img_count != lbl_count)
        throw FormatError("IDX: " + std::to_string(img_count) + " images but " + std::to_string(lbl_count) +
                          " labels (count field at byte offset 4)");
    img_in.seekg(0);
    lbl_in.seekg(0);

    auto raw = read_idx_images(img_in, max_count);
    auto digits = read_idx_labels(lbl_in, max_count);

    DigitSet set;
    set.images.reserve(raw.pixels.size());
    for (const auto& px : raw.pixels) {
        std::vector<double> img(px.size());
        for (std::size_t k = 0; k < px.size(); ++k) img[k] = px[k] / 255.0;
        normalize_image(img);
        set.images.push_back(std::move(img));
    }
    for (auto d : digits) {
        if (d > 9) throw FormatError("IDX: label value " + std::to_string(d) + " is not a digit");
        set.digits.push_back(d);
    }
    return set;
}

std::vector<LabeledExample> one_vs_all(const DigitSet& set, int digit) {
    std::vector<LabeledExample> out;
    out.reserve(set.images.size());
    for (std::size_t i = 0; i < set.images.size(); ++i)
        out.emplace_back(set.images[i], set.digits[i] == digit ? 1 : -1);
    return out;
}

}  // namespace ocboost
