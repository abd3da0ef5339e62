#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "ocboost/errors.hpp"
#include "ocboost/mnist.hpp"
#include "ocboost/plot.hpp"

using namespace ocboost;
namespace fs = std::filesystem;

namespace {

void put_u32(std::string& s, std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) s.push_back(static_cast<char>((v >> shift) & 0xff));
}

std::string image_file(std::uint32_t count, std::uint32_t rows, std::uint32_t cols, std::size_t pixel_bytes) {
    std::string s;
    put_u32(s, 2051);
    put_u32(s, count);
    put_u32(s, rows);
    put_u32(s, cols);
    for (std::size_t i = 0; i < pixel_bytes; ++i) s.push_back(static_cast<char>(i % 256));
    return s;
}

std::string label_file(std::initializer_list<std::uint8_t> labels, std::uint32_t count) {
    std::string s;
    put_u32(s, 2049);
    put_u32(s, count);
    for (auto l : labels) s.push_back(static_cast<char>(l));
    return s;
}

fs::path write_temp(const std::string& name, const std::string& bytes) {
    const auto p = fs::temp_directory_path() / ("ocboost_test_" + name);
    std::ofstream(p, std::ios::binary) << bytes;
    return p;
}

const std::string kSynthHeader = "example_index,learner,K,convention,seed,approx_error\n";

}  // namespace

TEST_CASE("IDX image header") {
    const std::string bytes("\x00\x00\x08\x03\x00\x00\x00\x02\x00\x00\x00\x1c\x00\x00\x00\x1c", 16);
    CHECK(bytes == image_file(2, 28, 28, 0));
    std::istringstream in(image_file(2, 28, 28, 2 * 784), std::ios::binary);
    const auto imgs = read_idx_images(in);
    CHECK(imgs.rows == 28);
    CHECK(imgs.cols == 28);
    REQUIRE(imgs.pixels.size() == 2);
    CHECK(imgs.pixels[1][0] == (784 % 256));
}

TEST_CASE("IDX labels") {
    std::istringstream in(label_file({5, 0}, 2));
    CHECK(read_idx_labels(in) == std::vector<std::uint8_t>{5, 0});
    std::istringstream prefix(label_file({5, 0, 7}, 3));
    CHECK(read_idx_labels(prefix, 2) == std::vector<std::uint8_t>{5, 0});
}

TEST_CASE("IDX errors name the offset") {
    auto message = [](auto&& fn) {
        try {
            fn();
        } catch (const FormatError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    std::string wrong = image_file(1, 2, 2, 4);
    wrong[3] = 0x01;
    std::istringstream bad_magic(wrong);
    CHECK(message([&] { read_idx_images(bad_magic); }).find("offset 0") != std::string::npos);

    std::istringstream truncated(image_file(2, 2, 2, 6));
    CHECK(message([&] { read_idx_images(truncated); }).find("offset 20") != std::string::npos);

    std::istringstream short_labels(label_file({1}, 3));
    CHECK(message([&] { read_idx_labels(short_labels); }).find("offset 9") != std::string::npos);

    std::istringstream trailing(label_file({1, 2, 3}, 2));
    CHECK_THROWS_AS(read_idx_labels(trailing), FormatError);

    std::istringstream header_only(std::string("\x00\x00\x08", 3));
    CHECK_THROWS_AS(read_idx_images(header_only), FormatError);
}

TEST_CASE("load_mnist_idx") {
    const auto imgs = write_temp("imgs", image_file(2, 2, 2, 8));
    const auto labels = write_temp("labels", label_file({3, 9}, 2));
    const auto set = load_mnist_idx(imgs, labels);
    REQUIRE(set.images.size() == 2);
    CHECK(set.digits == std::vector<int>{3, 9});
    double mean = 0.0;
    for (double v : set.images[0]) mean += v;
    CHECK(std::abs(mean) < 1e-12);

    const auto ova = one_vs_all(set, 9);
    CHECK(ova[0].label() == -1);
    CHECK(ova[1].label() == 1);

    const auto mismatch = write_temp("labels3", label_file({3, 9, 1}, 3));
    CHECK_THROWS_AS(load_mnist_idx(imgs, mismatch), FormatError);
    const auto not_digit = write_temp("labels_bad", label_file({3, 12}, 2));
    CHECK_THROWS_AS(load_mnist_idx(imgs, not_digit), FormatError);
    CHECK_THROWS_AS(load_mnist_idx(imgs, fs::temp_directory_path() / "ocboost_missing"), FormatError);
}

TEST_CASE("real MNIST headers" * doctest::skip(!fs::exists(fs::path(OCB_MNIST_DIR) / "t10k-labels-idx1-ubyte"))) {
    std::ifstream in(fs::path(OCB_MNIST_DIR) / "t10k-images-idx3-ubyte", std::ios::binary);
    char head[16];
    in.read(head, 16);
    CHECK(std::string(head, 16) == std::string("\x00\x00\x08\x03\x00\x00\x27\x10\x00\x00\x00\x1c\x00\x00\x00\x1c", 16));
    const auto set = load_mnist_idx(fs::path(OCB_MNIST_DIR) / "t10k-images-idx3-ubyte",
                                    fs::path(OCB_MNIST_DIR) / "t10k-labels-idx1-ubyte");
    CHECK(set.images.size() == 10000);
    CHECK(set.images[0].size() == 784);
    // first test digit is a 7, second a 2
    CHECK(set.digits[0] == 7);
    CHECK(set.digits[1] == 2);
}

TEST_CASE("plot emission") {
    const std::string csv = kSynthHeader +
                            "1,ocb,5,theorem_consistent,1,0.2\n"
                            "2,ocb,5,theorem_consistent,1,0.1\n"
                            "1,oza,0,averaged,1,0.3\n"
                            "2,oza,0,averaged,1,0.25\n"
                            "1,ocb,5,theorem_consistent,2,0.4\n";
    std::istringstream in(csv);
    std::ostringstream svg;
    emit_plot(in, svg, {"demo", 640, 400});
    const auto text = svg.str();
    auto count = [&](const std::string& needle) {
        std::size_t n = 0;
        for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
        return n;
    };
    CHECK(count("class=\"series\"") == 2);
    CHECK(count("class=\"legend\"") == 2);
    CHECK(text.find("ocb K=5 theorem_consistent") != std::string::npos);
    CHECK(text.find("<svg") != std::string::npos);

    std::istringstream again(csv);
    std::ostringstream svg2;
    emit_plot(again, svg2, {"demo", 640, 400});
    CHECK(svg2.str() == text);

    std::istringstream mnist("examples_seen,learner,digit,test_error,approx_error,ova_error\n"
                             "1000,batch,0,0.1,0,0.2\n1000,oza:averaged,0,0.1,0.05,0.25\n");
    std::ostringstream svg3;
    emit_plot(mnist, svg3);
    CHECK(svg3.str().find("one-vs-all test error") != std::string::npos);

    std::istringstream empty(kSynthHeader);
    std::ostringstream sink;
    CHECK_THROWS_AS(emit_plot(empty, sink), FormatError);
    std::istringstream unknown("a,b,c\n1,2,3\n");
    try {
        emit_plot(unknown, sink);
        FAIL("expected a schema error");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("example_index,learner,K,convention,seed,approx_error") != std::string::npos);
    }
}
