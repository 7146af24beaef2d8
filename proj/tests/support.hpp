#pragma once

// Shared helpers for the test binaries: random inputs and scratch files.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "osmlelm/osmlelm.hpp"

namespace osmlelm::testing {

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                            double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Matrix m(rows, cols);
    for (double& v : m.values()) v = dist(rng);
    return m;
}

inline LabelMatrix random_labels(std::size_t rows, std::size_t labels, std::mt19937_64& rng,
                                 double p = 0.4) {
    std::bernoulli_distribution coin(p);
    LabelMatrix y(rows, labels);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t l = 0; l < labels; ++l) y.set(r, l, coin(rng));
    return y;
}

/// Features uniform on [-1, 1]; each label is the sign of a random linear
/// function of the features plus noise, so the data is learnable.
inline LabeledDataset synthetic_dataset(std::size_t n, std::size_t d, std::size_t m,
                                        std::uint64_t seed, double noise = 0.3) {
    std::mt19937_64 rng(seed);
    LabeledDataset ds;
    ds.features = random_matrix(n, d, rng);
    const Matrix w = random_matrix(d, m, rng);
    std::normal_distribution<double> eps(0.0, noise);
    ds.labels = LabelMatrix(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t l = 0; l < m; ++l) {
            double z = 0.0;
            for (std::size_t k = 0; k < d; ++k) z += ds.features(i, k) * w(k, l);
            ds.labels.set(i, l, z + eps(rng) > 0.0);
        }
    }
    return ds;
}

/// Fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
public:
    explicit ScratchDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("osmlelm-" + tag + "-" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~ScratchDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;

    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace osmlelm::testing
