// Shared fixtures for the unit and acceptance tests.
#pragma once

#include "uclso/dataset.hpp"
#include "uclso/random.hpp"

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace testsupport {

inline std::filesystem::path data_dir() { return UCLSO_TEST_DATA_DIR; }

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
  public:
    explicit TempDir(const std::string &tag) {
        static std::atomic<unsigned> counter{0};
        const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
        path_ = std::filesystem::temp_directory_path() /
                ("uclso_" + tag + "_" + std::to_string(stamp) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir &) = delete;
    TempDir &operator=(const TempDir &) = delete;
    [[nodiscard]] const std::filesystem::path &path() const { return path_; }

  private:
    std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path &p, const std::string &text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

/// Random dataset with n rows, d features and q labels; label j is positive with probability rates[j].
inline uclso::MultiLabelDataset random_dataset(std::uint64_t seed, std::size_t n, std::size_t d,
                                               const std::vector<double> &rates, double scale = 10.0) {
    uclso::Rng rng(seed);
    uclso::Matrix x(n, d);
    uclso::LabelMatrix y(n, rates.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < d; ++c) x(i, c) = scale * (rng.uniform() - 0.5);
        for (std::size_t j = 0; j < rates.size(); ++j) y.set(i, j, rng.uniform() < rates[j] ? 1 : 0);
    }
    std::vector<std::string> fn, ln;
    for (std::size_t c = 0; c < d; ++c) fn.push_back("f" + std::to_string(c));
    for (std::size_t j = 0; j < rates.size(); ++j) ln.push_back("y" + std::to_string(j));
    return {std::move(x), std::move(y), std::move(fn), std::move(ln)};
}

/// Dataset from explicit rows and a label table.
inline uclso::MultiLabelDataset make_dataset(const std::vector<std::vector<double>> &rows,
                                             const std::vector<std::vector<int>> &labels) {
    uclso::Matrix x;
    for (const auto &r : rows) x.append_row(r);
    uclso::LabelMatrix y(labels.size(), labels.empty() ? 0 : labels[0].size());
    for (std::size_t i = 0; i < labels.size(); ++i)
        for (std::size_t j = 0; j < labels[i].size(); ++j) y.set(i, j, static_cast<std::uint8_t>(labels[i][j]));
    std::vector<std::string> fn, ln;
    for (std::size_t c = 0; c < x.cols(); ++c) fn.push_back("f" + std::to_string(c));
    for (std::size_t j = 0; j < y.cols(); ++j) ln.push_back("y" + std::to_string(j));
    return {std::move(x), std::move(y), std::move(fn), std::move(ln)};
}

}  // namespace testsupport
