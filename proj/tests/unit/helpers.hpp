#ifndef RDTFG_TEST_HELPERS_HPP
#define RDTFG_TEST_HELPERS_HPP

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <unistd.h>

#include "rdtfg/error.hpp"
#include "rdtfg/metrics.hpp"

namespace rdtfg::test {

inline std::vector<ScoredSample> samples(const std::vector<double>& scores, const std::vector<int>& labels) {
    std::vector<ScoredSample> out;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        ScoredSample s;
        s.transaction_id = "t" + std::to_string(i);
        s.score = scores[i];
        s.label = labels[i];
        s.timestamp = static_cast<std::int64_t>(i);
        out.push_back(s);
    }
    return out;
}

inline ImportanceVector importance(const std::vector<double>& values) {
    ImportanceVector v;
    v.values.resize(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) {
        v.features.push_back("f" + std::to_string(i));
        v.values(static_cast<Eigen::Index>(i)) = values[i];
    }
    return v;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("rdtfg_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <typename F>
ErrorKind error_kind_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected rdtfg::Error";
    return ErrorKind::InvalidArgument;
}

} // namespace rdtfg::test

#endif
