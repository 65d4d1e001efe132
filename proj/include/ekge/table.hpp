// Dense row-major parameter tables. A table is a bank of rows: embedding
// matrices keep one row per vocabulary item, global tensors (cores) are a
// single flattened row. Row granularity is what the sparse optimizer sees.
#pragma once

#include <cassert>
#include <cstdint>
#include <span>
#include <vector>

namespace ekge {

struct Table {
    std::int64_t rows = 0;
    std::int64_t cols = 0;
    // Fans for the uniform init bound sqrt(6/(fan_in+fan_out)); fixed at
    // allocation from the table's logical tensor shape.
    std::int64_t fan_in = 0;
    std::int64_t fan_out = 0;
    std::vector<double> values;

    Table() = default;
    Table(std::int64_t r, std::int64_t c, std::int64_t fi, std::int64_t fo)
        : rows(r), cols(c), fan_in(fi), fan_out(fo), values(static_cast<std::size_t>(r * c), 0.0) {}

    double& at(std::int64_t r, std::int64_t c) {
        assert(r >= 0 && r < rows && c >= 0 && c < cols);
        return values[static_cast<std::size_t>(r * cols + c)];
    }
    double at(std::int64_t r, std::int64_t c) const {
        assert(r >= 0 && r < rows && c >= 0 && c < cols);
        return values[static_cast<std::size_t>(r * cols + c)];
    }
    std::span<double> row(std::int64_t r) {
        assert(r >= 0 && r < rows);
        return {values.data() + r * cols, static_cast<std::size_t>(cols)};
    }
    std::span<const double> row(std::int64_t r) const {
        assert(r >= 0 && r < rows);
        return {values.data() + r * cols, static_cast<std::size_t>(cols)};
    }
    std::int64_t size() const { return rows * cols; }
};

}  // namespace ekge
