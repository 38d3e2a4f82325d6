#ifndef LDGM_SPARSE_BIT_MATRIX_HPP
#define LDGM_SPARSE_BIT_MATRIX_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ldgm {

using BitVec = std::vector<std::uint8_t>; // entries 0/1

/// Row-sparse binary matrix over GF(2). Each row stores the sorted,
/// duplicate-free column indices of its nonzeros. Immutable once built;
/// safe to share across threads.
class SparseBitMatrix {
  public:
    SparseBitMatrix() = default;
    SparseBitMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), row_support_(rows) {}
    SparseBitMatrix(std::size_t rows, std::size_t cols,
                    std::vector<std::vector<std::uint32_t>> row_support);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const;

    const std::vector<std::uint32_t> &row(std::size_t i) const { return row_support_[i]; }
    const std::vector<std::vector<std::uint32_t>> &row_support() const { return row_support_; }

    /// Column adjacency (per column, the sorted list of row indices).
    std::vector<std::vector<std::uint32_t>> col_support() const;

    SparseBitMatrix transposed() const;

    /// y = x * M over GF(2), |x| = rows, |y| = cols.
    BitVec mul_left(const BitVec &x) const;
    /// Accumulate x * M into acc (XOR), |acc| = cols.
    void mul_left_acc(const BitVec &x, BitVec &acc) const;
    /// s = M * c^T over GF(2), |c| = cols, |s| = rows.
    BitVec mul_right(const BitVec &c) const;

    bool operator==(const SparseBitMatrix &other) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::vector<std::uint32_t>> row_support_;
};

/// Text serialization. Header `ldgm-matrix v1 rows=<r> cols=<c> nnz=<z>`,
/// then one `row col` line per nonzero in lexicographic order. Bit-exact
/// round trip.
void write_matrix(const SparseBitMatrix &m, std::ostream &out);
void write_matrix_file(const SparseBitMatrix &m, const std::string &path);
SparseBitMatrix read_matrix(std::istream &in);
SparseBitMatrix read_matrix_file(const std::string &path);

} // namespace ldgm

#endif
