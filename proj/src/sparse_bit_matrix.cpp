#include "ldgm/sparse_bit_matrix.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ldgm {

SparseBitMatrix::SparseBitMatrix(std::size_t rows, std::size_t cols,
                                 std::vector<std::vector<std::uint32_t>> row_support)
    : rows_(rows), cols_(cols), row_support_(std::move(row_support)) {
    if (row_support_.size() != rows_)
        throw std::invalid_argument("SparseBitMatrix: row count mismatch");
    for (auto &support : row_support_) {
        if (!std::is_sorted(support.begin(), support.end()))
            std::sort(support.begin(), support.end());
        if (std::adjacent_find(support.begin(), support.end()) != support.end())
            throw std::invalid_argument("SparseBitMatrix: duplicate column index in row");
        if (!support.empty() && support.back() >= cols_)
            throw std::invalid_argument("SparseBitMatrix: column index out of range");
    }
}

std::size_t SparseBitMatrix::nnz() const {
    return std::accumulate(row_support_.begin(), row_support_.end(), std::size_t{0},
                           [](std::size_t acc, const auto &r) { return acc + r.size(); });
}

std::vector<std::vector<std::uint32_t>> SparseBitMatrix::col_support() const {
    std::vector<std::vector<std::uint32_t>> cols(cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::uint32_t j : row_support_[i]) cols[j].push_back(static_cast<std::uint32_t>(i));
    return cols;
}

SparseBitMatrix SparseBitMatrix::transposed() const {
    return SparseBitMatrix(cols_, rows_, col_support());
}

BitVec SparseBitMatrix::mul_left(const BitVec &x) const {
    BitVec y(cols_, 0);
    mul_left_acc(x, y);
    return y;
}

void SparseBitMatrix::mul_left_acc(const BitVec &x, BitVec &acc) const {
    if (x.size() != rows_ || acc.size() != cols_)
        throw std::invalid_argument("mul_left: size mismatch");
    for (std::size_t i = 0; i < rows_; ++i) {
        if (!x[i]) continue;
        for (std::uint32_t j : row_support_[i]) acc[j] ^= 1u;
    }
}

BitVec SparseBitMatrix::mul_right(const BitVec &c) const {
    if (c.size() != cols_) throw std::invalid_argument("mul_right: size mismatch");
    BitVec s(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i) {
        std::uint8_t acc = 0;
        for (std::uint32_t j : row_support_[i]) acc ^= c[j];
        s[i] = acc;
    }
    return s;
}

void write_matrix(const SparseBitMatrix &m, std::ostream &out) {
    out << "ldgm-matrix v1 rows=" << m.rows() << " cols=" << m.cols() << " nnz=" << m.nnz()
        << "\n";
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::uint32_t j : m.row(i)) out << i << " " << j << "\n";
}

void write_matrix_file(const SparseBitMatrix &m, const std::string &path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_matrix(m, out);
    if (!out) throw std::runtime_error("write failed: " + path);
}

SparseBitMatrix read_matrix(std::istream &in) {
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("matrix file: missing header");
    std::istringstream hs(header);
    std::string magic, version, rows_kv, cols_kv, nnz_kv;
    hs >> magic >> version >> rows_kv >> cols_kv >> nnz_kv;
    if (magic != "ldgm-matrix" || version != "v1")
        throw std::runtime_error("matrix file: bad magic/version in header");
    auto parse_kv = [&](const std::string &kv, const char *key) -> std::size_t {
        const std::string prefix = std::string(key) + "=";
        if (kv.rfind(prefix, 0) != 0)
            throw std::runtime_error(std::string("matrix file: expected field ") + key);
        return std::stoull(kv.substr(prefix.size()));
    };
    const std::size_t rows = parse_kv(rows_kv, "rows");
    const std::size_t cols = parse_kv(cols_kv, "cols");
    const std::size_t nnz = parse_kv(nnz_kv, "nnz");

    std::vector<std::vector<std::uint32_t>> support(rows);
    std::size_t count = 0;
    std::size_t r, c;
    while (in >> r >> c) {
        if (r >= rows) throw std::runtime_error("matrix file: row index out of range");
        if (c >= cols) throw std::runtime_error("matrix file: col index out of range");
        support[r].push_back(static_cast<std::uint32_t>(c));
        ++count;
    }
    if (count != nnz) throw std::runtime_error("matrix file: nnz mismatch with header");
    return SparseBitMatrix(rows, cols, std::move(support));
}

SparseBitMatrix read_matrix_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open matrix file: " + path);
    return read_matrix(in);
}

} // namespace ldgm
