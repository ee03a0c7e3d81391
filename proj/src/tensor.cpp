#include "ethsim/tensor.hpp"
#include "ethsim/policy.hpp"

#include <algorithm>
#include <iterator>

namespace ethsim {

namespace {

Index ipow(Index base, int exp) {
    Index r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace

CellLayout::CellLayout(int n_cells, int cell_dim)
    : n_cells_(n_cells), cell_dim_(cell_dim), dim_(ipow(cell_dim, n_cells)) {
    if (n_cells < 0 || cell_dim < 1) throw InvalidInput("CellLayout: need n_cells >= 0 and cell_dim >= 1");
}

Index CellLayout::dim_of(const CellSet& cells) const {
    return ipow(cell_dim_, static_cast<int>(cells.size()));
}

Index CellLayout::compose(const CellSet& cells, Index inner, Index outer) const {
    const CellSet rest = complement(cells, n_cells_);
    std::vector<int> digit(n_cells_, 0);
    for (auto it = cells.rbegin(); it != cells.rend(); ++it) {
        digit[*it] = static_cast<int>(inner % cell_dim_);
        inner /= cell_dim_;
    }
    for (auto it = rest.rbegin(); it != rest.rend(); ++it) {
        digit[*it] = static_cast<int>(outer % cell_dim_);
        outer /= cell_dim_;
    }
    Index g = 0;
    for (int c = 0; c < n_cells_; ++c) g = g * cell_dim_ + digit[c];
    return g;
}

// table[inner * R + outer] = global index
std::vector<Index> CellLayout::index_table(const CellSet& cells) const {
    for (int c : cells)
        if (c < 0 || c >= n_cells_) throw InvalidInput("CellLayout: cell index out of range");
    const CellSet rest = complement(cells, n_cells_);
    const Index r_dim = dim_of(rest);
    std::vector<Index> table(static_cast<std::size_t>(dim_));
    std::vector<int> digit(n_cells_);
    for (Index g = 0; g < dim_; ++g) {
        Index t = g;
        for (int c = n_cells_ - 1; c >= 0; --c) {
            digit[c] = static_cast<int>(t % cell_dim_);
            t /= cell_dim_;
        }
        Index inner = 0, outer = 0;
        for (int c : cells) inner = inner * cell_dim_ + digit[c];
        for (int c : rest) outer = outer * cell_dim_ + digit[c];
        table[static_cast<std::size_t>(inner * r_dim + outer)] = g;
    }
    return table;
}

Operator CellLayout::embed(const Operator& local, const CellSet& cells) const {
    const Index k = dim_of(cells);
    if (local.rows() != k || local.cols() != k) throw InvalidInput("embed: local operator has wrong dimension");
    const Index r_dim = dim_ / k;
    const auto t = index_table(cells);
    Operator out = Operator::Zero(dim_, dim_);
    for (Index a = 0; a < k; ++a)
        for (Index b = 0; b < k; ++b) {
            const cplx v = local(a, b);
            if (v == cplx(0.0)) continue;
            for (Index r = 0; r < r_dim; ++r) out(t[a * r_dim + r], t[b * r_dim + r]) = v;
        }
    return out;
}

Operator CellLayout::reduce(const Operator& global, const CellSet& cells) const {
    if (global.rows() != dim_ || global.cols() != dim_) throw InvalidInput("reduce: operator has wrong dimension");
    const Index k = dim_of(cells);
    const Index r_dim = dim_ / k;
    const auto t = index_table(cells);
    Operator out = Operator::Zero(k, k);
    for (Index a = 0; a < k; ++a)
        for (Index b = 0; b < k; ++b) {
            cplx s = 0.0;
            for (Index r = 0; r < r_dim; ++r) s += global(t[a * r_dim + r], t[b * r_dim + r]);
            out(a, b) = s;
        }
    return out;
}

Operator CellLayout::apply_left(const Operator& local, const CellSet& cells, const Operator& m) const {
    const Index k = dim_of(cells);
    if (local.rows() != k || m.rows() != dim_) throw InvalidInput("apply_left: dimension mismatch");
    const Index r_dim = dim_ / k;
    const auto t = index_table(cells);
    Operator out(dim_, m.cols());
    Operator gathered(k, m.cols());
    for (Index r = 0; r < r_dim; ++r) {
        for (Index a = 0; a < k; ++a) gathered.row(a) = m.row(t[a * r_dim + r]);
        const Operator prod = local * gathered;
        for (Index a = 0; a < k; ++a) out.row(t[a * r_dim + r]) = prod.row(a);
    }
    return out;
}

Operator CellLayout::apply_right(const Operator& m, const Operator& local, const CellSet& cells) const {
    const Index k = dim_of(cells);
    if (local.rows() != k || m.cols() != dim_) throw InvalidInput("apply_right: dimension mismatch");
    const Index r_dim = dim_ / k;
    const auto t = index_table(cells);
    Operator out(m.rows(), dim_);
    Operator gathered(m.rows(), k);
    for (Index r = 0; r < r_dim; ++r) {
        for (Index a = 0; a < k; ++a) gathered.col(a) = m.col(t[a * r_dim + r]);
        const Operator prod = gathered * local;
        for (Index a = 0; a < k; ++a) out.col(t[a * r_dim + r]) = prod.col(a);
    }
    return out;
}

Operator CellLayout::extract(const Operator& global, const CellSet& cells, double* residual) const {
    const Index k = dim_of(cells);
    Operator local = reduce(global, cells) / static_cast<double>(dim_ / k);
    if (residual) *residual = (global - embed(local, cells)).norm();
    return local;
}

Operator CellLayout::widen(const Operator& local, const CellSet& from, const CellSet& to) const {
    if (!is_subset(from, to)) throw InvalidInput("widen: source cells must be a subset of target cells");
    CellSet positions;
    for (int c : from) positions.push_back(static_cast<int>(std::lower_bound(to.begin(), to.end(), c) - to.begin()));
    return CellLayout(static_cast<int>(to.size()), cell_dim_).embed(local, positions);
}

CellSet complement(const CellSet& cells, int n_cells) {
    CellSet out;
    for (int c = 0; c < n_cells; ++c)
        if (!std::binary_search(cells.begin(), cells.end(), c)) out.push_back(c);
    return out;
}

CellSet set_union(const CellSet& a, const CellSet& b) {
    CellSet out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

CellSet set_difference(const CellSet& a, const CellSet& b) {
    CellSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

CellSet set_intersection(const CellSet& a, const CellSet& b) {
    CellSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool is_subset(const CellSet& a, const CellSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace ethsim
