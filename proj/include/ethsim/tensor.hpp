// tensor.hpp: operators on subsets of tensor cells of H = (C^d)^{⊗n}
//
// Cell 0 is the most significant digit of the global basis index.

#pragma once

#include "ethsim/operator.hpp"

#include <cstddef>
#include <vector>

namespace ethsim {

using CellSet = std::vector<int>;  // sorted, unique cell indices

class CellLayout {
public:
    CellLayout(int n_cells, int cell_dim);

    int n_cells() const { return n_cells_; }
    int cell_dim() const { return cell_dim_; }
    Index dim() const { return dim_; }
    Index dim_of(const CellSet& cells) const;

    /// Global index for (sub-index on `cells`, sub-index on the complement).
    /// Both sub-indices use the same cell significance order as the global one.
    Index compose(const CellSet& cells, Index inner, Index outer) const;

    /// op on H_cells ⊗ 1 on the rest.
    Operator embed(const Operator& local, const CellSet& cells) const;

    /// Partial trace onto H_cells.
    Operator reduce(const Operator& global, const CellSet& cells) const;

    /// (local ⊗ 1) * m without forming the global operator.
    Operator apply_left(const Operator& local, const CellSet& cells, const Operator& m) const;

    /// m * (local ⊗ 1).
    Operator apply_right(const Operator& m, const Operator& local, const CellSet& cells) const;

    /// If `global` = X ⊗ 1 on the complement of `cells`, returns X; `residual` receives
    /// ||global - embed(X)||_HS.
    Operator extract(const Operator& global, const CellSet& cells, double* residual = nullptr) const;

    /// Re-express an operator on H_from as an operator on H_to, where from ⊆ to.
    Operator widen(const Operator& local, const CellSet& from, const CellSet& to) const;

private:
    std::vector<Index> index_table(const CellSet& cells) const;

    int n_cells_;
    int cell_dim_;
    Index dim_;
};

CellSet complement(const CellSet& cells, int n_cells);
CellSet set_union(const CellSet& a, const CellSet& b);
CellSet set_difference(const CellSet& a, const CellSet& b);
CellSet set_intersection(const CellSet& a, const CellSet& b);
bool is_subset(const CellSet& a, const CellSet& b);

}  // namespace ethsim
