// spacetime.hpp: 1+1 causal lattice, foliations and nets of local algebras
//
// A net assigns to every lattice point P a set of tensor cells S_P; the local algebra
// is E_P = B(H_{S_P}) ⊗ 1. In the tensor net each lattice point owns one cell and
// S_P is the closed future cone of P, which makes the finite diminishing-potentialities
// property hold by construction.

#pragma once

#include "ethsim/algebra.hpp"
#include "ethsim/policy.hpp"
#include "ethsim/tensor.hpp"

#include <compare>
#include <string>
#include <vector>

namespace ethsim {

struct Point {
    int tau = 0;
    int x = 0;
    auto operator<=>(const Point&) const = default;
};

std::string to_string(const Point& p);

enum class Relation { past, future, spacelike, equal };

std::string to_string(Relation r);

struct CausalLattice {
    int extent_tau = 1;
    int extent_x = 1;
    int speed = 1;

    void validate() const;
    bool contains(const Point& p) const;
    int size() const { return extent_tau * extent_x; }
    /// Row-major (tau, x) index; the tensor-net cell owned by p.
    int index(const Point& p) const { return p.tau * extent_x + p.x; }
    Point point(int index) const { return {index / extent_x, index % extent_x}; }
    /// Points in canonical order: by tau, then x.
    std::vector<Point> points() const;
};

/// Relation of q to p: `future` means q ≻ p (boundary of the cone included).
Relation causal_relate(const CausalLattice& lattice, const Point& p, const Point& q);

struct Foliation {
    std::vector<std::vector<Point>> leaves;
};

/// Constant-tau slicing.
Foliation foliate(const CausalLattice& lattice);

/// Checks leaf antichains and inter-leaf ordering; returns an empty string when valid.
std::string foliation_defect(const CausalLattice& lattice, const Foliation& f);

class AlgebraNet {
public:
    AlgebraNet(CausalLattice lattice, int cell_dim, int n_cells, std::vector<CellSet> supports);

    const CausalLattice& lattice() const { return lattice_; }
    int cell_dim() const { return layout_.cell_dim(); }
    int n_cells() const { return layout_.n_cells(); }
    const CellLayout& layout() const { return layout_; }
    Index ambient_dim() const { return layout_.dim(); }

    const CellSet& support(const Point& p) const;
    /// Hilbert dimension of H_{S_P}.
    Index local_dim(const Point& p) const { return layout_.dim_of(support(p)); }
    /// dim E_P = (cell_dim^2)^{|S_P|}
    Index algebra_dim(const Point& p) const { return local_dim(p) * local_dim(p); }

    /// E_P as an algebra on the full Hilbert space, generated by closure of the
    /// embedded single-cell matrix units. Only for small nets.
    OperatorAlgebra dense_algebra(const Point& p, const NumericPolicy& policy = default_policy()) const;

    /// E_P on H_{S_P}, where it is the full matrix algebra.
    OperatorAlgebra local_algebra(const Point& p) const;

private:
    CausalLattice lattice_;
    CellLayout layout_;
    std::vector<CellSet> supports_;
};

/// Cells = lattice points, S_P = closed future cone of P. Throws CapExceeded when
/// cell_dim^{#cells} > policy.hilbert_cap.
AlgebraNet build_tensor_net(const CausalLattice& lattice, int cell_dim, const NumericPolicy& policy = default_policy());

/// Every point sees the same cells (the whole system): E_P = B(H) everywhere.
AlgebraNet build_constant_net(const CausalLattice& lattice, int cell_dim, int n_cells,
                              const NumericPolicy& policy = default_policy());

/// Algebra generated by single-cell matrix units of `cells`, on the space of `frame`
/// cells (cells ⊆ frame).
OperatorAlgebra cell_algebra(const CellSet& cells, const CellSet& frame, int cell_dim,
                             const NumericPolicy& policy = default_policy());

struct PdpReport {
    bool strict_inclusion = false;
    Index rel_commutant_dim = 0;
    bool rel_commutant_abelian = true;
    bool dense = false;  // computed numerically rather than from the support sets

    /// strict inclusion, non-abelian relative commutant of dimension >= 4
    bool holds() const { return strict_inclusion && !rel_commutant_abelian && rel_commutant_dim >= 4; }
};

/// E_Q ⊆ E_P strictness and the relative commutant E_Q' ∩ E_P, for any pair of points.
/// The dense route runs when dim H_{S_P ∪ S_Q} <= policy.dense_pdp_dim; otherwise the
/// tensor commutation theorem reduces everything to support-set arithmetic.
PdpReport pdp_report(const AlgebraNet& net, const Point& p, const Point& q,
                     const NumericPolicy& policy = default_policy());

/// Same as pdp_report, with the precondition q ≻ p enforced.
PdpReport verify_pdp(const AlgebraNet& net, const Point& p, const Point& q,
                     const NumericPolicy& policy = default_policy());

struct OrderEntry {
    Point p;
    Point q;
    bool derived = false;    // finite PDP holds for (p, q)
    bool geometric = false;  // q ≻ p on the lattice
    PdpReport report;
};

struct DerivedOrder {
    std::vector<OrderEntry> entries;  // all ordered pairs p != q
    int mismatches = 0;
};

DerivedOrder derive_causal_order(const AlgebraNet& net, const NumericPolicy& policy = default_policy());

}  // namespace ethsim
