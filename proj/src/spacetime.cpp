#include "ethsim/spacetime.hpp"

#include <algorithm>
#include <cstdlib>

namespace ethsim {

std::string to_string(const Point& p) { return "(" + std::to_string(p.tau) + "," + std::to_string(p.x) + ")"; }

std::string to_string(Relation r) {
    switch (r) {
        case Relation::past: return "past";
        case Relation::future: return "future";
        case Relation::spacelike: return "spacelike";
        case Relation::equal: return "equal";
    }
    return "?";
}

void CausalLattice::validate() const {
    if (extent_tau < 1) throw InvalidInput("lattice.extent_tau must be >= 1");
    if (extent_x < 1) throw InvalidInput("lattice.extent_x must be >= 1");
    if (speed < 1) throw InvalidInput("lattice.speed must be >= 1");
}

bool CausalLattice::contains(const Point& p) const {
    return p.tau >= 0 && p.tau < extent_tau && p.x >= 0 && p.x < extent_x;
}

std::vector<Point> CausalLattice::points() const {
    std::vector<Point> out;
    for (int t = 0; t < extent_tau; ++t)
        for (int x = 0; x < extent_x; ++x) out.push_back({t, x});
    return out;
}

Relation causal_relate(const CausalLattice& lattice, const Point& p, const Point& q) {
    if (!lattice.contains(p) || !lattice.contains(q))
        throw InvalidInput("causal_relate: point outside lattice: " + to_string(lattice.contains(p) ? q : p));
    if (p == q) return Relation::equal;
    const int dt = q.tau - p.tau;
    const int dx = std::abs(q.x - p.x);
    if (dt > 0 && dx <= lattice.speed * dt) return Relation::future;
    if (dt < 0 && dx <= lattice.speed * -dt) return Relation::past;
    return Relation::spacelike;
}

Foliation foliate(const CausalLattice& lattice) {
    lattice.validate();
    Foliation f;
    for (int t = 0; t < lattice.extent_tau; ++t) {
        std::vector<Point> leaf;
        for (int x = 0; x < lattice.extent_x; ++x) leaf.push_back({t, x});
        f.leaves.push_back(std::move(leaf));
    }
    return f;
}

std::string foliation_defect(const CausalLattice& lattice, const Foliation& f) {
    std::vector<int> seen(static_cast<std::size_t>(lattice.size()), 0);
    for (std::size_t k = 0; k < f.leaves.size(); ++k) {
        const auto& leaf = f.leaves[k];
        for (const auto& p : leaf) {
            if (!lattice.contains(p)) return "leaf " + std::to_string(k) + " point " + to_string(p) + " is out of bounds";
            if (seen[static_cast<std::size_t>(lattice.index(p))]++)
                return "point " + to_string(p) + " appears more than once";
        }
        for (std::size_t i = 0; i < leaf.size(); ++i)
            for (std::size_t j = i + 1; j < leaf.size(); ++j)
                if (causal_relate(lattice, leaf[i], leaf[j]) != Relation::spacelike)
                    return "leaf " + std::to_string(k) + " has causally related points " + to_string(leaf[i]) +
                           " and " + to_string(leaf[j]);
        for (std::size_t e = 0; e < k; ++e)
            for (const auto& later : leaf)
                for (const auto& earlier : f.leaves[e])
                    if (causal_relate(lattice, earlier, later) == Relation::past)
                        return "leaf " + std::to_string(k) + " point " + to_string(later) + " lies in the past of " +
                               to_string(earlier);
    }
    for (const auto& p : lattice.points())
        if (!seen[static_cast<std::size_t>(lattice.index(p))]) return "point " + to_string(p) + " is in no leaf";
    return {};
}

AlgebraNet::AlgebraNet(CausalLattice lattice, int cell_dim, int n_cells, std::vector<CellSet> supports)
    : lattice_(lattice), layout_(n_cells, cell_dim), supports_(std::move(supports)) {
    lattice_.validate();
    if (static_cast<int>(supports_.size()) != lattice_.size())
        throw InvalidInput("AlgebraNet: one support set per lattice point");
    for (auto& s : supports_) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        for (int c : s)
            if (c < 0 || c >= n_cells) throw InvalidInput("AlgebraNet: support cell out of range");
    }
}

const CellSet& AlgebraNet::support(const Point& p) const {
    if (!lattice_.contains(p)) throw InvalidInput("AlgebraNet: point outside lattice: " + to_string(p));
    return supports_[static_cast<std::size_t>(lattice_.index(p))];
}

OperatorAlgebra cell_algebra(const CellSet& cells, const CellSet& frame, int cell_dim, const NumericPolicy& policy) {
    if (!is_subset(cells, frame)) throw InvalidInput("cell_algebra: cells must lie inside the frame");
    const CellLayout layout(static_cast<int>(frame.size()), cell_dim);
    std::vector<Operator> generators;
    for (int c : cells) {
        const int pos = static_cast<int>(std::lower_bound(frame.begin(), frame.end(), c) - frame.begin());
        for (int i = 0; i < cell_dim; ++i)
            for (int j = 0; j < cell_dim; ++j) generators.push_back(layout.embed(matrix_unit(cell_dim, i, j), {pos}));
    }
    return algebra_closure(generators, layout.dim(), policy);
}

OperatorAlgebra AlgebraNet::dense_algebra(const Point& p, const NumericPolicy& policy) const {
    CellSet all(static_cast<std::size_t>(n_cells()));
    for (int c = 0; c < n_cells(); ++c) all[static_cast<std::size_t>(c)] = c;
    return cell_algebra(support(p), all, cell_dim(), policy);
}

OperatorAlgebra AlgebraNet::local_algebra(const Point& p) const { return full_algebra(local_dim(p)); }

namespace {

void check_cap(int n_cells, int cell_dim, const NumericPolicy& policy) {
    double dim = 1.0;
    for (int i = 0; i < n_cells; ++i) dim *= cell_dim;
    if (dim > static_cast<double>(policy.hilbert_cap))
        throw CapExceeded("net Hilbert dimension " + std::to_string(static_cast<long long>(dim)) + " exceeds cap " +
                          std::to_string(policy.hilbert_cap));
}

}  // namespace

AlgebraNet build_tensor_net(const CausalLattice& lattice, int cell_dim, const NumericPolicy& policy) {
    lattice.validate();
    if (cell_dim < 2) throw InvalidInput("cell_dim must be >= 2");
    check_cap(lattice.size(), cell_dim, policy);
    std::vector<CellSet> supports;
    for (const auto& p : lattice.points()) {
        CellSet cone;
        for (const auto& q : lattice.points()) {
            const Relation r = causal_relate(lattice, p, q);
            if (r == Relation::future || r == Relation::equal) cone.push_back(lattice.index(q));
        }
        supports.push_back(std::move(cone));
    }
    return AlgebraNet(lattice, cell_dim, lattice.size(), std::move(supports));
}

AlgebraNet build_constant_net(const CausalLattice& lattice, int cell_dim, int n_cells, const NumericPolicy& policy) {
    lattice.validate();
    if (cell_dim < 2) throw InvalidInput("cell_dim must be >= 2");
    if (n_cells < 1) throw InvalidInput("n_cells must be >= 1");
    check_cap(n_cells, cell_dim, policy);
    CellSet all;
    for (int c = 0; c < n_cells; ++c) all.push_back(c);
    return AlgebraNet(lattice, cell_dim, n_cells, std::vector<CellSet>(static_cast<std::size_t>(lattice.size()), all));
}

PdpReport pdp_report(const AlgebraNet& net, const Point& p, const Point& q, const NumericPolicy& policy) {
    const CellSet& sp = net.support(p);
    const CellSet& sq = net.support(q);
    const CellSet frame = set_union(sp, sq);
    const CellLayout frame_layout(static_cast<int>(frame.size()), net.cell_dim());
    PdpReport r;

    if (static_cast<std::size_t>(frame_layout.dim()) <= policy.dense_pdp_dim) {
        // Commutants are taken in B(H_frame); the complement of the frame is a spectator
        // factor on which both E_P and E_Q act trivially, so E_Q' ∩ E_P is unchanged.
        const OperatorAlgebra ep = cell_algebra(sp, frame, net.cell_dim(), policy);
        const OperatorAlgebra eq = cell_algebra(sq, frame, net.cell_dim(), policy);
        r.dense = true;
        r.strict_inclusion = is_contained(eq, ep, policy.tol_closure) && eq.dim() < ep.dim();
        const OperatorAlgebra rel = intersect(commutant(eq, policy), ep, policy);
        r.rel_commutant_dim = rel.dim();
        r.rel_commutant_abelian = is_abelian(rel, policy.tol_closure);
        return r;
    }

    // (B(H_A) ⊗ 1)' = 1 ⊗ B(H_{A^c}), so E_Q' ∩ E_P = B(H_{S_P \ S_Q}).
    const CellSet dropped = set_difference(sp, sq);
    r.strict_inclusion = is_subset(sq, sp) && sq.size() < sp.size();
    Index dim = 1;
    for (std::size_t i = 0; i < dropped.size(); ++i) dim *= static_cast<Index>(net.cell_dim()) * net.cell_dim();
    r.rel_commutant_dim = dim;
    r.rel_commutant_abelian = dropped.empty() || net.cell_dim() < 2;
    return r;
}

PdpReport verify_pdp(const AlgebraNet& net, const Point& p, const Point& q, const NumericPolicy& policy) {
    const Relation rel = causal_relate(net.lattice(), p, q);
    if (rel != Relation::future && rel != Relation::equal)
        throw InvalidInput("verify_pdp: " + to_string(q) + " is not in the future of " + to_string(p));
    return pdp_report(net, p, q, policy);
}

DerivedOrder derive_causal_order(const AlgebraNet& net, const NumericPolicy& policy) {
    DerivedOrder out;
    const auto pts = net.lattice().points();
    for (const auto& p : pts)
        for (const auto& q : pts) {
            if (p == q) continue;
            OrderEntry e{p, q, false, false, pdp_report(net, p, q, policy)};
            e.derived = e.report.holds();
            e.geometric = causal_relate(net.lattice(), p, q) == Relation::future;
            if (e.derived != e.geometric) ++out.mismatches;
            out.entries.push_back(e);
        }
    return out;
}

}  // namespace ethsim
