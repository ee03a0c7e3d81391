#include "ethsim/algebra.hpp"
#include "ethsim/state.hpp"

#include "linalg_detail.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace ethsim {

OperatorAlgebra::OperatorAlgebra(Index ambient_dim, Eigen::MatrixXcd basis)
    : n_(ambient_dim), basis_(std::move(basis)) {
    if (n_ <= 0) throw InvalidInput("OperatorAlgebra: ambient dimension must be positive");
    if (basis_.rows() != n_ * n_) throw InvalidInput("OperatorAlgebra: basis rows must equal ambient_dim^2");
}

std::vector<Operator> OperatorAlgebra::basis_ops() const {
    std::vector<Operator> out;
    out.reserve(static_cast<std::size_t>(dim()));
    for (Index i = 0; i < dim(); ++i) out.push_back(basis(i));
    return out;
}

Vector OperatorAlgebra::coordinates(const Operator& a) const {
    if (a.rows() != n_ || a.cols() != n_) throw InvalidInput("OperatorAlgebra: operator dimension mismatch");
    return basis_.adjoint() * vec(a);
}

Operator OperatorAlgebra::project(const Operator& a) const {
    return unvec(basis_ * coordinates(a), n_);
}

double OperatorAlgebra::residual(const Operator& a) const {
    const Vector v = vec(a);
    return (v - basis_ * (basis_.adjoint() * v)).norm();
}

bool OperatorAlgebra::contains(const Operator& a, double tol) const {
    return residual(a) <= tol * std::max(1.0, a.norm());
}

bool OperatorAlgebra::contains_identity(double tol) const { return contains(identity(n_), tol); }

double OperatorAlgebra::orthonormality_defect() const {
    const Eigen::MatrixXcd g = basis_.adjoint() * basis_;
    return (g - Eigen::MatrixXcd::Identity(dim(), dim())).cwiseAbs().maxCoeff();
}

double OperatorAlgebra::closure_defect() const {
    double worst = 0.0;
    const auto ops = basis_ops();
    for (const auto& bi : ops) {
        worst = std::max(worst, residual(bi.adjoint()));
        for (const auto& bj : ops) worst = std::max(worst, residual(bi * bj));
    }
    return worst;
}

namespace {

// Gram–Schmidt with one re-orthogonalization pass. A candidate is appended when its
// residual exceeds `tol` times its norm, or `tol` itself in absolute mode (closure
// candidates are products of unit-scale factors, so near-zero products are noise).
class Orthonormalizer {
public:
    Orthonormalizer(Index n, double tol, bool absolute = false)
        : n_(n), tol_(tol), absolute_(absolute), q_(n * n, 0) {}

    bool add(const Operator& a) {
        Vector v = vec(a);
        const double norm = v.norm();
        if (norm == 0.0) return false;
        for (int pass = 0; pass < 2 && q_.cols() > 0; ++pass) v -= q_ * (q_.adjoint() * v);
        const double r = v.norm();
        if (r <= (absolute_ ? tol_ : tol_ * norm)) return false;
        q_.conservativeResize(Eigen::NoChange, q_.cols() + 1);
        q_.col(q_.cols() - 1) = v / r;
        return true;
    }

    Index size() const { return q_.cols(); }
    Operator op(Index i) const { return unvec(q_.col(i), n_); }
    Eigen::MatrixXcd take() { return std::move(q_); }

private:
    Index n_;
    double tol_;
    bool absolute_;
    Eigen::MatrixXcd q_;
};

void require_same_ambient(const OperatorAlgebra& a, const OperatorAlgebra& b) {
    if (a.ambient_dim() != b.ambient_dim()) throw InvalidInput("algebras live on different ambient spaces");
}

}  // namespace

OperatorAlgebra algebra_closure(const std::vector<Operator>& generators, Index ambient_dim,
                                const NumericPolicy& policy) {
    if (ambient_dim <= 0) throw InvalidInput("algebra_closure: ambient dimension must be positive");
    std::vector<Operator> letters;
    for (const auto& g : generators) {
        if (g.rows() != ambient_dim || g.cols() != ambient_dim)
            throw InvalidInput("algebra_closure: generator dimension does not match ambient_dim");
        const double norm = g.norm();
        if (norm == 0.0) continue;
        letters.push_back(g / norm);
        letters.push_back(g.adjoint() / norm);
    }

    Orthonormalizer basis(ambient_dim, policy.tol_closure, true);
    std::deque<Index> pending;
    auto push = [&](const Operator& a) {
        if (basis.add(a)) pending.push_back(basis.size() - 1);
    };
    push(identity(ambient_dim));
    for (const auto& l : letters) push(l);

    // Span containing 1 and closed under left multiplication by every letter is the
    // generated algebra: it contains every word in the letters.
    const Index full = ambient_dim * ambient_dim;
    while (!pending.empty() && basis.size() < full) {
        const Operator b = basis.op(pending.front());
        pending.pop_front();
        for (const auto& l : letters) {
            push(l * b);
            if (basis.size() == full) break;
        }
    }
    return OperatorAlgebra(ambient_dim, basis.take());
}

OperatorAlgebra span_of(const std::vector<Operator>& ops, Index ambient_dim, const NumericPolicy& policy) {
    Orthonormalizer basis(ambient_dim, policy.tol_closure);
    for (const auto& a : ops) {
        if (a.rows() != ambient_dim || a.cols() != ambient_dim) throw InvalidInput("span_of: dimension mismatch");
        basis.add(a);
    }
    return OperatorAlgebra(ambient_dim, basis.take());
}

OperatorAlgebra full_algebra(Index n) {
    return OperatorAlgebra(n, Eigen::MatrixXcd::Identity(n * n, n * n));
}

OperatorAlgebra scalar_algebra(Index n) {
    Eigen::MatrixXcd b = vec(identity(n)) / std::sqrt(static_cast<double>(n));
    return OperatorAlgebra(n, b);
}

OperatorAlgebra commutant(const OperatorAlgebra& alg, const NumericPolicy& policy) {
    const Index n = alg.ambient_dim();
    const auto ops = alg.basis_ops();
    auto block = [&](Index k, const Eigen::MatrixXcd& z) {
        Eigen::MatrixXcd out(n * n, z.cols());
        const Operator& b = ops[static_cast<std::size_t>(k)];
        for (Index c = 0; c < z.cols(); ++c) {
            const Operator x = unvec(z.col(c), n);
            out.col(c) = vec(b * x - x * b);
        }
        return out;
    };
    Eigen::MatrixXcd z = detail::joint_null_space(n * n, alg.dim(), block, policy.tol_closure, 1.0);
    return OperatorAlgebra(n, std::move(z));
}

OperatorAlgebra center(const OperatorAlgebra& alg, const NumericPolicy& policy) {
    const Index n = alg.ambient_dim();
    const auto ops = alg.basis_ops();
    const Eigen::MatrixXcd& q = alg.basis_matrix();
    auto block = [&](Index k, const Eigen::MatrixXcd& z) {
        Eigen::MatrixXcd out(n * n, z.cols());
        const Operator& b = ops[static_cast<std::size_t>(k)];
        for (Index c = 0; c < z.cols(); ++c) {
            const Operator x = unvec(q * z.col(c), n);
            out.col(c) = vec(b * x - x * b);
        }
        return out;
    };
    const Eigen::MatrixXcd coeffs = detail::joint_null_space(alg.dim(), alg.dim(), block, policy.tol_closure, 1.0);
    return OperatorAlgebra(n, q * coeffs);
}

OperatorAlgebra centralizer(const OperatorAlgebra& alg, const State& omega, const NumericPolicy& policy) {
    const Index n = alg.ambient_dim();
    if (omega.dim() != n) throw InvalidInput("centralizer: state and algebra live on different spaces");
    const Index m = alg.dim();
    const Operator& rho = omega.rho();
    // omega([B_j, B_i]) = tr(B_i [rho, B_j]) = vec(B_i^T) . vec([rho, B_j])
    Eigen::MatrixXcd transposed(n * n, m), comm(n * n, m);
    for (Index i = 0; i < m; ++i) {
        const Operator b = alg.basis(i);
        transposed.col(i) = vec(b.transpose());
        comm.col(i) = vec(rho * b - b * rho);
    }
    const Eigen::MatrixXcd system = comm.transpose() * transposed;  // rows j, cols i
    const Eigen::MatrixXcd coeffs = detail::null_space(system, policy.tol_closure, 1.0);
    return OperatorAlgebra(n, alg.basis_matrix() * coeffs);
}

OperatorAlgebra center_of_centralizer(const OperatorAlgebra& alg, const State& omega, const NumericPolicy& policy) {
    return center(centralizer(alg, omega, policy), policy);
}

OperatorAlgebra intersect(const OperatorAlgebra& a, const OperatorAlgebra& b, const NumericPolicy& policy) {
    require_same_ambient(a, b);
    const Index n = a.ambient_dim();
    Eigen::MatrixXcd stacked(n * n, a.dim() + b.dim());
    stacked << a.basis_matrix(), -b.basis_matrix();
    const Eigen::MatrixXcd kernel = detail::null_space(stacked, policy.tol_closure, 1.0);
    const Eigen::MatrixXcd common = a.basis_matrix() * kernel.topRows(a.dim());
    return OperatorAlgebra(n, detail::orthonormal_columns(common, policy.tol_closure));
}

double subspace_residual(const OperatorAlgebra& super, const OperatorAlgebra& sub) {
    require_same_ambient(super, sub);
    if (sub.dim() == 0) return 0.0;
    const Eigen::MatrixXcd& q = super.basis_matrix();
    const Eigen::MatrixXcd r = sub.basis_matrix() - q * (q.adjoint() * sub.basis_matrix());
    return r.colwise().norm().maxCoeff();
}

bool is_contained(const OperatorAlgebra& sub, const OperatorAlgebra& super, double tol) {
    return subspace_residual(super, sub) < tol;
}

bool algebras_equal(const OperatorAlgebra& a, const OperatorAlgebra& b, double tol) {
    return is_contained(a, b, tol) && is_contained(b, a, tol);
}

double max_basis_commutator(const OperatorAlgebra& alg) {
    double worst = 0.0;
    const auto ops = alg.basis_ops();
    for (std::size_t i = 0; i < ops.size(); ++i)
        for (std::size_t j = i + 1; j < ops.size(); ++j) worst = std::max(worst, commutator(ops[i], ops[j]).norm());
    return worst;
}

bool is_abelian(const OperatorAlgebra& alg, double tol) { return max_basis_commutator(alg) < tol; }

}  // namespace ethsim
