// Seeded generators and brute-force oracles shared by the test binaries.

#pragma once

#include "ethsim/algebra.hpp"
#include "ethsim/state.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>

#include <random>
#include <utility>
#include <vector>

namespace ethsim::testing {

using Rng = std::mt19937_64;

inline double gauss(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

inline Operator random_matrix(Index n, Rng& rng) {
    Operator m(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) m(i, j) = cplx(gauss(rng), gauss(rng));
    return m;
}

inline Operator random_hermitian(Index n, Rng& rng) {
    const Operator m = random_matrix(n, rng);
    return 0.5 * (m + m.adjoint());
}

/// Haar-ish unitary from the QR of a complex Gaussian matrix.
inline Operator random_unitary(Index n, Rng& rng) {
    Eigen::HouseholderQR<Operator> qr(random_matrix(n, rng));
    Operator q = qr.householderQ();
    const Operator r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index i = 0; i < n; ++i) q.col(i) *= std::polar(1.0, std::arg(r(i, i)));
    return q;
}

/// Faithful density matrix with distinct eigenvalues (gap >= ~1/(4n^2)).
inline Operator random_density(Index n, Rng& rng) {
    std::vector<double> w(static_cast<std::size_t>(n));
    double total = 0.0;
    for (Index i = 0; i < n; ++i) {
        w[static_cast<std::size_t>(i)] = 1.0 + static_cast<double>(i) + 0.5 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        total += w[static_cast<std::size_t>(i)];
    }
    Operator d = Operator::Zero(n, n);
    for (Index i = 0; i < n; ++i) d(i, i) = w[static_cast<std::size_t>(i)] / total;
    const Operator u = random_unitary(n, rng);
    return u * d * u.adjoint();
}

/// Block structure: sum over blocks of M_k ⊗ 1_m, total dimension sum k m.
struct BlockSpec {
    std::vector<std::pair<int, int>> blocks;  // (k, m)
    Index dim() const {
        Index d = 0;
        for (auto [k, m] : blocks) d += k * m;
        return d;
    }
    Index algebra_dim() const {
        Index d = 0;
        for (auto [k, m] : blocks) d += k * k;
        return d;
    }
    Index commutant_dim() const {
        Index d = 0;
        for (auto [k, m] : blocks) d += m * m;
        return d;
    }
};

/// Random block structure with total dimension in [2, max_dim].
inline BlockSpec random_block_spec(Index max_dim, Rng& rng) {
    for (;;) {
        BlockSpec s;
        const int n_blocks = std::uniform_int_distribution<int>(1, 3)(rng);
        for (int b = 0; b < n_blocks; ++b)
            s.blocks.push_back({std::uniform_int_distribution<int>(1, 3)(rng), std::uniform_int_distribution<int>(1, 2)(rng)});
        if (s.dim() >= 2 && s.dim() <= max_dim) return s;
    }
}

/// A random element of U (⊕ M_k ⊗ 1_m) U*.
inline Operator random_block_element(const BlockSpec& s, const Operator& u, Rng& rng) {
    const Index n = s.dim();
    Operator x = Operator::Zero(n, n);
    Index offset = 0;
    for (auto [k, m] : s.blocks) {
        const Operator a = random_matrix(k, rng);
        for (int r = 0; r < m; ++r)
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) x(offset + i * m + r, offset + j * m + r) = a(i, j);
        offset += k * m;
    }
    return u * x * u.adjoint();
}

/// Two random elements generically generate the whole block algebra.
inline std::vector<Operator> random_block_generators(const BlockSpec& s, const Operator& u, Rng& rng) {
    return {random_block_element(s, u, rng), random_block_element(s, u, rng)};
}

/// Rank by full-pivot LU with an absolute pivot threshold (independent of the
/// library's SVD routes).
inline Index lu_rank(const Eigen::MatrixXcd& m, double abs_tol = 1e-9) {
    const double scale = m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
    if (scale <= abs_tol) return 0;
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
    lu.setThreshold(abs_tol / scale);
    return lu.rank();
}

/// Dimension of {X : [X, g] = 0 for all g} from the Kronecker form
/// (1 ⊗ g - g^T ⊗ 1) vec X = 0 on column-major vec.
inline Index brute_commutant_dim(const std::vector<Operator>& gens, Index n) {
    Eigen::MatrixXcd stacked(static_cast<Index>(gens.size()) * n * n, n * n);
    const Operator one = Operator::Identity(n, n);
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const Operator& g = gens[i];
        Eigen::MatrixXcd k(n * n, n * n);
        // vec(XG - GX) = (G^T ⊗ 1 - 1 ⊗ G) vec X
        for (Index a = 0; a < n; ++a)
            for (Index b = 0; b < n; ++b) k.block(a * n, b * n, n, n) = g(b, a) * one - (a == b ? g : Operator::Zero(n, n));
        stacked.middleRows(static_cast<Index>(i) * n * n, n * n) = k;
    }
    return n * n - lu_rank(stacked);
}

/// Dimension of the centralizer of omega in the algebra spanned by `basis`, by solving
/// sum_j c_j omega([B_i, B_j]) = 0 with LU.
inline Index brute_centralizer_dim(const std::vector<Operator>& basis, const Operator& rho) {
    const Index m = static_cast<Index>(basis.size());
    Eigen::MatrixXcd sys(m, m);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j) sys(i, j) = (rho * commutator(basis[i], basis[j])).trace();
    return m - lu_rank(sys);
}

/// Eigenprojections of a Hermitian matrix, grouping eigenvalues closer than `gap`.
inline std::vector<Operator> eigenprojections(const Operator& h, double gap = 1e-8) {
    Eigen::SelfAdjointEigenSolver<Operator> es(h);
    std::vector<Operator> out;
    Index start = 0;
    const auto& v = es.eigenvalues();
    for (Index i = 1; i <= v.size(); ++i) {
        if (i < v.size() && v(i) - v(i - 1) < gap) continue;
        const auto cols = es.eigenvectors().middleCols(start, i - start);
        out.push_back(cols * cols.adjoint());
        start = i;
    }
    return out;
}

}  // namespace ethsim::testing
