#include "ethsim/projections.hpp"
#include "ethsim/algebra.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <tuple>

namespace ethsim {

PotentialEvent::PotentialEvent(std::vector<Operator> projections, std::vector<std::string> labels,
                               Coverage coverage, const NumericPolicy& policy)
    : projections_(std::move(projections)), labels_(std::move(labels)), coverage_(coverage) {
    if (projections_.empty()) throw InvalidInput("PotentialEvent: empty family");
    if (labels_.size() != projections_.size()) throw InvalidInput("PotentialEvent: one label per projection");
    const Index n = projections_.front().rows();
    for (std::size_t i = 0; i < projections_.size(); ++i) {
        const Operator& p = projections_[i];
        if (p.rows() != n || p.cols() != n) throw InvalidInput("PotentialEvent: projections differ in dimension");
        if (!is_projection(p, policy.tol_proj))
            throw InvalidInput("PotentialEvent: member " + labels_[i] + " is not an orthogonal projection");
        for (std::size_t j = 0; j < i; ++j)
            if (op_norm(p * projections_[j]) > policy.tol_proj)
                throw InvalidInput("PotentialEvent: members " + labels_[j] + " and " + labels_[i] + " overlap");
    }
    if (coverage_ == Coverage::complete && completeness_defect() > policy.tol_proj)
        throw InvalidInput("PotentialEvent: projections do not sum to the identity");
}

PotentialEvent PotentialEvent::unchecked(std::vector<Operator> projections, std::vector<std::string> labels,
                                         Coverage coverage) {
    PotentialEvent e;
    e.projections_ = std::move(projections);
    e.labels_ = std::move(labels);
    e.coverage_ = coverage;
    return e;
}

double PotentialEvent::completeness_defect() const {
    Operator sum = Operator::Zero(dim(), dim());
    for (const auto& p : projections_) sum += p;
    return op_norm(sum - identity(dim()));
}

std::vector<std::string> index_labels(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
    return out;
}

namespace {

double uniform_pm1(std::mt19937_64& rng) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return 2.0 * u - 1.0;
}

// First basis index carrying weight, then that weight (larger first), then rank.
std::tuple<Index, double, double> canonical_key(const Operator& p) {
    const Eigen::VectorXd d = p.diagonal().real();
    for (Index i = 0; i < d.size(); ++i)
        if (d(i) > 1e-6) return {i, -d(i), d.sum()};
    return {d.size(), 0.0, d.sum()};
}

}  // namespace

PotentialEvent minimal_projections(const OperatorAlgebra& abelian, const NumericPolicy& policy) {
    const Index n = abelian.ambient_dim();
    const auto ops = abelian.basis_ops();
    if (abelian.dim() == 0) throw InvalidInput("minimal_projections: empty algebra");
    if (abelian.dim() <= 64 && !is_abelian(abelian, policy.tol_closure * 10.0))
        throw InvalidInput("minimal_projections: algebra is not abelian");

    std::mt19937_64 rng(policy.generic_seed);
    for (int attempt = 0; attempt <= policy.max_retries; ++attempt) {
        Operator h = Operator::Zero(n, n);
        for (const auto& b : ops) {
            const double re = uniform_pm1(rng), im = uniform_pm1(rng);
            h += re * 0.5 * (b + b.adjoint()) + im * 0.5 * (b - b.adjoint()) / cplx(0.0, 1.0);
        }
        const double scale = op_norm(h);
        if (scale == 0.0) continue;
        h /= scale;

        for (const auto& b : ops)
            if (commutator(h, b).norm() > 1e3 * policy.tol_closure)
                throw InvalidInput("minimal_projections: algebra is not abelian");

        Eigen::SelfAdjointEigenSolver<Operator> es(h);
        const Eigen::VectorXd& vals = es.eigenvalues();
        std::vector<std::pair<Index, Index>> groups;  // [first, last)
        bool ambiguous = false;
        Index start = 0;
        for (Index i = 1; i <= vals.size(); ++i) {
            if (i < vals.size()) {
                const double gap = vals(i) - vals(i - 1);
                if (gap < policy.tol_proj) continue;
                if (gap < policy.gap_min) ambiguous = true;
            }
            groups.emplace_back(start, i);
            start = i;
        }
        if (ambiguous || static_cast<Index>(groups.size()) != abelian.dim()) continue;

        std::vector<Operator> projections;
        for (auto [first, last] : groups) {
            const auto v = es.eigenvectors().middleCols(first, last - first);
            projections.push_back(v * v.adjoint());
        }
        bool members = true;
        for (const auto& p : projections) members = members && abelian.contains(p, policy.tol_proj);
        if (!members) continue;

        std::sort(projections.begin(), projections.end(),
                  [](const Operator& a, const Operator& b) { return canonical_key(a) < canonical_key(b); });
        return PotentialEvent(std::move(projections), index_labels(groups.size()),
                              PotentialEvent::Coverage::complete, policy);
    }
    throw NumericFailure("minimal_projections: no generic element with eigengap >= gap_min after " +
                         std::to_string(policy.max_retries) + " retries");
}

double projection_set_distance(const std::vector<Operator>& a, const std::vector<Operator>& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (const auto& p : a) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& q : b) {
            if (p.rows() != q.rows()) continue;
            best = std::min(best, op_norm(p - q));
        }
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace ethsim
