#include "kolmo/cone_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/QR>

namespace kolmo
{

namespace
{

// Extended precision keeps the active set honest when grid columns are
// nearly parallel.
using Real = long double;

Vector<Real> solve_passive(const Matrix<Real>& a, const std::vector<Index>& passive, const Vector<Real>& b)
{
    Matrix<Real> ap(a.rows(), static_cast<Index>(passive.size()));
    for (std::size_t j = 0; j < passive.size(); ++j) {
        ap.col(static_cast<Index>(j)) = a.col(passive[j]);
    }
    return Eigen::ColPivHouseholderQR<Matrix<Real>>(ap).solve(b);
}

} // namespace

NnlsResult nnls(const Matrix<double>& a_in, const Vector<double>& b_in)
{
    if (a_in.rows() != b_in.size()) {
        throw DomainError("nnls: column dimension differs from target dimension");
    }
    const Matrix<Real> a = a_in.cast<Real>();
    const Vector<Real> b = b_in.cast<Real>();
    const Index n = a.cols();
    Vector<Real> x = Vector<Real>::Zero(n);
    const Real bnorm = b.norm();
    const Real scale = std::max(Real(1), bnorm);
    if (n == 0 || bnorm == 0) {
        return {x.cast<double>(), static_cast<double>(bnorm / scale)};
    }

    const Real col_scale = a.colwise().norm().maxCoeff();
    const Real wtol = 64 * std::numeric_limits<Real>::epsilon() * col_scale * scale;

    std::vector<Index> passive;
    std::vector<char> in_passive(static_cast<std::size_t>(n), 0);
    Vector<Real> w = a.transpose() * (b - a * x);

    const int max_outer = static_cast<int>(3 * n + 30);
    for (int outer = 0; outer < max_outer; ++outer) {
        Index j_max = -1;
        Real w_max = wtol;
        for (Index j = 0; j < n; ++j) {
            if (!in_passive[static_cast<std::size_t>(j)] && w(j) > w_max) {
                w_max = w(j);
                j_max = j;
            }
        }
        if (j_max < 0) {
            break;
        }
        passive.push_back(j_max);
        in_passive[static_cast<std::size_t>(j_max)] = 1;

        bool rejected = false;
        for (int inner = 0; inner < 3 * static_cast<int>(a.rows()) + 10; ++inner) {
            const Vector<Real> z = solve_passive(a, passive, b);
            // The entering column may come out nonpositive from round-off; drop it.
            if (inner == 0 && z(static_cast<Index>(passive.size()) - 1) <= 0) {
                passive.pop_back();
                in_passive[static_cast<std::size_t>(j_max)] = 0;
                rejected = true;
                break;
            }
            Real alpha = 1;
            bool all_positive = true;
            for (std::size_t p = 0; p < passive.size(); ++p) {
                const Real zp = z(static_cast<Index>(p));
                if (zp <= 0) {
                    all_positive = false;
                    const Real xp = x(passive[p]);
                    alpha = std::min(alpha, xp / (xp - zp));
                }
            }
            if (all_positive) {
                for (std::size_t p = 0; p < passive.size(); ++p) {
                    x(passive[p]) = z(static_cast<Index>(p));
                }
                break;
            }
            for (std::size_t p = 0; p < passive.size(); ++p) {
                const Index idx = passive[p];
                x(idx) += alpha * (z(static_cast<Index>(p)) - x(idx));
            }
            std::vector<Index> kept;
            for (Index idx : passive) {
                if (x(idx) > 0 && x(idx) > Real(1e-18) * x.maxCoeff()) {
                    kept.push_back(idx);
                } else {
                    x(idx) = 0;
                    in_passive[static_cast<std::size_t>(idx)] = 0;
                }
            }
            passive.swap(kept);
            if (passive.empty()) {
                break;
            }
        }
        w = a.transpose() * (b - a * x);
        if (rejected) {
            // exclude the rejected column for this sweep
            w(j_max) = -1;
            bool any = false;
            for (Index j = 0; j < n; ++j) {
                if (!in_passive[static_cast<std::size_t>(j)] && j != j_max && w(j) > wtol) {
                    any = true;
                    break;
                }
            }
            if (!any) {
                break;
            }
        }
    }
    return {x.cast<double>(), static_cast<double>((a * x - b).norm() / scale)};
}

NnlsResult nnls(const std::vector<MomentVector>& columns, const MomentVector& target)
{
    Matrix<double> a(target.size(), static_cast<Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j].size() != target.size()) {
            throw DomainError("nnls: column dimension differs from target dimension");
        }
        a.col(static_cast<Index>(j)) = columns[j].values;
    }
    return nnls(a, target.values);
}

} // namespace kolmo
