#include "kolmo/cone_oracle.hpp"

#include <algorithm>
#include <cmath>

namespace kolmo
{

Grid::Grid(std::vector<double> nodes) : nodes_(std::move(nodes))
{
    if (nodes_.size() < 2) {
        throw DomainError("grid needs at least two nodes");
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!std::isfinite(nodes_[i]) || nodes_[i] < 0.0) {
            throw DomainError("grid nodes must be finite and nonnegative");
        }
        if (i > 0 && !(nodes_[i] > nodes_[i - 1])) {
            throw DomainError("grid nodes must be strictly increasing");
        }
    }
}

Grid make_grid(double t_max, int count, bool include_zero)
{
    if (!(t_max > 0.0) || !std::isfinite(t_max)) {
        throw DomainError("make_grid: t_max must be positive and finite");
    }
    if (count < 2) {
        throw DomainError("make_grid: count must be at least 2");
    }
    std::vector<double> nodes;
    nodes.reserve(static_cast<std::size_t>(count) + 1);
    if (include_zero) {
        nodes.push_back(0.0);
    }
    const double lo = std::log(t_max * 1e-6);
    const double hi = std::log(t_max);
    for (int j = 0; j < count; ++j) {
        if (j == count - 1) {
            nodes.push_back(t_max);
        } else {
            nodes.push_back(std::exp(lo + (hi - lo) * j / (count - 1)));
        }
    }
    return Grid(std::move(nodes));
}

double estimate_t_max(const MomentVector& c)
{
    double best = 0.0;
    const ExponentVector& k = c.exponents;
    for (Index i = 0; i + 1 < c.size(); ++i) {
        const double lo = c.values(i);
        const double hi = c.values(i + 1);
        if (lo > 0.0 && hi > 0.0) {
            best = std::max(best, std::pow(hi / lo, 1.0 / (k[i + 1] - k[i])));
        }
    }
    if (!(best > 0.0) || !std::isfinite(best)) {
        best = 1.0;
    }
    return 10.0 * best;
}

Grid default_grid(const MomentVector& c, int count)
{
    return make_grid(estimate_t_max(c), count, true);
}

namespace
{

constexpr double row_equilibration_floor = 1e-10;
// Removing an atom may cost at most this fraction of the tolerance, so exact
// grid measures keep residuals near round-off.
constexpr double prune_slack = 1e-3;

struct ScaledProblem
{
    Matrix<double> columns; // unit-norm generators in row-scaled coordinates
    Vector<double> target;  // unit-norm target in row-scaled coordinates
    Vector<double> unscale; // original weight = nnls weight * unscale(j)
};

ScaledProblem build_problem(const MomentVector& c, const Grid& grid)
{
    const ExponentVector& k = c.exponents;
    const double theta = estimate_t_max(c) / 10.0;
    Vector<double> row_scale(k.size());
    for (Index i = 0; i < k.size(); ++i) {
        row_scale(i) = std::pow(theta, -static_cast<double>(k[i]));
    }
    // equilibrate rows so that components far below the largest one still
    // count; floored so that zero moments keep a finite weight
    const Vector<double> scaled = c.values.cwiseAbs().cwiseProduct(row_scale);
    const double floor = row_equilibration_floor * scaled.maxCoeff();
    for (Index i = 0; i < k.size(); ++i) {
        row_scale(i) /= std::max(scaled(i), floor);
    }
    ScaledProblem p;
    const Vector<double> target = c.values.cwiseProduct(row_scale);
    const double target_norm = target.norm();
    p.target = target / target_norm;
    p.columns.resize(k.size(), grid.size());
    p.unscale.resize(grid.size());
    for (Index j = 0; j < grid.size(); ++j) {
        Vector<double> col = curve_point<double>(grid.nodes()[static_cast<std::size_t>(j)], k).cwiseProduct(row_scale);
        const double norm = col.norm();
        if (norm > 0.0) {
            p.columns.col(j) = col / norm;
            p.unscale(j) = target_norm / norm;
        } else {
            p.columns.col(j).setZero();
            p.unscale(j) = 0.0;
        }
    }
    return p;
}

Representation support_of(const Vector<double>& weights, const std::vector<Index>& columns, const Grid& grid,
                          const Vector<double>& unscale, double floor)
{
    double wmax = 0.0;
    for (Index j = 0; j < weights.size(); ++j) {
        wmax = std::max(wmax, weights(j) * unscale(columns[static_cast<std::size_t>(j)]));
    }
    std::vector<Atom> atoms;
    for (Index j = 0; j < weights.size(); ++j) {
        const Index col = columns[static_cast<std::size_t>(j)];
        const double w = weights(j) * unscale(col);
        if (w > 0.0 && w > floor * wmax) {
            atoms.push_back({grid.nodes()[static_cast<std::size_t>(col)], w});
        }
    }
    return Representation(std::move(atoms));
}

Matrix<double> select_columns(const Matrix<double>& a, const std::vector<Index>& cols)
{
    Matrix<double> out(a.rows(), static_cast<Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
        out.col(static_cast<Index>(j)) = a.col(cols[j]);
    }
    return out;
}

} // namespace

FeasibilityReport cone_membership(const MomentVector& c, const Grid& grid, const OracleOptions& options)
{
    if (!(options.tol > 0.0)) {
        throw DomainError("cone_membership: tolerance must be positive");
    }
    FeasibilityReport report;
    if (c.values.norm() == 0.0) {
        report.feasible = true;
        return report;
    }
    if (!c.values.allFinite()) {
        throw DomainError("cone_membership: moment vector must be finite");
    }

    const ScaledProblem p = build_problem(c, grid);

    const NnlsResult fit = nnls(p.columns, p.target);
    report.residual = fit.residual;
    report.feasible = fit.residual <= options.tol;

    std::vector<Index> active;
    Vector<double> active_weights;
    {
        std::vector<double> ws;
        for (Index j = 0; j < fit.weights.size(); ++j) {
            if (fit.weights(j) > 0.0) {
                active.push_back(j);
                ws.push_back(fit.weights(j));
            }
        }
        active_weights = Eigen::Map<Vector<double>>(ws.data(), static_cast<Index>(ws.size()));
    }

    if (report.feasible && options.prune) {
        while (active.size() > 1) {
            Index smallest = 0;
            for (Index j = 1; j < active_weights.size(); ++j) {
                if (active_weights(j) * p.unscale(active[static_cast<std::size_t>(j)]) <
                    active_weights(smallest) * p.unscale(active[static_cast<std::size_t>(smallest)])) {
                    smallest = j;
                }
            }
            std::vector<Index> trial(active);
            trial.erase(trial.begin() + smallest);
            const NnlsResult refit = nnls(select_columns(p.columns, trial), p.target);
            if (refit.residual > std::max(prune_slack * options.tol, report.residual)) {
                break;
            }
            std::vector<Index> kept;
            std::vector<double> ws;
            for (Index j = 0; j < refit.weights.size(); ++j) {
                if (refit.weights(j) > 0.0) {
                    kept.push_back(trial[static_cast<std::size_t>(j)]);
                    ws.push_back(refit.weights(j));
                }
            }
            active.swap(kept);
            active_weights = Eigen::Map<Vector<double>>(ws.data(), static_cast<Index>(ws.size()));
            report.residual = refit.residual;
        }
    }

    report.support = support_of(active_weights, active, grid, p.unscale, options.weight_floor);
    return report;
}

} // namespace kolmo
