#include "kolmo/representations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Cholesky>
#include <Eigen/QR>

namespace kolmo
{

std::string to_string(ConeClass kind)
{
    switch (kind) {
    case ConeClass::Zero:
        return "zero";
    case ConeClass::Exterior:
        return "exterior";
    case ConeClass::Boundary:
        return "boundary";
    case ConeClass::Interior:
        return "interior";
    }
    return "unknown";
}

RepresentationShape RepresentationShape::of_index(HalfInteger index)
{
    RepresentationShape s;
    s.zero_atom = !index.is_integer();
    s.free_atoms = index.twice_value() / 2;
    return s;
}

double conditioning_scale(const MomentVector& c)
{
    return estimate_t_max(c) / 10.0;
}

namespace
{

constexpr double sigma_floor = 1e-14;
constexpr double weight_share_floor = 1e-13;
constexpr double node_floor = 1e-10;
constexpr double node_ceiling = 1e10;
constexpr double node_merge_gap = 1e-9;
constexpr double max_log_step = 2.0;
constexpr double negligible_support_share = 1e-5;

Vector<double> scaled_moments(const Vector<double>& c, const ExponentVector& k, double theta)
{
    Vector<double> out(c.size());
    for (Index i = 0; i < c.size(); ++i) {
        out(i) = c(i) * std::pow(theta, -static_cast<double>(k[i]));
    }
    return out;
}

Vector<double> residual_scales(const Vector<double>& scaled_target)
{
    const double inf = scaled_target.cwiseAbs().maxCoeff();
    if (!(inf > 0.0)) {
        return Vector<double>::Ones(scaled_target.size());
    }
    return scaled_target.cwiseAbs().cwiseMax(sigma_floor * inf);
}

void require_zero_exponent(const MomentVector& c, const char* who)
{
    if (c.exponents.front() != 0) {
        throw UnsupportedSystem(std::string(who) +
                                ": moment classification needs k_1 = 0; use the Kolmogorov layer for k_1 > 0");
    }
}

///
/// Moment-matching equations for one representation shape in log-weights and
/// log-nodes. Parameter layout: [log w_0]? [log w_free]{F} [log s_free]{F} [log w_pinned]{P}.
///
class MomentSystem
{
public:
    MomentSystem(ExponentVector k, double theta, RepresentationShape shape)
        : k_(std::move(k)), theta_(theta), shape_(std::move(shape))
    {
        zero_off_ = 0;
        free_w_off_ = shape_.zero_atom ? 1 : 0;
        free_s_off_ = free_w_off_ + shape_.free_atoms;
        pinned_off_ = free_s_off_ + shape_.free_atoms;
        pinned_s_.reserve(shape_.pinned.size());
        for (double t : shape_.pinned) {
            pinned_s_.push_back(t / theta_);
        }
    }

    Index unknowns() const { return shape_.unknowns(); }
    Index equations() const { return k_.size(); }
    const RepresentationShape& shape() const { return shape_; }

    void set_target(const Vector<double>& c)
    {
        target_ = scaled_moments(c, k_, theta_);
        sigma_ = residual_scales(target_);
    }

    Vector<double> residual(const Vector<double>& p) const
    {
        Vector<double> m = Vector<double>::Zero(k_.size());
        for_each_atom(p, [&](double w, double s) {
            for (Index i = 0; i < k_.size(); ++i) {
                m(i) += w * ipow(s, k_[i]);
            }
        });
        return (m - target_).cwiseQuotient(sigma_);
    }

    Matrix<double> jacobian(const Vector<double>& p) const
    {
        Matrix<double> j(k_.size(), unknowns());
        if (shape_.zero_atom) {
            const double w = std::exp(p(zero_off_));
            for (Index i = 0; i < k_.size(); ++i) {
                j(i, zero_off_) = k_[i] == 0 ? w : 0.0;
            }
        }
        for (int a = 0; a < shape_.free_atoms; ++a) {
            const double w = std::exp(p(free_w_off_ + a));
            const double s = std::exp(p(free_s_off_ + a));
            for (Index i = 0; i < k_.size(); ++i) {
                const double ws = w * ipow(s, k_[i]);
                j(i, free_w_off_ + a) = ws;
                j(i, free_s_off_ + a) = ws * k_[i];
            }
        }
        for (std::size_t a = 0; a < pinned_s_.size(); ++a) {
            const Index col = pinned_off_ + static_cast<Index>(a);
            const double w = std::exp(p(col));
            for (Index i = 0; i < k_.size(); ++i) {
                j(i, col) = w * ipow(pinned_s_[a], k_[i]);
            }
        }
        for (Index i = 0; i < k_.size(); ++i) {
            j.row(i) /= sigma_(i);
        }
        return j;
    }

    /// Maps a representation of this shape onto parameters. Pinned atoms are
    /// matched by exact node equality.
    Vector<double> pack(const Representation& rep) const
    {
        Vector<double> p(unknowns());
        std::vector<char> pinned_seen(shape_.pinned.size(), 0);
        int free_seen = 0;
        bool zero_seen = false;
        for (const Atom& a : rep.atoms()) {
            if (a.node == 0.0) {
                if (!shape_.zero_atom) {
                    throw PreconditionError("initial representation has an atom at 0 the shape does not allow");
                }
                p(zero_off_) = std::log(a.weight);
                zero_seen = true;
                continue;
            }
            auto it = std::find(shape_.pinned.begin(), shape_.pinned.end(), a.node);
            if (it != shape_.pinned.end()) {
                const auto idx = static_cast<std::size_t>(it - shape_.pinned.begin());
                p(pinned_off_ + static_cast<Index>(idx)) = std::log(a.weight);
                pinned_seen[idx] = 1;
                continue;
            }
            if (free_seen >= shape_.free_atoms) {
                throw PreconditionError("initial representation has too many free atoms for the shape");
            }
            p(free_w_off_ + free_seen) = std::log(a.weight);
            p(free_s_off_ + free_seen) = std::log(a.node / theta_);
            ++free_seen;
        }
        if (zero_seen != shape_.zero_atom || free_seen != shape_.free_atoms ||
            std::find(pinned_seen.begin(), pinned_seen.end(), 0) != pinned_seen.end()) {
            throw PreconditionError("initial representation does not match the requested shape");
        }
        return p;
    }

    Representation unpack(const Vector<double>& p) const
    {
        std::vector<Atom> atoms;
        if (shape_.zero_atom) {
            atoms.push_back({0.0, std::exp(p(zero_off_))});
        }
        for (int a = 0; a < shape_.free_atoms; ++a) {
            atoms.push_back({theta_ * std::exp(p(free_s_off_ + a)), std::exp(p(free_w_off_ + a))});
        }
        for (std::size_t a = 0; a < shape_.pinned.size(); ++a) {
            atoms.push_back({shape_.pinned[a], std::exp(p(pinned_off_ + static_cast<Index>(a)))});
        }
        return Representation(std::move(atoms));
    }

    /// True when some weight has vanished or free nodes collapsed/escaped.
    bool left_domain(const Vector<double>& p) const
    {
        if (!p.allFinite()) {
            return true;
        }
        bool bad = false;
        for_each_atom(p, [&](double w, double s) {
            double share = 0.0;
            for (Index i = 0; i < k_.size(); ++i) {
                share = std::max(share, w * ipow(s, k_[i]) / sigma_(i));
            }
            if (!(share > weight_share_floor)) {
                bad = true;
            }
        });
        std::vector<double> logs;
        for (int a = 0; a < shape_.free_atoms; ++a) {
            const double ls = p(free_s_off_ + a);
            if (ls < std::log(node_floor) || ls > std::log(node_ceiling)) {
                bad = true;
            }
            logs.push_back(ls);
        }
        for (double s : pinned_s_) {
            logs.push_back(std::log(s));
        }
        std::sort(logs.begin(), logs.end());
        for (std::size_t i = 1; i < logs.size(); ++i) {
            if (logs[i] - logs[i - 1] < node_merge_gap) {
                bad = true;
            }
        }
        return bad;
    }

private:
    template <typename F>
    void for_each_atom(const Vector<double>& p, F&& f) const
    {
        if (shape_.zero_atom) {
            f(std::exp(p(zero_off_)), 0.0);
        }
        for (int a = 0; a < shape_.free_atoms; ++a) {
            f(std::exp(p(free_w_off_ + a)), std::exp(p(free_s_off_ + a)));
        }
        for (std::size_t a = 0; a < pinned_s_.size(); ++a) {
            f(std::exp(p(pinned_off_ + static_cast<Index>(a))), pinned_s_[a]);
        }
    }

    ExponentVector k_;
    double theta_;
    RepresentationShape shape_;
    std::vector<double> pinned_s_;
    Index zero_off_ = 0;
    Index free_w_off_ = 0;
    Index free_s_off_ = 0;
    Index pinned_off_ = 0;
    Vector<double> target_;
    Vector<double> sigma_;
};

struct Outcome
{
    bool converged = false;
    bool domain_exit = false;
    Vector<double> params;
    double residual = std::numeric_limits<double>::infinity();
    int iterations = 0;
};

bool try_step(const MomentSystem& sys, const Vector<double>& p, const Vector<double>& delta, double f, double alpha,
              Vector<double>& q, Vector<double>& rq, double& fq)
{
    q = p + alpha * delta;
    rq = sys.residual(q);
    fq = rq.squaredNorm();
    return std::isfinite(fq) && fq < f * (1.0 - 1e-4 * alpha);
}

///
/// Damped Newton / Gauss-Newton with step halving, and a Levenberg-Marquardt
/// fallback when no halved step decreases the residual.
///
Outcome damped_newton(const MomentSystem& sys, Vector<double> p, double tol, int max_iter)
{
    Outcome out;
    Vector<double> r = sys.residual(p);
    double f = r.squaredNorm();
    out.residual = r.lpNorm<Eigen::Infinity>();
    for (int it = 0; it < max_iter; ++it) {
        out.iterations = it;
        if (!std::isfinite(out.residual)) {
            break;
        }
        if (out.residual <= tol) {
            out.converged = true;
            break;
        }
        const Matrix<double> jac = sys.jacobian(p);
        Vector<double> delta = Eigen::ColPivHouseholderQR<Matrix<double>>(jac).solve(-r);
        Vector<double> q;
        Vector<double> rq;
        double fq = 0.0;
        bool accepted = false;
        if (delta.allFinite()) {
            const double big = delta.lpNorm<Eigen::Infinity>();
            if (big > max_log_step) {
                delta *= max_log_step / big;
            }
            double alpha = 1.0;
            for (int h = 0; h < 30 && !accepted; ++h, alpha *= 0.5) {
                accepted = try_step(sys, p, delta, f, alpha, q, rq, fq);
            }
        }
        if (!accepted) {
            const Matrix<double> jtj = jac.transpose() * jac;
            const Vector<double> g = jac.transpose() * r;
            const double diag = std::max(jtj.diagonal().maxCoeff(), 1e-300);
            for (double mu = 1e-8; mu <= 1e4 && !accepted; mu *= 100.0) {
                Matrix<double> lhs = jtj;
                lhs.diagonal().array() += mu * diag;
                Vector<double> step = lhs.ldlt().solve(-g);
                if (!step.allFinite()) {
                    continue;
                }
                const double big = step.lpNorm<Eigen::Infinity>();
                if (big > max_log_step) {
                    step *= max_log_step / big;
                }
                accepted = try_step(sys, p, step, f, 1.0, q, rq, fq);
            }
        }
        if (!accepted) {
            break;
        }
        p = q;
        r = rq;
        f = fq;
        out.residual = r.lpNorm<Eigen::Infinity>();
        if (sys.left_domain(p)) {
            out.domain_exit = true;
            break;
        }
    }
    if (!out.converged && out.residual <= tol) {
        out.converged = true;
    }
    out.params = std::move(p);
    return out;
}

Vector<double> model_moments(const Representation& rep, const ExponentVector& k)
{
    return moments_of(rep, k).values;
}

///
/// Newton from `init`; on failure walks the target along the segment from the
/// moments of `init` to c with adaptive step, then polishes at tol.
///
Outcome solve_by_continuation(MomentSystem& sys, const MomentVector& c, const Representation& init, double tol,
                              const SolverOptions& options)
{
    const Vector<double> p0 = sys.pack(init);
    sys.set_target(c.values);
    Outcome direct = damped_newton(sys, p0, tol, options.max_iter);
    if (direct.converged && !direct.domain_exit) {
        return direct;
    }

    const Vector<double> start = model_moments(init, c.exponents);
    Vector<double> p = p0;
    double s = 0.0;
    double h = 0.25;
    const double stage_tol = std::max(tol, 1e-9);
    for (int step = 0; step < 400 && s < 1.0; ++step) {
        const double s_next = std::min(1.0, s + h);
        sys.set_target((1.0 - s_next) * start + s_next * c.values);
        const Outcome stage = damped_newton(sys, p, stage_tol, 25);
        if (stage.converged && !stage.domain_exit) {
            p = stage.params;
            s = s_next;
            h = std::min(1.0, 2.0 * h);
        } else {
            h *= 0.5;
            if (h < 1e-7) {
                break;
            }
        }
    }
    sys.set_target(c.values);
    if (s < 1.0) {
        Outcome failed;
        failed.params = p;
        failed.residual = sys.residual(p).lpNorm<Eigen::Infinity>();
        return direct.residual < failed.residual ? direct : failed;
    }
    return damped_newton(sys, p, tol, options.max_iter);
}

Matrix<double> relative_columns(const std::vector<double>& scaled_nodes, const ExponentVector& k,
                                const Vector<double>& sigma)
{
    Matrix<double> a(k.size(), static_cast<Index>(scaled_nodes.size()));
    for (std::size_t j = 0; j < scaled_nodes.size(); ++j) {
        for (Index i = 0; i < k.size(); ++i) {
            a(i, static_cast<Index>(j)) = ipow(scaled_nodes[j], k[i]) / sigma(i);
        }
    }
    return a;
}

/// Weighted 1-D k-means on log-nodes, initialized by splitting at the largest gaps.
std::vector<double> cluster_log_nodes(std::vector<std::pair<double, double>> pts, int clusters)
{
    std::sort(pts.begin(), pts.end());
    const auto n = static_cast<int>(pts.size());
    std::vector<int> cut_after;
    {
        std::vector<std::pair<double, int>> gaps;
        for (int i = 0; i + 1 < n; ++i) {
            gaps.emplace_back(pts[static_cast<std::size_t>(i + 1)].first - pts[static_cast<std::size_t>(i)].first, i);
        }
        std::sort(gaps.begin(), gaps.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
        for (int g = 0; g < clusters - 1; ++g) {
            cut_after.push_back(gaps[static_cast<std::size_t>(g)].second);
        }
        std::sort(cut_after.begin(), cut_after.end());
    }
    std::vector<double> centers;
    {
        int begin = 0;
        cut_after.push_back(n - 1);
        for (int end : cut_after) {
            double sw = 0.0;
            double swx = 0.0;
            for (int i = begin; i <= end; ++i) {
                sw += pts[static_cast<std::size_t>(i)].second;
                swx += pts[static_cast<std::size_t>(i)].second * pts[static_cast<std::size_t>(i)].first;
            }
            centers.push_back(sw > 0.0 ? swx / sw : pts[static_cast<std::size_t>(begin)].first);
            begin = end + 1;
        }
    }
    for (int iter = 0; iter < 20; ++iter) {
        std::vector<double> sw(centers.size(), 0.0);
        std::vector<double> swx(centers.size(), 0.0);
        for (const auto& [x, w] : pts) {
            std::size_t best = 0;
            for (std::size_t c = 1; c < centers.size(); ++c) {
                if (std::abs(x - centers[c]) < std::abs(x - centers[best])) {
                    best = c;
                }
            }
            sw[best] += w;
            swx[best] += w * x;
        }
        bool moved = false;
        for (std::size_t c = 0; c < centers.size(); ++c) {
            if (sw[c] > 0.0) {
                const double next = swx[c] / sw[c];
                moved = moved || std::abs(next - centers[c]) > 1e-12;
                centers[c] = next;
            }
        }
        if (!moved) {
            break;
        }
    }
    std::sort(centers.begin(), centers.end());
    return centers;
}

bool far_from_all(double log_s, const std::vector<double>& logs, double gap)
{
    return std::all_of(logs.begin(), logs.end(), [&](double x) { return std::abs(x - log_s) >= gap; });
}

constexpr double min_log_gap = 0.02;
constexpr std::size_t max_subset_candidates = 8;
constexpr std::size_t continuation_candidates = 9;

/// Log scaled nodes (with weights) of support atoms usable as free nodes.
std::vector<std::pair<double, double>> usable_support(const MomentVector& c, const RepresentationShape& shape,
                                                      const Representation& support, double theta,
                                                      const std::vector<double>& pinned_logs)
{
    const ExponentVector& k = c.exponents;
    const Vector<double> target = scaled_moments(c.values, k, theta);
    const Vector<double> sigma = residual_scales(target);

    std::vector<std::pair<double, double>> pts;
    double zero_weight = 0.0;
    double min_log = std::numeric_limits<double>::infinity();
    for (const Atom& a : support.atoms()) {
        if (a.node == 0.0) {
            zero_weight = a.weight;
            continue;
        }
        // oracle atoms carrying no visible share would grab a cluster of their own
        double share = 0.0;
        for (Index i = 0; i < k.size(); ++i) {
            share = std::max(share, a.weight * ipow(a.node / theta, k[i]) / sigma(i));
        }
        if (share < negligible_support_share) {
            continue;
        }
        const double ls = std::log(a.node / theta);
        min_log = std::min(min_log, ls);
        if (far_from_all(ls, pinned_logs, min_log_gap)) {
            pts.emplace_back(ls, a.weight);
        }
    }
    if (!shape.zero_atom && zero_weight > 0.0) {
        const double ls = std::isfinite(min_log) ? min_log - 2.0 : std::log(1e-2);
        if (far_from_all(ls, pinned_logs, min_log_gap)) {
            pts.emplace_back(ls, zero_weight);
        }
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

/// Enforces separation between free nodes and from pinned nodes, then fills
/// missing nodes alternately above and below the current range.
std::vector<double> separated_and_filled(const std::vector<double>& free_logs, const std::vector<double>& pinned_logs,
                                         int count)
{
    std::vector<double> kept;
    for (double ls : free_logs) {
        if (far_from_all(ls, kept, min_log_gap) && far_from_all(ls, pinned_logs, min_log_gap)) {
            kept.push_back(ls);
        }
    }
    bool up = true;
    while (static_cast<int>(kept.size()) < count) {
        std::vector<double> all(kept);
        all.insert(all.end(), pinned_logs.begin(), pinned_logs.end());
        double candidate = 0.0;
        if (!all.empty()) {
            const auto [lo, hi] = std::minmax_element(all.begin(), all.end());
            candidate = up ? *hi + 1.0 : *lo - 1.0;
        }
        while (!far_from_all(candidate, all, min_log_gap)) {
            candidate += up ? 0.5 : -0.5;
        }
        kept.push_back(candidate);
        up = !up;
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

struct Candidate
{
    Representation rep;
    double misfit = 0.0;
};

///
/// Representation with the given free nodes, weights the nonnegative fit on
/// all nodes of the shape with nonpositive entries replaced by a small
/// positive value.
///
Candidate with_fitted_weights(const MomentVector& c, const RepresentationShape& shape,
                              const std::vector<double>& free_logs, const std::vector<double>& pinned_logs,
                              double theta)
{
    std::vector<double> scaled_nodes;
    if (shape.zero_atom) {
        scaled_nodes.push_back(0.0);
    }
    for (double ls : free_logs) {
        scaled_nodes.push_back(std::exp(ls));
    }
    for (double ls : pinned_logs) {
        scaled_nodes.push_back(std::exp(ls));
    }

    const Vector<double> target = scaled_moments(c.values, c.exponents, theta);
    const Vector<double> sigma = residual_scales(target);
    const Matrix<double> a = relative_columns(scaled_nodes, c.exponents, sigma);
    const NnlsResult fit = nnls(a, target.cwiseQuotient(sigma));
    Vector<double> w = fit.weights;

    double positive_min = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < w.size(); ++j) {
        if (w(j) > 0.0) {
            positive_min = std::min(positive_min, w(j));
        }
    }
    for (Index j = 0; j < w.size(); ++j) {
        if (!(w(j) > 0.0)) {
            if (std::isfinite(positive_min)) {
                w(j) = 1e-2 * positive_min;
            } else {
                const double col = a.col(j).norm();
                w(j) = col > 0.0 ? 1.0 / col : 1.0;
            }
        }
    }

    std::vector<Atom> atoms;
    Index j = 0;
    if (shape.zero_atom) {
        atoms.push_back({0.0, w(j++)});
    }
    for (double ls : free_logs) {
        atoms.push_back({theta * std::exp(ls), w(j++)});
    }
    for (double t : shape.pinned) {
        atoms.push_back({t, w(j++)});
    }
    return {Representation(std::move(atoms)), fit.residual};
}

///
/// Starting representations of the requested shape built from the oracle
/// support. First the cluster centers of the support, then the best fitting
/// of two families: m-subsets of the support nodes, and cluster centers with
/// one center split in two (recovers close pairs the grid merges).
///
std::vector<Representation> initial_candidates(const MomentVector& c, const RepresentationShape& shape,
                                               const Representation& support, double theta)
{
    std::vector<double> pinned_logs;
    for (double t : shape.pinned) {
        pinned_logs.push_back(std::log(t / theta));
    }
    const auto pts = usable_support(c, shape, support, theta, pinned_logs);
    const int m = shape.free_atoms;
    const auto n = static_cast<int>(pts.size());

    auto centers = [&](int count) {
        std::vector<double> out;
        if (count > 0 && n > count) {
            out = cluster_log_nodes(pts, count);
        } else if (count > 0) {
            for (const auto& pt : pts) {
                out.push_back(pt.first);
            }
        }
        return out;
    };

    std::vector<std::vector<double>> alternatives;
    if (m > 0 && n > m) {
        // lexicographic m-subsets via a selection mask
        std::vector<char> mask(static_cast<std::size_t>(n), 0);
        std::fill(mask.end() - m, mask.end(), 1);
        int enumerated = 0;
        do {
            std::vector<double> chosen;
            for (int i = 0; i < n; ++i) {
                if (mask[static_cast<std::size_t>(i)]) {
                    chosen.push_back(pts[static_cast<std::size_t>(i)].first);
                }
            }
            alternatives.push_back(separated_and_filled(chosen, pinned_logs, m));
        } while (++enumerated < 256 && std::next_permutation(mask.begin(), mask.end()));
    }
    if (m >= 2) {
        auto add_splits = [&](const std::vector<double>& base, bool drop_one) {
            for (std::size_t j = 0; j < base.size(); ++j) {
                for (std::size_t gone = 0; gone < (drop_one ? base.size() : 1); ++gone) {
                    if (drop_one && gone == j) {
                        continue;
                    }
                    for (double delta : {0.05, 0.15, 0.4}) {
                        std::vector<double> split;
                        for (std::size_t i = 0; i < base.size(); ++i) {
                            if (!(drop_one && i == gone) && i != j) {
                                split.push_back(base[i]);
                            }
                        }
                        split.push_back(base[j] - delta);
                        split.push_back(base[j] + delta);
                        alternatives.push_back(separated_and_filled(split, pinned_logs, m));
                    }
                }
            }
        };
        add_splits(centers(m - 1), false);
        if (m >= 3) {
            // tight triples
            const std::vector<double> coarse = centers(m - 2);
            for (std::size_t j = 0; j < coarse.size(); ++j) {
                for (double delta : {0.05, 0.15}) {
                    std::vector<double> split(coarse);
                    split[j] -= delta;
                    split.push_back(coarse[j]);
                    split.push_back(coarse[j] + delta);
                    alternatives.push_back(separated_and_filled(split, pinned_logs, m));
                }
            }
        }
        // a spurious cluster (e.g. grid mass standing in for a zero atom) next
        // to a merged pair
        add_splits(centers(m), true);
    }

    std::vector<Candidate> ranked;
    for (const auto& logs : alternatives) {
        ranked.push_back(with_fitted_weights(c, shape, logs, pinned_logs, theta));
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const Candidate& a, const Candidate& b) { return a.misfit < b.misfit; });

    std::vector<Representation> out;
    out.push_back(with_fitted_weights(c, shape, separated_and_filled(centers(m), pinned_logs, m), pinned_logs, theta).rep);
    for (const Candidate& cand : ranked) {
        if (out.size() > max_subset_candidates) {
            break;
        }
        const bool duplicate = std::any_of(out.begin(), out.end(), [&](const Representation& r) {
            return r.atoms() == cand.rep.atoms();
        });
        if (!duplicate) {
            out.push_back(cand.rep);
        }
    }
    return out;
}

struct FitResult
{
    std::optional<Representation> rep;
    double residual = std::numeric_limits<double>::infinity();
};

FitResult fit_from(const MomentVector& c, const RepresentationShape& shape, const Representation& init, double tol,
                   const SolverOptions& options, bool allow_continuation = true)
{
    const double theta = conditioning_scale(c);
    MomentSystem sys(c.exponents, theta, shape);
    const double newton_tol = std::min(options.newton_tol, tol);
    Outcome out;
    if (allow_continuation && shape.unknowns() == c.size()) {
        out = solve_by_continuation(sys, c, init, newton_tol, options);
    } else {
        sys.set_target(c.values);
        out = damped_newton(sys, sys.pack(init), newton_tol, options.max_iter);
    }
    FitResult result;
    result.residual = out.residual;
    if (out.domain_exit || !out.params.allFinite()) {
        return result;
    }
    try {
        Representation rep = sys.unpack(out.params);
        const double res = relative_residual(rep, c);
        result.residual = res;
        if (res <= tol) {
            result.rep = std::move(rep);
        }
    } catch (const DomainError&) {
        // collapsed nodes that survived the domain check
    }
    return result;
}

/// Newton from every starting candidate, then continuation from the first few.
FitResult fit_with_support(const MomentVector& c, const RepresentationShape& shape, const Representation& support,
                           double tol, const SolverOptions& options)
{
    const double theta = conditioning_scale(c);
    const std::vector<Representation> starts = initial_candidates(c, shape, support, theta);
    FitResult best;
    for (const Representation& init : starts) {
        FitResult fit = fit_from(c, shape, init, tol, options, false);
        if (fit.rep) {
            return fit;
        }
        if (fit.residual < best.residual) {
            best = std::move(fit);
        }
    }
    if (shape.unknowns() != c.size()) {
        return best;
    }
    for (std::size_t i = 0; i < std::min(starts.size(), continuation_candidates); ++i) {
        FitResult fit = fit_from(c, shape, starts[i], tol, options, true);
        if (fit.rep) {
            return fit;
        }
        if (fit.residual < best.residual) {
            best = std::move(fit);
        }
    }
    return best;
}

RepresentationShape principal_shape(Index d)
{
    return RepresentationShape::of_index(HalfInteger::from_twice(static_cast<int>(d)));
}

bool obviously_outside(const MomentVector& c)
{
    // Moments of a nonzero nonnegative measure with k_1 = 0: positive mass and
    // nonnegative higher moments.
    return !(c.values(0) > 0.0) || (c.values.array() < 0.0).any();
}

Grid attempt_grid(const MomentVector& c, const SolverOptions& options, int attempt)
{
    const int count = options.grid_size * (1 << std::min(attempt, 5));
    return default_grid(c, count);
}

std::optional<IndexedRepresentation> boundary_ladder(const MomentVector& c, const Representation& support, double tol,
                                                     const SolverOptions& options, bool allow_zero_atom)
{
    const auto d = static_cast<int>(c.size());
    for (int twice = 1; twice < d; ++twice) {
        if (!allow_zero_atom && twice % 2 == 1) {
            continue;
        }
        const HalfInteger idx = HalfInteger::from_twice(twice);
        FitResult fit = fit_with_support(c, RepresentationShape::of_index(idx), support, tol, options);
        if (fit.rep) {
            return IndexedRepresentation{idx, std::move(*fit.rep)};
        }
    }
    return std::nullopt;
}

/// Drops atoms whose share in every moment is below tol.
std::optional<Representation> without_negligible_atoms(const Representation& rep, const MomentVector& c, double tol)
{
    const double theta = conditioning_scale(c);
    const Vector<double> target = scaled_moments(c.values, c.exponents, theta);
    const Vector<double> sigma = residual_scales(target);
    std::vector<Atom> kept;
    bool dropped = false;
    for (const Atom& a : rep.atoms()) {
        double share = 0.0;
        for (Index i = 0; i < c.size(); ++i) {
            share = std::max(share, a.weight * ipow(a.node / theta, c.exponents[i]) / sigma(i));
        }
        if (share > tol) {
            kept.push_back(a);
        } else {
            dropped = true;
        }
    }
    if (!dropped) {
        return std::nullopt;
    }
    return Representation(std::move(kept));
}

/// A principal fit with an atom that moves no moment by more than tol is a
/// lower-index representation in disguise.
Representation require_visible_atoms(Representation rep, const MomentVector& c, double tol, const char* who)
{
    if (without_negligible_atoms(rep, c, tol)) {
        throw PreconditionError(std::string(who) + ": vector lies on the boundary of the moment cone");
    }
    return rep;
}

} // namespace

double relative_residual(const Representation& rep, const MomentVector& c)
{
    const double theta = conditioning_scale(c);
    const Vector<double> target = scaled_moments(c.values, c.exponents, theta);
    const Vector<double> sigma = residual_scales(target);
    Vector<double> m = Vector<double>::Zero(c.size());
    for (const Atom& a : rep.atoms()) {
        const double s = a.node / theta;
        for (Index i = 0; i < c.size(); ++i) {
            m(i) += a.weight * ipow(s, c.exponents[i]);
        }
    }
    return (m - target).cwiseQuotient(sigma).lpNorm<Eigen::Infinity>();
}

Representation newton_refine(const Representation& guess, const std::vector<double>& pinned_nodes,
                             const MomentVector& c, double tol, int max_iter)
{
    RepresentationShape shape;
    for (const Atom& a : guess.atoms()) {
        if (a.node == 0.0) {
            shape.zero_atom = true;
        } else if (std::find(pinned_nodes.begin(), pinned_nodes.end(), a.node) != pinned_nodes.end()) {
            shape.pinned.push_back(a.node);
        } else {
            ++shape.free_atoms;
        }
    }
    if (shape.pinned.size() != pinned_nodes.size()) {
        throw PreconditionError("newton_refine: every pinned node must carry an atom of the guess");
    }
    if (shape.unknowns() != c.size()) {
        throw PreconditionError("newton_refine: unknown count differs from the number of moment equations");
    }
    MomentSystem sys(c.exponents, conditioning_scale(c), shape);
    sys.set_target(c.values);
    const Outcome out = damped_newton(sys, sys.pack(guess), tol, max_iter);
    if (out.domain_exit) {
        throw DomainExit("newton_refine: iterate left the positive domain", out.residual);
    }
    if (!out.converged) {
        throw NumericalFailure("newton_refine: no convergence", out.residual);
    }
    return sys.unpack(out.params);
}

std::optional<Representation> fit_shape(const MomentVector& c, const RepresentationShape& shape, double tol,
                                        const SolverOptions& options)
{
    if (shape.unknowns() > c.size()) {
        throw PreconditionError("fit_shape: shape has more unknowns than equations");
    }
    if (c.values.isZero(0.0)) {
        return std::nullopt;
    }
    const int attempts = 1 + std::max(0, options.restarts);
    for (int attempt = 0; attempt < attempts; ++attempt) {
        const FeasibilityReport oracle = cone_membership(c, attempt_grid(c, options, attempt));
        FitResult fit = fit_with_support(c, shape, oracle.support, tol, options);
        if (fit.rep) {
            return fit.rep;
        }
        if (!oracle.feasible) {
            break;
        }
    }
    return std::nullopt;
}

Classification classify(const MomentVector& c, double tol, const SolverOptions& options)
{
    require_zero_exponent(c, "classify");
    if (!(tol > 0.0)) {
        throw DomainError("classify: tolerance must be positive");
    }
    if (!c.values.allFinite()) {
        throw DomainError("classify: moment vector must be finite");
    }
    Classification result;
    if (c.values.isZero(0.0)) {
        result.kind = ConeClass::Zero;
        return result;
    }

    const RepresentationShape principal = principal_shape(c.size());
    const int attempts = 1 + std::max(0, options.restarts);
    double best = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < attempts; ++attempt) {
        FeasibilityReport oracle = cone_membership(c, attempt_grid(c, options, attempt));
        if (attempt == 0) {
            result.oracle = oracle;
        }
        if (obviously_outside(c)) {
            result.kind = ConeClass::Exterior;
            return result;
        }
        if (auto b = boundary_ladder(c, oracle.support, tol, options, true)) {
            result.kind = ConeClass::Boundary;
            result.witness = std::move(b->representation);
            return result;
        }
        FitResult fit = fit_with_support(c, principal, oracle.support, std::min(tol, options.accept_tol), options);
        best = std::min(best, fit.residual);
        if (fit.rep) {
            if (auto reduced = without_negligible_atoms(*fit.rep, c, tol)) {
                result.kind = ConeClass::Boundary;
                result.witness = std::move(*reduced);
            } else {
                result.kind = ConeClass::Interior;
                result.witness = std::move(*fit.rep);
            }
            return result;
        }
        if (!oracle.feasible) {
            result.kind = ConeClass::Exterior;
            return result;
        }
    }
    throw NumericalFailure("classify: oracle reports membership but no representation of index <= d/2 was found",
                           best);
}

IndexedRepresentation minimal_index(const MomentVector& c, double tol, const SolverOptions& options,
                                    bool allow_zero_atom)
{
    require_zero_exponent(c, "minimal_index");
    if (c.values.isZero(0.0)) {
        throw PreconditionError("minimal_index: zero vector has the empty representation");
    }
    const auto d = static_cast<int>(c.size());
    const int attempts = 1 + std::max(0, options.restarts);
    for (int attempt = 0; attempt < attempts; ++attempt) {
        const FeasibilityReport oracle = cone_membership(c, attempt_grid(c, options, attempt));
        if (auto b = boundary_ladder(c, oracle.support, tol, options, allow_zero_atom)) {
            return *b;
        }
        const RepresentationShape principal = principal_shape(c.size());
        if (allow_zero_atom || !principal.zero_atom) {
            FitResult fit = fit_with_support(c, principal, oracle.support, tol, options);
            if (fit.rep) {
                return {principal.index(), std::move(*fit.rep)};
            }
        }
        // Index (d+1)/2 with one node prescribed somewhere above the support.
        RepresentationShape upper = RepresentationShape::of_index(HalfInteger::from_twice(d + 1));
        if (allow_zero_atom || !upper.zero_atom) {
            double top = conditioning_scale(c);
            for (const Atom& a : oracle.support.atoms()) {
                top = std::max(top, a.node);
            }
            upper.free_atoms -= 1;
            upper.pinned.push_back(2.0 * top);
            FitResult fit = fit_with_support(c, upper, oracle.support, tol, options);
            if (fit.rep) {
                return {upper.index(), std::move(*fit.rep)};
            }
        }
        if (!oracle.feasible) {
            break;
        }
    }
    throw InconsistencyError("minimal_index: no representation up to index (d+1)/2 reproduces the vector");
}

namespace
{

[[noreturn]] void diagnose_not_interior(const MomentVector& c, double tol, const SolverOptions& options, double best,
                                        const char* who)
{
    if (c.values.isZero(0.0)) {
        throw PreconditionError(std::string(who) + ": zero vector is not interior");
    }
    const FeasibilityReport oracle = cone_membership(c, attempt_grid(c, options, options.restarts));
    if (obviously_outside(c) || !oracle.feasible) {
        throw PreconditionError(std::string(who) + ": vector lies outside the moment cone");
    }
    if (boundary_ladder(c, oracle.support, std::max(tol, 1e-7), options, true)) {
        throw PreconditionError(std::string(who) + ": vector lies on the boundary of the moment cone");
    }
    throw NumericalFailure(std::string(who) + ": Newton did not converge after all restarts", best);
}

} // namespace

Representation principal_representation(const MomentVector& c, double tol, const SolverOptions& options)
{
    require_zero_exponent(c, "principal_representation");
    const RepresentationShape shape = principal_shape(c.size());
    double best = std::numeric_limits<double>::infinity();
    if (!c.values.isZero(0.0) && !obviously_outside(c)) {
        const int attempts = 1 + std::max(0, options.restarts);
        for (int attempt = 0; attempt < attempts; ++attempt) {
            const FeasibilityReport oracle = cone_membership(c, attempt_grid(c, options, attempt));
            FitResult fit = fit_with_support(c, shape, oracle.support, tol, options);
            best = std::min(best, fit.residual);
            if (fit.rep) {
                return require_visible_atoms(std::move(*fit.rep), c, tol, "principal_representation");
            }
            if (!oracle.feasible) {
                break;
            }
        }
    }
    diagnose_not_interior(c, tol, options, best, "principal_representation");
}

Representation principal_representation_from(const MomentVector& c, const Representation& initial, double tol,
                                             const SolverOptions& options)
{
    require_zero_exponent(c, "principal_representation_from");
    const RepresentationShape shape = principal_shape(c.size());
    if (initial.has_zero_atom() != shape.zero_atom || initial.positive_count() != shape.free_atoms) {
        throw PreconditionError("principal_representation_from: initial representation has the wrong shape");
    }
    FitResult fit = fit_from(c, shape, initial, tol, options);
    if (!fit.rep) {
        throw NumericalFailure("principal_representation_from: continuation did not converge", fit.residual);
    }
    return require_visible_atoms(std::move(*fit.rep), c, tol, "principal_representation_from");
}

Representation canonical_representation(const MomentVector& c, double t_star, double tol,
                                        const SolverOptions& options)
{
    require_zero_exponent(c, "canonical_representation");
    if (!(t_star > 0.0) || !std::isfinite(t_star)) {
        throw DomainError("canonical_representation: prescribed root must be positive and finite");
    }
    const Representation principal = principal_representation(c, tol, options);
    const double theta = conditioning_scale(c);
    for (const Atom& a : principal.atoms()) {
        if (a.node > 0.0 && std::abs(a.node - t_star) <= 1e-8 * theta) {
            throw CoincidenceError("canonical_representation: prescribed root coincides with a principal node",
                                   a.node);
        }
    }

    const auto d = c.size();
    RepresentationShape shape;
    shape.pinned = {t_star};
    std::vector<Atom> init;
    if (d % 2 == 1) {
        // principal: 0 + (d-1)/2 positive; canonical: t* + (d-1)/2 free.
        shape.free_atoms = static_cast<int>((d - 1) / 2);
        double moved = 0.0;
        for (const Atom& a : principal.atoms()) {
            if (a.node == 0.0) {
                moved = a.weight;
            } else {
                init.push_back(a);
            }
        }
        init.push_back({t_star, moved});
    } else {
        // principal: d/2 positive; canonical: 0 + t* + (d/2 - 1) free.
        shape.zero_atom = true;
        shape.free_atoms = static_cast<int>(d / 2 - 1);
        std::size_t nearest = 0;
        const auto& atoms = principal.atoms();
        for (std::size_t i = 1; i < atoms.size(); ++i) {
            if (std::abs(std::log(atoms[i].node / t_star)) < std::abs(std::log(atoms[nearest].node / t_star))) {
                nearest = i;
            }
        }
        double min_weight = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            min_weight = std::min(min_weight, atoms[i].weight);
            if (i != nearest) {
                init.push_back(atoms[i]);
            }
        }
        init.push_back({t_star, atoms[nearest].weight});
        init.push_back({0.0, 1e-3 * min_weight});
    }

    double best = std::numeric_limits<double>::infinity();
    try {
        FitResult fit = fit_from(c, shape, Representation(init), tol, options);
        if (fit.rep) {
            return std::move(*fit.rep);
        }
        best = fit.residual;
    } catch (const DomainError&) {
        // pinned node too close to a principal node for a valid starting point
    }
    const int attempts = 1 + std::max(0, options.restarts);
    for (int attempt = 0; attempt < attempts; ++attempt) {
        const FeasibilityReport oracle = cone_membership(c, attempt_grid(c, options, attempt));
        FitResult fit = fit_with_support(c, shape, oracle.support, tol, options);
        best = std::min(best, fit.residual);
        if (fit.rep) {
            return std::move(*fit.rep);
        }
    }
    // On the half-line the canonical family can carry mass at infinity; for
    // such roots no finite representation exists and Newton cannot converge.
    throw NumericalFailure("canonical_representation: no finite representation with this root found "
                           "(the canonical one may need mass at infinity)",
                           best);
}

} // namespace kolmo
