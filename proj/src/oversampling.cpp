#include "opfimb/oversampling.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace opfimb {

namespace {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kWeiszfeldFloor = 1e-12;

std::vector<double> to_vec(std::span<const double> s) { return {s.begin(), s.end()}; }

std::vector<double> mean_of(const Dataset& pts, std::span<const Index> rows) {
    std::vector<double> m(pts.dim(), 0.0);
    for (Index r : rows)
        for (std::size_t j = 0; j < pts.dim(); ++j) m[j] += pts.at(r, j);
    for (auto& v : m) v /= static_cast<double>(rows.size());
    return m;
}

std::vector<double> gaussian_draw(const ClusterModel& c, RandomSource& rng) {
    const std::size_t dim = c.center.size();
    std::vector<double> g(dim);
    for (auto& v : g) v = rng.normal();
    std::vector<double> z = c.center;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j <= i; ++j) z[i] += c.cholesky[i * dim + j] * g[j];
    return z;
}

// nearest member of the cluster to z; smaller index on ties
std::span<const double> nearest_member(const Dataset& pts, const ClusterModel& c,
                                       std::span<const double> z, const DistanceFn& d) {
    Index best = c.members.front();
    double best_d = distance(d, pts.row(best), z);
    for (Index r : c.members) {
        const double dr = distance(d, pts.row(r), z);
        if (dr < best_d || (dr == best_d && r < best)) {
            best = r;
            best_d = dr;
        }
    }
    return pts.row(best);
}

std::vector<double> interpolate_towards(std::span<const double> from, std::span<const double> to,
                                        double t) {
    std::vector<double> out(from.size());
    for (std::size_t j = 0; j < from.size(); ++j) out[j] = (1.0 - t) * from[j] + t * to[j];
    return out;
}

}  // namespace

std::string_view to_string(OverVariant v) {
    switch (v) {
        case OverVariant::O2PF: return "O2PF";
        case OverVariant::RI: return "RI";
        case OverVariant::MI: return "MI";
        case OverVariant::P: return "P";
        case OverVariant::WI: return "WI";
    }
    return "?";
}

std::vector<std::size_t> allocate(std::span<const std::size_t> sizes, std::size_t n_s) {
    const std::size_t total = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
    if (total == 0) throw OpfError("cannot allocate over empty clusters");
    std::vector<std::size_t> out(sizes.size());
    std::size_t given = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        // integer arithmetic: floor(size * n_s / total)
        out[i] = sizes[i] * n_s / total;
        given += out[i];
    }
    std::vector<std::size_t> order(sizes.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return sizes[a] > sizes[b]; });
    for (std::size_t i = 0; given < n_s; i = (i + 1) % order.size(), ++given) ++out[order[i]];
    return out;
}

std::vector<double> sample_covariance(const Dataset& points, std::span<const Index> rows) {
    const std::size_t dim = points.dim();
    std::vector<double> cov(dim * dim, 0.0);
    if (rows.size() < 2) return cov;
    const auto mu = mean_of(points, rows);
    for (Index r : rows)
        for (std::size_t i = 0; i < dim; ++i) {
            const double ci = points.at(r, i) - mu[i];
            for (std::size_t j = 0; j <= i; ++j) cov[i * dim + j] += ci * (points.at(r, j) - mu[j]);
        }
    const double denom = static_cast<double>(rows.size() - 1);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            cov[i * dim + j] /= denom;
            cov[j * dim + i] = cov[i * dim + j];
        }
    return cov;
}

Factor regularized_cholesky(std::span<const double> cov, std::size_t dim, bool force) {
    Eigen::Map<const Matrix> sigma(cov.data(), static_cast<Eigen::Index>(dim),
                                   static_cast<Eigen::Index>(dim));
    Factor f;
    if (!force) {
        Eigen::LLT<Matrix> llt(sigma);
        if (llt.info() == Eigen::Success) {
            Matrix l = llt.matrixL();
            f.lower.assign(l.data(), l.data() + l.size());
            return f;
        }
    }
    double eps = std::max(1e-6 * sigma.trace() / static_cast<double>(dim), 1e-9);
    for (;;) {
        Matrix reg = sigma;
        reg.diagonal().array() += eps;
        Eigen::LLT<Matrix> llt(reg);
        if (llt.info() == Eigen::Success) {
            Matrix l = llt.matrixL();
            f.lower.assign(l.data(), l.data() + l.size());
            f.regularization = eps;
            return f;
        }
        eps *= 10.0;
    }
}

std::vector<double> geometric_median(std::span<const std::vector<double>> points,
                                     std::span<const double> start, double tol,
                                     std::size_t max_iter) {
    if (points.empty()) throw OpfError("geometric median of an empty set");
    const std::size_t dim = points.front().size();
    std::vector<double> g(dim, 0.0);
    if (start.empty()) {
        for (const auto& p : points)
            for (std::size_t j = 0; j < dim; ++j) g[j] += p[j];
        for (auto& v : g) v /= static_cast<double>(points.size());
    } else {
        g.assign(start.begin(), start.end());
    }
    std::vector<double> next(dim);
    for (std::size_t it = 0; it < max_iter; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        double wsum = 0.0;
        for (const auto& p : points) {
            const double w = 1.0 / std::max(euclidean(p, g), kWeiszfeldFloor);
            for (std::size_t j = 0; j < dim; ++j) next[j] += w * p[j];
            wsum += w;
        }
        for (auto& v : next) v /= wsum;
        const double step = euclidean(next, g);
        g.swap(next);
        if (step < tol) break;
    }
    return g;
}

OverResult oversample(const Dataset& train, std::size_t n_s, const OverPolicy& policy,
                      RandomSource& rng, const DistanceFn& d) {
    if (n_s == 0) throw OpfError("number of synthetic samples must be positive");
    if (policy.k_max < 1) throw OpfError("k_max must be at least 1");
    const int minority = train.minority_label();
    const auto minority_rows = train.indices_of(minority);
    if (minority_rows.size() < 2) throw OpfError("oversampling needs at least 2 minority samples");
    const Dataset pts = train.subset(minority_rows);
    const std::size_t dim = train.dim();

    const std::size_t k_max = std::min(policy.k_max, pts.size() - 1);
    const auto bk = best_k(pts, k_max, d);

    OverResult out;
    out.k_star = bk.k;
    std::vector<std::size_t> sizes;
    for (const auto& m : bk.forest.members) sizes.push_back(m.size());
    const auto alloc = allocate(sizes, n_s);

    for (std::size_t c = 0; c < bk.forest.cluster_count(); ++c) {
        ClusterModel cm;
        cm.members = bk.forest.members[c];
        cm.allocation = alloc[c];
        cm.covariance = sample_covariance(pts, cm.members);
        switch (policy.variant) {
            case OverVariant::P:
                cm.center = to_vec(pts.row(bk.forest.prototypes[c]));
                break;
            case OverVariant::WI: {
                cm.center.assign(dim, 0.0);
                double wsum = 0.0;
                for (Index r : cm.members) {
                    const double w = bk.graph.density[r];
                    for (std::size_t j = 0; j < dim; ++j) cm.center[j] += w * pts.at(r, j);
                    wsum += w;
                }
                for (auto& v : cm.center) v /= wsum;
                break;
            }
            case OverVariant::RI: {
                std::vector<std::vector<double>> mem;
                for (Index r : cm.members) mem.push_back(to_vec(pts.row(r)));
                cm.center = geometric_median(mem);
                break;
            }
            default:
                cm.center = mean_of(pts, cm.members);
        }
        auto factor = regularized_cholesky(cm.covariance, dim, cm.members.size() < 2);
        cm.cholesky = std::move(factor.lower);
        cm.regularization = factor.regularization;
        out.clusters.push_back(std::move(cm));
    }

    Dataset synth(dim, {}, {}, {}, {}, train.schema_ptr());
    SampleId next_id = train.max_id() + 1;
    for (std::size_t c = 0; c < out.clusters.size(); ++c) {
        const auto& cm = out.clusters[c];
        std::size_t made = 0;
        if (cm.allocation > 0) {
            auto crng = rng.spawn(c);
            std::vector<std::vector<double>> pool;
            std::vector<double> median;
            if (policy.variant == OverVariant::RI) {
                for (Index r : cm.members) pool.push_back(to_vec(pts.row(r)));
                median = cm.center;
            }
            for (; made < cm.allocation; ++made) {
                std::vector<double> z;
                switch (policy.variant) {
                    case OverVariant::O2PF:
                    case OverVariant::P:
                        z = gaussian_draw(cm, *crng);
                        break;
                    case OverVariant::MI:
                    case OverVariant::WI: {
                        const auto draw = gaussian_draw(cm, *crng);
                        const auto p = nearest_member(pts, cm, draw, d);
                        const double alpha = crng->uniform();
                        z = interpolate_towards(p, draw, alpha);
                        break;
                    }
                    case OverVariant::RI: {
                        const Index r = cm.members[crng->below(static_cast<std::uint32_t>(cm.members.size()))];
                        const auto xr = pts.row(r);
                        const double bound = 1.0 / (1.0 + distance(d, median, xr));
                        const double beta = crng->uniform(0.0, bound);
                        z.resize(dim);
                        for (std::size_t j = 0; j < dim; ++j)
                            z[j] = beta * xr[j] + (1.0 - beta) * median[j];
                        pool.push_back(z);
                        median = geometric_median(pool, median);
                        break;
                    }
                }
                synth.push_back(z, minority, next_id++, true);
            }
        }
        out.emitted.push_back(made);
    }
    out.data = train.concat(synth);
    return out;
}

}  // namespace opfimb
