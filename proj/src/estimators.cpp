#include "percolab/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "percolab/rng.hpp"

namespace percolab {

double normal_quantile_two_sided(double level) {
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("confidence level must lie in (0,1)");
    // Acklam's rational approximation to the normal quantile, |error| < 1.2e-9.
    double q = (1.0 + level) / 2.0;
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (q < plow) {
        double u = std::sqrt(-2.0 * std::log(q));
        x = (((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
            ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
    } else if (q <= 1.0 - plow) {
        double u = q - 0.5, t = u * u;
        x = (((((a[0] * t + a[1]) * t + a[2]) * t + a[3]) * t + a[4]) * t + a[5]) * u /
            (((((b[0] * t + b[1]) * t + b[2]) * t + b[3]) * t + b[4]) * t + 1.0);
    } else {
        double u = std::sqrt(-2.0 * std::log(1.0 - q));
        x = -(((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
            ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
    }
    return x;
}

Estimate proportion_estimate(std::uint64_t successes, std::uint64_t samples, double ci_z) {
    if (samples == 0) throw std::invalid_argument("proportion_estimate: samples must be >= 1");
    if (successes > samples)
        throw std::invalid_argument("proportion_estimate: successes exceed samples");
    Estimate e;
    e.samples = samples;
    e.successes = successes;
    const double n = static_cast<double>(samples);
    e.mean = static_cast<double>(successes) / n;
    e.stderr_ = std::sqrt(e.mean * (1.0 - e.mean) / n);
    const double z2 = ci_z * ci_z;
    const double denom = 1.0 + z2 / n;
    const double center = (e.mean + z2 / (2.0 * n)) / denom;
    const double half =
        ci_z * std::sqrt(e.mean * (1.0 - e.mean) / n + z2 / (4.0 * n * n)) / denom;
    e.ci_low = std::max(0.0, center - half);
    e.ci_high = std::min(1.0, center + half);
    return e;
}

namespace {

struct Accum {
    std::vector<std::uint64_t> hits;
    std::vector<std::uint64_t> n_plus, n_minus, n_both;
    std::uint64_t singleton_samples = 0; // cluster was exactly {origin}

    explicit Accum(std::size_t targets)
        : hits(targets, 0),
          n_plus(targets ? targets - 1 : 0, 0),
          n_minus(targets ? targets - 1 : 0, 0),
          n_both(targets ? targets - 1 : 0, 0) {}

    void merge(const Accum& o) {
        for (std::size_t i = 0; i < hits.size(); ++i) hits[i] += o.hits[i];
        for (std::size_t i = 0; i < n_plus.size(); ++i) {
            n_plus[i] += o.n_plus[i];
            n_minus[i] += o.n_minus[i];
            n_both[i] += o.n_both[i];
        }
        singleton_samples += o.singleton_samples;
    }
};

// Grows the open cluster of the origin with marks drawn on demand; the
// counter-based generator makes the lazily drawn marks identical to a full
// sample_config() sweep of the same stream.
struct ClusterWalker {
    const std::uint32_t* off;
    const Vertex* adj_v;
    const Bond* adj_b;
    const std::uint8_t* is_bnd;
    const std::uint8_t* is_target;
    std::vector<std::uint32_t> stamp;
    std::vector<Vertex> stack;
    std::uint32_t epoch = 0;

    explicit ClusterWalker(const LatticeGraph& g, const std::vector<std::uint8_t>& target_mask)
        : off(g.adj_offset().data()),
          adj_v(g.adj_vertex().data()),
          adj_b(g.adj_bond().data()),
          is_bnd(g.boundary_mask().data()),
          is_target(target_mask.data()),
          stamp(g.vertex_count(), 0) {
        stack.reserve(64);
    }

    std::uint32_t next_epoch() {
        if (++epoch == 0) {
            std::fill(stamp.begin(), stamp.end(), 0u);
            epoch = 1;
        }
        return epoch;
    }

    // Returns cluster size, or 0 if a boundary vertex was reached in
    // truncated mode (cluster membership is then irrelevant: every
    // indicator is zero).
    template <bool Truncated>
    std::uint32_t grow(const CounterRng& rng, std::uint64_t thresh, Vertex origin,
                       std::uint32_t targets_left) {
        const std::uint32_t ep = next_epoch();
        stamp[origin] = ep;
        stack.clear();
        stack.push_back(origin);
        std::uint32_t size = 1;
        while (!stack.empty()) {
            Vertex x = stack.back();
            stack.pop_back();
            for (std::uint32_t i = off[x], end = off[x + 1]; i < end; ++i) {
                if ((rng.bits(adj_b[i]) >> 11) >= thresh) continue;
                Vertex y = adj_v[i];
                if (stamp[y] == ep) continue;
                stamp[y] = ep;
                if constexpr (Truncated) {
                    if (is_bnd[y]) return 0;
                } else {
                    if (is_target[y] && --targets_left == 0) return size + 1;
                }
                ++size;
                stack.push_back(y);
            }
        }
        return size;
    }
};

} // namespace

PairedCurve estimate_curve(const LatticeGraph& g, const CurveParams& params) {
    if (!(params.p >= 0.0 && params.p <= 1.0))
        throw std::invalid_argument("p must lie in [0,1]");
    if (params.samples < 1) throw std::invalid_argument("samples must be >= 1");
    if (params.ns.empty()) throw std::invalid_argument("n_list must be nonempty");

    std::vector<int> ns = params.ns;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

    const Vertex origin = axis_pair(g, 0).first;
    std::vector<Vertex> targets;
    targets.reserve(ns.size());
    for (int n : ns) targets.push_back(axis_pair(g, n).second);

    std::vector<std::uint8_t> target_mask(g.vertex_count(), 0);
    std::uint32_t targets_not_origin = 0;
    for (Vertex t : targets)
        if (t != origin && !target_mask[t]) {
            target_mask[t] = 1;
            ++targets_not_origin;
        }

    const bool truncated = params.kind == EventKind::truncated;
    const std::uint64_t thresh = bernoulli_threshold(params.p);
    const std::uint64_t total = params.samples;
    const int workers = std::max(1, params.workers);

    // With the origin itself on the boundary the truncated event is
    // impossible for every configuration.
    const bool origin_blocked = truncated && g.is_boundary(origin);

    std::vector<Accum> acc(static_cast<std::size_t>(workers), Accum(targets.size()));
    if (!origin_blocked) {
        auto run_range = [&](std::uint64_t s0, std::uint64_t s1, Accum& a) {
            ClusterWalker walker(g, target_mask);
            const std::size_t k = targets.size();
            std::vector<std::uint8_t> ind(k);
            for (std::uint64_t s = s0; s < s1; ++s) {
                CounterRng rng({params.seed, s});
                std::uint32_t size =
                    truncated ? walker.grow<true>(rng, thresh, origin, targets_not_origin)
                              : walker.grow<false>(rng, thresh, origin, targets_not_origin);
                if (size == 0) continue; // truncated event killed by the boundary
                if (size == 1) {
                    ++a.singleton_samples;
                    continue;
                }
                const std::uint32_t ep = walker.epoch;
                for (std::size_t i = 0; i < k; ++i) {
                    std::uint8_t I = walker.stamp[targets[i]] == ep;
                    ind[i] = I;
                    a.hits[i] += I;
                }
                for (std::size_t i = 0; i + 1 < k; ++i) {
                    if (ns[i + 1] != ns[i] + 1) continue;
                    a.n_plus[i] += ind[i] & static_cast<std::uint8_t>(~ind[i + 1] & 1);
                    a.n_minus[i] += static_cast<std::uint8_t>(~ind[i] & 1) & ind[i + 1];
                    a.n_both[i] += ind[i] & ind[i + 1];
                }
            }
        };

        if (workers == 1 || total < 2) {
            run_range(0, total, acc[0]);
        } else {
            std::vector<std::thread> pool;
            const std::uint64_t chunk = total / workers;
            const std::uint64_t rem = total % workers;
            std::uint64_t s = 0;
            for (int w = 0; w < workers; ++w) {
                std::uint64_t len = chunk + (static_cast<std::uint64_t>(w) < rem ? 1 : 0);
                pool.emplace_back(run_range, s, s + len, std::ref(acc[w]));
                s += len;
            }
            for (auto& t : pool) t.join();
        }
        for (int w = 1; w < workers; ++w) acc[0].merge(acc[w]);
    }

    // Fold the singleton fast path back in: a cluster equal to {origin}
    // realizes exactly the targets that coincide with the origin.
    Accum& a = acc[0];
    {
        const std::size_t k = targets.size();
        std::vector<std::uint8_t> ind(k);
        for (std::size_t i = 0; i < k; ++i) ind[i] = targets[i] == origin;
        for (std::size_t i = 0; i < k; ++i)
            a.hits[i] += a.singleton_samples * ind[i];
        for (std::size_t i = 0; i + 1 < k; ++i) {
            if (ns[i + 1] != ns[i] + 1) continue;
            a.n_plus[i] += a.singleton_samples * (ind[i] & (~ind[i + 1] & 1));
            a.n_minus[i] += a.singleton_samples * ((~ind[i] & 1) & ind[i + 1]);
            a.n_both[i] += a.singleton_samples * (ind[i] & ind[i + 1]);
        }
    }

    PairedCurve out;
    out.p = params.p;
    out.kind = params.kind;
    out.samples = total;
    out.ns = ns;
    const double ci_z = normal_quantile_two_sided(params.ci_level);
    for (std::size_t i = 0; i < targets.size(); ++i)
        out.entries.push_back(proportion_estimate(a.hits[i], total, ci_z));
    const double n = static_cast<double>(total);
    for (std::size_t i = 0; i + 1 < targets.size(); ++i) {
        if (ns[i + 1] != ns[i] + 1) continue;
        PairDiff d;
        d.n = ns[i];
        d.n_plus = a.n_plus[i];
        d.n_minus = a.n_minus[i];
        d.n_both = a.n_both[i];
        const double discordant = static_cast<double>(d.n_plus + d.n_minus);
        const double diff_count =
            static_cast<double>(d.n_plus) - static_cast<double>(d.n_minus);
        d.mean_diff = diff_count / n;
        if (total > 1) {
            double ssq = (discordant - diff_count * diff_count / n) / (n - 1.0);
            d.stderr_ = std::sqrt(std::max(0.0, ssq) / n);
        }
        out.diffs.push_back(d);
    }
    return out;
}

PairedCurve estimate_curve(const BoxSpec& spec, const CurveParams& params) {
    return estimate_curve(build_box(spec), params);
}

namespace {

// Lemire's unbiased bounded sampler over [0, s).
std::uint64_t bounded_draw(const CounterRng& rng, std::uint64_t& ctr, std::uint64_t s) {
    while (true) {
        std::uint64_t x = rng.bits(ctr++);
        unsigned __int128 m = static_cast<unsigned __int128>(x) * s;
        std::uint64_t low = static_cast<std::uint64_t>(m);
        if (low < s) {
            std::uint64_t t = (0 - s) % s;
            if (low < t) continue;
        }
        return static_cast<std::uint64_t>(m >> 64);
    }
}

// Upper tails T[j] = P(Binom(M, p) >= j), j = 0..M, with log-space terms.
std::vector<double> binomial_upper_tail(std::uint32_t m, double p) {
    std::vector<double> tail(m + 2, 0.0);
    if (p <= 0.0) {
        tail[0] = 1.0;
        return tail;
    }
    if (p >= 1.0) {
        std::fill(tail.begin(), tail.end() - 1, 1.0);
        return tail;
    }
    const double lp = std::log(p), lq = std::log1p(-p);
    const double lgm = std::lgamma(static_cast<double>(m) + 1.0);
    double acc = 0.0;
    for (std::int64_t k = m; k >= 0; --k) {
        double lw = lgm - std::lgamma(static_cast<double>(k) + 1.0) -
                    std::lgamma(static_cast<double>(m - k) + 1.0) + k * lp +
                    (m - k) * lq;
        acc += std::exp(lw);
        tail[static_cast<std::size_t>(k)] = std::min(acc, 1.0);
    }
    return tail;
}

} // namespace

SweepFamily sweep_estimate(const LatticeGraph& g, const std::vector<int>& n_list,
                           const std::vector<double>& p_grid, std::uint64_t sweeps,
                           std::uint64_t seed, EventKind kind) {
    if (kind == EventKind::truncated)
        throw std::invalid_argument(
            "sweep_estimate: the truncated event is not increasing in the bond "
            "count and cannot be sweep-estimated; use estimate_curve");
    if (sweeps < 1) throw std::invalid_argument("sweeps must be >= 1");
    for (double p : p_grid)
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0,1]");

    std::vector<int> ns = n_list;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    if (ns.empty()) throw std::invalid_argument("n_list must be nonempty");

    const Vertex origin = axis_pair(g, 0).first;
    std::vector<Vertex> targets;
    for (int n : ns) targets.push_back(axis_pair(g, n).second);

    const std::uint32_t m = g.bond_count();
    const std::size_t k = targets.size();

    // first_connect_hist[i][j]: sweeps whose event i first held with j bonds.
    std::vector<std::vector<std::uint64_t>> hist(k, std::vector<std::uint64_t>(m + 1, 0));

    std::vector<Bond> perm(m);
    std::vector<std::uint8_t> done(k);
    DisjointSet dsu(g.vertex_count());
    for (std::uint64_t s = 0; s < sweeps; ++s) {
        CounterRng rng({seed, s});
        std::uint64_t ctr = 0;
        for (Bond b = 0; b < m; ++b) perm[b] = b;
        for (std::uint32_t j = m; j > 1; --j) {
            std::uint64_t r = bounded_draw(rng, ctr, j);
            std::swap(perm[j - 1], perm[r]);
        }
        dsu.reset();
        std::size_t remaining = k;
        std::fill(done.begin(), done.end(), 0);
        for (std::size_t i = 0; i < k; ++i) {
            if (targets[i] == origin) { // event holds with zero bonds
                ++hist[i][0];
                done[i] = 1;
                --remaining;
            }
        }
        for (std::uint32_t j = 0; j < m && remaining > 0; ++j) {
            auto [x, y] = g.bond_endpoints(perm[j]);
            dsu.unite(x, y);
            for (std::size_t i = 0; i < k; ++i) {
                if (done[i]) continue;
                if (dsu.same(origin, targets[i])) {
                    ++hist[i][j + 1];
                    done[i] = 1;
                    --remaining;
                }
            }
        }
        if (remaining > 0)
            throw std::logic_error("sweep_estimate: box graph should connect all targets");
    }

    SweepFamily fam;
    fam.p_grid = p_grid;
    fam.ns = ns;
    fam.sweeps = sweeps;
    fam.curves.resize(p_grid.size());
    const double s_count = static_cast<double>(sweeps);
    for (std::size_t pi = 0; pi < p_grid.size(); ++pi) {
        std::vector<double> tail = binomial_upper_tail(m, p_grid[pi]);
        for (std::size_t i = 0; i < k; ++i) {
            double sum = 0.0, sumsq = 0.0;
            for (std::uint32_t j = 0; j <= m; ++j) {
                if (!hist[i][j]) continue;
                double t = tail[j];
                double c = static_cast<double>(hist[i][j]);
                sum += c * t;
                sumsq += c * t * t;
            }
            SweepCurvePoint pt;
            pt.n = ns[i];
            pt.mean = sum / s_count;
            if (sweeps > 1) {
                double var = (sumsq - sum * sum / s_count) / (s_count - 1.0);
                pt.stderr_ = std::sqrt(std::max(0.0, var) / s_count);
            }
            fam.curves[pi].push_back(pt);
        }
    }
    return fam;
}

SweepFamily sweep_estimate(const BoxSpec& spec, const std::vector<int>& n_list,
                           const std::vector<double>& p_grid, std::uint64_t sweeps,
                           std::uint64_t seed, EventKind kind) {
    return sweep_estimate(build_box(spec), n_list, p_grid, sweeps, seed, kind);
}

namespace {

struct Wls {
    double slope = 0.0, intercept = 0.0;
    double slope_se = 0.0;
    std::vector<double> residuals;
};

// Weighted least squares of y against x. With calibrated weights (1/sigma^2)
// the slope variance is 1/Sxx; with uniform fallback weights it is estimated
// from the residual mean square.
Wls weighted_line_fit(const std::vector<double>& x, const std::vector<double>& y,
                      const std::vector<double>& w, bool calibrated) {
    const std::size_t n = x.size();
    double sw = 0, swx = 0, swy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sw += w[i];
        swx += w[i] * x[i];
        swy += w[i] * y[i];
    }
    const double xbar = swx / sw, ybar = swy / sw;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += w[i] * (x[i] - xbar) * (x[i] - xbar);
        sxy += w[i] * (x[i] - xbar) * (y[i] - ybar);
    }
    if (!(sxx > 0.0)) throw std::domain_error("singular fit: no spread in n");
    Wls fit;
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;
    fit.residuals.resize(n);
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        fit.residuals[i] = y[i] - (fit.intercept + fit.slope * x[i]);
        rss += w[i] * fit.residuals[i] * fit.residuals[i];
    }
    if (calibrated) {
        fit.slope_se = std::sqrt(1.0 / sxx);
    } else {
        double mse = n > 2 ? rss / (static_cast<double>(n) - 2.0) : 0.0;
        fit.slope_se = std::sqrt(mse / sxx);
    }
    return fit;
}

} // namespace

XiEstimate estimate_xi(const std::vector<CurvePoint>& curve, XiModel model,
                       std::optional<std::pair<int, int>> window) {
    if (curve.size() < 3)
        throw std::invalid_argument("estimate_xi: need at least 3 curve points");

    // Default window: the longest contiguous run where values clear 10x
    // their standard error (and are strictly positive).
    std::size_t lo = 0, hi = 0;
    if (window) {
        bool found_lo = false;
        for (std::size_t i = 0; i < curve.size(); ++i) {
            if (curve[i].n == window->first) {
                lo = i;
                found_lo = true;
            }
            if (curve[i].n == window->second) hi = i;
        }
        if (!found_lo || curve[hi].n != window->second || hi < lo)
            throw std::invalid_argument("estimate_xi: window outside curve");
    } else {
        std::size_t best_lo = 0, best_len = 0, run_lo = 0, run_len = 0;
        for (std::size_t i = 0; i < curve.size(); ++i) {
            bool ok = curve[i].value > 0.0 && curve[i].value > 10.0 * curve[i].stderr_;
            if (ok) {
                if (run_len == 0) run_lo = i;
                if (++run_len > best_len) {
                    best_len = run_len;
                    best_lo = run_lo;
                }
            } else {
                run_len = 0;
            }
        }
        if (best_len < 3)
            throw std::invalid_argument(
                "estimate_xi: fewer than 3 points clear the 10x-stderr window rule");
        lo = best_lo;
        hi = best_lo + best_len - 1;
    }

    std::vector<double> x, y, w;
    bool all_exact = true;
    for (std::size_t i = lo; i <= hi; ++i) {
        if (!(curve[i].value > 0.0))
            throw std::invalid_argument("estimate_xi: nonpositive value inside window");
        if (curve[i].stderr_ > 0.0) all_exact = false;
    }
    for (std::size_t i = lo; i <= hi; ++i) {
        const double v = curve[i].value;
        double resp = std::log(v);
        if (model.oz_corrected) resp += model.nu * std::log(static_cast<double>(curve[i].n));
        x.push_back(static_cast<double>(curve[i].n));
        y.push_back(resp);
        if (all_exact) {
            w.push_back(1.0);
        } else {
            double se_log = std::max(curve[i].stderr_ / v, 1e-300);
            w.push_back(1.0 / (se_log * se_log));
        }
    }
    if (x.size() < 3) throw std::invalid_argument("estimate_xi: fit needs >= 3 points");

    Wls fit = weighted_line_fit(x, y, w, /*calibrated=*/!all_exact);
    if (!(fit.slope < 0.0))
        throw std::domain_error("estimate_xi: curve does not decay (slope >= 0)");

    XiEstimate est;
    est.xi = -1.0 / fit.slope;
    est.stderr_ = fit.slope_se / (fit.slope * fit.slope);
    est.amplitude = std::exp(fit.intercept);
    est.window_lo = curve[lo].n;
    est.window_hi = curve[hi].n;
    est.model = model;
    est.residuals = fit.residuals;
    return est;
}

std::vector<CurvePoint> to_curve_points(const PairedCurve& curve) {
    std::vector<CurvePoint> pts;
    pts.reserve(curve.ns.size());
    for (std::size_t i = 0; i < curve.ns.size(); ++i)
        pts.push_back({curve.ns[i], curve.entries[i].mean, curve.entries[i].stderr_});
    return pts;
}

} // namespace percolab
