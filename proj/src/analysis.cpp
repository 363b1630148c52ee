#include "percolab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace percolab {

double lambda_of(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("lambda requires p in (0,1)");
    return (1.0 - p) / p;
}

BoundPair lemma2_bounds(double p, int n, const BoundParams& params) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("lemma2_bounds: p must lie in (0,1)");
    if (n < 0) throw std::invalid_argument("lemma2_bounds: n must be >= 0");
    if (!(params.c1 > 0.0) || !(params.c2 > 0.0))
        throw std::invalid_argument("lemma2_bounds: constants must be positive");
    BoundPair b;
    b.lower = std::pow(p, n) * std::pow(1.0 - p, params.c1 * n);
    b.upper = std::pow(p, n) * std::pow(1.0 + params.c2 * p, 0.5 * n);
    return b;
}

BoundPair lemma4_bounds(double p, int n, int d, const BoundParams& params) {
    if (d < 3)
        throw std::invalid_argument("lemma4_bounds: defined for d >= 3 only");
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("lemma4_bounds: p must lie in (0,1)");
    if (n < 0) throw std::invalid_argument("lemma4_bounds: n must be >= 0");
    if (!(params.c > 0.0))
        throw std::invalid_argument("lemma4_bounds: constant C must be positive");
    const double lam = lambda_of(p);
    const double expo = 2.0 * (d - 1) * (n + 1) + 2.0;
    BoundPair b;
    b.lower = std::pow(lam / ((1.0 + lam) * (1.0 + lam)), expo);
    b.upper = 2.0 * std::pow(lam * std::sqrt(1.0 + params.c * lam), expo);
    return b;
}

BoundPair lemma6_bounds(double p, int n) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("lemma6_bounds: p must lie in (0,1)");
    if (n < 0) throw std::invalid_argument("lemma6_bounds: n must be >= 0");
    const double lam = lambda_of(p);
    BoundPair b;
    b.lower = std::pow(lam, 2.0 * n + 2.0) * std::pow(p, 2.0 * n);
    const double q = 64.0 * lam;
    if (q < 1.0) {
        b.upper = std::pow(lam, 2.0 * n + 2.0) *
                  (std::pow(q, 0.5 * n + 1.0) / (1.0 - q) +
                   std::pow(1.0 + 12.0 * lam, static_cast<double>(n)));
    } else {
        b.upper_defined = false;
    }
    return b;
}

std::string to_string(BoundKind k) {
    switch (k) {
        case BoundKind::lemma2: return "lemma2";
        case BoundKind::lemma4: return "lemma4";
        case BoundKind::lemma6: return "lemma6";
    }
    return "?";
}

BoundKind bound_kind_from_string(const std::string& s) {
    if (s == "lemma2") return BoundKind::lemma2;
    if (s == "lemma4") return BoundKind::lemma4;
    if (s == "lemma6") return BoundKind::lemma6;
    throw std::invalid_argument("unknown bound kind: " + s);
}

std::string to_string(BoundVerdict v) {
    switch (v) {
        case BoundVerdict::inside: return "inside";
        case BoundVerdict::below_lower: return "below_lower";
        case BoundVerdict::above_upper: return "above_upper";
        case BoundVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

BoundReport check_bounds(const std::vector<CurvePoint>& curve, BoundKind kind,
                         double p, int d, const BoundParams& params, double z) {
    if (kind == BoundKind::lemma4 && d < 3)
        throw std::invalid_argument("check_bounds: lemma4 requires d >= 3");
    if (kind == BoundKind::lemma6 && d != 2)
        throw std::invalid_argument("check_bounds: lemma6 applies to d = 2");

    BoundReport rep;
    rep.kind = kind;
    rep.p = p;
    rep.d = d;
    rep.params = params;
    rep.z = z;
    for (const CurvePoint& pt : curve) {
        BoundPair b;
        switch (kind) {
            case BoundKind::lemma2: b = lemma2_bounds(p, pt.n, params); break;
            case BoundKind::lemma4: b = lemma4_bounds(p, pt.n, d, params); break;
            case BoundKind::lemma6: b = lemma6_bounds(p, pt.n); break;
        }
        BoundPoint out;
        out.n = pt.n;
        out.value = pt.value;
        out.stderr_ = pt.stderr_;
        out.lower = b.lower;
        out.upper = b.upper_defined ? b.upper : 0.0;
        out.upper_defined = b.upper_defined;
        const double tol = z * pt.stderr_;
        if (pt.value + tol < b.lower) {
            out.verdict = BoundVerdict::below_lower;
        } else if (b.upper_defined && pt.value - tol > b.upper) {
            out.verdict = BoundVerdict::above_upper;
        } else if (pt.value - tol >= b.lower &&
                   (!b.upper_defined || pt.value + tol <= b.upper)) {
            out.verdict = BoundVerdict::inside;
        } else {
            out.verdict = BoundVerdict::inconclusive;
        }
        switch (out.verdict) {
            case BoundVerdict::inside: ++rep.inside; break;
            case BoundVerdict::below_lower: ++rep.below_lower; break;
            case BoundVerdict::above_upper: ++rep.above_upper; break;
            case BoundVerdict::inconclusive: ++rep.inconclusive; break;
        }
        rep.points.push_back(out);
    }
    return rep;
}

std::string to_string(OzForm f) {
    switch (f) {
        case OzForm::lemma1: return "lemma1";
        case OzForm::lemma3: return "lemma3";
        case OzForm::lemma5: return "lemma5";
    }
    return "?";
}

OzForm oz_form_from_string(const std::string& s) {
    if (s == "lemma1") return OzForm::lemma1;
    if (s == "lemma3") return OzForm::lemma3;
    if (s == "lemma5") return OzForm::lemma5;
    throw std::invalid_argument("unknown OZ form: " + s);
}

OzFit fit_oz(const std::vector<CurvePoint>& curve, int d, OzForm form,
             std::optional<std::pair<int, int>> window) {
    if (curve.size() < 4)
        throw std::invalid_argument("fit_oz: need at least 4 curve points");
    double nu = 0.0;
    switch (form) {
        case OzForm::lemma1:
        case OzForm::lemma3:
            if (d < 2) throw std::invalid_argument("fit_oz: lemma1/lemma3 need d >= 2");
            nu = 0.5 * (d - 1);
            break;
        case OzForm::lemma5:
            if (d != 2) throw std::invalid_argument("fit_oz: lemma5 applies to d = 2");
            nu = 2.0;
            break;
    }
    for (const CurvePoint& pt : curve)
        if (pt.n <= 0)
            throw std::invalid_argument("fit_oz: power correction needs n >= 1");

    XiEstimate xi = estimate_xi(curve, XiModel::oz(nu), window);

    OzFit fit;
    fit.amplitude = xi.amplitude;
    fit.xi = xi.xi;
    fit.xi_stderr = xi.stderr_;
    fit.nu = nu;
    fit.form = form;
    fit.window_lo = xi.window_lo;
    fit.window_hi = xi.window_hi;
    fit.residuals = xi.residuals;

    // Added-variable check for a leftover 1/n trend: project 1/n out of
    // span{1, n}, then test the residual component along it.
    std::vector<double> xs, qs;
    for (const CurvePoint& pt : curve)
        if (pt.n >= xi.window_lo && pt.n <= xi.window_hi)
            xs.push_back(static_cast<double>(pt.n));
    const std::size_t k = xs.size();
    if (k >= 4 && fit.residuals.size() == k) {
        double sx = 0, sq = 0, sxx = 0, sxq = 0;
        qs.resize(k);
        for (std::size_t i = 0; i < k; ++i) qs[i] = 1.0 / xs[i];
        for (std::size_t i = 0; i < k; ++i) {
            sx += xs[i];
            sq += qs[i];
            sxx += xs[i] * xs[i];
            sxq += xs[i] * qs[i];
        }
        const double n = static_cast<double>(k);
        const double xbar = sx / n, qbar = sq / n;
        const double vxx = sxx - n * xbar * xbar;
        const double vxq = sxq - n * xbar * qbar;
        double dot_qq = 0, dot_eq = 0;
        for (std::size_t i = 0; i < k; ++i) {
            double q_perp = qs[i] - qbar - (vxq / vxx) * (xs[i] - xbar);
            dot_qq += q_perp * q_perp;
            dot_eq += fit.residuals[i] * q_perp;
        }
        if (dot_qq > 0) {
            fit.trend_coef = dot_eq / dot_qq;
            double rss = 0;
            for (std::size_t i = 0; i < k; ++i) {
                double q_perp = qs[i] - qbar - (vxq / vxx) * (xs[i] - xbar);
                double e2 = fit.residuals[i] - fit.trend_coef * q_perp;
                rss += e2 * e2;
            }
            double dof = n - 3.0;
            double se = dof > 0 ? std::sqrt(rss / dof / dot_qq) : 0.0;
            fit.trend_t = se > 0 ? fit.trend_coef / se : 0.0;
            double scale = 0;
            for (double r : fit.residuals) scale = std::max(scale, std::abs(r));
            fit.trend_flagged = std::abs(fit.trend_t) > 3.0 && scale > 1e-10;
        }
    }
    return fit;
}

std::string to_string(MonoVerdict v) {
    switch (v) {
        case MonoVerdict::decreasing_confirmed: return "decreasing_confirmed";
        case MonoVerdict::violation_confirmed: return "violation_confirmed";
        case MonoVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

MonotonicityReport check_monotone(const PairedCurve& curve, double z) {
    if (curve.diffs.empty())
        throw std::invalid_argument("check_monotone: paired differences missing");
    MonotonicityReport rep;
    rep.p = curve.p;
    rep.kind = curve.kind;
    rep.z = z;
    rep.samples = curve.samples;
    bool all_confirmed = true;
    bool any_violation = false;
    for (const PairDiff& d : curve.diffs) {
        MonoPoint pt;
        pt.n = d.n;
        pt.diff = d.mean_diff;
        pt.stderr_ = d.stderr_;
        if (d.stderr_ > 0.0) pt.zscore = d.mean_diff / d.stderr_;
        if (d.mean_diff > z * d.stderr_) {
            pt.verdict = MonoVerdict::decreasing_confirmed;
        } else if (d.mean_diff < -z * d.stderr_) {
            pt.verdict = MonoVerdict::violation_confirmed;
            any_violation = true;
        } else {
            pt.verdict = MonoVerdict::inconclusive;
        }
        all_confirmed &= pt.verdict == MonoVerdict::decreasing_confirmed;
        rep.points.push_back(pt);
    }
    rep.overall = all_confirmed ? MonoVerdict::decreasing_confirmed
                 : any_violation ? MonoVerdict::violation_confirmed
                                 : MonoVerdict::inconclusive;
    return rep;
}

RatioReport ratio_diagnostic(const PairedCurve& curve, const XiEstimate& xi, int d,
                             double z) {
    if (d < 1) throw std::invalid_argument("ratio_diagnostic: d must be >= 1");
    if (!(xi.xi > 0.0)) throw std::invalid_argument("ratio_diagnostic: xi must be positive");
    RatioReport rep;
    rep.d = d;
    rep.z = z;
    rep.xi_used = xi.xi;
    const double n_samples = static_cast<double>(curve.samples);
    for (const PairDiff& diff : curve.diffs) {
        std::size_t i = 0;
        while (i < curve.ns.size() && curve.ns[i] != diff.n) ++i;
        if (i + 1 >= curve.ns.size()) continue;
        const double m1 = curve.entries[i].mean;
        const double m2 = curve.entries[i + 1].mean;
        if (!(m1 > 0.0) || !(m2 > 0.0))
            throw std::domain_error("ratio_diagnostic: zero-valued mean at n=" +
                                    std::to_string(diff.n));
        const double r = m1 / m2;
        const double var1 = m1 * (1.0 - m1) / n_samples;
        const double var2 = m2 * (1.0 - m2) / n_samples;
        const double p_both = static_cast<double>(diff.n_both) / n_samples;
        const double cov = (p_both - m1 * m2) / n_samples;
        double rel_var = var1 / (m1 * m1) + var2 / (m2 * m2) - 2.0 * cov / (m1 * m2);
        double se = r * std::sqrt(std::max(0.0, rel_var));
        RatioPoint pt;
        pt.n = diff.n;
        pt.ratio = r;
        pt.stderr_ = se;
        pt.z_above_one = se > 0 ? (r - 1.0) / se : (r > 1.0 ? 1e300 : 0.0);
        pt.prediction = std::pow(1.0 + 1.0 / diff.n, 0.5 * (d - 1)) * std::exp(1.0 / xi.xi);
        pt.residual = r - pt.prediction;
        rep.points.push_back(pt);
    }
    if (rep.points.empty())
        throw std::invalid_argument("ratio_diagnostic: no successive pairs in curve");
    rep.all_above_one = true;
    for (const RatioPoint& pt : rep.points)
        rep.all_above_one &= pt.z_above_one > z;
    rep.residual_magnitude_monotone = true;
    for (std::size_t i = 0; i + 1 < rep.points.size(); ++i) {
        const RatioPoint& a = rep.points[i];
        const RatioPoint& b = rep.points[i + 1];
        double step_tol = z * std::sqrt(a.stderr_ * a.stderr_ + b.stderr_ * b.stderr_);
        if (std::abs(b.residual) > std::abs(a.residual) + step_tol)
            rep.residual_magnitude_monotone = false;
    }
    return rep;
}

ThresholdScan scan_monotonicity(const BoxSpec& spec, const ScanParams& params) {
    if (params.p_grid.empty())
        throw std::invalid_argument("scan_monotonicity: empty p grid");
    if (params.n_hi < params.n_lo + 1)
        throw std::invalid_argument("scan_monotonicity: n range needs at least one pair");
    std::vector<double> grid = params.p_grid;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    LatticeGraph g = build_box(spec);
    std::vector<int> ns;
    for (int n = params.n_lo; n <= params.n_hi; ++n) ns.push_back(n);

    ThresholdScan scan;
    scan.kind = params.kind;
    scan.z = params.z;
    scan.p_grid = grid;
    for (double p : grid) {
        CurveParams cp;
        cp.p = p;
        cp.ns = ns;
        cp.kind = params.kind;
        cp.samples = params.samples;
        cp.seed = params.seed;
        cp.workers = params.workers;
        cp.ci_level = params.ci_level;
        scan.reports.push_back(check_monotone(estimate_curve(g, cp), params.z));
    }

    auto confirmed = [&](std::size_t i) {
        return scan.reports[i].overall == MonoVerdict::decreasing_confirmed;
    };
    if (params.kind == EventKind::two_point) {
        // Largest grid p whose entire lower tail is confirmed.
        std::optional<double> best;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (!confirmed(i)) break;
            best = grid[i];
        }
        scan.empirical_threshold = best;
    } else {
        // Smallest grid p whose entire upper tail is confirmed.
        std::optional<double> best;
        for (std::size_t i = grid.size(); i-- > 0;) {
            if (!confirmed(i)) break;
            best = grid[i];
        }
        scan.empirical_threshold = best;
    }
    return scan;
}

} // namespace percolab
