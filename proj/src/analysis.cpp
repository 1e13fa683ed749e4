#include "padicfrob/analysis.hpp"

#include <algorithm>
#include <map>

namespace padicfrob {

bool ValuationProfile::fully_certified() const { return !first_indeterminate().has_value(); }

std::optional<std::size_t> ValuationProfile::first_indeterminate() const {
    for (const auto& e : entries) {
        if (!e.val.certified()) return e.m;
    }
    return std::nullopt;
}

ValuationProfile valuation_profile(const PrimeContext& ctx, const ApproxMatrixSeries& phi, std::size_t N) {
    ValuationProfile out;
    for (std::size_t m = 0; m <= N && m < phi.coeffs.size(); ++m) {
        out.entries.push_back({m, matrix_min_val(ctx, phi.coeffs[m])});
    }
    return out;
}

ValuationProfile valuation_profile(const PrimeContext& ctx, const RationalMatrixSeries& phi, std::size_t N) {
    ValuationProfile out;
    for (std::size_t m = 0; m <= N && m < phi.coeffs.size(); ++m) {
        out.entries.push_back({m, CertifiedVal{matrix_min_val(ctx, phi.coeffs[m])}});
    }
    return out;
}

mpq_class growth_rate_fit(const ValuationProfile& profile, std::size_t lo, std::size_t hi) {
    if (lo > hi || profile.entries.empty() || hi > profile.entries.back().m) {
        throw std::invalid_argument("growth_rate_fit: window outside the profile");
    }
    mpq_class n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& e : profile.entries) {
        if (e.m < lo || e.m > hi) continue;
        if (!e.val.certified()) {
            throw PrecisionError("growth_rate_fit: indeterminate valuation at m = " + std::to_string(e.m));
        }
        if (e.val.value->is_infinite()) continue;
        const mpq_class x = static_cast<long>(e.m);
        const mpq_class y = -e.val.value->value();
        n += 1;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const mpq_class denom = n * sxx - sx * sx;
    if (n < 2 || denom == 0) throw std::invalid_argument("growth_rate_fit: fewer than two usable points in window");
    mpq_class slope = (n * sxy - sx * sy) / denom;
    slope.canonicalize();
    return slope;
}

namespace {

// Berkowitz: coefficients of det(zI - A), highest degree first. Only ring operations.
template <typename R, typename At>
std::vector<R> berkowitz(std::size_t n, At at, const R& one) {
    std::vector<R> v{one};
    for (std::size_t r = 0; r < n; ++r) {
        std::vector<R> C;
        C.reserve(r + 2);
        C.push_back(one);
        C.push_back(-at(r, r));
        std::vector<R> w;
        for (std::size_t i = 0; i < r; ++i) w.push_back(at(i, r));
        for (std::size_t k = 1; k <= r; ++k) {
            R dot = one - one;
            for (std::size_t i = 0; i < r; ++i) dot += at(r, i) * w[i];
            C.push_back(-dot);
            if (k == r) break;
            std::vector<R> next;
            for (std::size_t i = 0; i < r; ++i) {
                R s = one - one;
                for (std::size_t j = 0; j < r; ++j) s += at(i, j) * w[j];
                next.push_back(std::move(s));
            }
            w = std::move(next);
        }
        std::vector<R> nv;
        for (std::size_t i = 0; i < r + 2; ++i) {
            R s = one - one;
            for (std::size_t j = 0; j <= std::min(i, r); ++j) s += C[i - j] * v[j];
            nv.push_back(std::move(s));
        }
        v = std::move(nv);
    }
    return v;
}

}  // namespace

CharPolySeries char_poly(const PrimeContext& ctx, const ApproxMatrixSeries& phi, std::size_t N) {
    if (phi.coeffs.empty()) throw std::invalid_argument("char_poly: empty series");
    const std::size_t r = phi.dim();
    const ApproxPadic zero = ApproxPadic::zero(ctx);
    std::vector<ApproxSeries> entry;
    entry.reserve(r * r);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
            std::vector<ApproxPadic> cs(N + 1, zero);
            for (std::size_t m = 0; m <= N && m < phi.coeffs.size(); ++m) cs[m] = phi.coeffs[m](i, j).reduced();
            entry.emplace_back(std::move(cs), zero, false);
        }
    }
    const ApproxSeries one = ApproxSeries::constant(N, ApproxPadic::exact(ctx, 1), zero);
    auto v = berkowitz<ApproxSeries>(r, [&](std::size_t i, std::size_t j) -> const ApproxSeries& { return entry[i * r + j]; },
                                     one);
    CharPolySeries out;
    out.phi.assign(v.rbegin(), v.rend());
    return out;
}

CharPolySeries char_poly(const PrimeContext& ctx, const RationalMatrixSeries& phi, std::size_t N) {
    ApproxMatrixSeries a;
    a.variable = phi.variable;
    for (const auto& m : phi.coeffs) a.coeffs.push_back(to_approx(ctx, m));
    return char_poly(ctx, a, N);
}

std::vector<mpq_class> char_poly(const RationalMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("char_poly: matrix is not square");
    auto v = berkowitz<mpq_class>(m.rows(), [&](std::size_t i, std::size_t j) { return m(i, j); }, mpq_class(1));
    return {v.rbegin(), v.rend()};
}

std::vector<std::vector<ApproxPadic>> residue_classes(const PrimeContext& ctx, const ApproxSeries& g) {
    const std::size_t period = static_cast<std::size_t>(ctx.p() - 1);
    std::vector<std::vector<ApproxPadic>> out(period);
    for (std::size_t m = 0; m <= g.order(); ++m) out[m % period].push_back(g[m]);
    return out;
}

ThetaValuation val_at_pi_theta(const PrimeContext& ctx, const ApproxSeries& g) {
    ThetaValuation out;
    out.order = g.order();
    out.tentative = !g.exact_polynomial();
    const auto classes = residue_classes(ctx, g);
    const mpq_class minus_p = -mpq_class(ctx.p_mpz());
    std::optional<ExtRational> best;
    std::optional<ExtRational> undetermined_floor;
    for (std::size_t j = 0; j < classes.size(); ++j) {
        ApproxPadic sum = ApproxPadic::zero(ctx);
        mpq_class scale = 1;
        for (const auto& c : classes[j]) {
            if (!(c == ApproxPadic::zero(ctx))) sum += c * scale;
            scale *= minus_p;
        }
        const mpq_class offset(static_cast<long>(j), ctx.p() - 1);
        const auto cv = certified_val(ctx, sum);
        if (cv.certified()) {
            const ExtRational v = *cv.value + ExtRational(offset);
            best = best ? min(*best, v) : v;
        } else {
            const ExtRational floor = sum.err_val() + ExtRational(offset);
            undetermined_floor = undetermined_floor ? min(*undetermined_floor, floor) : floor;
        }
    }
    if (best && (!undetermined_floor || *best < *undetermined_floor)) out.value = CertifiedVal{best};
    return out;
}

NewtonPolygon newton_polygon(const std::vector<std::pair<long, ExtRational>>& points) {
    if (points.empty()) throw std::invalid_argument("newton_polygon: no points");
    NewtonPolygon out;
    for (const auto& [x, v] : points) {
        if (v.is_finite()) out.points.emplace_back(x, v.value());
    }
    if (out.points.empty()) throw std::invalid_argument("newton_polygon: every point is at +inf");
    std::sort(out.points.begin(), out.points.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < out.points.size(); ++i) {
        if (out.points[i].first == out.points[i - 1].first) {
            throw std::invalid_argument("newton_polygon: repeated abscissa " + std::to_string(out.points[i].first));
        }
    }
    auto& h = out.vertices;
    for (const auto& pt : out.points) {
        while (h.size() >= 2) {
            const auto& a = h[h.size() - 2];
            const auto& b = h[h.size() - 1];
            const mpq_class cross = mpq_class(b.first - a.first) * (pt.second - a.second) -
                                    (b.second - a.second) * mpq_class(pt.first - a.first);
            if (cross > 0) break;
            h.pop_back();
        }
        h.push_back(pt);
    }
    for (std::size_t i = 1; i < h.size(); ++i) {
        const long dx = h[i].first - h[i - 1].first;
        mpq_class s = (h[i].second - h[i - 1].second) / mpq_class(dx);
        s.canonicalize();
        out.slopes.push_back({s, dx});
    }
    return out;
}

BettiComparison betti_comparison(const std::vector<NewtonSlope>& slopes,
                                 const std::vector<std::pair<int, int>>& betti) {
    std::map<mpq_class, std::pair<long, long>> table;  // slope -> (observed, expected)
    for (const auto& s : slopes) table[s.slope].first += s.multiplicity;
    for (const auto& [deg, b] : betti) {
        if (b != 0) table[mpq_class(deg, 2)].second += b;
    }
    BettiComparison out;
    out.pass = true;
    for (auto& [s, oe] : table) {
        mpq_class slope = s;
        slope.canonicalize();
        BettiCheck c{slope, oe.first, oe.second, oe.first == oe.second};
        out.pass = out.pass && c.ok;
        out.checks.push_back(c);
    }
    return out;
}

bool Experiment::certified() const {
    if (!profile.fully_certified()) return false;
    for (const auto& t : theta) {
        if (!t.value.certified()) return false;
    }
    return true;
}

Experiment run_experiment(const PrimeContext& ctx, const Connection& c, const std::vector<BasisSolution>& basis,
                          std::size_t order, long G, bool with_newton) {
    Experiment ex;
    ex.p = ctx.p();
    ex.order = order;
    ex.G = G;
    ex.solution = combine_basis_solutions(ctx, basis, gamma_coefficients(ctx, c, G));
    ex.profile = valuation_profile(ctx, ex.solution.phi, order);
    if (!with_newton) return ex;
    ex.charpoly = char_poly(ctx, ex.solution.phi, order);
    std::vector<std::pair<long, ExtRational>> pts;
    bool all = true;
    for (std::size_t k = 0; k < ex.charpoly.phi.size(); ++k) {
        ex.theta.push_back(val_at_pi_theta(ctx, ex.charpoly.phi[k]));
        if (ex.theta.back().value.certified()) {
            pts.emplace_back(static_cast<long>(k), *ex.theta.back().value.value);
        } else {
            all = false;
        }
    }
    if (all) {
        ex.newton = newton_polygon(pts);
        ex.betti = betti_comparison(ex.newton->slopes, c.betti);
    }
    return ex;
}

Experiment run_experiment(const PrimeContext& ctx, const Connection& c, const ExperimentOptions& options) {
    const auto basis = solve_frobenius_basis(ctx, c, options.order);
    if (options.precision) return run_experiment(ctx, c, basis, options.order, *options.precision, options.with_newton);
    long lo = 0;  // largest known failing G
    long G = 10;
    Experiment ex = run_experiment(ctx, c, basis, options.order, G, options.with_newton);
    while (!ex.certified()) {
        lo = G;
        G *= 2;
        if (G > options.precision_cap) {
            throw PrecisionError("run_experiment: certification still fails at G = " + std::to_string(lo) +
                                 " (cap " + std::to_string(options.precision_cap) + ")");
        }
        ex = run_experiment(ctx, c, basis, options.order, G, options.with_newton);
    }
    while (lo > 0 && G - lo > 1) {
        const long mid = lo + (G - lo) / 2;
        Experiment trial = run_experiment(ctx, c, basis, options.order, mid, options.with_newton);
        if (trial.certified()) {
            G = mid;
            ex = std::move(trial);
        } else {
            lo = mid;
        }
    }
    return ex;
}

}  // namespace padicfrob
