#pragma once

#include "padicfrob/connections.hpp"
#include "padicfrob/matrix.hpp"
#include "padicfrob/padic.hpp"
#include "padicfrob/series.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace padicfrob {

struct ProfileEntry {
    std::size_t m = 0;
    CertifiedVal val;
};

/// Per-order valuations val(Phi_m); indeterminate entries are kept as such.
struct ValuationProfile {
    std::vector<ProfileEntry> entries;

    bool fully_certified() const;
    /// First indeterminate order, if any.
    std::optional<std::size_t> first_indeterminate() const;
};

ValuationProfile valuation_profile(const PrimeContext& ctx, const ApproxMatrixSeries& phi, std::size_t N);
ValuationProfile valuation_profile(const PrimeContext& ctx, const RationalMatrixSeries& phi, std::size_t N);

/// Least-squares slope of (m, -val) over lo <= m <= hi. Orders with val = +inf (zero
/// coefficients) carry no growth information and are skipped.
/// Throws PrecisionError on an indeterminate entry in the window, std::invalid_argument
/// when the window holds fewer than two usable points or lies outside the profile.
mpq_class growth_rate_fit(const ValuationProfile& profile, std::size_t lo, std::size_t hi);

using ApproxSeries = TruncatedSeries<ApproxPadic>;

/// det(zI - Phi(q)) = phi_0(q) + z phi_1(q) + ... + z^r phi_r(q), phi_r = 1.
struct CharPolySeries {
    std::vector<ApproxSeries> phi;  // phi[k], k = 0..r

    std::size_t degree() const { return phi.empty() ? 0 : phi.size() - 1; }
};

/// Berkowitz recurrence over the truncated series ring: no divisions.
CharPolySeries char_poly(const PrimeContext& ctx, const ApproxMatrixSeries& phi, std::size_t N);
CharPolySeries char_poly(const PrimeContext& ctx, const RationalMatrixSeries& phi, std::size_t N);

/// Coefficients of det(zI - M) for a constant matrix, low degree first (same recurrence).
std::vector<mpq_class> char_poly(const RationalMatrix& m);

/// val(g(pi theta)) for every (p-1)-st root of unity theta at once.
struct ThetaValuation {
    CertifiedVal value;
    bool tentative = true;  // g was truncated; higher-order terms could change the answer
    std::size_t order = 0;
};

ThetaValuation val_at_pi_theta(const PrimeContext& ctx, const ApproxSeries& g);

/// The (p-1) residue classes g_j with g(q) = sum_j q^j g_j(q^{p-1}); class j holds the
/// coefficients g_{j + (p-1)t}, t = 0, 1, ...
std::vector<std::vector<ApproxPadic>> residue_classes(const PrimeContext& ctx, const ApproxSeries& g);

struct NewtonSlope {
    mpq_class slope;
    long multiplicity = 0;
};

struct NewtonPolygon {
    std::vector<std::pair<long, mpq_class>> points;    // finite input points
    std::vector<std::pair<long, mpq_class>> vertices;  // lower convex hull
    std::vector<NewtonSlope> slopes;                   // weakly increasing
};

/// Lower convex hull of (k, val_k); points with val = +inf are dropped.
/// Throws std::invalid_argument on empty input or repeated abscissae.
NewtonPolygon newton_polygon(const std::vector<std::pair<long, ExtRational>>& points);

struct BettiCheck {
    mpq_class slope;
    long observed = 0;
    long expected = 0;
    bool ok = false;
};

/// Slope s is compared against the Betti number in real degree 2s.
struct BettiComparison {
    std::vector<BettiCheck> checks;  // every slope observed or expected
    bool pass = false;
};

BettiComparison betti_comparison(const std::vector<NewtonSlope>& slopes,
                                 const std::vector<std::pair<int, int>>& betti);

/// Everything the experimental procedure computes for one connection and prime.
struct Experiment {
    long p = 0;
    std::size_t order = 0;
    long G = 0;
    ApproxFrobeniusSolution solution;
    ValuationProfile profile;
    CharPolySeries charpoly;
    std::vector<ThetaValuation> theta;  // val(phi_k(pi theta)), k = 0..r
    std::optional<NewtonPolygon> newton;
    std::optional<BettiComparison> betti;

    bool certified() const;
};

struct ExperimentOptions {
    std::size_t order = 60;
    std::optional<long> precision;  // fixed G; automatic when empty
    long precision_cap = 640;
    bool with_newton = true;
};

/// Runs the procedure at a fixed G. Never throws on failed certification; the
/// profile and theta entries report it instead.
Experiment run_experiment(const PrimeContext& ctx, const Connection& c, const std::vector<BasisSolution>& basis,
                          std::size_t order, long G, bool with_newton);

/// With options.precision unset, picks the smallest G (by doubling from 10, then bisection)
/// for which every certification succeeds; throws PrecisionError past the cap.
Experiment run_experiment(const PrimeContext& ctx, const Connection& c, const ExperimentOptions& options);

}  // namespace padicfrob
