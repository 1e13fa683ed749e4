#include "commands.hpp"

#include "padicfrob/satake.hpp"
#include "padicfrob/special_functions.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

namespace padicfrob::cli {

namespace {

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

std::string fmt(const mpq_class& q) { return rational_to_string(q); }

std::string fmt(const ExtRational& x) { return x.is_infinite() ? "inf" : rational_to_string(x.value()); }

std::string fmt(const CertifiedVal& v) { return v.certified() ? fmt(*v.value) : "indeterminate"; }

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool write_file(const std::filesystem::path& path, const std::string& text, std::ostream& err) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream f(path);
    if (!f) {
        err << "error: cannot write " << path.string() << "\n";
        return false;
    }
    f << text;
    return true;
}

// Runs f(p) for every prime concurrently; results come back in the order of the primes.
template <typename F>
auto per_prime(const std::vector<long>& primes, F f) {
    using R = decltype(f(primes.front()));
    std::vector<std::future<R>> futures;
    for (long p : primes) futures.push_back(std::async(std::launch::async, f, p));
    std::vector<R> out;
    for (auto& fu : futures) out.push_back(fu.get());
    return out;
}

struct ExperimentRun {
    std::optional<Experiment> ex;
    std::string error;
};

ExperimentRun try_experiment(long p, const Connection& c, const RunConfig& cfg, bool with_newton) {
    ExperimentRun r;
    try {
        PrimeContext ctx(p);
        ExperimentOptions opt;
        opt.order = cfg.order;
        opt.precision = cfg.precision;
        opt.with_newton = with_newton;
        r.ex = run_experiment(ctx, c, opt);
    } catch (const PrecisionError& e) {
        r.error = e.what();
    }
    return r;
}

void write_newton_report(std::ostream& out, const Experiment& ex, const std::vector<std::pair<int, int>>& betti,
                         bool theta_report) {
    out << "p = " << ex.p << ", order " << ex.order << ", G = " << ex.G << "\n";
    bool tentative = false;
    for (const auto& t : ex.theta) tentative = tentative || t.tentative;
    if (theta_report) {
        out << "  val(phi_k(pi theta)), all theta simultaneously:\n";
        for (std::size_t k = 0; k < ex.theta.size(); ++k) {
            out << "    k = " << k << ": " << fmt(ex.theta[k].value)
                << (ex.theta[k].tentative ? " (tentative, truncated at q^" + std::to_string(ex.theta[k].order) + ")" : "")
                << "\n";
        }
    }
    if (!ex.newton) {
        out << "  newton polygon: indeterminate (raise --precision)\n";
        return;
    }
    out << "  vertices:";
    for (const auto& [x, y] : ex.newton->vertices) out << " (" << x << "," << fmt(y) << ")";
    out << "\n  slopes:";
    for (const auto& s : ex.newton->slopes) out << " " << fmt(s.slope) << " (x" << s.multiplicity << ")";
    out << "\n  tentative: " << (tentative ? "yes" : "no") << "\n";
    const auto cmp = betti_comparison(ex.newton->slopes, betti);
    out << "  betti: " << (cmp.pass ? "PASS" : "FAIL");
    for (const auto& c : cmp.checks) {
        if (!c.ok) out << " [slope " << fmt(c.slope) << ": observed " << c.observed << ", expected " << c.expected << "]";
    }
    out << "\n";
}

}  // namespace

void check_config(const RunConfig& cfg) {
    if (cfg.primes.empty()) throw ValidationError("at least one --prime is required");
    for (long p : cfg.primes) {
        if (p < 3 || !PrimeContext::is_prime(p)) throw ValidationError("invalid prime " + std::to_string(p) + " (need an odd prime)");
    }
    if (cfg.order < 1) throw ValidationError("--order must be >= 1");
    if (cfg.precision && *cfg.precision < 1) throw ValidationError("--precision must be >= 1");
    if (cfg.window_lo > cfg.window_hi) throw ValidationError("--window needs lo <= hi");
}

Connection load_connection(const std::string& selector) {
    if (selector.empty()) throw ValidationError("--connection is required");
    std::error_code ec;
    if (std::filesystem::is_regular_file(selector, ec)) return parse_connection(read_file(selector));
    try {
        return builtin(selector);
    } catch (const std::invalid_argument& e) {
        throw ValidationError(std::string(e.what()) + " (and no such file)");
    }
}

std::string slug(const std::string& name) {
    std::string s;
    for (char ch : name) {
        const bool keep = std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_';
        if (keep) {
            s += ch;
        } else if (!s.empty() && s.back() != '_') {
            s += '_';
        }
    }
    while (!s.empty() && s.back() == '_') s.pop_back();
    return s.empty() ? "connection" : s;
}

std::string profile_csv(const ValuationProfile& profile, long p) {
    std::ostringstream os;
    os << "m,neg_val_num,neg_val_den,neg_val_float,certified,reference\n";
    for (const auto& e : profile.entries) {
        const mpq_class ref(static_cast<long>(e.m), p - 1);
        os << e.m << ",";
        if (!e.val.certified()) {
            os << ",,,false";
        } else if (e.val.value->is_infinite()) {
            os << "-inf,1,-inf,true";
        } else {
            mpq_class nv = -e.val.value->value();
            nv.canonicalize();
            os << nv.get_num().get_str() << "," << nv.get_den().get_str() << "," << fmt_double(nv.get_d()) << ",true";
        }
        os << "," << fmt_double(ref.get_d()) << "\n";
    }
    return os.str();
}

int cmd_gamma(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        check_config(cfg);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    }
    if (cfg.k_max < 0) {
        err << "error: --k-max must be >= 0\n";
        return kValidation;
    }
    const long G = cfg.precision.value_or(10);
    auto tables = per_prime(cfg.primes, [&](long p) {
        PrimeContext ctx(p);
        return gamma_derivatives(ctx, cfg.k_max, G);
    });
    out << "p,k,truncation_M,err_val,value\n";
    for (const auto& t : tables) {
        for (long k = 0; k <= cfg.k_max; ++k) {
            const auto v = t.values[static_cast<std::size_t>(k)].reduced();
            out << t.p << "," << k << "," << t.truncation[static_cast<std::size_t>(k)] << "," << fmt(v.err_val()) << ","
                << fmt(v.approx()) << "\n";
        }
    }
    return kOk;
}

int cmd_profile(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    Connection c;
    try {
        check_config(cfg);
        c = load_connection(cfg.connection);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    }
    auto runs = per_prime(cfg.primes, [&](long p) { return try_experiment(p, c, cfg, false); });
    int code = kOk;
    std::ostringstream summary;
    summary << "connection,p,order,G,window_lo,window_hi,sigma_num,sigma_den,sigma_float,reference_slope\n";
    const std::filesystem::path dir(cfg.out);
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const long p = cfg.primes[i];
        if (!runs[i].ex) {
            err << "error: p = " << p << ": " << runs[i].error << "; raise --precision\n";
            code = kPrecision;
            continue;
        }
        const Experiment& ex = *runs[i].ex;
        const auto file = dir / (slug(c.name) + "_p" + std::to_string(p) + ".csv");
        if (!write_file(file, profile_csv(ex.profile, p), err)) return kUsage;
        out << "wrote " << file.string() << "\n";
        if (auto bad = ex.profile.first_indeterminate()) {
            err << "error: p = " << p << ": valuation at m = " << *bad << " is indeterminate at G = " << ex.G
                << "; raise --precision\n";
            code = kPrecision;
            continue;
        }
        try {
            const mpq_class sigma = growth_rate_fit(ex.profile, cfg.window_lo, std::min(cfg.window_hi, cfg.order));
            summary << c.name << "," << p << "," << cfg.order << "," << ex.G << "," << cfg.window_lo << ","
                    << std::min(cfg.window_hi, cfg.order) << "," << sigma.get_num().get_str() << ","
                    << sigma.get_den().get_str() << "," << fmt_double(sigma.get_d()) << ","
                    << fmt_double(1.0 / static_cast<double>(p - 1)) << "\n";
            out << c.name << " p = " << p << ": G = " << ex.G << ", sigma = " << fmt_double(sigma.get_d())
                << " (reference line slope " << fmt_double(1.0 / static_cast<double>(p - 1)) << ")\n";
        } catch (const std::invalid_argument& e) {
            err << "error: p = " << p << ": " << e.what() << "\n";
            code = kValidation;
        }
    }
    const auto sfile = dir / (slug(c.name) + "_summary.csv");
    if (!write_file(sfile, summary.str(), err)) return kUsage;
    out << "wrote " << sfile.string() << "\n";
    return code;
}

int cmd_newton(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    Connection c;
    try {
        check_config(cfg);
        c = load_connection(cfg.connection);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    }
    auto runs = per_prime(cfg.primes, [&](long p) { return try_experiment(p, c, cfg, true); });
    int code = kOk;
    out << "connection: " << c.name << "\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (!runs[i].ex) {
            err << "error: p = " << cfg.primes[i] << ": " << runs[i].error << "; raise --precision\n";
            code = kPrecision;
            continue;
        }
        write_newton_report(out, *runs[i].ex, c.betti, cfg.theta_report);
        if (!runs[i].ex->newton) {
            code = kPrecision;
        } else if (!runs[i].ex->betti->pass && code == kOk) {
            code = kComparison;
        }
    }
    return code;
}

int cmd_satake(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    Connection conn;
    try {
        check_config(cfg);
        if (cfg.k < 1 || cfg.k > cfg.N - 1) throw ValidationError("satake needs 1 <= k <= N-1");
        conn = grassmannian_connection(cfg.k, cfg.N);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    }
    if (cfg.out != ".") {
        const auto file = std::filesystem::path(cfg.out) / (slug(conn.name) + ".json");
        if (!write_file(file, serialize_connection(conn), err)) return kUsage;
        out << "wrote " << file.string() << "\n";
    }
    struct Result {
        std::optional<std::string> mismatch;
        ExperimentRun run;
    };
    auto results = per_prime(cfg.primes, [&](long p) {
        Result r;
        PrimeContext ctx(p);
        const auto ext = grassmannian_frobenius(ctx, cfg.k, cfg.N, cfg.precision.value_or(10), cfg.order);
        const auto direct = solve_frobenius(ctx, conn, ext.exterior.phi.coeffs[0], cfg.order);
        for (std::size_t m = 0; m <= cfg.order && !r.mismatch; ++m) {
            const auto& a = direct.phi.coeffs[m];
            const auto& b = ext.exterior.phi.coeffs[m];
            for (std::size_t i = 0; i < a.rows() && !r.mismatch; ++i)
                for (std::size_t j = 0; j < a.cols() && !r.mismatch; ++j)
                    if (a(i, j) != b(i, j)) {
                        r.mismatch = "q^" + std::to_string(m) + " entry (" + std::to_string(i) + "," + std::to_string(j) +
                                     "): direct " + fmt(a(i, j)) + ", exterior " + fmt(b(i, j));
                    }
        }
        r.run = try_experiment(p, conn, cfg, true);
        return r;
    });
    int code = kOk;
    out << "grassmannian(" << cfg.k << "," << cfg.N << "), rank " << conn.rank << "\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const long p = cfg.primes[i];
        out << "p = " << p << ": direct vs exterior power through q^" << cfg.order << ": ";
        if (results[i].mismatch) {
            out << "FAIL, first difference at " << *results[i].mismatch << "\n";
            code = kComparison;
        } else {
            out << "PASS (exact)\n";
        }
        if (!results[i].run.ex) {
            err << "error: p = " << p << ": " << results[i].run.error << "; raise --precision\n";
            if (code == kOk) code = kPrecision;
            continue;
        }
        write_newton_report(out, *results[i].run.ex, conn.betti, cfg.theta_report);
        if (!results[i].run.ex->newton && code == kOk) code = kPrecision;
    }
    return code;
}

int cmd_list(std::ostream& out) {
    for (const auto& name : builtin_names()) out << name << "\n";
    return kOk;
}

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
    try {
        const Connection c = parse_connection(read_file(path));
        out << "OK " << c.name << ": rank " << c.rank << ", pole order " << c.degree() << ", A_0 nilpotent of index "
            << nilpotency_index(c.A[0]) << "\n";
        for (const auto& v : grading_violations(c)) out << "warning: " << v << "\n";
        return kOk;
    } catch (const ValidationError& e) {
        err << "error: " << path << ": " << e.what() << "\n";
        return kValidation;
    }
}

}  // namespace padicfrob::cli
