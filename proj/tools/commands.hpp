#pragma once

#include "padicfrob/analysis.hpp"
#include "padicfrob/connections.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace padicfrob::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kValidation = 2,
    kPrecision = 3,
    kComparison = 4,
};

struct RunConfig {
    std::vector<long> primes{3, 5};
    std::size_t order = 60;
    std::optional<long> precision;  // automatic when empty
    std::string connection;         // built-in name or path to a connection file
    std::string out = ".";
    std::size_t window_lo = 20;
    std::size_t window_hi = 60;
    bool theta_report = false;
    long k_max = 3;
    int k = 2;
    int N = 4;
};

/// Throws ValidationError describing the first bad field.
void check_config(const RunConfig& cfg);

/// A readable file is parsed as a connection file; anything else is looked up as a built-in.
Connection load_connection(const std::string& selector);

/// File-name friendly form of a connection name.
std::string slug(const std::string& name);

/// m, neg_val_num, neg_val_den, neg_val_float, certified, reference (= m/(p-1)).
std::string profile_csv(const ValuationProfile& profile, long p);

int cmd_gamma(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_profile(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_newton(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_satake(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_list(std::ostream& out);
int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err);

}  // namespace padicfrob::cli
