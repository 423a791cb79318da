#pragma once

#include "equilibria.hpp"
#include "grid.hpp"

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lfd {

struct CheckReport {
    std::string name;
    double gamma = 0.0;
    double epsilon = 0.0;
    int n = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    // (bound side) - (bounded side); positive means the inequality holds.
    double margin = 0.0;
    bool passed = false;
    bool skipped = false;
    std::string reason;
    std::string state_descriptor;
    std::string orientation; // "lhs<=rhs" or "lhs>=rhs"
    std::vector<std::pair<std::string, double>> parameters;
};

struct CheckOptions {
    double s = 1.0;      // exponent for interpolation and Ds_bound
    double tol = 1e-8;   // relative to max(|lhs|, |rhs|, 1e-30)
};

const std::vector<std::string>& check_names();
bool is_check_name(const std::string& name);

// Shared, lazily computed quantities for one state: reference equilibrium, productions and
// constants. Checks on the same state reuse them.
class CheckContext {
public:
    explicit CheckContext(State g);
    ~CheckContext();
    CheckContext(CheckContext&&) noexcept;

    const State& state() const { return g_; }
    const State& reference() const;
    const EquilibriumParams& reference_params() const;
    double production(double gamma) const;

private:
    struct Cache;
    State g_;
    std::unique_ptr<Cache> cache_;
};

CheckReport run_check(const std::string& name, const CheckContext& ctx, double gamma, const CheckOptions& opt = {});
CheckReport run_check(const std::string& name, const State& g, double gamma, const CheckOptions& opt = {});

// Structured family of normalized states in Y_eps: every member has grid moments (1, 0, 3)
// and parameter exactly `epsilon`.
std::vector<std::string> family_members();
State family_state(const std::string& member, const Grid& grid, double epsilon, unsigned seed);

struct FamilySpec {
    int n = 16;
    double L = 6.0;
    unsigned seed = 1;
    std::vector<std::string> members; // empty selects every member
};

// Checks that apply to hard (gamma >= 0) and soft (gamma < 0) exponents.
bool check_applies(const std::string& name, double gamma, double epsilon);

std::vector<CheckReport> run_suite(const FamilySpec& family, const std::vector<std::string>& checks,
                                   const std::vector<double>& gammas, const std::vector<double>& epsilons,
                                   const CheckOptions& opt = {});

struct CheckSummary {
    std::string name;
    int passed = 0, failed = 0, skipped = 0;
    double min_margin = 0.0;     // relative margin min over non-skipped reports
};
std::vector<CheckSummary> summarize(const std::vector<CheckReport>& reports);

void write_reports_csv(std::ostream& os, const std::vector<CheckReport>& reports);
void write_summary(std::ostream& os, const std::vector<CheckReport>& reports);

} // namespace lfd
