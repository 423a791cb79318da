#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lfdcli {

// Thrown for anything the user wrote wrong; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct IniEntry {
    std::string value;
    int line = 0;
};

// "section.key" -> entry; keys before the first section have no prefix.
using IniDocument = std::map<std::string, IniEntry>;

// INI with [section] and [section.sub] headers, '#' or ';' comments, key = value lines.
IniDocument parse_ini(const std::string& text, const std::string& source);

enum class Subcommand { equilibrium, functionals, verify, evolve };

struct RunConfig {
    Subcommand subcommand = Subcommand::equilibrium;
    int n = 16;
    double L = 6.0;
    std::vector<double> gammas{1.0};
    std::vector<double> epsilons{0.01};
    unsigned seed = 1;
    bool deterministic = false;
    int threads = 0;
    std::string output; // empty: stdout
    // state
    std::string member = "fd_statistics";
    // verify
    std::vector<std::string> checks;  // empty: all
    std::vector<std::string> members; // empty: all
    double s = 1.0;
    // solver
    std::optional<double> dt; // nullopt: auto
    double dt_scale = 1.0;
    double t_end = 1.0;
    bool projection = true;
    int record_every = 50;
    bool clip = false;
    std::string flux = "entropic";
    double fit_t0 = 0.5;
};

const char* subcommand_name(Subcommand s);
std::optional<Subcommand> parse_subcommand(const std::string& s);

// Overrides use the same dotted keys as the document, e.g. {"grid.n", "24"}.
using Overrides = std::vector<std::pair<std::string, std::string>>;

// Applies document keys, then overrides; validates ranges. Errors carry "source:line".
RunConfig build_config(const IniDocument& doc, const std::string& source, const Overrides& overrides,
                       const std::vector<std::string>& known_checks, const std::vector<std::string>& known_members);

std::vector<double> parse_real_list(const std::string& text, const std::string& where);

} // namespace lfdcli
