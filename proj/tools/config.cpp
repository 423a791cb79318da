#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace lfdcli {

namespace {

std::string trim(const std::string& s)
{
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string at(const std::string& source, int line)
{
    return line > 0 ? source + ":" + std::to_string(line) : source;
}

bool valid_name(const std::string& s)
{
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    });
}

double parse_real(const std::string& text, const std::string& where)
{
    const std::string t = trim(text);
    double v = 0.0;
    const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || r.ec != std::errc() || r.ptr != t.data() + t.size() || !std::isfinite(v))
        throw ConfigError(where + ": expected a real number, got '" + t + "'");
    return v;
}

long parse_int(const std::string& text, const std::string& where)
{
    const std::string t = trim(text);
    long v = 0;
    const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || r.ec != std::errc() || r.ptr != t.data() + t.size())
        throw ConfigError(where + ": expected an integer, got '" + t + "'");
    return v;
}

bool parse_bool(const std::string& text, const std::string& where)
{
    std::string t = trim(text);
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
    if (t == "false" || t == "no" || t == "off" || t == "0") return false;
    throw ConfigError(where + ": expected true or false, got '" + t + "'");
}

std::vector<std::string> parse_name_list(const std::string& text)
{
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

const std::set<std::string>& known_keys()
{
    static const std::set<std::string> keys = {
        "subcommand",      "seed",          "reduction",        "threads",      "output",
        "grid.n",          "grid.L",        "physics.gamma",    "physics.epsilon",
        "state.member",    "verify.checks", "verify.members",   "verify.s",
        "solver.dt",       "solver.dt_scale", "solver.t_end",   "solver.projection",
        "solver.record_every", "solver.clip", "solver.flux",    "solver.fit_t0",
    };
    return keys;
}

} // namespace

IniDocument parse_ini(const std::string& text, const std::string& source)
{
    IniDocument doc;
    std::string section;
    std::stringstream ss(text);
    std::string raw;
    int line = 0;
    while (std::getline(ss, raw)) {
        ++line;
        std::string s = raw;
        // Comments start at '#' or ';' anywhere on the line.
        const std::size_t c = s.find_first_of("#;");
        if (c != std::string::npos) s.erase(c);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError(at(source, line) + ": unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (!valid_name(section)) throw ConfigError(at(source, line) + ": invalid section name '" + section + "'");
            continue;
        }
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError(at(source, line) + ": expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (!valid_name(key)) throw ConfigError(at(source, line) + ": invalid key '" + key + "'");
        const std::string full = section.empty() ? key : section + "." + key;
        const auto it = doc.find(full);
        if (it != doc.end())
            throw ConfigError(at(source, line) + ": duplicate key '" + full + "' (first defined at line " +
                              std::to_string(it->second.line) + ", again at line " + std::to_string(line) + ")");
        doc.emplace(full, IniEntry{value, line});
    }
    return doc;
}

const char* subcommand_name(Subcommand s)
{
    switch (s) {
    case Subcommand::equilibrium: return "equilibrium";
    case Subcommand::functionals: return "functionals";
    case Subcommand::verify: return "verify";
    case Subcommand::evolve: return "evolve";
    }
    return "?";
}

std::optional<Subcommand> parse_subcommand(const std::string& s)
{
    for (Subcommand c : {Subcommand::equilibrium, Subcommand::functionals, Subcommand::verify, Subcommand::evolve})
        if (s == subcommand_name(c)) return c;
    return std::nullopt;
}

std::vector<double> parse_real_list(const std::string& text, const std::string& where)
{
    std::vector<double> out;
    for (const std::string& item : parse_name_list(text)) out.push_back(parse_real(item, where));
    if (out.empty()) throw ConfigError(where + ": empty list");
    return out;
}

RunConfig build_config(const IniDocument& doc, const std::string& source, const Overrides& overrides,
                       const std::vector<std::string>& known_checks, const std::vector<std::string>& known_members)
{
    struct Item {
        std::string value;
        std::string where;
    };
    std::map<std::string, Item> items;
    for (const auto& [key, e] : doc) {
        if (!known_keys().count(key)) throw ConfigError(at(source, e.line) + ": unknown key '" + key + "'");
        items[key] = {e.value, at(source, e.line)};
    }
    for (const auto& [key, value] : overrides) {
        if (!known_keys().count(key)) throw ConfigError("command line: unknown key '" + key + "'");
        items[key] = {value, "command line (" + key + ")"};
    }

    RunConfig cfg;
    auto get = [&](const std::string& key) -> const Item* {
        const auto it = items.find(key);
        return it == items.end() ? nullptr : &it->second;
    };

    const Item* sub = get("subcommand");
    if (!sub) throw ConfigError(source + ": missing 'subcommand' (equilibrium, functionals, verify or evolve)");
    const auto sc = parse_subcommand(trim(sub->value));
    if (!sc) throw ConfigError(sub->where + ": unknown subcommand '" + sub->value + "'");
    cfg.subcommand = *sc;

    if (const Item* it = get("seed")) {
        const long v = parse_int(it->value, it->where);
        if (v < 0) throw ConfigError(it->where + ": seed must be >= 0");
        cfg.seed = static_cast<unsigned>(v);
    }
    if (const Item* it = get("reduction")) {
        const std::string v = trim(it->value);
        if (v == "deterministic") cfg.deterministic = true;
        else if (v == "fast") cfg.deterministic = false;
        else throw ConfigError(it->where + ": reduction must be 'fast' or 'deterministic'");
    }
    if (const Item* it = get("threads")) {
        const long v = parse_int(it->value, it->where);
        if (v < 0) throw ConfigError(it->where + ": threads must be >= 0");
        cfg.threads = static_cast<int>(v);
    }
    if (const Item* it = get("output")) cfg.output = trim(it->value);

    if (const Item* it = get("grid.n")) {
        const long v = parse_int(it->value, it->where);
        if (v < 4 || v > 256) throw ConfigError(it->where + ": grid.n must be in [4, 256]");
        cfg.n = static_cast<int>(v);
    }
    if (const Item* it = get("grid.L")) {
        cfg.L = parse_real(it->value, it->where);
        if (!(cfg.L > 0.0)) throw ConfigError(it->where + ": grid.L must be > 0");
    }
    if (const Item* it = get("physics.gamma")) {
        cfg.gammas = parse_real_list(it->value, it->where);
        for (double g : cfg.gammas)
            if (!(g > -4.0)) throw ConfigError(it->where + ": gamma <= -4 unsupported");
    }
    if (const Item* it = get("physics.epsilon")) {
        cfg.epsilons = parse_real_list(it->value, it->where);
        for (double e : cfg.epsilons)
            if (!(e >= 0.0)) throw ConfigError(it->where + ": epsilon must be >= 0");
    }

    auto check_member = [&](const std::string& m, const std::string& where) {
        if (std::find(known_members.begin(), known_members.end(), m) == known_members.end())
            throw ConfigError(where + ": unknown state member '" + m + "'");
    };
    if (const Item* it = get("state.member")) {
        cfg.member = trim(it->value);
        check_member(cfg.member, it->where);
    }
    if (const Item* it = get("verify.checks")) {
        const auto list = parse_name_list(it->value);
        if (!(list.size() == 1 && list[0] == "all")) {
            for (const auto& c : list)
                if (std::find(known_checks.begin(), known_checks.end(), c) == known_checks.end())
                    throw ConfigError(it->where + ": unknown check '" + c + "'");
            if (list.empty()) throw ConfigError(it->where + ": empty check list");
            cfg.checks = list;
        }
    }
    if (const Item* it = get("verify.members")) {
        const auto list = parse_name_list(it->value);
        if (!(list.size() == 1 && list[0] == "all")) {
            for (const auto& m : list) check_member(m, it->where);
            if (list.empty()) throw ConfigError(it->where + ": empty member list");
            cfg.members = list;
        }
    }
    if (const Item* it = get("verify.s")) {
        cfg.s = parse_real(it->value, it->where);
        if (!(cfg.s > 0.0)) throw ConfigError(it->where + ": verify.s must be > 0");
    }

    if (const Item* it = get("solver.dt")) {
        if (trim(it->value) == "auto") {
            cfg.dt.reset();
        } else {
            cfg.dt = parse_real(it->value, it->where);
            if (!(*cfg.dt > 0.0)) throw ConfigError(it->where + ": solver.dt must be > 0 or 'auto'");
        }
    }
    if (const Item* it = get("solver.dt_scale")) {
        cfg.dt_scale = parse_real(it->value, it->where);
        if (!(cfg.dt_scale > 0.0 && cfg.dt_scale <= 1.0)) throw ConfigError(it->where + ": solver.dt_scale must be in (0, 1]");
    }
    if (const Item* it = get("solver.t_end")) {
        cfg.t_end = parse_real(it->value, it->where);
        if (!(cfg.t_end > 0.0)) throw ConfigError(it->where + ": solver.t_end must be > 0");
    }
    if (const Item* it = get("solver.projection")) cfg.projection = parse_bool(it->value, it->where);
    if (const Item* it = get("solver.clip")) cfg.clip = parse_bool(it->value, it->where);
    if (const Item* it = get("solver.record_every")) {
        const long v = parse_int(it->value, it->where);
        if (v < 1) throw ConfigError(it->where + ": solver.record_every must be >= 1");
        cfg.record_every = static_cast<int>(v);
    }
    if (const Item* it = get("solver.flux")) {
        cfg.flux = trim(it->value);
        if (cfg.flux != "entropic" && cfg.flux != "gradient")
            throw ConfigError(it->where + ": solver.flux must be 'entropic' or 'gradient'");
    }
    if (const Item* it = get("solver.fit_t0")) {
        cfg.fit_t0 = parse_real(it->value, it->where);
        if (!(cfg.fit_t0 >= 0.0)) throw ConfigError(it->where + ": solver.fit_t0 must be >= 0");
    }

    if (cfg.subcommand == Subcommand::evolve) {
        if (cfg.gammas.size() != 1 || cfg.epsilons.size() != 1)
            throw ConfigError(source + ": evolve takes a single gamma and a single epsilon");
        if (cfg.gammas[0] < -2.0 || cfg.gammas[0] > 1.0)
            throw ConfigError(source + ": evolve supports gamma in [-2, 1]");
    }
    if (cfg.subcommand == Subcommand::functionals && cfg.epsilons.size() != 1)
        throw ConfigError(source + ": functionals takes a single epsilon");
    return cfg;
}

} // namespace lfdcli
