#include "horse_cli/config.hpp"
#include "horse_cli/table.hpp"

#include "horse/basis.hpp"
#include "horse/units.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace horse::cli {

namespace pt = boost::property_tree;

std::string to_string(Mode m)
{
    switch (m) {
    case Mode::single: return "single";
    case Mode::coulomb: return "coulomb";
    case Mode::multichannel: return "multichannel";
    case Mode::pmatrix_scan: return "pmatrix-scan";
    case Mode::plateau_scan: return "plateau-scan";
    case Mode::oracle_compare: return "oracle-compare";
    }
    return "?";
}

RadialPotential PotentialSpec::build(int l) const
{
    if (kind == "zero")
        return zero_potential();
    if (kind == "square-well")
        return square_well(depth, radius.value_or(0.0));
    if (kind == "tabulated")
        return load_tabulated_potential(file);
    WoodsSaxonParams p = WoodsSaxonParams::for_mass_number(mass_number);
    p.depth = depth;
    if (radius)
        p.radius = *radius;
    p.diffuseness = diffuseness;
    p.spin_orbit = spin_orbit;
    return woods_saxon(p, l, j);
}

std::vector<double> EnergyGrid::points() const
{
    std::vector<double> e(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        e[static_cast<std::size_t>(i)] = log ? min * std::pow(max / min, t) : min + (max - min) * t;
    }
    return e;
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what)
{
    throw ConfigError(field + ": " + what);
}

// One [section]; every key read is marked so leftovers can be reported as unknown.
class Section {
public:
    Section(std::string name, const pt::ptree* node) : name_(std::move(name)), node_(node) {}

    bool present() const { return node_ != nullptr; }
    std::string field(const std::string& key) const { return "[" + name_ + "] " + key; }

    std::optional<std::string> raw(const std::string& key)
    {
        used_.insert(key);
        if (!node_)
            return std::nullopt;
        const auto child = node_->get_child_optional(pt::ptree::path_type(key, '\0'));
        if (!child)
            return std::nullopt;
        return child->data();
    }

    std::optional<double> number(const std::string& key)
    {
        const auto s = raw(key);
        if (!s)
            return std::nullopt;
        return parse_double(key, *s);
    }

    double number(const std::string& key, double fallback) { return number(key).value_or(fallback); }

    std::optional<int> integer(const std::string& key)
    {
        const auto s = raw(key);
        if (!s)
            return std::nullopt;
        int v = 0;
        const auto t = trim(*s);
        const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
        if (res.ec != std::errc() || res.ptr != t.data() + t.size())
            fail(field(key), "expected an integer, got '" + *s + "'");
        return v;
    }

    int integer(const std::string& key, int fallback) { return integer(key).value_or(fallback); }

    bool flag(const std::string& key, bool fallback)
    {
        const auto s = raw(key);
        if (!s)
            return fallback;
        const auto t = trim(*s);
        if (t == "true" || t == "yes" || t == "on" || t == "1")
            return true;
        if (t == "false" || t == "no" || t == "off" || t == "0")
            return false;
        fail(field(key), "expected true or false, got '" + *s + "'");
    }

    std::string text(const std::string& key, const std::string& fallback)
    {
        const auto s = raw(key);
        return s ? trim(*s) : fallback;
    }

    std::optional<std::vector<double>> numbers(const std::string& key)
    {
        const auto s = raw(key);
        if (!s)
            return std::nullopt;
        std::vector<double> out;
        std::istringstream in(*s);
        std::string tok;
        while (in >> tok)
            out.push_back(parse_double(key, tok));
        return out;
    }

    void reject_unknown() const
    {
        if (!node_)
            return;
        for (const auto& [key, child] : *node_) {
            (void)child;
            if (!used_.count(key))
                fail(field(key), "unknown key");
        }
    }

private:
    static std::string trim(const std::string& s)
    {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos)
            return {};
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    }

    double parse_double(const std::string& key, const std::string& s) const
    {
        const auto t = trim(s);
        double v = 0.0;
        const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
        if (res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(v))
            fail(field(key), "expected a finite number, got '" + s + "'");
        return v;
    }

    std::string name_;
    const pt::ptree* node_;
    std::set<std::string> used_;
};

Mode parse_mode(const std::string& s)
{
    static const std::map<std::string, Mode> modes{
        {"single", Mode::single},
        {"coulomb", Mode::coulomb},
        {"multichannel", Mode::multichannel},
        {"pmatrix-scan", Mode::pmatrix_scan},
        {"plateau-scan", Mode::plateau_scan},
        {"oracle-compare", Mode::oracle_compare},
    };
    const auto it = modes.find(s);
    if (it == modes.end())
        fail("[run] mode", "'" + s + "' is not one of single, coulomb, multichannel, pmatrix-scan, plateau-scan, oracle-compare");
    return it->second;
}

PotentialSpec read_potential(Section& s)
{
    PotentialSpec p;
    p.kind = s.text("kind", p.kind);
    p.depth = s.number("depth", p.depth);
    p.radius = s.number("radius");
    p.diffuseness = s.number("diffuseness", p.diffuseness);
    p.spin_orbit = s.number("spin_orbit", p.spin_orbit);
    p.mass_number = s.number("mass_number", p.mass_number);
    p.j = s.number("j");
    p.file = s.text("file", "");
    return p;
}

void check_potential(const PotentialSpec& p, int l, const std::string& section)
{
    const auto f = [&](const std::string& key) { return "[" + section + "] " + key; };
    if (p.kind != "zero" && p.kind != "square-well" && p.kind != "woods-saxon" && p.kind != "tabulated")
        fail(f("kind"), "'" + p.kind + "' is not one of zero, square-well, woods-saxon, tabulated");
    if (p.kind == "square-well" && !(p.radius && *p.radius > 0.0))
        fail(f("radius"), "a square well needs radius > 0 fm");
    if (p.kind == "woods-saxon") {
        if (p.radius && !(*p.radius > 0.0))
            fail(f("radius"), "must be > 0 fm");
        if (!(p.diffuseness > 0.0))
            fail(f("diffuseness"), "must be > 0 fm");
        if (!(p.mass_number > 0.0))
            fail(f("mass_number"), "must be > 0");
        if (p.j && std::abs(std::abs(*p.j - l) - 0.5) > 1e-12)
            fail(f("j"), "must be l +- 1/2 with l = " + std::to_string(l));
        if (p.j && *p.j < 0.5)
            fail(f("j"), "must be >= 1/2");
    }
    if (p.kind == "tabulated" && p.file.empty())
        fail(f("file"), "a tabulated potential needs a file path");
}

double mass_from(Section& s, const std::string& section)
{
    const auto mu = s.number("mu");
    const auto masses = s.numbers("mass_numbers");
    if (mu && masses)
        fail("[" + section + "] mu", "give either mu or mass_numbers, not both");
    if (mu) {
        if (!(*mu > 0.0))
            fail("[" + section + "] mu", "must be > 0 MeV");
        return *mu;
    }
    const std::vector<double> a = masses.value_or(std::vector<double>{1.0, 15.0});
    if (a.size() != 2 || !(a[0] > 0.0) || !(a[1] > 0.0))
        fail("[" + section + "] mass_numbers", "expected two positive mass numbers");
    return reduced_mass(a[0], a[1]);
}

} // namespace

RunConfig parse_config(std::istream& in)
{
    pt::ptree tree;
    try {
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("config line " + std::to_string(e.line()) + ": " + e.message());
    }

    std::map<std::string, const pt::ptree*> sections;
    for (const auto& [name, node] : tree) {
        if (node.empty() && !node.data().empty())
            fail(name, "keys must belong to a [section]");
        sections[name] = &node;
    }
    auto section = [&](const std::string& name) {
        const auto it = sections.find(name);
        return Section(name, it == sections.end() ? nullptr : it->second);
    };
    std::set<std::string> known;

    RunConfig c;
    Section run = section("run");
    known.insert("run");
    c.mode = parse_mode(run.text("mode", "single"));
    c.output = run.text("output", "");
    run.reject_unknown();

    Section basis = section("basis");
    known.insert("basis");
    c.hbar_omega = basis.number("hbar_omega", c.hbar_omega);
    c.mu = mass_from(basis, "basis");
    c.l = basis.integer("l", c.l);
    c.N = basis.integer("N", c.N);
    c.smoothing = basis.flag("smoothing", c.smoothing);
    basis.reject_unknown();

    Section pot = section("potential");
    known.insert("potential");
    c.potential = read_potential(pot);
    pot.reject_unknown();

    Section coul = section("coulomb");
    known.insert("coulomb");
    c.z1z2 = coul.number("z1z2", c.z1z2);
    c.b = coul.number("b");
    coul.reject_unknown();

    Section pm = section("pmatrix");
    known.insert("pmatrix");
    if (const auto b = pm.raw("b"); b && *b != "natural") {
        c.b = pm.number("b");
    }
    pm.reject_unknown();

    Section en = section("energy");
    known.insert("energy");
    c.energy.min = en.number("min", c.energy.min);
    c.energy.max = en.number("max", c.energy.max);
    c.energy.count = en.integer("count", c.energy.count);
    c.energy.log = en.flag("log", c.energy.log);
    en.reject_unknown();

    Section out = section("output");
    known.insert("output");
    if (const auto n = out.numbers("coefficients")) {
        for (double x : *n) {
            if (x != std::floor(x) || x < 0 || x > 10000)
                fail("[output] coefficients", "expected non-negative integers");
            c.coefficients.push_back(static_cast<int>(x));
        }
    }
    out.reject_unknown();

    Section pl = section("plateau");
    known.insert("plateau");
    c.plateau_energy = pl.number("energy", c.plateau_energy);
    c.b_min = pl.number("b_min", c.b_min);
    c.b_max = pl.number("b_max", c.b_max);
    c.b_count = pl.integer("b_count", c.b_count);
    c.plateau_tolerance = pl.number("tolerance", c.plateau_tolerance);
    pl.reject_unknown();

    // [channel1] .. [channelM], then [coupling<g>_<g'>] with 1-based indices.
    for (int g = 1;; ++g) {
        const std::string name = "channel" + std::to_string(g);
        Section ch = section(name);
        if (!ch.present())
            break;
        known.insert(name);
        ChannelSpec spec;
        spec.channel.l = ch.integer("l", 0);
        spec.channel.mu = mass_from(ch, name);
        spec.channel.threshold = ch.number("threshold", 0.0);
        spec.channel.z1z2 = ch.number("z1z2", 0.0);
        spec.channel.N = ch.integer("N", c.N);
        spec.channel.hbar_omega = ch.number("hbar_omega", c.hbar_omega);
        spec.b = ch.number("b");
        ch.reject_unknown();
        c.channels.push_back(spec);
    }
    const int m = static_cast<int>(c.channels.size());
    for (const auto& [name, node] : sections) {
        (void)node;
        if (name.rfind("coupling", 0) != 0)
            continue;
        int g = 0, gp = 0;
        char sep = 0;
        std::istringstream idx(name.substr(8));
        if (!(idx >> g >> sep >> gp) || sep != '_' || !idx.eof())
            fail(name, "coupling sections are named [coupling<g>_<g'>], e.g. [coupling1_2]");
        if (g < 1 || gp < 1 || g > m || gp > m)
            fail(name, "channel indices must lie in [1, " + std::to_string(m) + "]");
        known.insert(name);
        Section s = section(name);
        CouplingSpec cs;
        cs.row = std::min(g, gp) - 1;
        cs.col = std::max(g, gp) - 1;
        cs.potential = read_potential(s);
        s.reject_unknown();
        for (const auto& other : c.couplings)
            if (other.row == cs.row && other.col == cs.col)
                fail(name, "coupling given twice");
        c.couplings.push_back(cs);
    }
    std::sort(c.couplings.begin(), c.couplings.end(),
              [](const CouplingSpec& a, const CouplingSpec& b) { return std::pair(a.row, a.col) < std::pair(b.row, b.col); });

    for (const auto& [name, node] : sections) {
        (void)node;
        if (!known.count(name))
            fail("[" + name + "]", "unknown section");
    }
    validate(c);
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot read config file " + path);
    return parse_config(in);
}

void validate(RunConfig& c)
{
    if (c.mu == 0.0)
        c.mu = reduced_mass(1.0, 15.0);
    if (!(c.mu > 0.0))
        fail("[basis] mu", "must be > 0 MeV");
    if (!(c.hbar_omega > 0.0))
        fail("[basis] hbar_omega", "must be > 0 MeV");
    if (c.l < 0 || c.l > 20)
        fail("[basis] l", "must lie in [0, 20]");
    if (c.N < 0 || c.N > 400)
        fail("[basis] N", "must lie in [0, 400]");
    check_potential(c.potential, c.l, "potential");
    if (c.energy.count < 1 || c.energy.count > 1000000)
        fail("[energy] count", "must lie in [1, 1000000]");
    if (!(c.energy.min > 0.0))
        fail("[energy] min", "must be > 0 MeV");
    if (!(c.energy.max >= c.energy.min))
        fail("[energy] max", "must be >= min = " + format_number(c.energy.min) + " MeV");
    for (int n : c.coefficients)
        if (n > 2 * c.N + 200)
            fail("[output] coefficients", "n must not exceed 2N + 200");

    const OscillatorBasis basis = OscillatorBasis::make(c.hbar_omega, c.mu, c.l);
    const double upper = classical_turning_point(basis, c.N);
    if (c.mode == Mode::coulomb || (c.mode == Mode::oracle_compare && c.z1z2 != 0.0)) {
        const double b = c.b.value_or(7.0);
        if (!(b > 0.0) || b >= upper)
            fail("[coulomb] b", "must satisfy 0 < b < r_N^cl = " + format_number(upper) + " fm");
        c.b = b;
    }
    if (c.mode == Mode::pmatrix_scan && c.b && !(*c.b > 0.0))
        fail("[pmatrix] b", "must be > 0 fm or 'natural'");
    if (c.mode == Mode::plateau_scan) {
        if (!(c.plateau_energy > 0.0))
            fail("[plateau] energy", "must be > 0 MeV");
        if (!(c.b_min > 0.0) || !(c.b_max > c.b_min))
            fail("[plateau] b_min", "need 0 < b_min < b_max");
        if (c.b_max >= 2.0 * upper)
            fail("[plateau] b_max", "must be below 2 r_N^cl = " + format_number(2.0 * upper) + " fm");
        if (c.b_count < 2 || c.b_count > 100000)
            fail("[plateau] b_count", "must lie in [2, 100000]");
        if (!(c.plateau_tolerance > 0.0))
            fail("[plateau] tolerance", "must be > 0 rad");
    }
    if (c.mode == Mode::multichannel) {
        if (c.channels.empty())
            fail("[channel1]", "multichannel mode needs at least one [channel<g>] section");
        for (std::size_t g = 0; g < c.channels.size(); ++g) {
            const std::string sec = "[channel" + std::to_string(g + 1) + "] ";
            const Channel& ch = c.channels[g].channel;
            if (ch.l < 0 || ch.l > 20)
                fail(sec + "l", "must lie in [0, 20]");
            if (ch.N < 0 || ch.N > 400)
                fail(sec + "N", "must lie in [0, 400]");
            if (!(ch.hbar_omega > 0.0))
                fail(sec + "hbar_omega", "must be > 0 MeV");
            if (!(c.energy.min > ch.threshold))
                fail("[energy] min", "must exceed every channel threshold (channel " + std::to_string(g + 1) +
                                         " opens at " + format_number(ch.threshold) + " MeV); closed channels are not supported");
            if (ch.z1z2 != 0.0 || c.channels[g].b) {
                const double upper_g = classical_turning_point(ch.basis(), ch.N);
                const double b = c.channels[g].b.value_or(7.0);
                if (!(b > 0.0) || b >= upper_g)
                    fail(sec + "b", "must satisfy 0 < b < r_N^cl = " + format_number(upper_g) + " fm");
                c.channels[g].b = b;
            }
        }
        for (const auto& cs : c.couplings)
            check_potential(cs.potential, c.channels[static_cast<std::size_t>(cs.row)].channel.l,
                            "coupling" + std::to_string(cs.row + 1) + "_" + std::to_string(cs.col + 1));
        const bool charged = std::any_of(c.channels.begin(), c.channels.end(),
                                         [](const ChannelSpec& s) { return s.channel.z1z2 != 0.0; });
        if (charged)
            for (auto& s : c.channels)
                if (!s.b)
                    s.b = 7.0;
    }
    if (c.output.empty())
        c.output = to_string(c.mode) + ".csv";
    if (c.output.find('/') != std::string::npos || c.output == "." || c.output == "..")
        fail("[run] output", "must be a plain file name; use --out to choose the directory");
}

std::vector<std::pair<std::string, std::string>> RunConfig::describe() const
{
    std::vector<std::pair<std::string, std::string>> d;
    auto num = [&](std::string k, double v) { d.emplace_back(std::move(k), format_number(v)); };
    auto pot = [&](const std::string& prefix, const PotentialSpec& p) {
        d.emplace_back(prefix + "kind", p.kind);
        if (p.kind == "square-well" || p.kind == "woods-saxon")
            num(prefix + "depth", p.depth);
        if (p.radius)
            num(prefix + "radius", *p.radius);
        if (p.kind == "woods-saxon") {
            num(prefix + "diffuseness", p.diffuseness);
            num(prefix + "spin_orbit", p.spin_orbit);
            num(prefix + "mass_number", p.mass_number);
            d.emplace_back(prefix + "j", p.j ? format_number(*p.j) : "none");
        }
        if (p.kind == "tabulated")
            d.emplace_back(prefix + "file", p.file);
    };
    d.emplace_back("run.mode", to_string(mode));
    d.emplace_back("run.output", output);
    if (mode != Mode::multichannel) {
        num("basis.hbar_omega", hbar_omega);
        num("basis.mu", mu);
        num("basis.l", l);
        num("basis.N", N);
        d.emplace_back("basis.smoothing", smoothing ? "true" : "false");
        pot("potential.", potential);
        num("coulomb.z1z2", z1z2);
        d.emplace_back("coulomb.b", b ? format_number(*b) : "natural");
    }
    if (mode == Mode::plateau_scan) {
        num("plateau.energy", plateau_energy);
        num("plateau.b_min", b_min);
        num("plateau.b_max", b_max);
        num("plateau.b_count", b_count);
        num("plateau.tolerance", plateau_tolerance);
    } else {
        num("energy.min", energy.min);
        num("energy.max", energy.max);
        num("energy.count", energy.count);
        d.emplace_back("energy.log", energy.log ? "true" : "false");
    }
    std::string coef;
    for (int n : coefficients)
        coef += (coef.empty() ? "" : " ") + std::to_string(n);
    d.emplace_back("output.coefficients", coef.empty() ? "none" : coef);
    if (mode == Mode::multichannel) {
        d.emplace_back("basis.smoothing", smoothing ? "true" : "false");
        for (std::size_t g = 0; g < channels.size(); ++g) {
            const std::string p = "channel" + std::to_string(g + 1) + ".";
            const Channel& ch = channels[g].channel;
            num(p + "l", ch.l);
            num(p + "mu", ch.mu);
            num(p + "threshold", ch.threshold);
            num(p + "z1z2", ch.z1z2);
            num(p + "N", ch.N);
            num(p + "hbar_omega", ch.hbar_omega);
            d.emplace_back(p + "b", channels[g].b ? format_number(*channels[g].b) : "none");
        }
        for (const auto& cs : couplings)
            pot("coupling" + std::to_string(cs.row + 1) + "_" + std::to_string(cs.col + 1) + ".", cs.potential);
    }
    return d;
}

} // namespace horse::cli
