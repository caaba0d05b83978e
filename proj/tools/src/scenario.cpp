#include "scenario.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "eitmem/error.hpp"

namespace eitmem::cli {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>> kKeys = {
    {"medium",
     {"g", "N", "L", "cell_diameter", "nu_p", "gamma_ba", "gamma_bc", "delta", "delta_p", "c", "c_scale",
      "gamma_a", "gamma_c"}},
    {"dipole", {"dipole_moment", "polarization_overlap", "quantization_volume"}},
    {"grid", {"z_min", "z_max", "n_points"}},
    {"pulse", {"amplitude_re", "amplitude_im", "center_z", "width", "length_in_medium"}},
    {"control", {"kind", "omega", "scale", "floor", "steepness", "t1", "t2", "times", "thetas"}},
    {"run", {"horizon", "snapshot_dt"}},
    {"analysis",
     {"L_p", "T0", "output_time", "distortion_threshold", "track_dt", "on_window_start", "on_window_end",
      "off_window_start", "off_window_end"}},
    {"oracle", {"enabled", "dt", "scheme", "stiff_handling"}},
    {"output", {"out_dir", "snapshots", "trace"}},
};

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) {
        return {};
    }
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// Reads values from the tree and names file, line and key in every error.
class Reader
{
public:
    Reader(const std::string& text, std::string origin) : m_origin(std::move(origin))
    {
        std::istringstream in(text);
        std::string line;
        std::string section;
        int number = 0;
        while (std::getline(in, line)) {
            ++number;
            const std::string t = trim(line);
            if (t.empty() || t[0] == ';' || t[0] == '#') {
                continue;
            }
            if (t.front() == '[' && t.back() == ']') {
                section = trim(t.substr(1, t.size() - 2));
                m_lines[section] = number;
                continue;
            }
            const auto eq = t.find('=');
            if (eq != std::string::npos) {
                m_lines[section + "." + trim(t.substr(0, eq))] = number;
            }
        }
        std::istringstream again(text);
        try {
            pt::read_ini(again, m_tree);
        } catch (const pt::ini_parser_error& e) {
            fail(ErrorCategory::config,
                 fmt::format("{}:{}: {}", m_origin, e.line(), e.message()));
        }
        check_keys();
    }

    bool has(const std::string& key) const { return m_tree.get_optional<std::string>(key).has_value(); }

    std::string str(const std::string& key, const std::string& fallback) const
    {
        return trim(m_tree.get<std::string>(key, fallback));
    }

    double num(const std::string& key, double fallback) const
    {
        if (!has(key)) {
            return fallback;
        }
        return parse_double(key, str(key, ""));
    }

    std::optional<double> opt(const std::string& key) const
    {
        if (!has(key)) {
            return std::nullopt;
        }
        return parse_double(key, str(key, ""));
    }

    std::size_t count(const std::string& key, std::size_t fallback) const
    {
        if (!has(key)) {
            return fallback;
        }
        const std::string v = str(key, "");
        unsigned long long out = 0;
        const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc() || p != v.data() + v.size()) {
            bad(key, v, "expected a non-negative integer");
        }
        return static_cast<std::size_t>(out);
    }

    bool flag(const std::string& key, bool fallback) const
    {
        if (!has(key)) {
            return fallback;
        }
        const std::string v = str(key, "");
        if (v == "true" || v == "1" || v == "yes" || v == "on") {
            return true;
        }
        if (v == "false" || v == "0" || v == "no" || v == "off") {
            return false;
        }
        bad(key, v, "expected true or false");
    }

    std::vector<double> list(const std::string& key) const
    {
        std::vector<double> out;
        std::stringstream ss(str(key, ""));
        std::string item;
        while (std::getline(ss, item, ',')) {
            out.push_back(parse_double(key, trim(item)));
        }
        return out;
    }

    [[noreturn]] void bad(const std::string& key, const std::string& value, const std::string& why) const
    {
        fail(ErrorCategory::config, fmt::format("{}:{}: [{}] {} = '{}': {}", m_origin, line_of(key),
                                                section_of(key), name_of(key), value, why));
    }

    [[noreturn]] void invalid(const std::string& key, const std::string& why) const
    {
        fail(ErrorCategory::config, fmt::format("{}:{}: [{}] {}: {}", m_origin, line_of(key), section_of(key),
                                                name_of(key), why));
    }

    const std::string& origin() const { return m_origin; }

private:
    double parse_double(const std::string& key, const std::string& v) const
    {
        double out = 0.0;
        const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (v.empty() || ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out)) {
            bad(key, v, "expected a finite number");
        }
        return out;
    }

    void check_keys() const
    {
        for (const auto& [section, body] : m_tree) {
            const auto it = kKeys.find(section);
            if (it == kKeys.end()) {
                fail(ErrorCategory::config,
                     fmt::format("{}:{}: unknown section [{}]", m_origin, line_of(section), section));
            }
            for (const auto& [key, value] : body) {
                if (!it->second.count(key)) {
                    fail(ErrorCategory::config, fmt::format("{}:{}: unknown key '{}' in [{}]", m_origin,
                                                            line_of(section + "." + key), key, section));
                }
            }
        }
    }

    int line_of(const std::string& key) const
    {
        const auto it = m_lines.find(key);
        return it == m_lines.end() ? 0 : it->second;
    }

    static std::string section_of(const std::string& key) { return key.substr(0, key.find('.')); }
    static std::string name_of(const std::string& key) { return key.substr(key.find('.') + 1); }

    std::string m_origin;
    pt::ptree m_tree;
    std::map<std::string, int> m_lines;
};

// Re-raises model validation failures as config errors tied to a key.
template <class F>
void checked(const Reader& r, const std::string& key, F&& f)
{
    try {
        f();
    } catch (const Error& e) {
        r.invalid(key, e.what());
    }
}

ControlSchedule read_control(const Reader& r)
{
    const std::string kind = r.str("control.kind", "tanh");
    std::optional<ControlSchedule> out;
    if (kind == "constant") {
        checked(r, "control.omega", [&] { out = ControlSchedule::constant(r.num("control.omega", 5e6)); });
    } else if (kind == "tanh") {
        TanhControl p;
        p.scale = r.num("control.scale", p.scale);
        p.floor = r.num("control.floor", p.floor);
        p.steepness = r.num("control.steepness", p.steepness);
        p.t1 = r.num("control.t1", p.t1);
        p.t2 = r.num("control.t2", p.t2);
        checked(r, "control.floor", [&] { out = ControlSchedule::tanh_profile(p); });
    } else if (kind == "tabulated") {
        if (!r.has("control.times") || !r.has("control.thetas")) {
            r.invalid("control.kind", "tabulated control needs 'times' and 'thetas'");
        }
        const auto t = r.list("control.times");
        const auto th = r.list("control.thetas");
        const double floor = r.num("control.floor", 1e-5);
        checked(r, "control.thetas", [&] { out = ControlSchedule::tabulated(t, th, floor); });
    } else {
        r.bad("control.kind", kind, "expected constant, tanh or tabulated");
    }
    return *out;
}

} // namespace

MediumParams Scenario::effective_medium() const
{
    MediumParams m = medium;
    m.c = medium.c * c_scale;
    return m;
}

void Scenario::validate() const
{
    auto wrap = [](const std::string& field, auto&& f) {
        try {
            f();
        } catch (const Error& e) {
            fail(ErrorCategory::config, field + ": " + e.what());
        }
    };
    wrap("[medium]", [&] { medium.validate(); });
    if (!(std::isfinite(c_scale) && c_scale > 0.0 && c_scale <= 1.0)) {
        fail(ErrorCategory::config, "[medium] c_scale: must be in (0, 1]");
    }
    if (dipole) {
        wrap("[dipole]", [&] { dipole->validate(); });
    }
    wrap("[grid]", [&] { grid.validate(); });
    wrap("[pulse]", [&] { pulse.validate(); });
    if (grid.length() < 4.0 * pulse.pulse_length()) {
        fail(ErrorCategory::config, "[grid]/[pulse]: the domain must span at least 4 pulse lengths");
    }
    if (pulse.center_z <= grid.z_min || pulse.center_z >= grid.z_max) {
        fail(ErrorCategory::config, "[pulse] center_z: outside the grid");
    }
    if (!(horizon > 0.0)) {
        fail(ErrorCategory::config, "[run] horizon: must be > 0");
    }
    if (!(snapshot_dt > 0.0)) {
        fail(ErrorCategory::config, "[run] snapshot_dt: must be > 0");
    }
    const double steps = horizon / snapshot_dt;
    if (std::abs(steps - std::round(steps)) > 1e-9 * std::round(steps) || std::round(steps) < 1.0) {
        fail(ErrorCategory::config, "[run] snapshot_dt: must divide the horizon");
    }
    if (const auto* tab = std::get_if<TabulatedControl>(&schedule.profile())) {
        if (tab->t.front() > 0.0 || tab->t.back() < horizon) {
            fail(ErrorCategory::config, "[control] times: the table must cover [0, horizon]");
        }
    }
    if (!(analysis.L_p > 0.0) || !(analysis.T0 > 0.0)) {
        fail(ErrorCategory::config, "[analysis] L_p and T0 must be > 0");
    }
    if (!(analysis.track_dt > 0.0) || !(analysis.distortion_threshold > 0.0)) {
        fail(ErrorCategory::config, "[analysis] track_dt and distortion_threshold must be > 0");
    }
    if (!(analysis.output_time > 0.0)) {
        fail(ErrorCategory::config, "[analysis] output_time: must be > 0");
    }
    if (!(oracle.dt > 0.0)) {
        fail(ErrorCategory::config, "[oracle] dt: must be > 0");
    }
}

Scenario parse_scenario(const std::string& text, const std::string& origin)
{
    const Reader r(text, origin);
    Scenario s;

    MediumParams& m = s.medium;
    m.g = r.num("medium.g", m.g);
    m.N = r.num("medium.N", m.N);
    m.L = r.num("medium.L", m.L);
    m.cell_diameter = r.num("medium.cell_diameter", m.cell_diameter);
    m.nu_p = r.num("medium.nu_p", m.nu_p);
    m.gamma_ba = r.num("medium.gamma_ba", m.gamma_ba);
    m.gamma_bc = r.num("medium.gamma_bc", m.gamma_bc);
    m.delta = r.num("medium.delta", m.delta);
    m.delta_p = r.num("medium.delta_p", m.delta_p);
    m.c = r.num("medium.c", m.c);
    m.gamma_a = r.opt("medium.gamma_a");
    m.gamma_c = r.opt("medium.gamma_c");
    s.c_scale = r.num("medium.c_scale", 1.0);

    if (r.has("dipole.dipole_moment") || r.has("dipole.polarization_overlap") ||
        r.has("dipole.quantization_volume")) {
        DipoleSpec d;
        d.dipole_moment = r.num("dipole.dipole_moment", d.dipole_moment);
        d.polarization_overlap = r.num("dipole.polarization_overlap", d.polarization_overlap);
        d.quantization_volume = r.num("dipole.quantization_volume", cylinder_volume(m.L, m.cell_diameter));
        s.dipole = d;
    }

    s.grid.z_min = r.num("grid.z_min", s.grid.z_min);
    s.grid.z_max = r.num("grid.z_max", s.grid.z_max);
    s.grid.n_points = r.count("grid.n_points", s.grid.n_points);

    s.pulse.amplitude = {r.num("pulse.amplitude_re", s.pulse.amplitude.real()),
                         r.num("pulse.amplitude_im", s.pulse.amplitude.imag())};
    s.pulse.center_z = r.num("pulse.center_z", s.pulse.center_z);
    s.pulse.width = r.num("pulse.width", s.pulse.width);
    s.pulse.length_in_medium = r.opt("pulse.length_in_medium");

    s.schedule = read_control(r);

    s.horizon = r.num("run.horizon", s.horizon);
    s.snapshot_dt = r.num("run.snapshot_dt", s.snapshot_dt);

    AnalysisSettings& a = s.analysis;
    a.L_p = r.num("analysis.L_p", a.L_p);
    a.T0 = r.num("analysis.T0", a.T0);
    a.output_time = r.num("analysis.output_time", a.output_time);
    a.distortion_threshold = r.num("analysis.distortion_threshold", a.distortion_threshold);
    a.track_dt = r.num("analysis.track_dt", a.track_dt);
    a.on_window_start = r.opt("analysis.on_window_start");
    a.on_window_end = r.opt("analysis.on_window_end");
    a.off_window_start = r.opt("analysis.off_window_start");
    a.off_window_end = r.opt("analysis.off_window_end");

    s.oracle.enabled = r.flag("oracle.enabled", s.oracle.enabled);
    s.oracle.dt = r.num("oracle.dt", s.oracle.dt);
    try {
        s.oracle.scheme = parse_oracle_scheme(r.str("oracle.scheme", to_string(s.oracle.scheme)));
    } catch (const Error& e) {
        r.invalid("oracle.scheme", e.what());
    }
    try {
        s.oracle.stiff_handling =
            parse_stiff_handling(r.str("oracle.stiff_handling", to_string(s.oracle.stiff_handling)));
    } catch (const Error& e) {
        r.invalid("oracle.stiff_handling", e.what());
    }

    s.output.out_dir = r.str("output.out_dir", s.output.out_dir);
    s.output.snapshots = r.flag("output.snapshots", s.output.snapshots);
    s.output.trace = r.flag("output.trace", s.output.trace);

    try {
        s.validate();
    } catch (const Error& e) {
        fail(ErrorCategory::config, origin + ": " + e.what());
    }
    return s;
}

Scenario load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCategory::config, "cannot read scenario file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path);
}

namespace {

std::string num(double x)
{
    return fmt::format("{:.17g}", x);
}

std::string join(const std::vector<double>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? ", " : "") + num(v[i]);
    }
    return out;
}

} // namespace

std::string serialize_scenario(const Scenario& s)
{
    std::ostringstream o;
    const MediumParams& m = s.medium;
    o << "; rates in rad/s, lengths in m, times in s\n";
    o << "[medium]\n";
    o << "g = " << num(m.g) << "\n";
    o << "N = " << num(m.N) << "\n";
    o << "L = " << num(m.L) << "\n";
    o << "cell_diameter = " << num(m.cell_diameter) << "\n";
    o << "nu_p = " << num(m.nu_p) << "\n";
    o << "gamma_ba = " << num(m.gamma_ba) << "\n";
    o << "gamma_bc = " << num(m.gamma_bc) << "\n";
    o << "delta = " << num(m.delta) << "\n";
    o << "delta_p = " << num(m.delta_p) << "\n";
    o << "c = " << num(m.c) << "\n";
    o << "c_scale = " << num(s.c_scale) << "\n";
    if (m.gamma_a) {
        o << "gamma_a = " << num(*m.gamma_a) << "\n";
    }
    if (m.gamma_c) {
        o << "gamma_c = " << num(*m.gamma_c) << "\n";
    }
    if (s.dipole) {
        o << "\n[dipole]\n";
        o << "dipole_moment = " << num(s.dipole->dipole_moment) << "\n";
        o << "polarization_overlap = " << num(s.dipole->polarization_overlap) << "\n";
        o << "quantization_volume = " << num(s.dipole->quantization_volume) << "\n";
    }
    o << "\n[grid]\n";
    o << "z_min = " << num(s.grid.z_min) << "\n";
    o << "z_max = " << num(s.grid.z_max) << "\n";
    o << "n_points = " << s.grid.n_points << "\n";
    o << "\n[pulse]\n";
    o << "amplitude_re = " << num(s.pulse.amplitude.real()) << "\n";
    o << "amplitude_im = " << num(s.pulse.amplitude.imag()) << "\n";
    o << "center_z = " << num(s.pulse.center_z) << "\n";
    o << "width = " << num(s.pulse.width) << "\n";
    if (s.pulse.length_in_medium) {
        o << "length_in_medium = " << num(*s.pulse.length_in_medium) << "\n";
    }
    o << "\n[control]\n";
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ConstantControl>) {
                o << "kind = constant\n";
                o << "omega = " << num(p.omega) << "\n";
            } else if constexpr (std::is_same_v<T, TanhControl>) {
                o << "kind = tanh\n";
                o << "scale = " << num(p.scale) << "\n";
                o << "floor = " << num(p.floor) << "\n";
                o << "steepness = " << num(p.steepness) << "\n";
                o << "t1 = " << num(p.t1) << "\n";
                o << "t2 = " << num(p.t2) << "\n";
            } else {
                o << "kind = tabulated\n";
                o << "floor = " << num(p.floor) << "\n";
                o << "times = " << join(p.t) << "\n";
                o << "thetas = " << join(p.theta) << "\n";
            }
        },
        s.schedule.profile());
    o << "\n[run]\n";
    o << "horizon = " << num(s.horizon) << "\n";
    o << "snapshot_dt = " << num(s.snapshot_dt) << "\n";
    const AnalysisSettings& a = s.analysis;
    o << "\n[analysis]\n";
    o << "L_p = " << num(a.L_p) << "\n";
    o << "T0 = " << num(a.T0) << "\n";
    o << "output_time = " << num(a.output_time) << "\n";
    o << "distortion_threshold = " << num(a.distortion_threshold) << "\n";
    o << "track_dt = " << num(a.track_dt) << "\n";
    auto put_opt = [&](const char* key, const std::optional<double>& v) {
        if (v) {
            o << key << " = " << num(*v) << "\n";
        }
    };
    put_opt("on_window_start", a.on_window_start);
    put_opt("on_window_end", a.on_window_end);
    put_opt("off_window_start", a.off_window_start);
    put_opt("off_window_end", a.off_window_end);
    o << "\n[oracle]\n";
    o << "enabled = " << (s.oracle.enabled ? "true" : "false") << "\n";
    o << "dt = " << num(s.oracle.dt) << "\n";
    o << "scheme = " << to_string(s.oracle.scheme) << "\n";
    o << "stiff_handling = " << to_string(s.oracle.stiff_handling) << "\n";
    o << "\n[output]\n";
    o << "out_dir = " << s.output.out_dir << "\n";
    o << "snapshots = " << (s.output.snapshots ? "true" : "false") << "\n";
    o << "trace = " << (s.output.trace ? "true" : "false") << "\n";
    return o.str();
}

} // namespace eitmem::cli
