#include "spinpair/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace spinpair {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s, const std::string& context) {
    const std::string t = trim(s);
    try {
        std::size_t pos = 0;
        const double v = std::stod(t, &pos);
        if (pos != t.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(context + ": '" + t + "' is not a number");
    }
}

}  // namespace

KeyValueFile KeyValueFile::parse(std::istream& in, const std::string& origin) {
    KeyValueFile kv;
    kv.origin_ = origin;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (kv.entries_.count(key))
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" +
                              key + "'");
        kv.entries_[key] = Entry{value, lineno, false};
    }
    return kv;
}

KeyValueFile KeyValueFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse(in, path);
}

bool KeyValueFile::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string KeyValueFile::get_string(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end())
        throw ConfigError(origin_ + ": missing required key '" + key + "'");
    it->second.consumed = true;
    return it->second.value;
}

std::string KeyValueFile::get_string(const std::string& key,
                                     const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}

double KeyValueFile::get_double(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end())
        throw ConfigError(origin_ + ": missing required key '" + key + "'");
    it->second.consumed = true;
    return parse_double(it->second.value,
                        origin_ + ":" + std::to_string(it->second.line) + ": " + key);
}

double KeyValueFile::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

long KeyValueFile::get_long(const std::string& key, long fallback) const {
    if (!has(key)) return fallback;
    const double v = get_double(key);
    const long n = std::lround(v);
    if (std::abs(v - static_cast<double>(n)) > 1e-9)
        fail(key, "expected an integer");
    return n;
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = get_string(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail(key, "expected true/false");
    return fallback;
}

std::vector<double> KeyValueFile::get_doubles(const std::string& key) const {
    const std::string raw = get_string(key);
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (trim(item).empty()) continue;
        out.push_back(parse_double(item, origin_ + ": " + key));
    }
    if (out.empty()) fail(key, "expected a comma-separated list of numbers");
    return out;
}

std::vector<std::string> KeyValueFile::unconsumed() const {
    std::vector<std::string> out;
    for (const auto& [key, entry] : entries_)
        if (!entry.consumed) out.push_back(key + " (line " + std::to_string(entry.line) + ")");
    return out;
}

void KeyValueFile::fail(const std::string& key, const std::string& message) const {
    const auto it = entries_.find(key);
    const std::string where =
        it == entries_.end() ? origin_ : origin_ + ":" + std::to_string(it->second.line);
    throw ConfigError(where + ": " + key + ": " + message);
}

DensityMatrix4 RunConfig::initial_density() const {
    switch (initial) {
        case InitialState::kBellPsiMinus:
            return bell_psi_minus();
        case InitialState::kKet10:
            return density_from_pure(ket_10());
        case InitialState::kKet01:
            return density_from_pure(ket_01());
        case InitialState::kKet11:
            return density_from_pure(ket_11());
        case InitialState::kKet00:
            return density_from_pure(ket_00());
        case InitialState::kCustom:
            return custom_state;
    }
    throw std::logic_error("unreachable");
}

double RunConfig::time_unit_rate(std::string* label) const {
    TimeUnit unit = time_unit;
    if (unit == TimeUnit::kAuto) {
        if (std::holds_alternative<LorentzianBath>(bath) ||
            std::holds_alternative<MarkovianFlatBath>(bath))
            unit = TimeUnit::kGamma0;
        else if (std::holds_alternative<OhmicLorentzDrudeBath>(bath))
            unit = TimeUnit::kOmega0;
        else
            unit = TimeUnit::kAbsolute;
    }
    switch (unit) {
        case TimeUnit::kGamma0: {
            const double g0 = std::holds_alternative<LorentzianBath>(bath)
                                  ? std::get<LorentzianBath>(bath).gamma0
                                  : std::get<MarkovianFlatBath>(bath).gamma0;
            if (label) *label = "gamma0*t";
            return g0;
        }
        case TimeUnit::kOmega0:
            if (label) *label = "omega0*t";
            return std::get<OhmicLorentzDrudeBath>(bath).omega0;
        case TimeUnit::kCouplingK:
            if (label) *label = "K*t";
            return system.coupling_K;
        case TimeUnit::kAbsolute:
        case TimeUnit::kAuto:
            if (label) *label = "t";
            return 1.0;
    }
    throw std::logic_error("unreachable");
}

namespace {

BathModel parse_bath(const KeyValueFile& kv, const SystemParams& sys) {
    const std::string kind = kv.get_string("bath.kind");
    if (kind == "lorentzian") {
        LorentzianBath b;
        b.gamma = kv.get_double("bath.gamma");
        b.gamma0 = kv.get_double("bath.gamma0");
        return b;
    }
    if (kind == "ohmic_lorentz_drude") {
        OhmicLorentzDrudeBath b;
        b.omega_c = kv.get_double("bath.omega_c");
        b.omega0 = kv.get_double("bath.omega0", 0.5 * sys.epsilon);
        return b;
    }
    if (kind == "markovian_flat") {
        MarkovianFlatBath b;
        b.gamma0 = kv.get_double("bath.gamma0");
        return b;
    }
    if (kind == "tabulated") {
        const std::string path = kv.get_string("bath.spectrum_file");
        const double eps = kv.get_double("bath.epsilon", sys.epsilon);
        return read_spectrum_file(path, eps);
    }
    kv.fail("bath.kind", "unknown bath kind '" + kind +
                             "' (lorentzian, ohmic_lorentz_drude, markovian_flat, tabulated)");
    throw std::logic_error("unreachable");
}

InitialState parse_initial(const KeyValueFile& kv) {
    const std::string s = kv.get_string("initial.state", "bell_psi_minus");
    if (s == "bell_psi_minus") return InitialState::kBellPsiMinus;
    if (s == "ket10") return InitialState::kKet10;
    if (s == "ket01") return InitialState::kKet01;
    if (s == "ket11") return InitialState::kKet11;
    if (s == "ket00") return InitialState::kKet00;
    if (s == "custom") return InitialState::kCustom;
    kv.fail("initial.state", "unknown initial state '" + s + "'");
    throw std::logic_error("unreachable");
}

std::vector<Observable> parse_outputs(const KeyValueFile& kv) {
    const std::string raw = kv.get_string("outputs", "concurrence,populations");
    std::vector<Observable> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) continue;
        const std::string name = item.substr(b, e - b + 1);
        if (name == "concurrence")
            out.push_back(Observable::kConcurrence);
        else if (name == "populations")
            out.push_back(Observable::kPopulations);
        else if (name == "purity")
            out.push_back(Observable::kPurity);
        else if (name == "rho")
            out.push_back(Observable::kRho);
        else
            kv.fail("outputs", "unknown observable '" + name + "'");
    }
    if (out.empty()) kv.fail("outputs", "no observables selected");
    return out;
}

TimeUnit parse_time_unit(const KeyValueFile& kv) {
    const std::string s = kv.get_string("output.time_unit", "auto");
    if (s == "auto") return TimeUnit::kAuto;
    if (s == "gamma0") return TimeUnit::kGamma0;
    if (s == "omega0") return TimeUnit::kOmega0;
    if (s == "K") return TimeUnit::kCouplingK;
    if (s == "absolute") return TimeUnit::kAbsolute;
    kv.fail("output.time_unit", "unknown time unit '" + s + "'");
    throw std::logic_error("unreachable");
}

DensityMatrix4 parse_custom_state(const KeyValueFile& kv) {
    const std::vector<double> vals = kv.get_doubles("initial.custom");
    if (vals.size() != 32)
        kv.fail("initial.custom", "expected 32 numbers (re,im per element, row-major)");
    DensityMatrix4 rho;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const std::size_t base = 2 * static_cast<std::size_t>(4 * i + j);
            rho.m(i, j) = complexd(vals[base], vals[base + 1]);
        }
    if (!check_physical(rho, 1.0).within(1e-8))
        kv.fail("initial.custom", "custom state is not a physical density matrix");
    return rho;
}

RunConfig parse_run_config_impl(const KeyValueFile& kv, bool allow_sweep_keys) {
    RunConfig cfg;
    cfg.system.epsilon = kv.get_double("system.epsilon", 1.0);
    cfg.system.coupling_K = kv.get_double("system.K", 1.0);
    try {
        validate(cfg.system);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(kv.origin() + ": " + e.what());
    }
    try {
        cfg.bath = parse_bath(kv, cfg.system);
        validate(cfg.bath);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(kv.origin() + ": " + e.what());
    }
    cfg.initial = parse_initial(kv);
    if (cfg.initial == InitialState::kCustom) cfg.custom_state = parse_custom_state(kv);
    cfg.t_end = kv.get_double("horizon.t_end", 5.0);
    cfg.samples = static_cast<int>(kv.get_long("horizon.samples", 101));
    if (!(cfg.t_end > 0.0)) kv.fail("horizon.t_end", "must be > 0");
    if (cfg.samples < 2) kv.fail("horizon.samples", "need at least 2 samples");
    cfg.outputs = parse_outputs(kv);
    cfg.validate = kv.get_bool("validate", false);
    cfg.time_unit = parse_time_unit(kv);
    cfg.g_scale = kv.get_double("debug.scale_g", 1.0);

    if (allow_sweep_keys)
        for (const auto* key : {"sweep.axis", "sweep.values", "sweep.linspace",
                                "sweep.logspace", "sweep.stem"})
            (void)kv.get_string(key, "");
    const auto leftovers = kv.unconsumed();
    if (!leftovers.empty()) {
        std::string msg = kv.origin() + ": unknown keys:";
        for (const auto& k : leftovers) msg += " " + k;
        throw ConfigError(msg);
    }
    return cfg;
}

}  // namespace

RunConfig parse_run_config(const KeyValueFile& kv) {
    return parse_run_config_impl(kv, false);
}

RunConfig parse_run_config_file(const std::string& path) {
    return parse_run_config(KeyValueFile::parse_file(path));
}

RunConfig SweepConfig::member(double value) const {
    RunConfig cfg = base;
    auto set_lorentzian = [&](auto setter) {
        if (auto* b = std::get_if<LorentzianBath>(&cfg.bath)) {
            setter(*b);
            return true;
        }
        return false;
    };
    auto set_ohmic = [&](auto setter) {
        if (auto* b = std::get_if<OhmicLorentzDrudeBath>(&cfg.bath)) {
            setter(*b);
            return true;
        }
        return false;
    };
    bool ok = true;
    if (axis == "system.K")
        cfg.system.coupling_K = value;
    else if (axis == "system.epsilon")
        cfg.system.epsilon = value;
    else if (axis == "bath.gamma")
        ok = set_lorentzian([&](LorentzianBath& b) { b.gamma = value; });
    else if (axis == "bath.gamma0") {
        if (auto* b = std::get_if<LorentzianBath>(&cfg.bath))
            b->gamma0 = value;
        else if (auto* m = std::get_if<MarkovianFlatBath>(&cfg.bath))
            m->gamma0 = value;
        else
            ok = false;
    } else if (axis == "bath.gamma_ratio")
        ok = set_lorentzian([&](LorentzianBath& b) { b.gamma = value * b.gamma0; });
    else if (axis == "bath.omega_c")
        ok = set_ohmic([&](OhmicLorentzDrudeBath& b) { b.omega_c = value; });
    else if (axis == "bath.omega0")
        ok = set_ohmic([&](OhmicLorentzDrudeBath& b) { b.omega0 = value; });
    else if (axis == "bath.omega_ratio")
        ok = set_ohmic([&](OhmicLorentzDrudeBath& b) { b.omega_c = value * b.omega0; });
    else
        throw ConfigError("sweep.axis: unknown parameter path '" + axis + "'");
    if (!ok)
        throw ConfigError("sweep.axis: '" + axis + "' does not apply to this bath kind");
    validate(cfg.system);
    validate(cfg.bath);
    return cfg;
}

SweepConfig parse_sweep_config(const KeyValueFile& kv) {
    SweepConfig sweep;
    sweep.base = parse_run_config_impl(kv, true);
    sweep.axis = kv.get_string("sweep.axis");
    sweep.stem = kv.get_string("sweep.stem", "sweep");
    const bool has_values = kv.has("sweep.values");
    const bool has_lin = kv.has("sweep.linspace");
    const bool has_log = kv.has("sweep.logspace");
    if (static_cast<int>(has_values) + static_cast<int>(has_lin) +
            static_cast<int>(has_log) != 1)
        throw ConfigError(kv.origin() +
                          ": exactly one of sweep.values/linspace/logspace required");
    if (has_values) {
        sweep.values = kv.get_doubles("sweep.values");
    } else {
        const std::string key = has_lin ? "sweep.linspace" : "sweep.logspace";
        const auto spec = kv.get_doubles(key);
        if (spec.size() != 3) kv.fail(key, "expected start,stop,count");
        const auto n = static_cast<int>(std::lround(spec[2]));
        if (n < 1) kv.fail(key, "count must be >= 1");
        for (int i = 0; i < n; ++i) {
            const double x =
                n == 1 ? spec[0] : spec[0] + (spec[1] - spec[0]) * i / (n - 1.0);
            sweep.values.push_back(has_lin ? x : std::pow(10.0, x));
        }
    }
    if (sweep.values.empty()) throw ConfigError("sweep: empty value list");
    for (const double v : sweep.values) (void)sweep.member(v);  // axis/value sanity
    return sweep;
}

SweepConfig parse_sweep_config_file(const std::string& path) {
    return parse_sweep_config(KeyValueFile::parse_file(path));
}

}  // namespace spinpair
