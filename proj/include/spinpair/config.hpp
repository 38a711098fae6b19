#ifndef SPINPAIR_CONFIG_HPP
#define SPINPAIR_CONFIG_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spinpair/baths.hpp"
#include "spinpair/core.hpp"

namespace spinpair {

// Raised on malformed config files or inconsistent values; carries the
// line/field diagnostics the CLI prints.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat `key = value` text with dotted keys and '#' comments.
class KeyValueFile {
public:
    static KeyValueFile parse(std::istream& in, const std::string& origin = "<config>");
    static KeyValueFile parse_file(const std::string& path);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long get_long(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_doubles(const std::string& key) const;  // comma-separated

    // Unknown-key detection: every get_* marks its key as consumed.
    std::vector<std::string> unconsumed() const;
    void fail(const std::string& key, const std::string& message) const;
    const std::string& origin() const { return origin_; }

private:
    struct Entry {
        std::string value;
        int line = 0;
        mutable bool consumed = false;
    };
    std::string origin_;
    std::map<std::string, Entry> entries_;
};

enum class InitialState { kBellPsiMinus, kKet10, kKet01, kKet11, kKet00, kCustom };

enum class Observable { kConcurrence, kPopulations, kPurity, kRho };

enum class TimeUnit { kAuto, kGamma0, kOmega0, kCouplingK, kAbsolute };

struct RunConfig {
    SystemParams system;
    BathModel bath;
    InitialState initial = InitialState::kBellPsiMinus;
    DensityMatrix4 custom_state;  // used when initial == kCustom
    double t_end = 5.0;
    int samples = 101;
    std::vector<Observable> outputs = {Observable::kConcurrence, Observable::kPopulations};
    bool validate = false;
    TimeUnit time_unit = TimeUnit::kAuto;
    double g_scale = 1.0;  // fault-injection hook, 1 = honest physics

    DensityMatrix4 initial_density() const;
    // Rate multiplying t in CSV output, after resolving kAuto by bath kind.
    double time_unit_rate(std::string* label = nullptr) const;
};

struct SweepConfig {
    RunConfig base;
    std::string axis;            // e.g. bath.gamma, bath.gamma_ratio, system.K
    std::vector<double> values;  // resolved from values/linspace/logspace
    std::string stem = "sweep";

    RunConfig member(double value) const;  // base with the axis applied
};

RunConfig parse_run_config(const KeyValueFile& kv);
RunConfig parse_run_config_file(const std::string& path);
SweepConfig parse_sweep_config(const KeyValueFile& kv);
SweepConfig parse_sweep_config_file(const std::string& path);

}  // namespace spinpair

#endif
