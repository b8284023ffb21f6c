#include "starflow/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace starflow {

bool RunConfig::operator==(const RunConfig& o) const
{
    auto flow_eq = [&] {
        const FlowSpec &a = flow, &b = o.flow;
        return a.ambient == b.ambient && a.n == b.n && a.alpha == b.alpha && a.beta == b.beta &&
               a.f == b.f && a.mode == b.mode && a.n_theta == b.n_theta && a.n_phi == b.n_phi &&
               a.n_points == b.n_points && a.t_end == b.t_end && a.safety == b.safety &&
               a.allow_out_of_range == b.allow_out_of_range && a.cadence == b.cadence;
    };
    return flow_eq() && body == o.body && out_dir == o.out_dir &&
           snapshot_interval == o.snapshot_interval && inequalities == o.inequalities &&
           sweep_iotas == o.sweep_iotas && sweep_ks == o.sweep_ks;
}

namespace {

struct KeyValue {
    std::string value;
    int line = 0;
    bool used = false;
};

std::string trim(const std::string& s)
{
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

class ConfigReader {
public:
    explicit ConfigReader(const std::string& text)
    {
        std::istringstream is(text);
        std::string line, section;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const size_t hash = line.find_first_of("#;");
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ConfigError("config line " + std::to_string(lineno) +
                                      ": malformed section header");
                section = trim(line.substr(1, line.size() - 2));
                if (known_sections().count(section) == 0)
                    throw ConfigError("config line " + std::to_string(lineno) +
                                      ": unknown section [" + section + "]");
                continue;
            }
            const size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": expected key = value");
            if (section.empty())
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": key outside any [section]");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            entries_[section + "." + key] = KeyValue{value, lineno, false};
        }
    }

    static const std::map<std::string, int>& known_sections()
    {
        static const std::map<std::string, int> s = {
            {"flow", 0}, {"grid", 0}, {"body", 0}, {"output", 0}, {"quantities", 0}};
        return s;
    }

    bool has(const std::string& path) const { return entries_.count(path) > 0; }

    std::string get(const std::string& path, const std::string& fallback)
    {
        auto it = entries_.find(path);
        if (it == entries_.end()) return fallback;
        it->second.used = true;
        return it->second.value;
    }

    double get_double(const std::string& path, double fallback)
    {
        auto it = entries_.find(path);
        if (it == entries_.end()) return fallback;
        it->second.used = true;
        try {
            size_t pos = 0;
            const double v = std::stod(it->second.value, &pos);
            if (pos != it->second.value.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config " + path + " (line " + std::to_string(it->second.line) +
                              "): expected a number, got '" + it->second.value + "'");
        }
    }

    int get_int(const std::string& path, int fallback)
    {
        const double v = get_double(path, fallback);
        if (v != std::floor(v))
            throw ConfigError("config " + path + ": expected an integer");
        return static_cast<int>(v);
    }

    bool get_bool(const std::string& path, bool fallback)
    {
        auto it = entries_.find(path);
        if (it == entries_.end()) return fallback;
        it->second.used = true;
        const std::string& v = it->second.value;
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw ConfigError("config " + path + " (line " + std::to_string(it->second.line) +
                          "): expected true/false, got '" + v + "'");
    }

    std::vector<double> get_double_list(const std::string& path, std::vector<double> fallback)
    {
        auto it = entries_.find(path);
        if (it == entries_.end()) return fallback;
        it->second.used = true;
        std::vector<double> out;
        std::istringstream is(it->second.value);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            tok = trim(tok);
            if (tok.empty()) continue;
            try {
                out.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw ConfigError("config " + path + " (line " + std::to_string(it->second.line) +
                                  "): bad list entry '" + tok + "'");
            }
        }
        return out;
    }

    void reject_unknown() const
    {
        for (const auto& [path, kv] : entries_) {
            if (!kv.used)
                throw ConfigError("config: unknown key '" + path + "' (line " +
                                  std::to_string(kv.line) + ")");
        }
    }

private:
    std::map<std::string, KeyValue> entries_;
};

}  // namespace

RunConfig parse_config(const std::string& text)
{
    ConfigReader r(text);
    RunConfig cfg;

    const std::string ambient = r.get("flow.ambient", "euclidean");
    if (ambient == "euclidean")
        cfg.flow.ambient = Ambient::euclidean();
    else if (ambient == "hyperbolic")
        cfg.flow.ambient = Ambient::hyperbolic();
    else
        throw ConfigError("config flow.ambient: expected euclidean or hyperbolic, got '" +
                          ambient + "'");

    cfg.flow.n = r.get_int("flow.n", 2);
    cfg.flow.alpha = r.get_double("flow.alpha", 0.0);
    cfg.flow.beta = r.get_double("flow.beta", 1.0);
    cfg.flow.f = CurvatureFunctionSpec::parse(r.get("flow.f", "ratio(1,0)"));

    const std::string mode = r.get("flow.mode", "normalized");
    if (mode == "normalized")
        cfg.flow.mode = FlowMode::Normalized;
    else if (mode == "unnormalized")
        cfg.flow.mode = FlowMode::Unnormalized;
    else
        throw ConfigError("config flow.mode: expected normalized or unnormalized, got '" + mode +
                          "'");

    cfg.flow.t_end = r.get_double("flow.t_end", 1.0);
    cfg.flow.safety = r.get_double("flow.safety", 0.5);
    cfg.flow.cadence = r.get_int("flow.cadence", 10);
    cfg.flow.allow_out_of_range = r.get_bool("flow.allow_out_of_range", false);

    cfg.flow.n_theta = r.get_int("grid.n_theta", 64);
    cfg.flow.n_phi = r.get_int("grid.n_phi", 128);
    cfg.flow.n_points = r.get_int("grid.n_points", 256);

    cfg.body = BodyPreset::parse(r.get("body.preset", "sphere(1)"));

    cfg.out_dir = r.get("output.dir", ".");
    cfg.snapshot_interval = r.get_int("output.snapshot_interval", 0);
    cfg.inequalities = r.get_bool("output.inequalities", false);

    cfg.sweep_iotas = r.get_double_list("quantities.iotas", cfg.sweep_iotas);
    std::vector<double> ks_default;
    for (int k = 0; k <= cfg.flow.n; ++k) ks_default.push_back(k);
    const std::vector<double> ks = r.get_double_list("quantities.ks", ks_default);
    cfg.sweep_ks.clear();
    for (double k : ks) {
        if (k != std::floor(k) || k < 0 || k > cfg.flow.n)
            throw ConfigError("config quantities.ks: entries must be integers in [0, n]");
        cfg.sweep_ks.push_back(static_cast<int>(k));
    }

    r.reject_unknown();

    // parse-then-validate: all range checks before any compute
    validate_flow_spec(cfg.flow);
    if (cfg.snapshot_interval < 0)
        throw ConfigError("config output.snapshot_interval: must be >= 0");
    return cfg;
}

std::string serialize_config(const RunConfig& cfg)
{
    std::ostringstream os;
    os.precision(17);
    os << "[flow]\n";
    os << "ambient = " << cfg.flow.ambient.name() << "\n";
    os << "n = " << cfg.flow.n << "\n";
    os << "alpha = " << cfg.flow.alpha << "\n";
    os << "beta = " << cfg.flow.beta << "\n";
    os << "f = " << cfg.flow.f.to_string() << "\n";
    os << "mode = " << (cfg.flow.mode == FlowMode::Normalized ? "normalized" : "unnormalized")
       << "\n";
    os << "t_end = " << cfg.flow.t_end << "\n";
    os << "safety = " << cfg.flow.safety << "\n";
    os << "cadence = " << cfg.flow.cadence << "\n";
    os << "allow_out_of_range = " << (cfg.flow.allow_out_of_range ? "true" : "false") << "\n";
    os << "\n[grid]\n";
    os << "n_theta = " << cfg.flow.n_theta << "\n";
    os << "n_phi = " << cfg.flow.n_phi << "\n";
    os << "n_points = " << cfg.flow.n_points << "\n";
    os << "\n[body]\n";
    os << "preset = " << cfg.body.to_string() << "\n";
    os << "\n[output]\n";
    os << "dir = " << cfg.out_dir << "\n";
    os << "snapshot_interval = " << cfg.snapshot_interval << "\n";
    os << "inequalities = " << (cfg.inequalities ? "true" : "false") << "\n";
    os << "\n[quantities]\n";
    os << "iotas = ";
    for (size_t i = 0; i < cfg.sweep_iotas.size(); ++i)
        os << (i ? ", " : "") << cfg.sweep_iotas[i];
    os << "\nks = ";
    for (size_t i = 0; i < cfg.sweep_ks.size(); ++i) os << (i ? ", " : "") << cfg.sweep_ks[i];
    os << "\n";
    return os.str();
}

}  // namespace starflow
