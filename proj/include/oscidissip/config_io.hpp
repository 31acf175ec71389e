#ifndef OSCIDISSIP_CONFIG_IO_HPP
#define OSCIDISSIP_CONFIG_IO_HPP

#include "analysis.hpp"
#include "lindblad.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

namespace oscidissip {

using json = nlohmann::json;

/// Parsed scenario input: the physical configuration, the optional initial
/// state, and the normalized echo of what was actually used.
struct ParsedConfig {
    SystemConfig config;
    std::optional<InitialStateSpec> initial;
    json normalized;
};

namespace detail {

inline bool get_number(const json& j, const char* key, double& out) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number()) return false;
    out = it->get<double>();
    return true;
}

} // namespace detail

/// Schema check with every violation collected, not just the first.
/// Keys: reservoir.{variant,N,omega_c,J,a}, dipoles.{positions,frequencies},
/// coupling.{kind,value}, overrides.{uv_cutoff,detuning}, initial_state.{...}.
inline std::optional<ParsedConfig> parse_config(const json& j, std::vector<std::string>& errors) {
    errors.clear();
    auto fail = [&](const std::string& msg) { errors.push_back(msg); };

    if (!j.is_object()) {
        fail("config: top level must be a JSON object");
        return std::nullopt;
    }

    // dipoles
    std::vector<double> positions, frequencies;
    if (!j.contains("dipoles") || !j["dipoles"].is_object()) {
        fail("dipoles: missing section");
    } else {
        const json& d = j["dipoles"];
        if (!d.contains("positions") || !d["positions"].is_array() || d["positions"].empty())
            fail("dipoles.positions: need a non-empty array");
        else
            for (const auto& v : d["positions"]) {
                if (!v.is_number()) { fail("dipoles.positions: entries must be numbers"); break; }
                positions.push_back(v.get<double>());
            }
        if (d.contains("frequencies")) {
            if (!d["frequencies"].is_array())
                fail("dipoles.frequencies: must be an array");
            else
                for (const auto& v : d["frequencies"]) frequencies.push_back(v.get<double>());
            if (!frequencies.empty() && !positions.empty() &&
                frequencies.size() != positions.size())
                fail("dipoles.frequencies: length must match positions");
            for (double w : frequencies)
                if (w <= 0) { fail("dipoles.frequencies: must be positive"); break; }
        } else {
            frequencies.assign(positions.size(), 1.0);  // omega_s = 1 reference
        }
    }

    // overrides
    double uv_cutoff = 0.0, detuning = 0.0;
    bool has_uv = false, has_det = false;
    if (j.contains("overrides")) {
        const json& o = j["overrides"];
        if (!o.is_object())
            fail("overrides: must be an object");
        else {
            has_uv = detail::get_number(o, "uv_cutoff", uv_cutoff);
            if (o.contains("uv_cutoff") && !has_uv) fail("overrides.uv_cutoff: must be a number");
            has_det = detail::get_number(o, "detuning", detuning);
            if (o.contains("detuning") && !has_det) fail("overrides.detuning: must be a number");
        }
    }

    const double omega_s = frequencies.empty() ? 1.0 : frequencies.front();

    // reservoir
    ReservoirSpec res;
    if (!j.contains("reservoir") || !j["reservoir"].is_object()) {
        fail("reservoir: missing section");
    } else {
        const json& r = j["reservoir"];
        std::string variant = r.value("variant", "");
        if (variant != "cavity" && variant != "cavity_array")
            fail("reservoir.variant: must be 'cavity' or 'cavity_array'");
        double n_modes = 0;
        if (!detail::get_number(r, "N", n_modes) || n_modes < 1 ||
            n_modes != std::floor(n_modes))
            fail("reservoir.N: must be a positive integer");
        res.num_modes = static_cast<int>(n_modes);

        double omega_c = 0.0;
        const bool has_wc = detail::get_number(r, "omega_c", omega_c);
        if (variant == "cavity") {
            res.kind = ReservoirKind::Cavity;
            if (has_wc && has_uv)
                fail("reservoir.omega_c and overrides.uv_cutoff are mutually exclusive");
            if (has_wc)
                res.omega_c = omega_c;
            else if (has_uv && res.num_modes >= 1)
                res.omega_c = uv_cutoff / res.num_modes;
            else if (res.num_modes >= 1)
                res.omega_c = 2.0 * omega_s / res.num_modes;  // dipole mid-band default
            if (res.omega_c <= 0) fail("reservoir.omega_c: must be positive");
            if (has_det) fail("overrides.detuning: only meaningful for cavity_array");
        } else if (variant == "cavity_array") {
            res.kind = ReservoirKind::CavityArray;
            if (res.num_modes % 2 != 0) fail("reservoir.N: cavity array size must be even");
            if (!detail::get_number(r, "J", res.hopping) || res.hopping <= 0)
                fail("reservoir.J: must be a positive number");
            res.spacing = 1.0;
            if (r.contains("a") && (!detail::get_number(r, "a", res.spacing) || res.spacing <= 0))
                fail("reservoir.a: must be a positive number");
            if (has_wc && has_det)
                fail("reservoir.omega_c and overrides.detuning are mutually exclusive");
            res.omega_c = has_wc ? omega_c : omega_s + detuning;  // default detuning 0
            if (res.omega_c <= 0) fail("reservoir.omega_c: must be positive");
            if (res.hopping > 0 && res.hopping >= res.omega_c)
                fail("reservoir.J: need J < omega_c so all mode frequencies stay positive");
            if (has_uv) fail("overrides.uv_cutoff: only meaningful for cavity");
        }
    }

    // coupling
    CouplingSpec coupling;
    if (!j.contains("coupling") || !j["coupling"].is_object()) {
        fail("coupling: missing section");
    } else {
        const json& c = j["coupling"];
        const std::string kind = c.value("kind", "");
        if (kind == "g0bar")
            coupling.kind = CouplingKind::G0Bar;
        else if (kind == "phi")
            coupling.kind = CouplingKind::Phi;
        else if (kind == "theta")
            coupling.kind = CouplingKind::Theta;
        else
            fail("coupling.kind: must be one of g0bar|phi|theta");
        if (!detail::get_number(c, "value", coupling.value) || coupling.value <= 0)
            fail("coupling.value: must be a positive number");
    }

    // initial state
    std::optional<InitialStateSpec> initial;
    if (j.contains("initial_state")) {
        const json& s = j["initial_state"];
        const std::string kind = s.value("kind", "");
        if (kind == "fock") {
            std::vector<double> n;
            if (s.contains("n") && s["n"].is_array())
                for (const auto& v : s["n"]) n.push_back(v.get<double>());
            else
                n.assign(positions.size(), 1.0);
            initial = InitialStateSpec::fock(n);
        } else if (kind == "coherent") {
            std::vector<complexd> a;
            if (s.contains("alpha") && s["alpha"].is_array()) {
                for (const auto& v : s["alpha"]) {
                    if (v.is_number())
                        a.emplace_back(v.get<double>(), 0.0);
                    else if (v.is_array() && v.size() == 2)
                        a.emplace_back(v[0].get<double>(), v[1].get<double>());
                    else
                        fail("initial_state.alpha: entries must be numbers or [re, im]");
                }
            } else {
                a.assign(positions.size(), complexd{1.0, 0.0});
            }
            initial = InitialStateSpec::coherent(a);
        } else if (kind == "bell+" || kind == "bell-") {
            int bi = 0, bj = 1;
            if (s.contains("pair") && s["pair"].is_array() && s["pair"].size() == 2) {
                bi = s["pair"][0].get<int>();
                bj = s["pair"][1].get<int>();
            }
            initial = InitialStateSpec::bell(kind == "bell+" ? +1 : -1, bi, bj);
        } else {
            fail("initial_state.kind: must be one of fock|coherent|bell+|bell-");
        }
    }

    if (!errors.empty()) return std::nullopt;

    ParsedConfig out;
    out.config.reservoir = res;
    out.config.dipoles = {positions, frequencies};
    out.config.coupling = coupling;
    try {
        out.config.validate();
        if (out.initial) out.initial->validate(out.config.n_dipoles());
    } catch (const std::exception& e) {
        fail(e.what());
        return std::nullopt;
    }
    if (initial) {
        try {
            initial->validate(out.config.n_dipoles());
        } catch (const std::exception& e) {
            fail(std::string("initial_state: ") + e.what());
            return std::nullopt;
        }
    }
    out.initial = initial;

    json norm;
    norm["reservoir"]["variant"] = res.is_cavity() ? "cavity" : "cavity_array";
    norm["reservoir"]["N"] = res.num_modes;
    norm["reservoir"]["omega_c"] = res.omega_c;
    if (!res.is_cavity()) {
        norm["reservoir"]["J"] = res.hopping;
        norm["reservoir"]["a"] = res.spacing;
    }
    norm["dipoles"]["positions"] = positions;
    norm["dipoles"]["frequencies"] = frequencies;
    norm["coupling"]["kind"] = coupling_kind_name(coupling.kind);
    norm["coupling"]["value"] = coupling.value;
    if (res.is_cavity()) norm["overrides"]["uv_cutoff"] = res.uv_cutoff();
    else norm["overrides"]["detuning"] = res.omega_c - omega_s;
    if (j.contains("initial_state")) norm["initial_state"] = j["initial_state"];
    out.normalized = norm;
    return out;
}

inline std::optional<ParsedConfig> load_config(const std::string& path,
                                               std::vector<std::string>& errors) {
    std::ifstream in(path);
    if (!in) {
        errors = {"cannot open config file: " + path};
        return std::nullopt;
    }
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        errors = {std::string("config is not valid JSON: ") + e.what()};
        return std::nullopt;
    }
    return parse_config(j, errors);
}

/// FNV-1a hash of the normalized config, for the metadata sidecar.
inline std::string config_hash(const json& normalized) {
    const std::string s = normalized.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

/// CSV writer: '#'-prefixed comment lines, one header row, 17-significant-
/// digit floats. Byte-identical for identical inputs.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : out_(path) {
        if (!out_) throw std::runtime_error("cannot open output file: " + path);
        out_.precision(17);
    }
    void comment(const std::string& line) { out_ << "# " << line << "\n"; }
    void header(const std::vector<std::string>& cols) {
        for (std::size_t i = 0; i < cols.size(); ++i)
            out_ << cols[i] << (i + 1 == cols.size() ? "\n" : ",");
    }
    void row(const std::vector<double>& vals) {
        for (std::size_t i = 0; i < vals.size(); ++i) {
            write_value(vals[i]);
            out_ << (i + 1 == vals.size() ? "\n" : ",");
        }
    }

private:
    void write_value(double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out_ << buf;
    }
    std::ofstream out_;
};

inline void write_metadata_sidecar(const std::string& csv_path, const ParsedConfig& parsed,
                                   const std::string& source, const json& extra = {}) {
    json meta;
    meta["version"] = "0.1.0";
    meta["source"] = source;
    meta["config"] = parsed.normalized;
    meta["config_hash"] = config_hash(parsed.normalized);
    try {
        const DerivedConstants d = derived_constants(parsed.config);
        meta["derived"] = {{"gamma", d.gamma},
                           {"v_s", d.v_s},
                           {"t_fin", d.t_fin},
                           {"t_exc", d.t_exc},
                           {"markov_margin", d.markov_margin},
                           {"k_s", d.k_s}};
    } catch (const std::exception&) {
        // far-detuned configurations have no Markovian constants
    }
    meta["coupling"] = {{"g0bar", parsed.config.g0bar()},
                        {"phi", parsed.config.phi()},
                        {"theta", parsed.config.theta()}};
    if (!extra.is_null() && !extra.empty()) meta["run"] = extra;
    std::ofstream out(csv_path + ".meta.json");
    if (!out) throw std::runtime_error("cannot open sidecar for " + csv_path);
    out << meta.dump(2) << "\n";
}

} // namespace oscidissip

#endif
