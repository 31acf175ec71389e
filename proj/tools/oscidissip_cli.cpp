// Command-line front end: config-driven scenarios with CSV output and a JSON
// metadata sidecar per output file.

#include <oscidissip/oscidissip.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

using namespace oscidissip;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    double tmax = 0.0;
    int samples = 0;
    std::vector<std::string> coarse_grain;
    bool coarse_grain_on = false;
    std::string gauge = "coulomb";
    unsigned jobs = 0;
};

unsigned resolve_jobs(unsigned cli_jobs) {
    if (cli_jobs > 0) return cli_jobs;
    if (const char* env = std::getenv("OSCIDISSIP_JOBS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return default_jobs();
}

ParsedConfig load_or_die(const std::string& path) {
    std::vector<std::string> errors;
    auto parsed = load_config(path, errors);
    if (!parsed) {
        std::cerr << "invalid config " << path << ":\n";
        for (const auto& e : errors) std::cerr << "  " << e << "\n";
        std::exit(1);
    }
    return *parsed;
}

InitialStateSpec initial_or_die(const ParsedConfig& parsed) {
    if (!parsed.initial) {
        std::cerr << "config error: this command needs an initial_state section\n";
        std::exit(1);
    }
    return *parsed.initial;
}

BogoliubovDecomposition diagonalize_or_die(const QuadraticHamiltonian& qh) {
    auto d = diagonalize(qh);
    if (!d.stable) {
        std::cerr << "gauge " << gauge_name(qh.gauge)
                  << " is unstable for this configuration (min eigenvalue "
                  << d.residuals.min_eig_h << "); cannot evolve\n";
        std::exit(2);
    }
    return d;
}

std::vector<double> time_grid(double tmax, int samples) {
    std::vector<double> t(samples);
    const double dt = tmax / (samples - 1);
    for (int k = 0; k < samples; ++k) t[k] = k * dt;
    return t;
}

int default_samples(const SystemConfig& config, double tmax) {
    const double wmax = config.reservoir.uv_cutoff();
    const double dt = (2.0 * pi / wmax) / 20.0;
    const long long n = static_cast<long long>(std::ceil(tmax / dt)) + 1;
    return static_cast<int>(std::clamp(n, 64ll, 400000ll));
}

double coarse_window(const CommonArgs& args, const SystemConfig& config) {
    if (!args.coarse_grain.empty() && !args.coarse_grain.front().empty())
        return std::stod(args.coarse_grain.front());
    return derived_constants(config).t_exc;  // exchange-timescale default
}

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_out) {
    cmd->add_option("--config", args.config_path, "scenario configuration file")->required();
    auto* out = cmd->add_option("--out", args.out_path, "output CSV path");
    if (needs_out) out->required();
    cmd->add_option("--tmax", args.tmax, "evolution time span");
    cmd->add_option("--samples", args.samples, "number of uniform time samples");
    cmd->add_option("--coarse-grain", args.coarse_grain,
                    "rolling average over the exchange timescale (optional window)")
        ->expected(0, 1);
    cmd->add_option("--gauge", args.gauge, "coulomb|dipole|qoptical")
        ->check(CLI::IsMember({"coulomb", "dipole", "qoptical"}));
    cmd->add_option("--jobs", args.jobs, "worker threads (env OSCIDISSIP_JOBS)");
}

json run_extra(const CommonArgs& args, const char* command) {
    json extra;
    extra["command"] = command;
    extra["gauge"] = args.gauge;
    if (args.tmax > 0) extra["tmax"] = args.tmax;
    if (args.samples > 0) extra["samples"] = args.samples;
    if (args.coarse_grain_on)
        extra["coarse_grain"] = args.coarse_grain.empty() ? json() : json(args.coarse_grain[0]);
    return extra;
}

int cmd_validate(const CommonArgs& args) {
    const ParsedConfig parsed = load_or_die(args.config_path);
    std::cout << parsed.normalized.dump(2) << "\n";
    std::cout << "coupling: g0bar=" << parsed.config.g0bar() << " phi=" << parsed.config.phi()
              << " theta=" << parsed.config.theta() << "\n";
    try {
        const auto d = derived_constants(parsed.config);
        std::cout << "derived: gamma=" << d.gamma << " v_s=" << d.v_s << " t_fin=" << d.t_fin
                  << " t_exc=" << d.t_exc << " markov_margin=" << d.markov_margin << "\n";
    } catch (const std::exception& e) {
        std::cout << "derived: unavailable (" << e.what() << ")\n";
    }
    return 0;
}

int cmd_classify(const CommonArgs& args) {
    const ParsedConfig parsed = load_or_die(args.config_path);
    const SystemConfig& config = parsed.config;
    const auto d = derived_constants(config);
    const double theta = config.theta();
    const auto regime = classify_regime(theta);
    std::cout << "theta=" << theta << " regime=" << regime_name(regime) << " gamma=" << d.gamma
              << " markov_margin=" << d.markov_margin << " t_fin=" << d.t_fin
              << " t_exc=" << d.t_exc << "\n";
    if (!args.out_path.empty()) {
        CsvWriter csv(args.out_path);
        csv.comment("oscidissip classify");
        csv.comment("theta " + std::to_string(theta));
        csv.comment(std::string("regime ") + regime_name(regime));
        csv.comment("gamma " + std::to_string(d.gamma));
        csv.comment("markov_margin " + std::to_string(d.markov_margin));
        csv.header({"i", "j", "dx", "t_ret", "t_ret_gamma"});
        const auto& x = config.dipoles.positions;
        for (std::size_t i = 0; i < x.size(); ++i)
            for (std::size_t j = i + 1; j < x.size(); ++j) {
                const auto r = retardation_time(config, std::abs(x[i] - x[j]));
                csv.row({double(i), double(j), std::abs(x[i] - x[j]), r.t_ret, r.markov_ratio});
            }
        write_metadata_sidecar(args.out_path, parsed, "classify", run_extra(args, "classify"));
    }
    return 0;
}

int cmd_spectrum(const CommonArgs& args, const std::string& dump_path) {
    const ParsedConfig parsed = load_or_die(args.config_path);
    const auto qh = build_hamiltonian(parsed.config, gauge_from_name(args.gauge));
    if (!dump_path.empty()) write_matrix_dump(dump_path, qh);
    const auto d = diagonalize(qh);
    CsvWriter csv(args.out_path);
    csv.comment("oscidissip spectrum, gauge " + args.gauge);
    if (d.stable) {
        csv.comment("stable 1");
        csv.header({"index", "lambda"});
        for (int i = 0; i < d.n_total; ++i) csv.row({double(i + 1), d.frequencies[i]});
    } else {
        const auto dyn = dynamical_spectrum(qh);
        csv.comment("stable 0  (complex dynamical frequencies below)");
        csv.comment("min_eig_h " + std::to_string(d.residuals.min_eig_h));
        csv.header({"index", "re", "im"});
        for (Eigen::Index i = 0; i < dyn.values.size(); ++i)
            csv.row({double(i + 1), dyn.values[i].real(), dyn.values[i].imag()});
        std::cout << "note: gauge " << args.gauge << " unstable here, max |Im| = " << dyn.max_imag
                  << "\n";
    }
    write_metadata_sidecar(args.out_path, parsed, "spectrum", run_extra(args, "spectrum"));
    return 0;
}

int cmd_evolve(const CommonArgs& args, const std::string& field_path, int field_every,
               int field_points) {
    const ParsedConfig parsed = load_or_die(args.config_path);
    const SystemConfig& config = parsed.config;
    const InitialStateSpec initial = initial_or_die(parsed);
    if (args.tmax <= 0) {
        std::cerr << "evolve: --tmax must be positive\n";
        return 1;
    }
    const int samples = args.samples > 1 ? args.samples : default_samples(config, args.tmax);
    const auto times = time_grid(args.tmax, samples);

    const auto qh = build_hamiltonian(config, gauge_from_name(args.gauge));
    const auto d = diagonalize_or_die(qh);
    const auto corr0 = initial_correlations(initial, config);
    const Propagator prop(d, corr0, config);
    RealMatrix pops = prop.population_series(times);

    const int nd = config.n_dipoles();
    std::vector<double> nexc(samples);
    for (int s = 0; s < samples; ++s) nexc[s] = pops.row(s).sum();

    std::vector<std::vector<double>> cols(nd);
    for (int i = 0; i < nd; ++i) {
        cols[i].resize(samples);
        for (int s = 0; s < samples; ++s) cols[i][s] = pops(s, i);
    }
    const double dt = times[1] - times[0];
    if (args.coarse_grain_on) {
        const double w = coarse_window(args, config);
        for (int i = 0; i < nd; ++i) cols[i] = coarse_grain(cols[i], dt, w);
        nexc = coarse_grain(nexc, dt, w);
    }
    const auto intens = radiated_intensity(times, nexc, config.omega_s());

    CsvWriter csv(args.out_path);
    csv.comment("oscidissip evolve, gauge " + args.gauge +
                (args.coarse_grain_on ? ", coarse-grained" : ""));
    std::vector<std::string> head{"t"};
    for (int i = 0; i < nd; ++i) head.push_back("n_" + std::to_string(i + 1));
    head.push_back("N_exc");
    head.push_back("I");
    csv.header(head);
    for (int s = 0; s < samples; ++s) {
        std::vector<double> row{times[s]};
        for (int i = 0; i < nd; ++i) row.push_back(cols[i][s]);
        row.push_back(nexc[s]);
        row.push_back(intens[s]);
        csv.row(row);
    }
    write_metadata_sidecar(args.out_path, parsed, "exact", run_extra(args, "evolve"));

    if (!field_path.empty()) {
        CsvWriter fcsv(field_path);
        fcsv.comment(config.reservoir.is_cavity() ? "field intensity I(x,t)"
                                                  : "site photon number <Rx^dag Rx>(t)");
        fcsv.header({"t", "x", "value"});
        for (int s = 0; s < samples; s += field_every) {
            const auto state = prop.state_at(times[s]);
            if (config.reservoir.is_cavity()) {
                const double l = config.reservoir.length();
                for (int p = 0; p < field_points; ++p) {
                    const double x = -l / 2 + l * p / (field_points - 1);
                    fcsv.row({times[s], x, field_intensity(state, x, config)});
                }
            } else {
                for (int site = 0; site < config.n_modes(); ++site)
                    fcsv.row({times[s], site * config.reservoir.spacing,
                              site_photon_number(state, site, config)});
            }
        }
        write_metadata_sidecar(field_path, parsed, "exact", run_extra(args, "evolve-field"));
    }
    return 0;
}

int cmd_lindblad(const CommonArgs& args) {
    const ParsedConfig parsed = load_or_die(args.config_path);
    const SystemConfig& config = parsed.config;
    const InitialStateSpec initial = initial_or_die(parsed);
    if (args.tmax <= 0) {
        std::cerr << "lindblad: --tmax must be positive\n";
        return 1;
    }
    const int samples = std::max(args.samples, 2);
    const auto times = time_grid(args.tmax, samples);

    const auto rates = collective_rates(config);
    const Matrix g = g_matrix(rates);
    const Matrix c0 = dipole_normal_correlations(initial, config.n_dipoles());

    CsvWriter csv(args.out_path);
    csv.comment("oscidissip lindblad oracle");
    std::vector<std::string> head{"t"};
    for (int i = 0; i < config.n_dipoles(); ++i) head.push_back("n_" + std::to_string(i + 1));
    head.insert(head.end(), {"N_exc", "I", "I_coh", "I_incoh"});
    csv.header(head);
    for (double t : times) {
        const RealVector n = me_dipole_populations(g, c0, t);
        const auto inten = me_intensity(g, rates.gamma, c0, config.omega_s(), t);
        std::vector<double> row{t};
        for (int i = 0; i < config.n_dipoles(); ++i) row.push_back(n[i]);
        row.insert(row.end(), {n.sum(), inten.total, inten.coherent, inten.incoherent});
        csv.row(row);
    }
    write_metadata_sidecar(args.out_path, parsed, "lindblad", run_extra(args, "lindblad"));
    return 0;
}

int cmd_sweep(const CommonArgs& args, double theta_min, double theta_max, int points,
              int levels) {
    const ParsedConfig parsed = load_or_die(args.config_path);
    if (theta_min <= 0 || theta_max < theta_min || points < 1) {
        std::cerr << "sweep: need 0 < --theta-min <= --theta-max and --theta-points >= 1\n";
        return 1;
    }
    std::vector<double> thetas(points);
    for (int k = 0; k < points; ++k)
        thetas[k] = points == 1 ? theta_min
                                : theta_min * std::pow(theta_max / theta_min,
                                                       double(k) / (points - 1));
    const auto table = spectrum_vs_coupling(parsed.config, thetas, levels, parsed.initial,
                                            gauge_from_name(args.gauge), resolve_jobs(args.jobs));
    CsvWriter csv(args.out_path);
    csv.comment("oscidissip sweep, gauge " + args.gauge);
    std::vector<std::string> head{"theta", "stable"};
    for (int i = 1; i <= table.n_levels; ++i) head.push_back("lambda_" + std::to_string(i));
    for (int i = 1; i <= table.n_levels; ++i) head.push_back("chi_" + std::to_string(i));
    head.push_back("beat_21");
    if (table.has_occupations)
        for (int i = 1; i <= table.n_levels; ++i) head.push_back("occ_" + std::to_string(i));
    csv.header(head);
    for (const auto& row : table.rows) {
        std::vector<double> vals{row.theta, row.stable ? 1.0 : 0.0};
        auto pad = [&](const std::vector<double>& v) {
            for (int i = 0; i < table.n_levels; ++i)
                vals.push_back(i < static_cast<int>(v.size()) ? v[i]
                                                              : std::nan(""));
        };
        pad(row.lambdas);
        pad(row.chis);
        vals.push_back(row.stable ? row.beat : std::nan(""));
        if (table.has_occupations) pad(row.occupations);
        csv.row(vals);
    }
    write_metadata_sidecar(args.out_path, parsed, "sweep", run_extra(args, "sweep"));
    return 0;
}

int cmd_polariton_field(const CommonArgs& args, const std::string& modes_arg, int points) {
    const ParsedConfig parsed = load_or_die(args.config_path);
    const SystemConfig& config = parsed.config;
    const auto qh = build_hamiltonian(config, gauge_from_name(args.gauge));
    const auto d = diagonalize_or_die(qh);

    std::vector<int> modes;
    std::stringstream ss(modes_arg);
    for (std::string tok; std::getline(ss, tok, ',');) modes.push_back(std::stoi(tok));

    CsvWriter csv(args.out_path);
    csv.comment("oscidissip polariton-field: single-polariton profiles");
    csv.header({"mode", "x", "value"});
    for (int j : modes) {
        if (j < 1 || j > d.n_total) {
            std::cerr << "polariton-field: mode index " << j << " out of range\n";
            return 1;
        }
        if (config.reservoir.is_cavity()) {
            const double l = config.reservoir.length();
            for (int p = 0; p < points; ++p) {
                const double x = -l / 2 + l * p / (points - 1);
                csv.row({double(j), x, polariton_fock_observable(d, j - 1, x, config)});
            }
        } else {
            for (int site = 0; site < config.n_modes(); ++site) {
                const double x = site * config.reservoir.spacing;
                csv.row({double(j), x, polariton_fock_observable(d, j - 1, x, config)});
            }
        }
    }
    write_metadata_sidecar(args.out_path, parsed, "polariton-field",
                           run_extra(args, "polariton-field"));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact collective dissipation of oscillator dipoles in 1-D EM reservoirs"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string dump_path, field_path, modes_arg = "1,3,5,7";
    int field_every = 1, field_points = 201, sweep_points = 25, levels = 8;
    double theta_min = 1e-3, theta_max = 1e2;

    auto* validate = app.add_subcommand("validate", "schema-check a config and echo defaults");
    add_common(validate, args, false);

    auto* classify = app.add_subcommand("classify", "derived constants, regime, retardation");
    add_common(classify, args, false);

    auto* spectrum = app.add_subcommand("spectrum", "normal-mode frequencies");
    add_common(spectrum, args, true);
    spectrum->add_option("--dump-h", dump_path, "also dump the quadratic-form matrix");

    auto* evolve = app.add_subcommand("evolve", "exact correlation dynamics");
    add_common(evolve, args, true);
    evolve->add_option("--field-map", field_path, "also write the reservoir field map CSV");
    evolve->add_option("--field-every", field_every, "time-sample stride for the field map")
        ->check(CLI::PositiveNumber);
    evolve->add_option("--field-points", field_points, "cavity positions in the field map")
        ->check(CLI::Range(8, 100000));

    auto* lindblad = app.add_subcommand("lindblad", "Markovian master-equation oracle");
    add_common(lindblad, args, true);

    auto* sweep = app.add_subcommand("sweep", "spectrum and dressing vs coupling");
    add_common(sweep, args, true);
    sweep->add_option("--theta-min", theta_min);
    sweep->add_option("--theta-max", theta_max);
    sweep->add_option("--theta-points", sweep_points);
    sweep->add_option("--num-modes", levels, "lambda/chi columns to keep");

    auto* pfield = app.add_subcommand("polariton-field", "single-polariton field profiles");
    add_common(pfield, args, true);
    pfield->add_option("--modes", modes_arg, "comma-separated 1-based polariton indices");
    pfield->add_option("--points", field_points, "cavity positions per profile")
        ->check(CLI::Range(8, 100000));

    CLI11_PARSE(app, argc, argv);
    args.coarse_grain_on = evolve->count("--coarse-grain") > 0 ||
                           lindblad->count("--coarse-grain") > 0;

    try {
        if (validate->parsed()) return cmd_validate(args);
        if (classify->parsed()) return cmd_classify(args);
        if (spectrum->parsed()) return cmd_spectrum(args, dump_path);
        if (evolve->parsed()) return cmd_evolve(args, field_path, field_every, field_points);
        if (lindblad->parsed()) return cmd_lindblad(args);
        if (sweep->parsed()) return cmd_sweep(args, theta_min, theta_max, sweep_points, levels);
        if (pfield->parsed()) return cmd_polariton_field(args, modes_arg, field_points);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
