#include "cgloop/cli.hpp"

#include "cgloop/annulus.hpp"
#include "cgloop/boundary.hpp"
#include "cgloop/characters.hpp"
#include "cgloop/observables.hpp"
#include "cgloop/series_io.hpp"

#include <CLI11.hpp>
#include <boost/math/constants/constants.hpp>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

namespace cgloop {

namespace {

using boost::math::double_constants::pi;
using nlohmann::json;

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct Output {
    json as_json;
    std::string as_csv;
};

std::string csv_of(const Table& t) {
    std::ostringstream os;
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << format_double(row[i]);
        os << '\n';
    }
    return os.str();
}

json json_row(const Table& t, const std::vector<double>& row) {
    json j = json::object();
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        j[t.columns[i]] = row[i];
    return j;
}

Output output_of(const Table& t, bool single) {
    json j;
    if (single && t.rows.size() == 1) {
        j = json_row(t, t.rows.front());
    } else {
        j = json::array();
        for (const auto& row : t.rows)
            j.push_back(json_row(t, row));
    }
    return {j, csv_of(t)};
}

Output output_of(const GenSeries& s) { return {to_json(s), to_csv(s)}; }

// ---- configuration helpers -------------------------------------------------

CGParams model_params(const RunConfig& cfg) {
    if (!cfg.n)
        throw UsageError("--n is required for '" + cfg.command + "'");
    return params_from_n(*cfg.n, parse_phase(cfg.phase));
}

WrapWeight model_wrap(const RunConfig& cfg, const CGParams& params) {
    if (!cfg.n_prime)
        return host_wrap(params);
    if (std::fabs(*cfg.n_prime - params.n) < 1e-15)
        return host_wrap(params);
    return make_wrap(params, *cfg.n_prime);
}

bool exact_available(const CGParams& params, const WrapWeight& wrap, Parity parity) {
    if (!params.exact || !wrap.exact)
        return false;
    return wrap.exact->n.has_value() || parity == Parity::even;
}

Backend resolve_backend(const RunConfig& cfg, bool available) {
    if (!cfg.backend)
        return available ? Backend::exact : Backend::floating;
    const Backend b = parse_backend(*cfg.backend);
    if (b == Backend::exact && !available)
        throw DomainError("exact backend unavailable for this parameter set; use --backend floating");
    return b;
}

struct Modulus {
    double q = 0.0;
    double ratio = 0.0;
};

Modulus modulus_from_q(double q) {
    if (!(q > 0.0 && q < 1.0))
        throw DomainError("modulus q must lie in (0, 1)");
    return {q, ratio_from_q(q)};
}

Modulus modulus_from_ratio(double ratio) {
    if (!(ratio > 0.0))
        throw DomainError("aspect ratio l/L must be positive");
    return {q_from_ratio(ratio), ratio};
}

std::optional<Modulus> modulus_of(const RunConfig& cfg) {
    if (cfg.q && cfg.ratio)
        throw UsageError("give exactly one of --q and --ratio");
    if (cfg.q)
        return modulus_from_q(*cfg.q);
    if (cfg.ratio)
        return modulus_from_ratio(*cfg.ratio);
    return std::nullopt;
}

double cutoff_of(const RunConfig& cfg) {
    if (cfg.order < 8)
        throw UsageError("--order must be at least 8");
    return static_cast<double>(cfg.order);
}

// ---- rows ------------------------------------------------------------------

using RowFn = std::function<std::vector<double>(const Modulus&)>;

struct RowSpec {
    std::vector<std::string> columns;
    RowFn fn;
};

RowSpec partition_rows(const RunConfig& cfg) {
    const CGParams params = model_params(cfg);
    const WrapWeight wrap = model_wrap(cfg, params);
    const Parity parity = parse_parity(cfg.parity);
    const double cutoff = cutoff_of(cfg);
    return {{"q", "Z", "tail_bound"}, [=](const Modulus& m) -> std::vector<double> {
                if (parity == Parity::all) {
                    const ModulusEval ev = evaluate_partition(params, wrap, m.q, cutoff);
                    return {m.q, ev.value, ev.tail_bound};
                }
                const Evaluation ev =
                    eval_at(partition_direct(params, wrap, cutoff, Backend::floating, parity), m.q);
                return {m.q, ev.value, ev.tail_bound};
            }};
}

RowSpec crossed_rows(const RunConfig& cfg) {
    const CGParams params = model_params(cfg);
    const WrapWeight wrap = model_wrap(cfg, params);
    const double cutoff = cutoff_of(cfg);
    return {{"q", "q_tilde", "Z", "tail_bound"}, [=](const Modulus& m) -> std::vector<double> {
                const double qt = q_tilde_from_ratio(m.ratio);
                const Evaluation ev = eval_at(partition_crossed(params, wrap, cutoff), qt);
                return {m.q, qt, ev.value, ev.tail_bound};
            }};
}

RowSpec crossing_rows(const RunConfig& cfg) {
    const double cutoff = cutoff_of(cfg);
    const CGParams params = percolation_params();
    const WrapWeight wrap = crossing_wrap();
    return {{"q", "P", "tail_bound"}, [=](const Modulus& m) -> std::vector<double> {
                const ModulusEval ev = evaluate_partition(params, wrap, m.q, cutoff);
                return {m.q, ev.value, ev.tail_bound};
            }};
}

RowSpec saw_rows(const RunConfig& cfg) {
    const double cutoff = cutoff_of(cfg);
    const Phase phase = parse_phase(cfg.phase);
    const CGParams params = params_from_n(0.0, phase);
    const WrapWeight wrap = make_wrap(params, 0.0);
    const FloatSeries direct = phase == Phase::dilute
                                   ? saw_loop_dilute(cutoff, Backend::floating).floating()
                                   : saw_loop_dense(cutoff, Backend::floating).series.floating();
    const LogSeries crossed = partition_crossed_wrap_derivative(params, wrap, cutoff);
    auto value = [=](const Modulus& m, double qt) {
        const Evaluation d = eval_at(direct, m.q);
        const LogEvaluation c = eval_at(crossed, qt);
        return c.tail_bound < d.tail_bound ? std::make_pair(c.value, c.tail_bound)
                                           : std::make_pair(d.value, d.tail_bound);
    };
    if (phase == Phase::dilute)
        return {{"q", "q_tilde", "Z1", "tail_bound", "asymptote_ratio"},
                [=](const Modulus& m) -> std::vector<double> {
                    const double qt = q_tilde_from_ratio(m.ratio);
                    const auto [v, t] = value(m, qt);
                    return {m.q, qt, v, t, v / (std::fabs(std::log(qt)) / (6.0 * pi))};
                }};
    return {{"q", "q_tilde", "Z1", "tail_bound"}, [=](const Modulus& m) -> std::vector<double> {
                const double qt = q_tilde_from_ratio(m.ratio);
                const auto [v, t] = value(m, qt);
                return {m.q, qt, v, t};
            }};
}

RowSpec logcft_rows(const RunConfig& cfg) {
    const double cutoff = cutoff_of(cfg);
    const Phase phase = parse_phase(cfg.phase);
    const GenSeries zlog = log_partition(phase, cutoff);
    return {{"q", "Zlog", "tail_bound", "wrap_term", "central_charge_term", "coupling_term", "dZdn"},
            [=](const Modulus& m) -> std::vector<double> {
                const Evaluation ev = eval_at(zlog, m.q);
                const LogDecomposition d = log_sector_at(phase, m.q, cutoff);
                return {m.q, ev.value, ev.tail_bound, d.wrap_term, d.central_charge_term, d.coupling_term,
                        d.total()};
            }};
}

RowSpec duality_rows(const RunConfig& cfg) {
    const CGParams params = model_params(cfg);
    const WrapWeight wrap = model_wrap(cfg, params);
    const double cutoff = cutoff_of(cfg);
    return {{"ratio", "q", "q_tilde", "direct", "crossed", "residual", "tail_direct", "tail_crossed"},
            [=](const Modulus& m) -> std::vector<double> {
                const ChannelEval ev = duality_check(params, wrap, m.ratio, cutoff);
                return {ev.ratio,        ev.q,        ev.q_tilde,
                        ev.direct_value, ev.crossed_value, ev.residual,
                        ev.tail_bounds.first, ev.tail_bounds.second};
            }};
}

RowSpec rows_for(const std::string& what, const RunConfig& cfg) {
    if (what == "partition")
        return partition_rows(cfg);
    if (what == "crossed")
        return crossed_rows(cfg);
    if (what == "crossing")
        return crossing_rows(cfg);
    if (what == "saw")
        return saw_rows(cfg);
    if (what == "logcft")
        return logcft_rows(cfg);
    if (what == "duality")
        return duality_rows(cfg);
    throw UsageError("unknown sweep target '" + what + "'");
}

// Rows run concurrently; results keep input order.
Table sweep_table(const RowSpec& spec, const std::vector<Modulus>& grid) {
    Table table{spec.columns, std::vector<std::vector<double>>(grid.size())};
    std::vector<std::exception_ptr> errors(grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) {
            try {
                table.rows[i] = spec.fn(grid[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min(hw, grid.size());
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return table;
}

void check_duality(const Table& t, double tolerance) {
    for (const auto& row : t.rows)
        if (!(row[5] < tolerance))
            throw IdentityError("duality residual " + format_double(row[5]) + " exceeds tolerance " +
                                format_double(tolerance));
}

// ---- commands --------------------------------------------------------------

Output evaluate_or_series(const RunConfig& cfg, const std::function<GenSeries()>& series) {
    if (const auto m = modulus_of(cfg)) {
        const RowSpec spec = rows_for(cfg.command, cfg);
        return output_of(Table{spec.columns, {spec.fn(*m)}}, true);
    }
    return output_of(series());
}

Output cmd_partition(const RunConfig& cfg) {
    return evaluate_or_series(cfg, [&] {
        const CGParams params = model_params(cfg);
        const WrapWeight wrap = model_wrap(cfg, params);
        const Parity parity = parse_parity(cfg.parity);
        const Backend backend = resolve_backend(cfg, exact_available(params, wrap, parity));
        return partition_direct(params, wrap, cutoff_of(cfg), backend, parity);
    });
}

Output cmd_crossed(const RunConfig& cfg) {
    return evaluate_or_series(cfg, [&] {
        const CGParams params = model_params(cfg);
        resolve_backend(cfg, false);
        return partition_crossed(params, model_wrap(cfg, params), cutoff_of(cfg));
    });
}

Output cmd_crossing(const RunConfig& cfg) {
    return evaluate_or_series(cfg, [&] { return crossing_probability(cutoff_of(cfg), resolve_backend(cfg, true)); });
}

Output cmd_saw(const RunConfig& cfg) {
    return evaluate_or_series(cfg, [&] {
        const Backend backend = resolve_backend(cfg, true);
        if (parse_phase(cfg.phase) == Phase::dilute)
            return saw_loop_dilute(cutoff_of(cfg), backend);
        return saw_loop_dense(cutoff_of(cfg), backend).series;
    });
}

Output cmd_logcft(const RunConfig& cfg) {
    return evaluate_or_series(cfg, [&] {
        resolve_backend(cfg, false);
        return log_partition(parse_phase(cfg.phase), cutoff_of(cfg));
    });
}

Output cmd_duality(const RunConfig& cfg) {
    const auto m = modulus_of(cfg);
    if (!m)
        throw UsageError("duality needs --ratio or --q");
    const RowSpec spec = duality_rows(cfg);
    const Table t{spec.columns, {spec.fn(*m)}};
    Output out = output_of(t, true);
    out.as_json["tolerance"] = cfg.tolerance;
    out.as_json["pass"] = t.rows.front()[5] < cfg.tolerance;
    return out;
}

Output cmd_characters(const RunConfig& cfg) {
    const CGParams params = model_params(cfg);
    const WrapWeight wrap = model_wrap(cfg, params);
    const Parity parity = parse_parity(cfg.parity);
    const Backend backend = resolve_backend(cfg, exact_available(params, wrap, parity));
    const auto model = minimal_model_for(params);
    if (!model)
        throw DomainError("no minimal model matches g for this parameter set");
    const double cutoff = cutoff_of(cfg);
    const GenSeries z = partition_direct(params, wrap, cutoff, backend, parity);
    const Decomposition d = decompose(z, kac_table(model->first, model->second), cutoff);
    std::ostringstream csv;
    csv << "r,s,coefficient\n";
    for (const auto& t : d.terms)
        csv << t.spec.r << ',' << t.spec.s << ',' << (t.exact ? to_string(*t.exact) : format_double(t.coefficient))
            << '\n';
    return {to_json(d), csv.str()};
}

Output cmd_boundary(const RunConfig& cfg) {
    const BoundaryCoupling b{cfg.g, cfg.alpha1, cfg.alpha2, cfg.width};
    const E1Fit fit = e1_cutoff(b, cfg.epsilons);
    const Table t{{"g", "alpha1", "alpha2", "L", "e0", "e1_zeta", "e1_finite", "e1_divergent", "fit_residual",
                   "c_effective"},
                  {{b.g, b.alpha1, b.alpha2, b.L, e0_zeta(b.L), e1_zeta(b), fit.finite_part,
                    fit.divergent_coefficient, fit.residual, c_effective(b)}}};
    return output_of(t, true);
}

Output cmd_sweep(const RunConfig& cfg) {
    if (cfg.grid.empty())
        throw UsageError("sweep needs a non-empty --grid");
    std::vector<Modulus> grid;
    for (double v : cfg.grid) {
        if (cfg.grid_kind == "q")
            grid.push_back(modulus_from_q(v));
        else if (cfg.grid_kind == "ratio")
            grid.push_back(modulus_from_ratio(v));
        else
            throw UsageError("--grid-kind must be q or ratio");
    }
    RunConfig inner = cfg;
    inner.command = cfg.what;
    const Table t = sweep_table(rows_for(cfg.what, inner), grid);
    if (cfg.what == "duality")
        check_duality(t, cfg.tolerance);
    return output_of(t, false);
}

Output dispatch(const RunConfig& cfg) {
    if (cfg.command == "partition")
        return cmd_partition(cfg);
    if (cfg.command == "crossed")
        return cmd_crossed(cfg);
    if (cfg.command == "duality")
        return cmd_duality(cfg);
    if (cfg.command == "characters")
        return cmd_characters(cfg);
    if (cfg.command == "crossing")
        return cmd_crossing(cfg);
    if (cfg.command == "saw")
        return cmd_saw(cfg);
    if (cfg.command == "logcft")
        return cmd_logcft(cfg);
    if (cfg.command == "boundary")
        return cmd_boundary(cfg);
    if (cfg.command == "sweep")
        return cmd_sweep(cfg);
    throw UsageError("unknown command '" + cfg.command + "'");
}

std::filesystem::path output_path(const std::string& name) {
    std::filesystem::path p(name);
    if (p.is_relative())
        if (const char* dir = std::getenv("CGLOOP_OUTPUT_DIR"); dir && *dir)
            p = std::filesystem::path(dir) / p;
    return p;
}

void emit(const RunConfig& cfg, const Output& o, std::ostream& out) {
    std::string text;
    if (cfg.format == "csv")
        text = o.as_csv;
    else if (cfg.format == "json")
        text = o.as_json.dump(2) + "\n";
    else
        throw UsageError("--format must be json or csv");
    if (cfg.output.empty()) {
        out << text;
        return;
    }
    const auto path = output_path(cfg.output);
    std::ofstream file(path, std::ios::binary);
    if (!file)
        throw DomainError("cannot open output file " + path.string());
    file << text;
}

} // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const Output o = dispatch(config);
        if (config.command == "duality" && !o.as_json.value("pass", true)) {
            emit(config, o, out);
            err << "identity failure: duality residual exceeds tolerance\n";
            return exit_identity;
        }
        emit(config, o, out);
        return exit_ok;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const TailBoundError& e) {
        err << "tail-bound failure: " << e.what() << " (tail " << format_double(e.tail_bound()) << ")\n";
        return exit_tail;
    } catch (const IdentityError& e) {
        err << "identity failure: " << e.what() << '\n';
        return exit_identity;
    } catch (const FitError& e) {
        err << "identity failure: " << e.what() << '\n';
        return exit_identity;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return exit_domain;
    } catch (const std::exception& e) {
        err << "domain error: " << e.what() << '\n';
        return exit_domain;
    }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Annulus partition functions of critical loop models"};
    app.name("cgloop");
    app.require_subcommand(1, 1);

    const std::vector<std::string> phases{"dilute", "dense"};
    const std::vector<std::string> parities{"all", "even", "odd"};

    auto add_output = [&](CLI::App* sub) {
        sub->add_option("--order", cfg.order, "truncation exponent (cutoff)")->check(CLI::Range(8, 4096));
        sub->add_option("--backend", cfg.backend, "exact or floating")
            ->check(CLI::IsMember({"exact", "floating"}));
        sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--output", cfg.output, "output file (relative to $CGLOOP_OUTPUT_DIR if set)");
    };
    auto add_modulus = [&](CLI::App* sub) {
        auto* q = sub->add_option("--q", cfg.q, "modulus q = exp(-pi l/L)");
        auto* r = sub->add_option("--ratio", cfg.ratio, "aspect ratio l/L");
        q->excludes(r);
    };
    auto add_model = [&](CLI::App* sub, bool need_n) {
        auto* n = sub->add_option("--n", cfg.n, "loop weight in (-2, 2]");
        if (need_n)
            n->required();
        sub->add_option("--phase", cfg.phase, "dilute or dense")->check(CLI::IsMember(phases));
        sub->add_option("--n-prime", cfg.n_prime, "weight of loops wrapping the annulus");
        sub->add_option("--parity", cfg.parity, "flux parity: all, even, odd")->check(CLI::IsMember(parities));
    };

    auto* partition = app.add_subcommand("partition", "direct-channel partition function");
    add_model(partition, true);
    add_modulus(partition);
    add_output(partition);

    auto* crossed = app.add_subcommand("crossed", "crossed-channel partition function (series in qt)");
    add_model(crossed, true);
    add_modulus(crossed);
    add_output(crossed);

    auto* duality = app.add_subcommand("duality", "compare direct and crossed channels");
    add_model(duality, true);
    add_modulus(duality);
    add_output(duality);
    duality->add_option("--tolerance", cfg.tolerance, "residual tolerance");

    auto* characters = app.add_subcommand("characters", "decompose Z into minimal-model characters");
    add_model(characters, true);
    add_output(characters);

    auto* crossing = app.add_subcommand("crossing", "percolation crossing probability");
    add_modulus(crossing);
    add_output(crossing);

    auto* saw = app.add_subcommand("saw", "one self-avoiding loop wrapping the annulus");
    saw->add_option("--phase", cfg.phase, "dilute or dense")->check(CLI::IsMember(phases));
    add_modulus(saw);
    add_output(saw);

    auto* logcft = app.add_subcommand("logcft", "ln q sector of dZ/dn at n = 0");
    logcft->add_option("--phase", cfg.phase, "dilute or dense")->check(CLI::IsMember(phases));
    add_modulus(logcft);
    add_output(logcft);

    auto* boundary = app.add_subcommand("boundary", "strip ground-state energy with boundary terms");
    boundary->add_option("--g", cfg.g, "coupling g > 0");
    boundary->add_option("--alpha1", cfg.alpha1, "boundary term at y = 0");
    boundary->add_option("--alpha2", cfg.alpha2, "boundary term at y = L");
    boundary->add_option("--width", cfg.width, "strip width L");
    boundary->add_option("--epsilon", cfg.epsilons, "regulator values")->delimiter(',');
    add_output(boundary);

    auto* sweep = app.add_subcommand("sweep", "one row per grid modulus");
    sweep->add_option("--what", cfg.what, "partition, crossed, crossing, saw, logcft or duality")
        ->check(CLI::IsMember({"partition", "crossed", "crossing", "saw", "logcft", "duality"}));
    sweep->add_option("--grid", cfg.grid, "comma-separated moduli")->delimiter(',')->required();
    sweep->add_option("--grid-kind", cfg.grid_kind, "q or ratio")->check(CLI::IsMember({"q", "ratio"}));
    sweep->add_option("--tolerance", cfg.tolerance, "duality residual tolerance");
    add_model(sweep, false);
    add_output(sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return exit_ok;
        }
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    }
    for (auto* sub : app.get_subcommands())
        cfg.command = sub->get_name();
    return run(cfg, out, err);
}

} // namespace cgloop
