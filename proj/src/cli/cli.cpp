#include "qsl/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "output.hpp"
#include "qsl/bounds.hpp"
#include "qsl/errors.hpp"
#include "qsl/liouville.hpp"
#include "qsl/verification.hpp"

namespace qsl::cli {

namespace {

// Maps library exceptions onto the exit-code contract.
int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const SchemaError& e) {
        err << "schema error: " << e.what() << '\n';
        return kSchemaError;
    } catch (const InvariantViolation& e) {
        err << "invariant violation: " << e.what() << '\n';
        return kInvariantViolation;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << '\n';
        return kSchemaError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

Scenario load(const RunConfig& config, const std::vector<Override>& extra = {}) {
    std::vector<Override> all = config.overrides;
    all.insert(all.end(), extra.begin(), extra.end());
    return build_scenario(resolve_scenario(config.scenario, all));
}

std::vector<SeededTrajectory> run_seeds(const RunConfig& config, const std::vector<Override>& overrides,
                                        std::string& name) {
    std::vector<SeededTrajectory> runs;
    std::vector<std::optional<std::uint64_t>> seeds(config.seeds.begin(), config.seeds.end());
    if (seeds.empty()) seeds.emplace_back(std::nullopt);
    for (const auto& seed : seeds) {
        std::vector<Override> extra = overrides;
        if (seed) extra.push_back({"seed", std::to_string(*seed)});
        const Scenario s = load(config, extra);
        name = s.name;
        runs.push_back({seed, run_scenario(s, config.method)});
    }
    return runs;
}

void write_runs(std::ostream& os, Format format, const std::string& name, const std::vector<SeededTrajectory>& runs) {
    if (format == Format::csv) {
        write_csv(os, runs);
    } else {
        write_json(os, name, runs);
    }
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    body(f);
    if (!f) throw std::runtime_error("write to " + path.string() + " failed");
}

}  // namespace

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        std::string name;
        const auto runs = run_seeds(config, {}, name);
        if (config.output_path.empty()) {
            write_runs(out, config.format, name, runs);
        } else {
            write_file(config.output_path, [&](std::ostream& os) { write_runs(os, config.format, name, runs); });
        }
        return kOk;
    });
}

int cmd_bounds(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Scenario s = load(config);
        const double t0 = config.from.value_or(s.grid.t_start);
        const double t1 = config.to.value_or(s.grid.t_end);
        const BoundTarget target = s.reference ? BoundTarget::purity_deviation : BoundTarget::purity;
        const BoundReport r = evaluate_bounds(s.generator, t0, t1, target);
        const BoundRates rates = bound_rates(s.generator);
        Json doc;
        doc["scenario"] = s.name;
        doc["t_initial"] = r.t_initial;
        doc["t_final"] = r.t_final;
        doc["hilbert_hs"] = r.hilbert_hs;
        doc["hilbert_sp"] = r.hilbert_sp;
        doc["liouville"] = r.liouville;
        doc["applies_to"] = std::string(to_string(r.applies_to));
        doc["quadrature_steps"] = r.quadrature_steps;
        doc["skew_spectral_norm"] = skew_spectral_norm(s.generator, t0);
        doc["rates"] = {{"hilbert_hs", rates.hilbert_hs}, {"hilbert_sp", rates.hilbert_sp}, {"liouville", rates.liouville}};
        doc["ordered"] = r.ordered();
        doc["dephasing"] = is_dephasing(s.generator);
        if (config.output_path.empty()) {
            out << doc.dump(2) << '\n';
        } else {
            write_file(config.output_path, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
        }
        return kOk;
    });
}

int cmd_compare(const RunConfig& config, std::ostream& out, std::ostream& err) {
    std::vector<std::string> targets;
    if (config.all_catalog) {
        targets = catalog_names();
    } else {
        targets.push_back(config.scenario);
    }
    int worst = kOk;
    auto rank = [](int code) {
        switch (code) {
            case kOk: return 0;
            case kBoundViolation: return 1;
            case kOracleMismatch: return 2;
            case kInvariantViolation: return 3;
            case kFailure: return 4;
            default: return 5;
        }
    };
    for (const auto& target : targets) {
        RunConfig single = config;
        single.scenario = target;
        const int code = guarded(err, [&] {
            const Scenario s = load(single);
            const CompareReport r = compare_scenario(s);
            out << "scenario " << target << " (" << s.name << ", dim " << s.generator.dim() << ")\n";
            out << "  dual-path max |superop - direct| = " << format_number(r.discrepancy) << "  tolerance "
                << format_number(kDualPathTolerance) << "  " << (r.paths_agree() ? "ok" : "MISMATCH") << '\n';
            for (const auto* side : {&r.superop, &r.direct}) {
                const char* label = side == &r.superop ? "superop-expm" : "direct-rk4";
                for (const auto& c : side->checks) {
                    out << "  " << label << ' ' << c.label << ": worst excess " << format_number(c.worst_excess)
                        << " at t=" << format_number(c.worst_time) << "  " << (c.ok() ? "ok" : "VIOLATED") << '\n';
                }
            }
            return r.exit_code();
        });
        if (rank(code) > rank(worst)) worst = code;
    }
    out << "result: " << (worst == kOk ? "PASS" : "FAIL") << " (exit " << worst << ")\n";
    return worst;
}

std::pair<std::string, std::vector<std::string>> split_sweep_set(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) throw SchemaError("--set expects key=value, got \"" + text + "\"");
    std::pair<std::string, std::vector<std::string>> out{text.substr(0, eq), {}};
    int depth = 0;
    std::string current;
    for (char c : text.substr(eq + 1)) {
        if (c == '[' || c == '{') ++depth;
        if (c == ']' || c == '}') --depth;
        if (c == ',' && depth == 0) {
            out.second.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    out.second.push_back(current);
    return out;
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (config.out_dir.empty()) throw SchemaError("sweep needs --out-dir");
        std::vector<std::pair<std::string, std::vector<std::string>>> axes;
        for (const auto& s : config.sweep_sets) axes.push_back(split_sweep_set(s));

        // Cross product, first axis outermost.
        std::vector<std::vector<Override>> points;
        if (!axes.empty()) {
            points.emplace_back();
            for (const auto& [key, values] : axes) {
                std::vector<std::vector<Override>> next;
                for (const auto& p : points) {
                    for (const auto& v : values) {
                        auto q = p;
                        q.push_back({key, v});
                        next.push_back(std::move(q));
                    }
                }
                points = std::move(next);
            }
        }

        const std::filesystem::path dir(config.out_dir);
        std::filesystem::create_directories(dir);
        const std::string ext = config.format == Format::csv ? ".csv" : ".json";
        auto file_name = [&](std::size_t i) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "point_%04zu", i);
            return std::string(buf) + ext;
        };

        std::vector<int> status(points.size(), kOk);
        std::vector<std::string> messages(points.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next++; i < points.size(); i = next++) {
                std::ostringstream point_err;
                status[i] = guarded(point_err, [&] {
                    std::string name;
                    const auto runs = run_seeds(config, points[i], name);
                    write_file(dir / file_name(i), [&](std::ostream& os) { write_runs(os, config.format, name, runs); });
                    return kOk;
                });
                messages[i] = point_err.str();
            }
        };
        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        const unsigned jobs = std::min<std::size_t>(config.jobs ? config.jobs : hw, std::max<std::size_t>(1, points.size()));
        std::vector<std::thread> pool;
        for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();

        Json index;
        index["scenario"] = config.scenario;
        index["format"] = config.format == Format::csv ? "csv" : "json";
        index["seeds"] = config.seeds;
        index["axes"] = Json::array();
        for (const auto& [key, values] : axes) index["axes"].push_back({{"key", key}, {"values", values}});
        index["points"] = Json::array();
        int worst = kOk;
        for (std::size_t i = 0; i < points.size(); ++i) {
            Json overrides = Json::object();
            for (const auto& o : points[i]) overrides[o.key] = o.value;
            Json entry = {{"index", i}, {"overrides", overrides}, {"status", status[i]}};
            entry["file"] = status[i] == kOk ? Json(file_name(i)) : Json();
            if (status[i] != kOk) entry["error"] = messages[i];
            index["points"].push_back(std::move(entry));
            if (status[i] != kOk && worst == kOk) worst = status[i];
            err << messages[i];
        }
        write_file(dir / "index.json", [&](std::ostream& os) { os << index.dump(2) << '\n'; });
        out << "wrote " << points.size() << " point(s) to " << dir.string() << '\n';
        return worst;
    });
}

int cmd_catalog(std::ostream& out) {
    for (const auto& name : catalog_names()) {
        out << name;
        for (std::size_t pad = name.size(); pad < 18; ++pad) out << ' ';
        out << catalog_description(name) << '\n';
    }
    return kOk;
}

namespace {

std::vector<Override> parse_overrides(const std::vector<std::string>& sets) {
    std::vector<Override> out;
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) throw SchemaError("--set expects key=value, got \"" + s + "\"");
        out.push_back({s.substr(0, eq), s.substr(eq + 1)});
    }
    return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantum speed limits on purity: propagation, bounds and checks", "qsl"};
    app.require_subcommand(1);

    RunConfig config;
    std::vector<std::string> sets;
    std::string format = "csv";
    std::string method = "superop-expm";
    double from = 0.0;
    double to = 0.0;

    const std::map<std::string, std::string> formats = {{"csv", "csv"}, {"json", "json"}};
    const std::map<std::string, std::string> methods = {{"superop-expm", "superop-expm"}, {"direct-rk4", "direct-rk4"}};

    auto* run_cmd = app.add_subcommand("run", "Propagate a scenario and write purity and bound columns");
    run_cmd->add_option("scenario", config.scenario, "Catalog name or scenario JSON path")->required();
    run_cmd->add_option("--out,-o", config.output_path, "Output file (default stdout)");
    run_cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    run_cmd->add_option("--seed", config.seeds, "Seed for the initial state; repeatable")->take_all();
    run_cmd->add_option("--set", sets, "key=value override; repeatable");
    run_cmd->add_option("--method", method, "superop-expm or direct-rk4")
        ->check(CLI::IsMember({"superop-expm", "direct-rk4"}));

    auto* bounds_cmd = app.add_subcommand("bounds", "Print the integrated bounds as JSON");
    bounds_cmd->add_option("scenario", config.scenario, "Catalog name or scenario JSON path")->required();
    auto* from_opt = bounds_cmd->add_option("--from", from, "Initial time (default grid start)");
    auto* to_opt = bounds_cmd->add_option("--to", to, "Final time (default grid end)");
    bounds_cmd->add_option("--set", sets, "key=value override; repeatable");
    bounds_cmd->add_option("--out,-o", config.output_path, "Output file (default stdout)");

    auto* compare_cmd = app.add_subcommand("compare", "Run both propagation paths and check every bound");
    auto* scenario_opt = compare_cmd->add_option("scenario", config.scenario, "Catalog name or scenario JSON path");
    auto* all_opt = compare_cmd->add_flag("--all-catalog", config.all_catalog, "Compare every catalog scenario");
    scenario_opt->excludes(all_opt);
    compare_cmd->add_option("--set", sets, "key=value override; repeatable");

    auto* sweep_cmd = app.add_subcommand("sweep", "Run the cross product of override lists");
    sweep_cmd->add_option("scenario", config.scenario, "Catalog name or scenario JSON path")->required();
    sweep_cmd->add_option("--set", config.sweep_sets, "key=v1,v2,...; repeatable");
    sweep_cmd->add_option("--out-dir", config.out_dir, "Directory for per-point outputs and index.json")->required();
    sweep_cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sweep_cmd->add_option("--seed", config.seeds, "Seed for the initial state; repeatable")->take_all();
    sweep_cmd->add_option("--method", method, "superop-expm or direct-rk4")
        ->check(CLI::IsMember({"superop-expm", "direct-rk4"}));
    sweep_cmd->add_option("--jobs,-j", config.jobs, "Worker threads (default: hardware concurrency)");

    auto* catalog_cmd = app.add_subcommand("catalog", "List built-in scenarios");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kSchemaError;
    }
    // CLI11 appends repeated multi-value options; seeds may also arrive as "1,2".
    config.format = format == "json" ? Format::json : Format::csv;
    config.method = method == "direct-rk4" ? Method::direct_rk4 : Method::superop_expm;
    if (from_opt->count() > 0) config.from = from;
    if (to_opt->count() > 0) config.to = to;

    if (catalog_cmd->parsed()) return cmd_catalog(out);
    const int parsed = guarded(err, [&] {
        config.overrides = parse_overrides(sets);
        return kOk;
    });
    if (parsed != kOk) return parsed;
    if (run_cmd->parsed()) return cmd_run(config, out, err);
    if (bounds_cmd->parsed()) return cmd_bounds(config, out, err);
    if (compare_cmd->parsed()) {
        if (!config.all_catalog && config.scenario.empty()) {
            err << "usage error: compare needs a scenario or --all-catalog\n";
            return kSchemaError;
        }
        return cmd_compare(config, out, err);
    }
    if (sweep_cmd->parsed()) return cmd_sweep(config, out, err);
    return kSchemaError;
}

}  // namespace qsl::cli
