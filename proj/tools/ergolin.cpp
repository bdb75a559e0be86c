#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ergolin/experiments.hpp"
#include "ergolin/witnesses.hpp"

namespace fs = std::filesystem;

namespace {

int cmd_list(bool as_json) {
    const auto& catalog = ergolin::experiment_catalog();
    if (as_json) {
        ergolin::json arr = ergolin::json::array();
        for (const auto& e : catalog) {
            arr.push_back(ergolin::json{{"name", e.name},
                                        {"anchor", e.anchor},
                                        {"tolerance", e.tolerance},
                                        {"knobs", e.knobs},
                                        {"artifacts", e.artifacts}});
        }
        std::cout << ergolin::json{{"schema", 1}, {"experiments", arr}}.dump(2) << "\n";
        return 0;
    }
    for (const auto& e : catalog) {
        std::cout << e.name << "\n"
                  << "    " << e.anchor << "\n"
                  << "    tolerance: " << e.tolerance << "\n"
                  << "    knobs:     " << e.knobs << "\n"
                  << "    artifacts: " << e.artifacts << "\n";
    }
    return 0;
}

int cmd_run(const std::string& name, const ergolin::RunOptions& opts) {
    std::string exp = !name.empty() ? name : opts.experiment.value_or("");
    if (exp.empty()) {
        throw ergolin::ValidationError(
            "no experiment named; pass one on the command line or set 'experiment' in "
            "the config file");
    }
    ergolin::Outcome res = ergolin::run_experiment(exp, opts);

    fs::path dir = opts.out.value_or(".");
    fs::create_directories(dir);
    for (const auto& a : res.artifacts) {
        std::ofstream f(dir / a.name, std::ios::binary);
        if (!f) throw ergolin::ValidationError("cannot write artifact: " + a.name);
        f << a.bytes;
    }
    {
        std::ofstream f(dir / (exp + "_summary.json"), std::ios::binary);
        f << res.summary.dump(2) << "\n";
    }

    std::cout << res.summary.dump(2) << "\n";
    std::cout << (res.pass ? "[PASS] " : "[FAIL] ") << exp << "\n";
    return res.pass ? 0 : 2;
}

int cmd_verify(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ergolin::ValidationError("cannot open certificate file: " + path);
    ergolin::json j = ergolin::json::parse(f);
    ergolin::VerifyReport rep = ergolin::verify_certificate(j);

    std::cout << "claims reproduced bitwise: " << (rep.match ? "yes" : "NO") << "\n";
    for (const auto& m : rep.mismatches) std::cout << "  mismatch: " << m << "\n";
    std::cout << (rep.pass ? "[PASS]" : "[FAIL]") << " recomputed claim conjunction\n";
    return rep.match && rep.pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"orbit statistics, designed witness vectors, and measure transport "
                 "for linear dynamical systems"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "List the experiment registry");
    bool list_json = false;
    list->add_flag("--json", list_json, "Emit the catalog as JSON");

    auto* run = app.add_subcommand("run", "Run a named experiment");
    std::string name;
    std::string config_path;
    std::string out_dir;
    std::int64_t horizon = 0;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<double> radii;
    double tolerance = 0.0;
    int threads = 0;
    run->add_option("experiment", name, "Experiment name (see 'list')");
    run->add_option("--config", config_path, "JSON config file; flags override it");
    auto* o_h = run->add_option("--horizon", horizon, "Horizon / scan-cap override");
    auto* o_t = run->add_option("--trials", trials, "Trial / sample-count override");
    auto* o_s = run->add_option("--seed", seed, "Base RNG seed");
    auto* o_r =
        run->add_option("--radii", radii, "Visit radii (comma-separated)")->delimiter(',');
    auto* o_o = run->add_option("--out", out_dir, "Artifact directory (default .)");
    auto* o_x = run->add_option("--tolerance", tolerance, "Headline bound override");
    auto* o_n =
        run->add_option("--threads", threads, "Worker cap (0 = ERGOLIN_THREADS or hardware)");

    auto* verify =
        app.add_subcommand("verify-certificate", "Re-measure a stored witness certificate");
    std::string cert_path;
    verify->add_option("file", cert_path, "Certificate JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) return cmd_list(list_json);
        if (verify->parsed()) return cmd_verify(cert_path);

        ergolin::RunOptions opts;
        if (!config_path.empty()) {
            std::ifstream f(config_path, std::ios::binary);
            if (!f) {
                throw ergolin::ValidationError("cannot open config file: " + config_path);
            }
            opts = ergolin::options_from_json(ergolin::json::parse(f));
        }
        ergolin::RunOptions flags;
        if (*o_h) flags.horizon = horizon;
        if (*o_t) flags.trials = trials;
        if (*o_s) flags.seed = seed;
        if (*o_r) flags.radii = radii;
        if (!out_dir.empty()) flags.out = out_dir;
        if (*o_x) flags.tolerance = tolerance;
        if (*o_n) flags.threads = threads;
        return cmd_run(name, ergolin::merge_options(opts, flags));
    } catch (const ergolin::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const ergolin::HorizonTooShort& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const ergolin::json::exception& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const ergolin::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
