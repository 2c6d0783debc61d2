#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "vfe/vfe.hpp"

namespace {

int do_run(const std::string& config_path) {
    vfe::ExperimentConfig cfg = vfe::load_config(config_path);
    vfe::RunResult r = vfe::run_to_files(cfg);
    std::fputs(r.summary.c_str(), stdout);
    return r.exit_code;
}

int do_verify(const std::string& suite) {
    auto results = vfe::acceptance::run_suite(suite);
    bool all = true;
    for (const auto& r : results) {
        std::printf("[%s] %s: %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
        all = all && r.pass;
    }
    return all ? 0 : 2;
}

int do_generate(const std::string& name, const std::string& out_path, std::size_t n) {
    vfe::SpaceForm M = vfe::SpaceForm::euclidean();
    if (name == "hopf_circle") M = vfe::SpaceForm::with_curvature(1.0);
    if (name == "hyperbolic_circle") M = vfe::SpaceForm::with_curvature(-1.0);
    vfe::GeneratorParams params;
    vfe::ClosedFilament f = vfe::generate_initial(name, params, M, n);

    std::string text = "# filament kind=";
    switch (M.kind) {
        case vfe::ModelKind::Euclidean: text += "euclidean"; break;
        case vfe::ModelKind::Spherical: text += "spherical"; break;
        case vfe::ModelKind::Hyperbolic: text += "hyperbolic"; break;
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), " K0=%.17g N=%zu length=%.17g\n", M.K0, f.N(), f.length);
    text += buf;
    const int dim = M.ambient_dim();
    for (const vfe::Vec& p : f.points) {
        for (int a = 0; a < dim; ++a) {
            std::snprintf(buf, sizeof(buf), "%.17g", p.c[static_cast<std::size_t>(a)]);
            text += buf;
            text += (a + 1 < dim) ? ',' : '\n';
        }
    }
    vfe::write_text_file(out_path, text);
    std::printf("wrote %s (%zu samples)\n", out_path.c_str(), f.N());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"closed vortex filament flows in constant-curvature model spaces"};
    app.require_subcommand(1);

    std::string config_path;
    CLI::App* cmd_run = app.add_subcommand("run", "run an experiment described by a config file");
    cmd_run->add_option("--config", config_path, "path to the config file")->required();

    std::string suite;
    CLI::App* cmd_verify = app.add_subcommand("verify", "run an invariant suite");
    cmd_verify->add_option("suite", suite, "geometry|frenet|dynamics|hasimoto|frames|all")
        ->required();

    std::string gen_name, gen_out;
    std::size_t gen_n = 256;
    CLI::App* cmd_generate =
        app.add_subcommand("generate", "write an initial filament to a text file");
    cmd_generate->add_option("--name", gen_name, "generator name")->required();
    cmd_generate->add_option("--out", gen_out, "output path")->required();
    cmd_generate->add_option("--n", gen_n, "sample count (>= 16)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    try {
        if (cmd_run->parsed()) return do_run(config_path);
        if (cmd_verify->parsed()) return do_verify(suite);
        if (cmd_generate->parsed()) return do_generate(gen_name, gen_out, gen_n);
        std::fprintf(stderr, "error: no subcommand\n");
        return 1;
    } catch (const vfe::UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    }
}
