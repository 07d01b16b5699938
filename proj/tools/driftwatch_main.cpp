#include <CLI11.hpp>

#include "driftwatch/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"driftwatch: ground-truth-free monitoring for deployed classification models"};
    app.require_subcommand(1);

    driftwatch::ReplayOptions replay;
    CLI::App* replay_cmd =
        app.add_subcommand("replay", "Replay an event CSV through the monitor and write reports");
    replay_cmd->add_option("--config", replay.config_path, "Monitor config JSON")->required();
    replay_cmd->add_option("--input", replay.input_csv, "Event CSV to replay")->required();
    replay_cmd->add_option("--out", replay.out_dir, "Output directory")->required();

    driftwatch::GenerateOptions generate;
    CLI::App* generate_cmd =
        app.add_subcommand("generate", "Generate a seeded synthetic event stream");
    CLI::Option* spec_opt = generate_cmd->add_option("--spec", generate.spec_path,
                                                     "Scenario spec JSON");
    generate_cmd
        ->add_flag("--paper-shaped", generate.paper_shaped,
                   "Use the built-in six-checkpoint drift scenario")
        ->excludes(spec_opt);
    generate_cmd->add_option("--seed", generate.seed, "Override the scenario seed");
    generate_cmd->add_option("--out", generate.out_dir, "Output directory")->required();

    driftwatch::ServeOptions serve;
    CLI::App* serve_cmd = app.add_subcommand("serve", "Run the HTTP ingestion service");
    serve_cmd->add_option("--config", serve.config_path, "Monitor config JSON")->required();
    serve_cmd->add_option("--listen", serve.listen, "Listen address host:port");
    serve_cmd->add_option("--out", serve.out_dir, "Directory for the alert log");
    serve_cmd->add_option("--snapshot", serve.snapshot_path,
                          "State snapshot file (restored on start, written on shutdown)");
    serve_cmd->add_flag("--fresh", serve.fresh, "Start fresh even if a snapshot exists");

    CLI11_PARSE(app, argc, argv);

    if (replay_cmd->parsed()) return driftwatch::cmd_replay(replay);
    if (generate_cmd->parsed()) return driftwatch::cmd_generate(generate);
    if (serve_cmd->parsed()) return driftwatch::cmd_serve(serve);
    return driftwatch::kExitError;
}
