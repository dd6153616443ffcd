// tarsim: replay active-learning document-review experiments over a labeled
// corpus and report per-round recall and review-burden statistics.

#include <iostream>

#include <CLI11.hpp>

#include "tarsim/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"active-learning document review simulator", "tarsim"};
    app.set_version_flag("--version", tarsim::kToolVersion);
    app.require_subcommand(1);

    tarsim::RunOptions run_options;
    CLI::App* run = app.add_subcommand("run", "simulate active-learning review rounds");
    run->add_option("--corpus", run_options.corpus, "labeled JSONL corpus")
        ->required();
    run->add_option("--experiment", run_options.experiment, "type1 | type2")
        ->check(CLI::IsMember({"type1", "type2"}))
        ->capture_default_str();
    run->add_option("--strategy", run_options.strategy,
                    "top-ranked | uncertain | random | all")
        ->check(CLI::IsMember({"top-ranked", "uncertain", "random", "all"}))
        ->capture_default_str();
    run->add_option("--batch-size", run_options.batch_size, "documents added per round")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    run->add_option("--seed-size", run_options.seed_size, "initial training documents")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    run->add_option("--validation-fraction", run_options.validation_fraction,
                    "held-out fraction (type1)")
        ->capture_default_str();
    run->add_option("--recall", run_options.recall_targets,
                    "recall targets, comma separated")
        ->delimiter(',')
        ->capture_default_str();
    run->add_option("--seed", run_options.seed, "master RNG seed")->required();
    run->add_option("--max-rounds", run_options.max_rounds,
                    "round cap (0 = run to completion)");
    run->add_option("--vocab-size", run_options.vocab_capacity,
                    "feature vocabulary capacity")
        ->capture_default_str();
    run->add_flag("--cold-start", run_options.cold_start,
                  "retrain from scratch every round");
    run->add_option("--threads", run_options.threads, "scoring threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    run->add_option("--out", run_options.out, "output directory (default runs/<ts>)");
    run->add_option("--dump-vocab", run_options.dump_vocab,
                    "write the vocabulary as TSV to this path");

    tarsim::SynthOptions synth_options;
    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic labeled corpus");
    synth->add_option("--total", synth_options.config.total, "document count")
        ->required();
    synth->add_option("--richness", synth_options.config.richness,
                      "positive fraction in (0,1)")
        ->required();
    synth->add_option("--vocab-size", synth_options.config.vocab_size, "token count")
        ->capture_default_str();
    synth->add_option("--separation", synth_options.config.separation,
                      "class signal strength in [0,1]")
        ->capture_default_str();
    synth->add_option("--avg-doc-len", synth_options.config.avg_doc_len,
                      "mean tokens per document")
        ->capture_default_str();
    synth->add_option("--seed", synth_options.config.seed, "RNG seed")->required();
    synth->add_option("--out", synth_options.out, "output JSONL path")->required();

    tarsim::ReportOptions report_options;
    CLI::App* report = app.add_subcommand("report", "tabulate finished runs");
    report->add_option("dirs", report_options.run_dirs, "run output directories")
        ->required();
    report->add_option("--out", report_options.out, "report output directory")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (run->parsed()) return tarsim::cmd_run(run_options, std::cout, std::cerr);
    if (synth->parsed()) return tarsim::cmd_synth(synth_options, std::cout, std::cerr);
    return tarsim::cmd_report(report_options, std::cout, std::cerr);
}
