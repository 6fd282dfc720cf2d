// vocxai: command-line front end for the artifact annotation and XAI
// evaluation pipeline. Settings resolve as flags > --config file > defaults.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "vocxai/commands.hpp"
#include "vocxai/errors.hpp"

namespace {

using namespace vocxai;

struct CommonFlags {
  std::string config_path;
  std::optional<std::size_t> fft_size;
  std::optional<std::size_t> hop;
  std::optional<std::string> window;
  std::optional<double> quantile;

  void add_to(CLI::App* app) {
    app->add_option("--config", config_path, "TOML configuration file");
    app->add_option("--fft-size", fft_size, "STFT size (power of two)");
    app->add_option("--hop", hop, "STFT hop (divides fft size)");
    app->add_option("--window", window, "STFT window: hann or rectangular");
    app->add_option("--quantile", quantile, "Binarization quantile in (0, 1)");
  }

  ToolkitConfig resolve() const {
    ToolkitConfig cfg = config_path.empty() ? ToolkitConfig{} : load_config(config_path);
    if (fft_size) cfg.stft.fft_size = *fft_size;
    if (hop) cfg.stft.hop = *hop;
    if (window) cfg.stft.window = parse_window(*window);
    if (quantile) {
      cfg.annotation.quantile = *quantile;
      cfg.evaluation.quantile = *quantile;
      cfg.faithfulness.quantile = *quantile;
    }
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vocoder artifact annotation and XAI evaluation toolkit"};
  app.require_subcommand(1);

  CommonFlags common;

  cli::InjectArgs inject;
  auto* inject_cmd = app.add_subcommand("inject", "Inject synthetic artifacts and write oracle masks");
  inject_cmd->add_option("--spec", inject.spec_manifest, "Injection spec manifest (JSONL)")->required();
  inject_cmd->add_option("--out", inject.out_dir, "Output directory")->required();
  inject_cmd->add_option("--seed", inject.seed, "Root seed");
  inject_cmd->add_flag("--strict", inject.strict, "Fail on any entry error");
  common.add_to(inject_cmd);

  cli::AnnotateArgs annotate;
  bool no_align = false;
  auto* annotate_cmd = app.add_subcommand("annotate", "Compute ground-truth masks and heatmaps");
  annotate_cmd->add_option("--manifest", annotate.manifest, "Pair manifest (JSONL)")->required();
  annotate_cmd->add_option("--out", annotate.out_dir, "Output directory")->required();
  annotate_cmd->add_flag("--render", annotate.render, "Also write PGM renders");
  annotate_cmd->add_flag("--strict", annotate.strict, "Fail on any entry error");
  annotate_cmd->add_flag("--no-align", no_align, "Skip DTW alignment of flagged pairs");
  annotate_cmd->add_option("--workers", annotate.workers, "Worker threads")->check(CLI::PositiveNumber);
  common.add_to(annotate_cmd);

  cli::EvaluateArgs evaluate;
  std::optional<std::size_t> fbound_tol;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score predicted heatmaps against ground truth");
  evaluate_cmd->add_option("--pred", evaluate.pred_dir, "Directory of predicted HMAP files")->required();
  evaluate_cmd->add_option("--gt", evaluate.gt_dir, "Directory of ground-truth HMAP masks")->required();
  evaluate_cmd->add_option("--out", evaluate.out_report, "Report path stem (.csv and .json)")->required();
  evaluate_cmd->add_option("--fbound-tol", fbound_tol, "FBound tolerance in grid cells");
  common.add_to(evaluate_cmd);

  cli::FaithfulnessArgs faith;
  std::string scorer_cmd;
  std::vector<double> band;
  bool faith_binarize = false;
  auto* faith_cmd = app.add_subcommand("faithfulness", "Measure AI/AD/AG/Fid-In with a scorer");
  faith_cmd->add_option("--manifest", faith.manifest, "Pair manifest (JSONL)")->required();
  faith_cmd->add_option("--heatmaps", faith.heatmap_dir, "Directory of <id>.hmap heatmaps")->required();
  faith_cmd->add_option("--out", faith.out_report, "Report path stem (.csv and .json)")->required();
  auto* scorer_opt = faith_cmd->add_option("--scorer", scorer_cmd, "External scorer command line");
  faith_cmd->add_option("--band-scorer", band, "Built-in scorer: F_LOW_HZ F_HIGH_HZ REF_ENERGY")
      ->expected(3)
      ->excludes(scorer_opt);
  faith_cmd->add_option("--workers", faith.workers, "Scorer sessions in parallel")->check(CLI::PositiveNumber);
  faith_cmd->add_flag("--binarize", faith_binarize, "Binarize heatmaps at the quantile before mixing");
  common.add_to(faith_cmd);

  cli::RenderArgs render;
  auto* render_cmd = app.add_subcommand("render", "Render an HMAP file as a PGM image");
  render_cmd->add_option("hmap", render.hmap, "Input HMAP file")->required();
  render_cmd->add_option("out", render.out_pgm, "Output PGM file")->required();
  render_cmd->add_flag("--binarize", render.binarize, "Binarize at the quantile first");
  render_cmd->add_option("--quantile", render.quantile, "Binarization quantile");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version exit 0; everything else is a usage error.
    return app.exit(e) == 0 ? cli::kOk : cli::kInvalidInput;
  }

  try {
    if (inject_cmd->parsed()) {
      inject.config = common.resolve();
      return cli::cmd_inject(inject, std::cerr);
    }
    if (annotate_cmd->parsed()) {
      annotate.config = common.resolve();
      if (no_align) annotate.config.alignment.enabled = false;
      return cli::cmd_annotate(annotate, std::cerr);
    }
    if (evaluate_cmd->parsed()) {
      evaluate.config = common.resolve();
      if (fbound_tol) evaluate.config.evaluation.fbound_tol = *fbound_tol;
      return cli::cmd_evaluate(evaluate, std::cerr);
    }
    if (faith_cmd->parsed()) {
      faith.config = common.resolve();
      if (faith_binarize) faith.config.faithfulness.binarize = true;
      if (!band.empty()) {
        faith.band_scorer = cli::BandScorerArgs{band[0], band[1], band[2]};
      } else {
        faith.scorer_cmd = cli::split_command(scorer_cmd);
      }
      return cli::cmd_faithfulness(faith, std::cerr);
    }
    return cli::cmd_render(render, std::cerr);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kInvalidInput;
  }
}
