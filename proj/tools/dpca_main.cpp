#include <iostream>

#include <CLI11.hpp>

#include "dpca/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"PCA over datasets of random variables given by means and covariances"};
  app.require_subcommand(1);

  dpca::cli::FitOptions fit_opts;
  CLI::App* fit = app.add_subcommand("fit", "Fit principal components to a dataset");
  fit->add_option("dataset", fit_opts.dataset_path, "dataset file")->required();
  fit->add_option("-k,--components", fit_opts.k, "number of components")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  fit->add_flag("--center,!--no-center", fit_opts.center,
                "subtract the mean of means before fitting (on by default)");
  fit->add_option("-o,--output", fit_opts.output_path,
                  "write the model document here instead of stdout");

  dpca::cli::CompareOptions cmp_opts;
  CLI::App* compare = app.add_subcommand(
      "compare", "Compare distributional, means-only, and sampled PCA");
  compare->add_option("dataset", cmp_opts.dataset_path, "dataset file")->required();
  compare->add_option("-k,--components", cmp_opts.k, "number of components")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  compare->add_option("-m,--samples", cmp_opts.samples,
                      "samples drawn per distribution")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  compare->add_option("--seed", cmp_opts.seed, "sampling seed")
      ->capture_default_str();
  compare->add_flag("--center,!--no-center", cmp_opts.center,
                    "subtract the mean of means before fitting (on by default)");
  compare->add_option("-o,--output", cmp_opts.output_path,
                      "write the report here (plot table goes to the sibling "
                      "<stem>.plot.csv) instead of stdout");

  dpca::cli::ErrorOptions err_opts;
  CLI::App* error_cmd = app.add_subcommand(
      "error", "Report the reconstruction error of a model on a dataset");
  error_cmd->add_option("dataset", err_opts.dataset_path, "dataset file")->required();
  error_cmd->add_option("model", err_opts.model_path, "model file")->required();

  dpca::cli::ProjectOptions proj_opts;
  CLI::App* project = app.add_subcommand(
      "project", "Project a dataset into a model's component coordinates");
  project->add_option("dataset", proj_opts.dataset_path, "dataset file")->required();
  project->add_option("model", proj_opts.model_path, "model file")->required();
  project->add_option("-o,--output", proj_opts.output_path,
                      "write the projected dataset here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);
    }
    std::cerr << "error: " << e.what() << "\n";
    std::cerr << "run with --help for usage\n";
    return dpca::cli::kExitUsage;
  }

  if (fit->parsed()) {
    return dpca::cli::run_fit(fit_opts, std::cout, std::cerr);
  }
  if (compare->parsed()) {
    return dpca::cli::run_compare(cmp_opts, std::cout, std::cerr);
  }
  if (error_cmd->parsed()) {
    return dpca::cli::run_error(err_opts, std::cout, std::cerr);
  }
  return dpca::cli::run_project(proj_opts, std::cout, std::cerr);
}
