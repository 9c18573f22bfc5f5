#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bsb/commands.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::string> side;
  std::optional<double> spot;
  bool check = false;
  bool serial = false;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "run configuration (JSON)")
      ->required()
      ->envname("BSB_CONFIG");
  cmd->add_option("--out", args.out_dir, "output directory")
      ->envname("BSB_OUT");
  cmd->add_option("--side", args.side, "ask, bid or both")
      ->envname("BSB_SIDE");
  cmd->add_option("--spot", args.spot, "spot for the t=0 price readout")
      ->envname("BSB_SPOT");
  cmd->add_flag("--check", args.check,
                "audit the M-matrix structure and the stability bound");
  cmd->add_flag("--serial", args.serial, "force the serial kernel backend")
      ->envname("BSB_SERIAL");
  cmd->add_option("--threads", args.threads,
                  "OpenMP thread count (0 = runtime default)")
      ->envname("BSB_THREADS");
}

int run(const CommonArgs& args,
        const std::function<int(const bsb::RunConfig&)>& body) {
  try {
    bsb::RunConfig config = bsb::load_config(args.config_path);
    bsb::CliOverrides overrides;
    overrides.out_dir = args.out_dir;
    if (args.side) {
      if (*args.side == "ask")
        overrides.side = bsb::SideChoice::ask;
      else if (*args.side == "bid")
        overrides.side = bsb::SideChoice::bid;
      else if (*args.side == "both")
        overrides.side = bsb::SideChoice::both;
      else {
        std::cerr << "config error: --side must be ask, bid or both\n";
        return bsb::exit_config_error;
      }
    }
    overrides.spot = args.spot;
    overrides.check = args.check;
    overrides.serial = args.serial;
    const int threads = args.threads;
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
    return body(bsb::apply_overrides(std::move(config), overrides));
  } catch (const bsb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return bsb::exit_config_error;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "bsb - bid/ask pricing of European claims under a volatility band\n"
      "(implicit characteristic finite differences with policy iteration)"};
  app.require_subcommand(1);

  CommonArgs price_args, converge_args, validate_args;
  std::size_t levels = 4;

  CLI::App* price = app.add_subcommand(
      "price", "solve and export the ask/bid price surfaces");
  add_common(price, price_args);

  CLI::App* converge = app.add_subcommand(
      "converge", "dyadic refinement study against the closed form");
  add_common(converge, converge_args);
  converge->add_option("--levels", levels, "number of refinement levels")
      ->envname("BSB_LEVELS");

  CLI::App* validate = app.add_subcommand(
      "validate", "run the invariant battery on the configured problem");
  add_common(validate, validate_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return bsb::exit_config_error;
  }

  if (price->parsed())
    return run(price_args, [](const bsb::RunConfig& c) {
      return bsb::cmd_price(c, std::cout, std::cerr);
    });
  if (converge->parsed())
    return run(converge_args, [&](const bsb::RunConfig& c) {
      return bsb::cmd_converge(c, levels, std::cout, std::cerr);
    });
  return run(validate_args, [](const bsb::RunConfig& c) {
    return bsb::cmd_validate(c, std::cout, std::cerr);
  });
}
