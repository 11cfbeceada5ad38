#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "projcoords/commands.hpp"

namespace cli = projcoords::cli;

int main(int argc, char** argv) {
  CLI::App app{"Coordinates on convex projective structures on surfaces"};
  app.require_subcommand(1);

  std::string convert_in, convert_out, convert_to;
  auto* convert = app.add_subcommand("convert", "Convert between coordinate systems");
  convert->add_option("input", convert_in, "Coordinate file")->required();
  convert->add_option("--to", convert_to, "Target system")
      ->required()
      ->check(CLI::IsMember({"goldman", "bd"}));
  convert->add_option("-o,--output", convert_out, "Output file")->required();

  std::string validate_in;
  auto* validate = app.add_subcommand("validate", "Check a coordinate file");
  validate->add_option("input", validate_in, "Coordinate file")->required();

  std::string oracle_in;
  bool monodromy = false;
  auto* oracle = app.add_subcommand("oracle", "Recompute shears from the flag configuration");
  oracle->add_option("input", oracle_in, "Coordinate file")->required();
  oracle->add_flag("--monodromy", monodromy, "Also rebuild the boundary monodromies");

  std::string flow_in, flow_out, flow_curve;
  std::optional<double> twist, bulge;
  auto* flow = app.add_subcommand("flow", "Apply twist and bulge flows along a curve");
  flow->add_option("input", flow_in, "Coordinate file")->required();
  flow->add_option("--curve", flow_curve, "Internal curve key")->required();
  flow->add_option("--twist", twist, "Twist amount");
  flow->add_option("--bulge", bulge, "Bulge amount");
  flow->add_option("-o,--output", flow_out, "Output file")->required();

  std::string render_in, render_out;
  std::optional<std::string> render_pants;
  auto* render = app.add_subcommand("render", "Draw a pants configuration as SVG");
  render->add_option("input", render_in, "Coordinate file")->required();
  render->add_option("--pants", render_pants, "Pants key (default: first)");
  render->add_option("-o,--output", render_out, "SVG file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitParse;
  }

  if (convert->parsed()) {
    const auto target = convert_to == "bd" ? projcoords::CoordinateSystem::BD
                                           : projcoords::CoordinateSystem::Goldman;
    return cli::cmd_convert(convert_in, target, convert_out, std::cout, std::cerr);
  }
  if (validate->parsed()) return cli::cmd_validate(validate_in, std::cout, std::cerr);
  if (oracle->parsed()) return cli::cmd_oracle(oracle_in, monodromy, std::cout, std::cerr);
  if (flow->parsed()) {
    if (!twist && !bulge) {
      std::cerr << "flow: give --twist and/or --bulge\n";
      return cli::kExitParse;
    }
    return cli::cmd_flow(flow_in, flow_curve, twist, bulge, flow_out, std::cout, std::cerr);
  }
  return cli::cmd_render(render_in, render_pants, render_out, std::cout, std::cerr);
}
