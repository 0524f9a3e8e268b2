#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "triplegear/axle.hpp"
#include "triplegear/carve.hpp"
#include "triplegear/config_io.hpp"
#include "triplegear/error.hpp"
#include "triplegear/kinematics.hpp"
#include "triplegear/linking.hpp"
#include "triplegear/mesh.hpp"
#include "triplegear/optimizer.hpp"
#include "triplegear/paradox.hpp"

namespace {

using namespace tg;

struct OptimizeArgs {
  std::string out = "triple_gear.json";
  double tol = 1e-7;
  bool free_phi = false;
  double r = 0.5, phi = 0, theta = -0.8;
};

int run_optimize(const OptimizeArgs& a) {
  SymmetricParams seed{a.r, a.phi, a.theta};
  ProjectConfig cfg;
  cfg.design = maximize_thickness(seed, !a.free_phi, a.tol);
  cfg.design.contacts = contact_points(cfg.design);
  cfg.design.link = link_report(
      {cfg.design.circles[0], cfg.design.circles[1], cfg.design.circles[2]});
  save_config(a.out, cfg);
  std::printf("r %.9f  phi %.9f  theta %.9f\n", cfg.design.params.r, cfg.design.params.phi,
              cfg.design.params.theta);
  std::printf("thickness %.9f  core distance %.9f  all linked %s\n", cfg.design.thickness,
              cfg.design.objective, cfg.design.link.all_linked ? "yes" : "no");
  std::printf("wrote %s\n", a.out.c_str());
  return 0;
}

int run_contacts(const std::string& config_path) {
  ProjectConfig cfg = load_config(config_path);
  if (cfg.design.contacts.empty()) cfg.design.contacts = contact_points(cfg.design);
  std::printf("tube radius %.9f (core distance %.9f)\n", cfg.design.thickness,
              cfg.design.objective);
  for (const TorusCoords& c : cfg.design.contacts)
    std::printf("alpha %12.7f  beta %12.7f\n", c.alpha, c.beta);
  return 0;
}

struct CarveArgs {
  std::string config = "triple_gear.json";
  std::string out_dir = ".";
  bool hollow = false;
  bool ascii = false;
  int grid_alpha = 0, grid_beta = 0, sweep = 0;
};

int run_carve(const CarveArgs& a) {
  ProjectConfig cfg = load_config(a.config);
  if (a.grid_alpha > 0) cfg.gear.field_alpha = a.grid_alpha;
  if (a.grid_beta > 0) cfg.gear.field_beta = a.grid_beta;
  if (a.sweep > 0) cfg.gear.sweep_steps = a.sweep;
  GearSolid gear = assemble_gear(cfg.design, cfg.gear, a.hollow);
  std::printf("%s\n", gear.provenance.c_str());
  const StlFormat fmt = a.ascii ? StlFormat::Ascii : StlFormat::Binary;
  for (int ring = 0; ring < 3; ++ring) {
    TriMesh placed = place_on_ring(gear.mesh, ring);
    std::string path = a.out_dir + "/gear" + std::to_string(ring) + ".stl";
    write_stl_file(placed, path, fmt);
    std::printf("wrote %s (%zu triangles)\n", path.c_str(), placed.triangles.size());
  }
  return 0;
}

struct AxleArgs {
  std::string config = "triple_gear.json";
  std::string out = "axle.stl";
  std::string save_config_path;
  int steps = 1152;
  int layers = 161;
  bool ascii = false;
};

int run_axle(const AxleArgs& a) {
  ProjectConfig cfg = load_config(a.config);
  GearSolid gear = assemble_gear(cfg.design, cfg.gear, false);
  double ratio = axle_speed_ratio(cfg.gear.tooth_count, cfg.axle.starts);
  cfg.axle.cross_section = carve_axle_section(cfg.design, gear, cfg.axle, 1.0, ratio, a.steps);
  TriMesh mesh = axle_mesh(cfg.axle.cross_section, cfg.axle, a.layers);
  write_stl_file(mesh, a.out, a.ascii ? StlFormat::Ascii : StlFormat::Binary);
  std::printf("speed ratio %.6f  hole radius %.6f  section %zu points\n", ratio,
              central_hole_radius(cfg.design), cfg.axle.cross_section.size());
  std::printf("wrote %s (%zu triangles)\n", a.out.c_str(), mesh.triangles.size());
  if (!a.save_config_path.empty()) {
    save_config(a.save_config_path, cfg);
    std::printf("wrote %s\n", a.save_config_path.c_str());
  }
  return 0;
}

struct ParadoxArgs {
  double base_radius = 1.0;
  int teeth = 3;
  double tip_radius = 1.7;
  double pitch = 6.0;
  double height = 6.0;
  double distance = 0;
  int samples = 90;
  std::string out_prefix = "paradox";
  std::string csv;
  bool ascii = false;
};

int run_paradox(const ParadoxArgs& a) {
  InvoluteProfile prof = involute_profile(a.base_radius, a.teeth, a.tip_radius);
  ScrewTriple triple = paradox_screws(prof, a.pitch, a.height, a.distance);
  std::printf("axis spacing %.9f\n", triple.center_distance);
  const StlFormat fmt = a.ascii ? StlFormat::Ascii : StlFormat::Binary;
  for (int i = 0; i < 3; ++i) {
    std::string path = a.out_prefix + std::to_string(i) + ".stl";
    write_stl_file(triple.screws[size_t(i)], path, fmt);
    std::printf("wrote %s (%zu triangles)\n", path.c_str(),
                triple.screws[size_t(i)].triangles.size());
  }
  auto report = contact_normal_report(triple.screws[0], triple.axes[0], triple.screws[1],
                                      triple.axes[1], a.samples, +1.0, 0.01);
  double cmin = 1e300, cmax = -1e300, amax = 0;
  for (const ContactSample& cs : report) {
    cmin = std::min(cmin, cs.clearance);
    cmax = std::max(cmax, cs.clearance);
    if (cs.clearance <= 1e-3) amax = std::max(amax, cs.contact_angle_deg);
  }
  std::printf("same-direction clearance [%.6f, %.6f], contact angle <= %.2f deg\n", cmin, cmax,
              amax);
  if (!a.csv.empty()) {
    write_contact_csv(a.csv, report);
    std::printf("wrote %s\n", a.csv.c_str());
  }
  return 0;
}

struct SimulateArgs {
  std::string config = "triple_gear.json";
  int steps = 720;
  double offset = 0;
  std::string csv;
  bool hollow = false;
};

int run_simulate(const SimulateArgs& a) {
  ProjectConfig cfg = load_config(a.config);
  GearSolid gear = assemble_gear(cfg.design, cfg.gear, a.hollow);
  TriMesh g0 = gear.mesh;
  TriMesh g1 = place_on_ring(gear.mesh, 1);
  TriMesh g2 = place_on_ring(gear.mesh, 2);
  std::vector<std::pair<std::string, ClearanceSweep>> sweeps;
  sweeps.emplace_back("gear0-gear1",
                      ring_pair_clearance(g0, g1, cfg.design, 0, 1, 1.0, a.steps));
  sweeps.emplace_back("gear1-gear2",
                      ring_pair_clearance(g1, g2, cfg.design, 1, 2, 1.0, a.steps));
  sweeps.emplace_back("gear2-gear0",
                      ring_pair_clearance(g2, g0, cfg.design, 2, 0, 1.0, a.steps));
  if (a.offset != 0)
    sweeps.emplace_back("gear0-gear1-offset", ring_pair_clearance(g0, g1, cfg.design, 0, 1, 1.0,
                                                                  a.steps, a.offset));
  for (const auto& [name, sweep] : sweeps)
    std::printf("%-20s min clearance %9.6f at t %.4f\n", name.c_str(), sweep.clearance,
                sweep.time);
  if (!a.csv.empty()) {
    write_clearance_csv(a.csv, sweeps, 2 * M_PI);
    std::printf("wrote %s\n", a.csv.c_str());
  }
  return 0;
}

int run_validate(const std::vector<std::string>& paths) {
  std::string bad;
  for (const std::string& path : paths) {
    TriMesh mesh = read_stl_file(path);
    MeshReport rep = validate(mesh);
    std::printf("%s: %zu triangles, watertight %s, oriented %s, euler %ld, volume %.6f\n",
                path.c_str(), mesh.triangles.size(), rep.watertight ? "yes" : "no",
                rep.orientation_consistent ? "yes" : "no", rep.euler_characteristic,
                rep.signed_volume);
    if (!(rep.watertight && rep.orientation_consistent) && bad.empty()) bad = path;
  }
  if (!bad.empty())
    throw Error(ErrorCode::NonWatertight, "mesh fails validation: " + bad);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Triple gear toolkit: linked-ring gears, drive axle, paradoxical screws"};
  app.require_subcommand(1);

  OptimizeArgs opt;
  CLI::App* optimize = app.add_subcommand("optimize", "Maximize tube thickness of the linked rings");
  optimize->add_option("--out", opt.out, "Output config path");
  optimize->add_option("--tol", opt.tol, "Parameter tolerance");
  optimize->add_flag("--free-phi", opt.free_phi, "Optimize phi instead of fixing it at 0");
  optimize->add_option("--r", opt.r, "Seed ring-center radius");
  optimize->add_option("--phi", opt.phi, "Seed phi");
  optimize->add_option("--theta", opt.theta, "Seed theta");

  std::string contacts_config = "triple_gear.json";
  CLI::App* contacts = app.add_subcommand("contacts", "Print the torus contact chart");
  contacts->add_option("--config", contacts_config, "Config path");

  CarveArgs carve;
  CLI::App* carve_cmd = app.add_subcommand("carve", "Carve the three gears and export STL");
  carve_cmd->add_option("--config", carve.config, "Config path");
  carve_cmd->add_option("--out-dir", carve.out_dir, "Output directory");
  carve_cmd->add_flag("--hollow", carve.hollow, "Two-shell hollow gears");
  carve_cmd->add_flag("--ascii", carve.ascii, "ASCII STL output");
  carve_cmd->add_option("--grid-alpha", carve.grid_alpha, "Field resolution override (longitude)");
  carve_cmd->add_option("--grid-beta", carve.grid_beta, "Field resolution override (meridian)");
  carve_cmd->add_option("--sweep", carve.sweep, "Sweep steps override");

  AxleArgs axle;
  CLI::App* axle_cmd = app.add_subcommand("axle", "Carve the central drive axle and export STL");
  axle_cmd->add_option("--config", axle.config, "Config path");
  axle_cmd->add_option("--out", axle.out, "Output STL path");
  axle_cmd->add_option("--save-config", axle.save_config_path,
                       "Write the config with the carved cross-section");
  axle_cmd->add_option("--steps", axle.steps, "Carve sweep steps");
  axle_cmd->add_option("--layers", axle.layers, "Mesh layers along the axis");
  axle_cmd->add_flag("--ascii", axle.ascii, "ASCII STL output");

  ParadoxArgs paradox;
  CLI::App* paradox_cmd =
      app.add_subcommand("paradox", "Build the three same-direction screws and contact report");
  paradox_cmd->add_option("--base-radius", paradox.base_radius, "Involute base radius");
  paradox_cmd->add_option("--teeth", paradox.teeth, "Teeth per section");
  paradox_cmd->add_option("--tip-radius", paradox.tip_radius, "Tip radius");
  paradox_cmd->add_option("--pitch", paradox.pitch, "Screw pitch (advance per turn)");
  paradox_cmd->add_option("--height", paradox.height, "Screw height");
  paradox_cmd->add_option("--distance", paradox.distance,
                          "Axis spacing; 0 solves the tangent spacing");
  paradox_cmd->add_option("--samples", paradox.samples, "Contact report samples");
  paradox_cmd->add_option("--out-prefix", paradox.out_prefix, "STL output prefix");
  paradox_cmd->add_option("--csv", paradox.csv, "Contact report CSV path");
  paradox_cmd->add_flag("--ascii", paradox.ascii, "ASCII STL output");

  SimulateArgs sim;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Clearance sweep of the meshed gears over one cycle");
  simulate->add_option("--config", sim.config, "Config path");
  simulate->add_option("--steps", sim.steps, "Sweep steps");
  simulate->add_option("--offset", sim.offset, "Extra phase offset on ring 1 (radians)");
  simulate->add_option("--csv", sim.csv, "Clearance CSV path");
  simulate->add_flag("--hollow", sim.hollow, "Sweep the hollow variant");

  std::vector<std::string> validate_paths;
  CLI::App* validate_cmd = app.add_subcommand("validate", "Validate STL files");
  validate_cmd->add_option("files", validate_paths, "STL files")->required();

  try {
    app.parse(argc, argv);
    if (optimize->parsed()) return run_optimize(opt);
    if (contacts->parsed()) return run_contacts(contacts_config);
    if (carve_cmd->parsed()) return run_carve(carve);
    if (axle_cmd->parsed()) return run_axle(axle);
    if (paradox_cmd->parsed()) return run_paradox(paradox);
    if (simulate->parsed()) return run_simulate(sim);
    if (validate_cmd->parsed()) return run_validate(validate_paths);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  } catch (const tg::Error& e) {
    std::fprintf(stderr, "tg: %s\n", e.what());
    return 1;
  }
  return 0;
}
