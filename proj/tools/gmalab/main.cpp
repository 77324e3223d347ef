#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
    using namespace gmalab::cli;

    CLI::App app{"gmalab: generalized Monge-Ampere and deformed "
                 "Hermitian-Yang-Mills laboratory on flat complex tori"};
    app.require_subcommand(1);

    OpArgs op;
    CLI::App* op_cmd = app.add_subcommand(
        "op", "Evaluate operator values for one eigenvalue list");
    op_cmd->add_option("--lambda", op.lambda, "comma-separated eigenvalues")
        ->required();
    op_cmd->add_flag("--sym", op.sym,
                     "emit the elementary symmetric values S_0..S_n");
    op_cmd->add_flag("--gma", op.gma,
                     "emit P^l, Q and positivity-cone data (needs --c)");
    op_cmd->add_flag("--dhym", op.dhym,
                     "emit Lagrangian phases, truncations and the complex slope");
    op_cmd->add_option("--c", op.c, "comma-separated c_1..c_{n-1}");
    op_cmd->add_option("--c0", op.c0, "constant term c_0 (default 0)");
    op_cmd->add_option("--c0-floor", op.c0_floor,
                       "admissible floor for c_0 (default 0)");
    op_cmd->add_option("--theta", op.theta, "phase window lower bound");
    op_cmd->add_option("--Theta", op.Theta, "phase window upper bound");

    ConeArgs cone;
    CLI::App* cone_cmd = app.add_subcommand(
        "cone", "Cone membership queries and the randomized structure probe");
    cone_cmd->add_flag("--gma", cone.gma, "query the closed positivity cone");
    cone_cmd->add_flag("--dhym", cone.dhym, "query the phase window cone");
    cone_cmd->add_option("--lambda", cone.lambda,
                         "comma-separated eigenvalues to test");
    cone_cmd->add_option("--c", cone.c, "comma-separated c_1..c_{n-1}");
    cone_cmd->add_option("--c0", cone.c0, "constant term c_0 (default 0)");
    cone_cmd->add_option("--c0-floor", cone.c0_floor,
                         "admissible floor for c_0 (default 0)");
    cone_cmd->add_option("--theta", cone.theta, "phase window lower bound");
    cone_cmd->add_option("--Theta", cone.Theta, "phase window upper bound");
    cone_cmd->add_flag("--open", cone.open_cone,
                       "test the open window instead of its closure");
    cone_cmd->add_option("--probe", cone.probe,
                         "run the randomized monotonicity/convexity probe "
                         "for operator P or Q instead of a point query");
    cone_cmd->add_option("--n", cone.dimension, "probe: spectrum size");
    cone_cmd->add_option("--ell", cone.ell, "probe: level of P^l");
    cone_cmd->add_option("--samples", cone.samples, "probe: sample count");
    cone_cmd->add_option("--seed", cone.seed, "probe: RNG seed");

    std::string flow_config;
    CLI::App* flow_cmd =
        app.add_subcommand("flow", "Integrate one configured flow run");
    flow_cmd->add_option("config", flow_config, "run configuration JSON file")
        ->required();

    std::string sweep_config;
    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep", "Run a deformation schedule toward the boundary case");
    sweep_cmd->add_option("config", sweep_config, "run configuration JSON file")
        ->required();

    std::string props_suite;
    int props_samples = 1000;
    std::uint64_t props_seed = 0;
    CLI::App* props_cmd =
        app.add_subcommand("props", "Run one registered property suite");
    props_cmd->add_option("--suite", props_suite, "suite identifier")
        ->required();
    props_cmd->add_option("--samples", props_samples,
                          "number of random samples (default 1000)");
    props_cmd->add_option("--seed", props_seed, "RNG seed (default 0)");

    IntersectArgs intersect;
    CLI::App* intersect_cmd = app.add_subcommand(
        "intersect", "Constant-background feasibility report");
    intersect_cmd
        ->add_option("--chi", intersect.chi,
                     "background matrix; rows ';', entries ',', complex re:im")
        ->required();
    intersect_cmd->add_option("--omega", intersect.omega,
                              "metric matrix (default: identity)");
    intersect_cmd->add_option("--c", intersect.c,
                              "comma-separated c_1..c_{n-1}");
    intersect_cmd->add_option("--c0-floor", intersect.c0_floor,
                              "admissible floor for c_0 (default 0)");
    intersect_cmd->add_flag("--pencil", intersect.pencil,
                            "allow non-commuting backgrounds via the pencil "
                            "reduction");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadInput;
    }

    if (op_cmd->parsed()) return cmd_op(op);
    if (cone_cmd->parsed()) return cmd_cone(cone);
    if (flow_cmd->parsed()) return cmd_flow(flow_config);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_config);
    if (props_cmd->parsed()) return cmd_props(props_suite, props_samples, props_seed);
    if (intersect_cmd->parsed()) return cmd_intersect(intersect);
    return kExitBadInput;
}
