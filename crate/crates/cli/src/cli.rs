use clap::{Arg, ArgAction, Command};

pub const SUITES: [&str; 5] = ["closed-forms", "k-oracle", "commutation", "lemma61", "quadrature"];
pub const PROBES: [&str; 6] = ["cwikel", "lemma61", "chen-sun", "theorem11", "corollary12", "family"];

fn opt(name: &'static str, help: &'static str) -> Arg {
    Arg::new(name).long(name).value_name("VALUE").help(help)
}

fn common() -> Vec<Arg> {
    vec![
        opt("seed", "Base seed of the random instances [default: 0]"),
        opt("threads", "Worker threads; LORENTZ_LAB_THREADS caps this"),
    ]
}

pub fn command() -> Command {
    Command::new("lorentz-lab")
        .version(lorentz_lab::VERSION)
        .about("Lorentz norm, K-functional and interpolation experiments on step functions")
        .arg_required_else_help(true)
        .subcommand_required(true)
        .arg(Arg::new("config").long("config").global(true).value_name("FILE").help("Key-value config file; flags win"))
        .subcommand(
            Command::new("verify")
                .about("Run a verification suite")
                .arg(Arg::new("suite").required(true).value_parser(SUITES))
                .arg(opt("out", "Also write the suite report as JSON"))
                .args(common()),
        )
        .subcommand(
            Command::new("sweep")
                .about("Classify the Minkowski inequality over a grid of (p, r)")
                .arg(opt("grid", "Grid such as p=0.25:4:0.25,r=0.25:4:0.25 [default: that grid]"))
                .arg(opt("families", "Comma-separated families (4.1,4.2,4.3,4.4) or `all` [default: all]"))
                .arg(opt("sizes", "Random instance sizes [default: 4,8,16]"))
                .arg(opt("instances", "Random instances per size [default: 24]"))
                .arg(opt("out", "Region-map CSV; the JSON sidecar takes the same stem [default: region-map.csv]"))
                .args(common()),
        )
        .subcommand(
            Command::new("probe")
                .about("Run an embedding, identity or counterexample probe")
                .arg(Arg::new("name").required(true).value_parser(PROBES))
                .arg(opt("p", "Lorentz exponent p"))
                .arg(opt("r", "Lorentz exponent r"))
                .arg(opt("q", "Interpolation exponent q"))
                .arg(opt("theta", "Interpolation parameter θ"))
                .arg(opt("regime", "cwikel regime, i or ii [default: i]"))
                .arg(opt("inner", "cwikel inner couple, l1-linf or linf-l1 [default: l1-linf]"))
                .arg(opt("p0", "Endpoint exponents p0 (one value or two comma-separated)"))
                .arg(opt("p1", "Endpoint exponents p1"))
                .arg(opt("r0", "theorem11 secondary exponents r0"))
                .arg(opt("r1", "theorem11 secondary exponents r1"))
                .arg(opt("theta0", "theorem11 inner parameter θ0"))
                .arg(opt("theta1", "theorem11 inner parameter θ1"))
                .arg(opt("sizes", "Instance sizes n (n × n grids) [default: 2,4]"))
                .arg(opt("draws", "Instances per size [default: 4]"))
                .arg(opt("samples", "K-curve samples per curve [default: 128]"))
                .arg(
                    Arg::new("strict-brute")
                        .long("strict-brute")
                        .action(ArgAction::SetTrue)
                        .help("Refuse the heuristic K search; instances too large for brute force fail"),
                )
                .arg(opt("family", "Counterexample family 4.1, 4.2, 4.3 or 4.4"))
                .arg(opt("alpha-ladder", "Family 4.1 gaps p − α [default: 0.2,0.1,0.05,0.025]"))
                .arg(opt("n-ladder", "Families 4.2 to 4.4 values of N"))
                .arg(opt("beta", "Families 4.3 and 4.4 decay β [default: 0.75 and 2.05]"))
                .arg(opt("l-factor", "Families 4.3 and 4.4 cut-off L / N [default: 16]"))
                .arg(opt("cells-per-unit", "Families 4.3 and 4.4 cells per unit length [default: 16]"))
                .arg(
                    Arg::new("refine")
                        .long("refine")
                        .action(ArgAction::SetTrue)
                        .help("Families 4.3 and 4.4: also measure the refinement delta"),
                )
                .arg(opt("out", "Output stem; writes STEM.json and STEM.csv [default: probe-NAME]"))
                .args(common()),
        )
}
