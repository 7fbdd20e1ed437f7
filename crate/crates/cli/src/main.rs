use std::fs;
use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use boolnet::budget::{node_limit_from_env, NodeBudget};
use boolnet::fixtures;
use boolnet::modify::decide_with;
use boolnet::reductions::{brute_force_vc, build_gadget, check_equivalence, cover_to_solution, GadgetSpec, Graph3B, Variant};
use boolnet::separation::decide_property_with;
use boolnet::{
    apply_plan, check_relation, complete_region, synthesize, validate_region, Atom, BooleanNet, BooleanType, Kind, Mode,
    Property, SynthesisError, TransitionSystem,
};

const YES: u8 = 0;
const NO: u8 = 1;
const USAGE: u8 = 2;
const BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "boolnet", version, about = "Boolean net synthesis and modification")]
struct Cli {
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plan,
    Dot,
    Ts,
    Net,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide a separation property and print a witness.
    Check {
        #[arg(long, value_parser = parse_prop)]
        prop: Property,
        #[arg(long = "type", value_parser = parse_type)]
        ty: BooleanType,
        ts: PathBuf,
    },
    /// Synthesize a net implementing a transition system.
    Synth {
        #[arg(long, value_parser = parse_mode)]
        mode: Mode,
        #[arg(long = "type", value_parser = parse_type)]
        ty: BooleanType,
        #[arg(long, value_enum, default_value = "net")]
        format: Format,
        ts: PathBuf,
    },
    /// Print the reachability graph of a net.
    Simulate {
        #[arg(long, value_enum, default_value = "ts")]
        format: Format,
        /// Also check the graph against this system under `--mode`.
        #[arg(long, requires = "mode")]
        against: Option<PathBuf>,
        #[arg(long, value_parser = parse_mode)]
        mode: Option<Mode>,
        net: PathBuf,
    },
    /// Find a cheapest modification within budget.
    Modify {
        #[arg(long, value_parser = parse_kind)]
        kind: Kind,
        #[arg(long, value_parser = parse_mode)]
        mode: Mode,
        #[arg(long)]
        kappa: usize,
        #[arg(long = "type", value_parser = parse_type)]
        ty: BooleanType,
        #[arg(long, value_enum, default_value = "plan")]
        format: Format,
        ts: PathBuf,
    },
    /// Build the gadget system for a graph.
    Gadget {
        #[arg(long, value_parser = parse_kind)]
        problem: Kind,
        #[arg(long, value_parser = parse_variant, default_value = "directed")]
        variant: Variant,
        #[arg(long)]
        lambda: usize,
        /// `plan` prints the modification built from the least vertex cover.
        #[arg(long, value_enum, default_value = "ts")]
        format: Format,
        /// Compare the solver with the vertex-cover oracle for this type.
        #[arg(long = "verify-type", value_parser = parse_type, requires = "mode")]
        verify_type: Option<BooleanType>,
        #[arg(long, value_parser = parse_mode)]
        mode: Option<Mode>,
        graph: PathBuf,
    },
    /// Brute-force vertex cover of size at most lambda.
    Vc {
        #[arg(long)]
        lambda: usize,
        graph: PathBuf,
    },
    /// Run the worked examples, or print one of them.
    Fixtures {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(fixtures::NAMES))]
        show: Option<String>,
    },
}

fn parse_type(s: &str) -> Result<BooleanType, String> {
    BooleanType::parse(s).map_err(|e| e.to_string())
}

fn parse_prop(s: &str) -> Result<Property, String> {
    Property::parse(s).ok_or_else(|| format!("expected ssp, essp or both, got `{s}`"))
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    Mode::parse(s).ok_or_else(|| format!("expected embed, langsim or realize, got `{s}`"))
}

fn parse_kind(s: &str) -> Result<Kind, String> {
    Kind::parse(s).ok_or_else(|| format!("expected split, edge, event or state, got `{s}`"))
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    Variant::parse(s).ok_or_else(|| format!("expected directed or bidirectional, got `{s}`"))
}

/// A failed command: exit code and one-line diagnostic.
struct Fail(u8, String);

fn usage<E: std::fmt::Display>(what: &Path) -> impl FnOnce(E) -> Fail + '_ {
    move |e| Fail(USAGE, format!("{}: {e}", what.display()))
}

fn read(path: &Path) -> Result<String, Fail> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(usage(path))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(usage(path))
}

fn read_ts(path: &Path) -> Result<TransitionSystem, Fail> {
    TransitionSystem::parse(&read(path)?).map_err(usage(path))
}

fn read_graph(path: &Path) -> Result<Graph3B, Fail> {
    Graph3B::parse(&read(path)?).map_err(usage(path))
}

fn budget_exceeded(limit: u64) -> Fail {
    Fail(BUDGET, format!("search budget of {limit} nodes exceeded"))
}

fn wrong_format(f: Format) -> Fail {
    let name = f.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    Fail(USAGE, format!("format `{name}` is not available for this command"))
}

/// Output text plus exit code.
type Outcome = Result<(String, u8), Fail>;

fn run(cmd: Cmd) -> Outcome {
    match cmd {
        Cmd::Check { prop, ty, ts } => {
            let a = read_ts(&ts)?;
            let budget = NodeBudget::new(node_limit_from_env());
            match decide_property_with(&a, ty, prop, &budget).map_err(|e| budget_exceeded(e.0))? {
                Ok(w) => Ok((format!("yes: {} regions\n{}", w.regions.len(), w.dump(&a)), YES)),
                Err(atom) => Ok((format!("no: atom {} is not {ty}-solvable\n", atom.display(&a)), NO)),
            }
        }
        Cmd::Synth { mode, ty, format, ts } => {
            let a = read_ts(&ts)?;
            match synthesize(&a, ty, mode) {
                Ok(r) => {
                    let text = match format {
                        Format::Net => r.net.serialize(),
                        Format::Dot => r.net.to_dot(),
                        f => return Err(wrong_format(f)),
                    };
                    Ok((text, YES))
                }
                Err(SynthesisError::Unsolvable(atom, _)) => {
                    Ok((format!("no: atom {atom} is not {ty}-solvable\n"), NO))
                }
                Err(e) => Err(Fail(NO, e.to_string())),
            }
        }
        Cmd::Simulate {
            format,
            against,
            mode,
            net,
        } => {
            let n = BooleanNet::parse(&read(&net)?, false).map_err(usage(&net))?;
            let rg = n.reachability_graph().map_err(usage(&net))?;
            let mut text = match format {
                Format::Ts => rg.ts.serialize(),
                Format::Dot => rg.ts.to_dot(),
                f => return Err(wrong_format(f)),
            };
            let mut code = YES;
            if let (Some(path), Some(mode)) = (against, mode) {
                let a = read_ts(&path)?;
                let ok = check_relation(&a, &rg.ts, mode).map_err(usage(&path))?;
                if !ok {
                    code = NO;
                }
                text = format!("# {mode}: {}\n{text}", if ok { "yes" } else { "no" });
            }
            Ok((text, code))
        }
        Cmd::Modify {
            kind,
            mode,
            kappa,
            ty,
            format,
            ts,
        } => {
            let a = read_ts(&ts)?;
            let budget = NodeBudget::new(node_limit_from_env());
            let plan = decide_with(&a, ty, kind, mode, kappa, &budget).map_err(|e| budget_exceeded(e.0))?;
            let Some(plan) = plan else {
                return Ok((format!("no: no {kind} plan within budget {kappa}\n"), NO));
            };
            let text = match format {
                Format::Plan => plan.dump(&a),
                Format::Ts | Format::Dot => {
                    let b = apply_plan(&a, &plan).map_err(|e| Fail(NO, e.to_string()))?;
                    if format == Format::Ts {
                        b.serialize()
                    } else {
                        b.to_dot()
                    }
                }
                f => return Err(wrong_format(f)),
            };
            Ok((text, YES))
        }
        Cmd::Gadget {
            problem,
            variant,
            lambda,
            format,
            verify_type,
            mode,
            graph,
        } => {
            let g = read_graph(&graph)?;
            let spec = GadgetSpec {
                problem,
                variant,
                lambda,
            };
            let (a, kappa) = build_gadget(&g, spec).map_err(usage(&graph))?;
            if let (Some(ty), Some(mode)) = (verify_type, mode) {
                let budget = NodeBudget::new(node_limit_from_env());
                let r = check_equivalence(&g, spec, ty, mode, &budget).map_err(|e| budget_exceeded(e.0))?;
                let text = format!(
                    "kappa {kappa}\ncover {}\nmodification {}\ncover plan {}\n{}\n",
                    if r.cover.is_some() { "yes" } else { "no" },
                    if r.plan.is_some() { "yes" } else { "no" },
                    match r.cover_plan_ok {
                        Some(true) => "sound",
                        Some(false) => "unsound",
                        None => "n/a",
                    },
                    if r.agrees() { "agree" } else { "disagree" },
                );
                let ok = r.agrees() && r.cover_plan_ok != Some(false);
                return Ok((text, if ok { YES } else { NO }));
            }
            let text = match format {
                Format::Ts => format!("# kappa {kappa}\n{}", a.serialize()),
                Format::Dot => a.to_dot(),
                Format::Plan => match brute_force_vc(&g, lambda) {
                    Some(cover) => cover_to_solution(&g, spec, &cover).map_err(usage(&graph))?.dump(&a),
                    None => return Ok((format!("no: no vertex cover of size {lambda}\n"), NO)),
                },
                f => return Err(wrong_format(f)),
            };
            Ok((text, YES))
        }
        Cmd::Vc { lambda, graph } => {
            let g = read_graph(&graph)?;
            match brute_force_vc(&g, lambda) {
                Some(cover) => {
                    let names: Vec<&str> = cover.iter().map(|&v| g.vertices()[v].as_str()).collect();
                    Ok((format!("{}\n", names.join(" ")), YES))
                }
                None => Ok((format!("no: no vertex cover of size {lambda}\n"), NO)),
            }
        }
        Cmd::Fixtures { show: Some(name) } => Ok((fixtures::render(&name).expect("checked by clap"), YES)),
        Cmd::Fixtures { show: None } => {
            let checks = golden_checks();
            let mut text = String::new();
            for (name, ok) in &checks {
                text.push_str(&format!("{} {name}\n", if *ok { "ok  " } else { "FAIL" }));
            }
            let all = checks.iter().all(|c| c.1);
            Ok((text, if all { YES } else { NO }))
        }
    }
}

fn golden_checks() -> Vec<(&'static str, bool)> {
    let ty = fixtures::nop_inp_swap();
    let a = fixtures::chain_a();
    let b = fixtures::split_b();
    let mut out = Vec::new();
    let a_fails = boolnet::decide_property(&a, ty, Property::Ssp)
        .err()
        .is_some_and(|x| x.display(&a).to_string() == "(t0,t2)");
    out.push(("A fails the SSP at (t0,t2)", a_fails));
    let e_fails = boolnet::decide_property(&a, ty, Property::Essp)
        .err()
        .is_some_and(|x| x.display(&a).to_string() == "(a,t2)");
    out.push(("A fails the ESSP at (a,t2)", e_fails));
    let two = boolnet::decide_property(&b, ty, Property::Both).is_ok_and(|w| w.regions.len() == 2);
    out.push(("B has a witness of two regions", two));
    let rg = synthesize(&b, ty, Mode::Realize).ok().and_then(|r| r.net.reachability_graph().ok());
    let iso = rg.is_some_and(|rg| rg.ts.serialize().ends_with("initial (1,0)\narc (1,0) a (0,1)\narc (0,1) a' (0,0)\n"));
    out.push(("synthesized net for B realizes B", iso));
    let n = fixtures::two_place_net().reachability_graph().ok();
    out.push((
        "N has reachability graph B",
        n.is_some_and(|rg| check_relation(&b, &rg.ts, Mode::Realize).unwrap_or(false)),
    ));
    let g = fixtures::example_graph();
    out.push((
        "G has cover {v0,v2} and none of size 1",
        brute_force_vc(&g, 2) == Some(vec![0, 2]) && brute_force_vc(&g, 1).is_none(),
    ));
    let bg = fixtures::example_b_g();
    let regions_ok = fixtures::decorated_regions().iter().all(|f| {
        let e = bg.event_id(f.event).expect("fixture event");
        let valid = validate_region(&bg, ty, &f.region).unwrap_or(false);
        let same = complete_region(&bg, ty, false, &f.region.sig).as_ref() == Some(&f.region);
        valid
            && same
            && (0..bg.num_states())
                .filter(|&s| !bg.enabled(s, e) && !f.region.sup[s])
                .all(|s| f.region.solves(Atom::Essp(e, s)))
    });
    out.push(("regions R_0..R_3 on B_G are valid", regions_ok));
    out
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { YES });
        }
    };
    let out = cli.out;
    match run(cli.cmd) {
        Ok((text, code)) => {
            match &out {
                Some(path) => {
                    if let Err(e) = fs::write(path, &text) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(USAGE);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(code)
        }
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
