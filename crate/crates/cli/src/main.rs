use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use kclosure::action::{EnumerationBounds, Verdict};
use kclosure::campaign::{quaternion_lane_config, verify_group, verify_theorem, CampaignConfig, TheoremReport};
use kclosure::catalog::DEFAULT_CATALOG;
use kclosure::closure::{closure_chain, k_closure_by, ClosureMethod, SearchLimits};
use kclosure::coloring::orbit_coloring;
use kclosure::input::GroupSpecFile;
use kclosure::lemmas::{lemma_suite, CheckStatus, SuiteOptions};
use kclosure::structure::{abelian_invariants, is_nilpotent, prime_divisors, sylow};
use kclosure::witness::{run_witness, WitnessOptions};
use kclosure::{Constructor, Error, PermGroup};

const EXIT_FALSIFIED: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_NOT_APPLICABLE: u8 = 4;

#[derive(Parser)]
#[command(name = "kclosure", version, about = "k-closures of finite permutation groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Clone)]
struct Common {
    /// Constructor string (cyclic:n, abelian:d1,..,dm, heisenberg:p, modular:p, q8, sym:n) or a JSON group file.
    #[arg(long)]
    group: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = kclosure::DEFAULT_ORDER_CAP)]
    order_cap: usize,
    #[arg(long, default_value_t = kclosure::coloring::DEFAULT_TUPLE_CAP)]
    tuple_cap: usize,
    #[arg(long, default_value_t = 120)]
    budget_seconds: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the k-closure of a group on its given action.
    Closure {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: usize,
        /// backtrack, bruteforce or sylow
        #[arg(long, default_value = "backtrack")]
        method: String,
        /// Largest degree the backtracking search accepts.
        #[arg(long, default_value_t = 32)]
        max_degree: usize,
        /// Also print the closures for every arity from 1 to k.
        #[arg(long)]
        chain: bool,
    },
    /// Orbits of the group on k-tuples.
    Orbits {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: usize,
    },
    /// Bounded search for a faithful action with a strict k-closure.
    CheckTotal {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 24)]
        max_degree: usize,
        #[arg(long, default_value_t = 4)]
        max_orbits: usize,
        #[arg(long)]
        allow_duplicates: bool,
    },
    /// Build the explicit witness action and permutation, and verify it.
    Witness {
        #[command(flatten)]
        common: Common,
        /// Comma-separated arities.
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        k: Vec<usize>,
        /// Skip the full closure computation on the witness action.
        #[arg(long)]
        no_closure: bool,
    },
    /// Structural data: order, nilpotency, invariant factors.
    Invariants {
        #[command(flatten)]
        common: Common,
    },
    /// Property checks on the group's actions.
    Lemmas {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        k: Vec<usize>,
        #[arg(long, default_value_t = 12)]
        max_degree: usize,
        #[arg(long, default_value_t = 2)]
        max_orbits: usize,
    },
    /// Expected against observed verdicts over a catalog of groups.
    VerifyTheorem {
        /// Groups to run (repeatable); defaults to the built-in catalog.
        #[arg(long)]
        group: Vec<String>,
        #[arg(long, default_value_t = 3)]
        k_max: usize,
        #[arg(long, default_value_t = 24)]
        max_degree: usize,
        #[arg(long, default_value_t = 4)]
        max_orbits: usize,
        #[arg(long)]
        allow_duplicates: bool,
        /// Run the k = 2 lane for nilpotent groups of any parity instead.
        #[arg(long)]
        k2_lane: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = kclosure::DEFAULT_ORDER_CAP)]
        order_cap: usize,
        #[arg(long, default_value_t = kclosure::coloring::DEFAULT_TUPLE_CAP)]
        tuple_cap: usize,
        #[arg(long, default_value_t = 120)]
        budget_seconds: u64,
    },
}

/// Failure of a subcommand, carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            _ if e.is_resource_limit() => EXIT_INCONCLUSIVE,
            Error::NotApplicable(_) => EXIT_NOT_APPLICABLE,
            Error::Internal(_) => EXIT_FALSIFIED,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

fn load_group(spec: &str, order_cap: usize) -> Result<(String, PermGroup), Failure> {
    if Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec).map_err(|e| input_error(format!("{spec}: {e}")))?;
        let file = GroupSpecFile::parse(&text)?;
        let g = file.build(order_cap)?;
        return Ok((file.name().to_string(), g));
    }
    let c: Constructor = spec.parse()?;
    Ok((c.to_string(), c.build(order_cap)?))
}

fn limits(common: &Common, max_degree: usize) -> SearchLimits {
    SearchLimits {
        max_degree,
        tuple_cap: common.tuple_cap,
        order_cap: common.order_cap,
        ..Default::default()
    }
    .with_budget(Duration::from_secs(common.budget_seconds))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| input_error(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Closure { common, k, method, max_degree, chain } => {
            let method: ClosureMethod = method.parse()?;
            let (name, g) = load_group(&common.group, common.order_cap)?;
            let lim = limits(&common, max_degree);
            let results = if chain {
                if method != ClosureMethod::Backtrack {
                    return Err(input_error("--chain uses the backtrack method"));
                }
                closure_chain(&g, k, &lim)?
            } else {
                vec![k_closure_by(&g, k, method, &lim)?]
            };
            let summaries: Vec<_> = results.iter().map(|r| r.summary()).collect();
            let text = match common.format {
                Format::Json if chain => to_json(&summaries),
                Format::Json => to_json(&summaries[0]),
                Format::Text => {
                    let mut t = String::new();
                    for s in &summaries {
                        t += &format!(
                            "group {name} degree {} k {}: order {} (input {}), strict = {}, method {:?}\n",
                            s.degree, s.arity, s.order, s.input_order, s.strict, s.method
                        );
                        t += &format!(
                            "  basic orbits {:?}; {} nodes, {} searches, {:.1} ms\n",
                            s.basic_orbit_sizes, s.stats.nodes, s.stats.searches, s.stats.elapsed_ms
                        );
                        for gen in &s.new_generators {
                            t += &format!("  new generator {gen}\n");
                        }
                    }
                    t
                }
            };
            emit(&common.out, &text)?;
            Ok(0)
        }
        Command::Orbits { common, k } => {
            let (name, g) = load_group(&common.group, common.order_cap)?;
            let coloring = orbit_coloring(&g, k, common.tuple_cap)?;
            let sizes = coloring.orbit_sizes();
            let reps: Vec<Vec<usize>> = (0..coloring.num_colors())
                .map(|c| {
                    let idx = coloring.colors().iter().position(|&x| x as usize == c).expect("nonempty");
                    coloring.indexer().tuple(idx).points().iter().map(|p| p + 1).collect()
                })
                .collect();
            let text = match common.format {
                Format::Json => to_json(&serde_json::json!({
                    "group": name, "degree": g.degree(), "k": k,
                    "num_orbits": coloring.num_colors(), "orbit_sizes": sizes, "representatives": reps,
                })),
                Format::Text => {
                    let mut t = format!("group {name} degree {} k {k}: {} orbits\n", g.degree(), coloring.num_colors());
                    for (r, s) in reps.iter().zip(&sizes) {
                        t += &format!("  {r:?} size {s}\n");
                    }
                    t
                }
            };
            emit(&common.out, &text)?;
            Ok(0)
        }
        Command::CheckTotal { common, k, max_degree, max_orbits, allow_duplicates } => {
            let (name, g) = load_group(&common.group, common.order_cap)?;
            let config = CampaignConfig {
                k_min: k,
                k_max: k,
                bounds: EnumerationBounds { max_degree, max_components: max_orbits, allow_duplicates, ..Default::default() },
                limits: limits(&common, 32),
                budget: Duration::from_secs(common.budget_seconds),
                witness_full_closure: false,
                sylow_lane: false,
                lane: "check-total".into(),
            };
            let row = verify_group(&name, &g, &config)?;
            let report = TheoremReport { rows: vec![row] };
            let text = match common.format {
                Format::Json => report.to_jsonl(),
                Format::Text => report.to_table(),
            };
            emit(&common.out, &text)?;
            Ok(match report.rows[0].cells[0].observed {
                Verdict::Falsified => EXIT_FALSIFIED,
                Verdict::Inconclusive => EXIT_INCONCLUSIVE,
                Verdict::NotApplicable => EXIT_NOT_APPLICABLE,
                _ => 0,
            })
        }
        Command::Witness { common, k, no_closure } => {
            if k.is_empty() || k.contains(&0) {
                return Err(input_error("--k needs positive arities"));
            }
            let (name, g) = load_group(&common.group, common.order_cap)?;
            let options = WitnessOptions { full_closure: !no_closure, limits: limits(&common, 64) };
            let (data, action, report) = run_witness(&g, &k, &options)?;
            let text = match common.format {
                Format::Json => to_json(&report),
                Format::Text => {
                    let mut t = format!(
                        "group {name}: p = {}, |C_G(H)| = {}, Omega degree {} (expected {})\n",
                        report.p,
                        data.centralizer.order(),
                        report.omega_degree,
                        report.expected_degree
                    );
                    t += &format!("  a = {}, c = {}, b = {}\n", report.a, report.c, report.b);
                    t += &format!("  theta = {}\n  labeled {}\n", report.theta, action.format_labeled(&kclosure::parse_cycles(&report.theta, action.degree())?));
                    t += &format!("  theta outside G: {}\n", report.theta_not_in_g);
                    for s in &report.stabilizers {
                        t += &format!("  stabilizer of {} = {}: {}\n", s.point, s.expected, s.holds);
                    }
                    t += &format!("  <c> meets <c^b> trivially: {}\n", report.c_meet_cb_trivial);
                    for a in &report.arities {
                        t += &format!(
                            "  k = {}: theta preserves orbits {}, closure order {}\n",
                            a.k,
                            a.theta_preserves_orbits,
                            a.closure_order.as_deref().or(a.closure_error.as_deref()).unwrap_or("-")
                        );
                    }
                    t += &format!("  outcome {}\n", report.outcome);
                    for f in &report.failures {
                        t += &format!("  failed: {f}\n");
                    }
                    t
                }
            };
            emit(&common.out, &text)?;
            Ok(if report.outcome == Verdict::Falsified { EXIT_FALSIFIED } else { 0 })
        }
        Command::Invariants { common } => {
            let (name, g) = load_group(&common.group, common.order_cap)?;
            let invariants = if g.is_abelian() { Some(abelian_invariants(&g)?.factors) } else { None };
            let nilpotent = is_nilpotent(&g);
            let sylows: Vec<(u64, usize)> = if nilpotent {
                prime_divisors(g.order() as u64).into_iter().map(|p| Ok((p, sylow(&g, p)?.order()))).collect::<Result<_, Error>>()?
            } else {
                Vec::new()
            };
            let value = serde_json::json!({
                "group": name, "degree": g.degree(), "order": g.order(), "abelian": g.is_abelian(),
                "nilpotent": nilpotent, "exponent": g.exponent(), "center_order": g.center().order(),
                "invariant_factors": invariants, "n_g": invariants.as_ref().map(|f| f.len()),
                "sylow_orders": sylows, "transitive": g.is_transitive(),
            });
            let text = match common.format {
                Format::Json => to_json(&value),
                Format::Text => value
                    .as_object()
                    .expect("object")
                    .iter()
                    .map(|(k, v)| format!("{k}: {v}\n"))
                    .collect(),
            };
            emit(&common.out, &text)?;
            Ok(0)
        }
        Command::Lemmas { common, k, max_degree, max_orbits } => {
            let (name, g) = load_group(&common.group, common.order_cap)?;
            let options = SuiteOptions {
                k_values: k,
                bounds: EnumerationBounds { max_degree, max_components: max_orbits, ..Default::default() },
                limits: limits(&common, 32),
            };
            let checks = lemma_suite(&name, &g, &options)?;
            let text = match common.format {
                Format::Json => to_json(&checks),
                Format::Text => checks
                    .iter()
                    .map(|c| format!("{:<8} {:<24} {:<12} {}\n", format!("{:?}", c.status).to_lowercase(), c.property, c.action, c.detail))
                    .collect(),
            };
            emit(&common.out, &text)?;
            Ok(if checks.iter().any(|c| c.status == CheckStatus::Fail) { EXIT_FALSIFIED } else { 0 })
        }
        Command::VerifyTheorem {
            group,
            k_max,
            max_degree,
            max_orbits,
            allow_duplicates,
            k2_lane,
            format,
            out,
            order_cap,
            tuple_cap,
            budget_seconds,
        } => {
            let names: Vec<String> = if group.is_empty() { DEFAULT_CATALOG.iter().map(|s| s.to_string()).collect() } else { group };
            let catalog = names.iter().map(|n| load_group(n, order_cap)).collect::<Result<Vec<_>, _>>()?;
            let base = if k2_lane { quaternion_lane_config() } else { CampaignConfig { k_max, ..Default::default() } };
            if !k2_lane && k_max < 2 {
                return Err(input_error("--k-max must be at least 2"));
            }
            let config = CampaignConfig {
                bounds: EnumerationBounds {
                    max_degree: if k2_lane { base.bounds.max_degree.min(max_degree) } else { max_degree },
                    max_components: if k2_lane { base.bounds.max_components.min(max_orbits) } else { max_orbits },
                    allow_duplicates,
                    ..Default::default()
                },
                limits: SearchLimits { tuple_cap, order_cap, ..Default::default() },
                budget: Duration::from_secs(budget_seconds),
                ..base
            };
            let started = Instant::now();
            let report = verify_theorem(&catalog, &config)?;
            let text = match format {
                Format::Json => report.to_jsonl(),
                Format::Text => format!("{}elapsed {:.1} s\n", report.to_table(), started.elapsed().as_secs_f64()),
            };
            emit(&out, &text)?;
            Ok(report.exit_code() as u8)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
