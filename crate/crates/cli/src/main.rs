use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_traits::Signed;
use pebbling::families::{Family, FamilySpec};
use pebbling::lattice;
use pebbling::properties::{class0, graham_check, two_pebbling};
use pebbling::repro::{self, ReproConfig};
use pebbling::thresholds::{threshold_scan, Model, ScanConfig};
use pebbling::{lemke, par, solvable, Error, Graph, Options, PebbleDistribution, SolveMode, Target};

#[derive(Parser)]
#[command(name = "pebbling", version, about = "Graph pebbling, zero-sum subsets, and multiset lattices")]
struct Cli {
    /// Worker threads for searches and Monte Carlo runs.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GraphSource {
    /// Graph file: "n m" on the first line, then one "u v" edge per line.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Family spec such as cycle:6, grid:2,3 or petersen.
    #[arg(long)]
    family: Option<String>,
}

impl GraphSource {
    fn load(&self) -> Result<Graph, Failure> {
        match (&self.graph, &self.family) {
            (Some(path), _) => Ok(Graph::from_text(&read(path)?)?),
            (_, Some(spec)) => Ok(spec.parse::<FamilySpec>()?.generate()?),
            _ => Err(Failure::Usage("give --graph or --family".into())),
        }
    }
}

#[derive(Args)]
struct SearchArgs {
    /// Pebbles required on the root.
    #[arg(long, default_value_t = 1)]
    k: u32,
    /// Pebbles spent per step.
    #[arg(long, default_value_t = 2)]
    p: u32,
    /// Node budget for the exact search.
    #[arg(long)]
    budget: Option<u64>,
}

impl SearchArgs {
    fn options(&self) -> Options {
        let o = Options::default().with_k(self.k).with_p(self.p);
        match self.budget {
            Some(b) => o.with_budget(b),
            None => o,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a distribution can reach a root and print a witness.
    Solve {
        #[command(flatten)]
        source: GraphSource,
        /// Comma-separated pebble counts, one per vertex.
        #[arg(long, conflicts_with = "dist_file", required_unless_present = "dist_file")]
        dist: Option<String>,
        #[arg(long)]
        dist_file: Option<PathBuf>,
        /// Target vertex; every vertex when omitted.
        #[arg(long)]
        root: Option<usize>,
        /// unrestricted, greedy, semigreedy or tree.
        #[arg(long, default_value = "unrestricted")]
        mode: SolveMode,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Exact pebbling number f(G), or f(G, r) with --root.
    Number {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long)]
        root: Option<usize>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Closed-form pebbling number of a family member, or "unknown".
    Family {
        spec: String,
        /// Per-dimension step costs for grids.
        #[arg(long, value_delimiter = ',')]
        pbar: Option<Vec<u32>>,
    },
    /// Exact 2-pebbling property test.
    TwoPebbling {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Whether f(G) = n(G).
    Class0 {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Compare f(G1 □ G2) with f_p1(G1) · f_p2(G2).
    Graham {
        #[arg(long)]
        g1: String,
        #[arg(long)]
        g2: String,
        #[arg(long, default_value_t = 2)]
        p1: u32,
        #[arg(long, default_value_t = 2)]
        p2: u32,
    },
    /// Estimate threshold curves and the growth exponent of t_half.
    Threshold {
        /// Family name: complete, star, wheel, path, or any generator family.
        #[arg(long)]
        family: String,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 2000)]
        trials: u64,
        /// Trials for the final probes; defaults to --trials.
        #[arg(long)]
        final_trials: Option<u64>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        target: f64,
        /// Curve CSV destination.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Summary CSV (n, t_half) destination.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Zero-sum subsets with bounded gcd-sum.
    Lemke {
        #[command(subcommand)]
        command: LemkeCommand,
    },
    /// Bounded multiset lattice tools.
    Lattice {
        #[command(subcommand)]
        command: LatticeCommand,
    },
    /// Run the acceptance suite and print a pass/fail table.
    Repro {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 2000)]
        trials: u64,
        #[arg(long)]
        skip_heavy: bool,
        /// Directory for the CSV outputs.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum LemkeCommand {
    /// Find I with q | Σ x_i and Σ gcd(q, x_i) ≤ q.
    Solve {
        #[arg(long)]
        q: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        xs: Vec<u64>,
        /// Print the step certificate.
        #[arg(long)]
        certificate: bool,
    },
}

#[derive(Subcommand)]
enum LatticeCommand {
    /// Shadow size of a family against the colex lower bound.
    Shadow {
        #[arg(long)]
        w: u64,
        #[arg(long)]
        b: u32,
        /// Comma-separated 0-based colex ranks.
        #[arg(long, value_delimiter = ',', conflicts_with = "family_file", required_unless_present = "family_file")]
        family: Option<Vec<u128>>,
        /// One colex rank per line.
        #[arg(long)]
        family_file: Option<PathBuf>,
    },
    /// p(F)^(b−1) − p(Shad F)^b for the segment ending at b copies of symbol s.
    Supernormal {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        b: u32,
        #[arg(long)]
        s: u64,
    },
    /// Check the real-parameter shadow bound on every colex segment.
    Genlov {
        #[arg(long)]
        w: u64,
        #[arg(long)]
        b: u32,
        /// Largest number of symbols.
        #[arg(long)]
        nmax: u64,
    },
}

enum Failure {
    Usage(String),
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

/// Exit status for a finished computation: 0, or 1 when a property failed.
type Verdict = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let jobs = cli.jobs;
    match par::with_jobs(jobs, move || run(cli.command)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e @ Error::ResourceLimit { .. })) => {
            eprintln!("{e}");
            ExitCode::from(3)
        }
        Err(Failure::Lib(e @ Error::Internal(_))) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Verdict {
    match command {
        Command::Solve { source, dist, dist_file, root, mode, search } => {
            let g = source.load()?;
            let text = match (dist, dist_file) {
                (Some(d), _) => d,
                (_, Some(path)) => read(&path)?,
                _ => return Err(Failure::Usage("give --dist or --dist-file".into())),
            };
            let d = PebbleDistribution::parse(&text)?;
            let target = root.map_or(Target::AllRoots, Target::Root);
            let s = solvable(&g, &d, target, &search.options().with_mode(mode))?;
            if s.solvable {
                println!("SOLVABLE");
            } else {
                match s.failed_root {
                    Some(r) if root.is_none() => println!("UNSOLVABLE ({}) for root {r}", mode.name()),
                    _ => println!("UNSOLVABLE ({})", mode.name()),
                }
            }
            for (r, seq) in &s.witnesses {
                let moves: Vec<String> = seq.moves().iter().map(|m| m.to_string()).collect();
                println!("root {r}: {}", moves.join(" "));
            }
            Ok(true)
        }
        Command::Number { source, root, search } => {
            let g = source.load()?;
            let opts = search.options().with_symmetry(root.is_none());
            println!("{}", pebbling::pebbling_number(&g, root, &opts)?);
            Ok(true)
        }
        Command::Family { spec, pbar } => {
            let spec: FamilySpec = spec.parse()?;
            println!("{}", spec.formula(pbar.as_deref())?);
            Ok(true)
        }
        Command::TwoPebbling { source, budget } => {
            let g = source.load()?;
            let r = two_pebbling(&g, &budget_options(budget))?;
            report("2-pebbling property", r.holds, r.method.name(), r.witness);
            Ok(r.holds)
        }
        Command::Class0 { source, budget } => {
            let g = source.load()?;
            let r = class0(&g, &budget_options(budget))?;
            report("Class 0", r.holds, r.method.name(), r.witness);
            Ok(r.holds)
        }
        Command::Graham { g1, g2, p1, p2 } => {
            let g1 = g1.parse::<FamilySpec>()?.generate()?;
            let g2 = g2.parse::<FamilySpec>()?.generate()?;
            let c = graham_check(&g1, &g2, p1, p2, &Options::default())?;
            println!("f(G1xG2)={} f(G1)f(G2)={} {}", c.lhs, c.rhs, if c.holds { "holds" } else { "FAILS" });
            Ok(c.holds)
        }
        Command::Threshold { family, n, trials, final_trials, seed, target, out, summary } => {
            let family: Family = family.parse()?;
            let mut cfg = ScanConfig::new(trials, final_trials.unwrap_or(trials), seed);
            cfg.target = target;
            let scan = threshold_scan(|m| Model::for_family(family, m), &n, &cfg)?;
            match out {
                Some(path) => write(&path, &scan.curve_csv())?,
                None => print!("{}", scan.curve_csv()),
            }
            if let Some(path) = summary {
                write(&path, &scan.summary_csv())?;
            }
            if scan.non_monotone {
                eprintln!("warning: final probes are not monotone within their confidence intervals");
            }
            println!("exponent={:.6}", scan.exponent);
            Ok(true)
        }
        Command::Lemke { command: LemkeCommand::Solve { q, xs, certificate } } => {
            let sol = lemke::solve(&xs, q)?;
            let idx: Vec<String> = sol.indices.iter().map(|i| i.to_string()).collect();
            println!("I = {{{}}}", idx.join(","));
            println!("sum = {}, {q} | sum", sol.sum);
            println!("gcd-sum = {} <= {q}", sol.gcd_sum);
            if certificate {
                for step in &sol.certificate {
                    println!("{step}");
                }
            }
            Ok(true)
        }
        Command::Lattice { command } => lattice_command(command),
        Command::Repro { seed, trials, skip_heavy, out } => {
            let report = repro::run(&ReproConfig { seed, trials, skip_heavy });
            print!("{}", report.table());
            if let Some(dir) = out {
                fs::create_dir_all(&dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
                for (name, text) in &report.csv {
                    write(&dir.join(name), text)?;
                }
            }
            Ok(report.all_passed())
        }
    }
}

fn budget_options(budget: Option<u64>) -> Options {
    match budget {
        Some(b) => Options::default().with_budget(b),
        None => Options::default(),
    }
}

fn report(property: &str, holds: bool, method: &str, witness: Option<(PebbleDistribution, usize)>) {
    if holds {
        println!("{property}: holds ({method})");
    } else {
        println!("{property}: fails ({method})");
        if let Some((d, r)) = witness {
            println!("witness: {d} root {r}");
        }
    }
}

fn lattice_command(command: LatticeCommand) -> Verdict {
    match command {
        LatticeCommand::Shadow { w, b, family, family_file } => {
            let ranks = match (family, family_file) {
                (Some(r), _) => r,
                (_, Some(path)) => read(&path)?
                    .lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty())
                    .map(|l| l.parse::<u128>().map_err(|_| Failure::Usage(format!("bad colex rank {l:?}"))))
                    .collect::<Result<_, _>>()?,
                _ => return Err(Failure::Usage("give --family or --family-file".into())),
            };
            if w == 0 {
                return Err(Failure::Usage("w must be at least 1".into()));
            }
            let fam = lattice::Family::from_ranks(w, b, &ranks)?;
            let c = lattice::cl_check(&fam)?;
            let v: Vec<String> = c.v.iter().map(|x| x.to_string()).collect();
            println!("size={} shadow={} bound={} v=({})", fam.len(), c.shad_actual, c.shad_bound, v.join(","));
            println!("{}", if c.holds { "holds" } else { "FAILS" });
            Ok(c.holds)
        }
        LatticeCommand::Supernormal { n, b, s } => {
            let g = lattice::supernormal_gap(n, b, s)?;
            println!("gap={}", g.closed_form);
            if g.closed_form != g.explicit {
                println!("explicit families give {}", g.explicit);
                return Ok(false);
            }
            Ok(g.closed_form.is_positive())
        }
        LatticeCommand::Genlov { w, b, nmax } => {
            if w == 0 {
                return Err(Failure::Usage("w must be at least 1".into()));
            }
            let total = lattice::bmul(nmax, w, b as u64);
            let mut violations = 0;
            for size in 1..=total {
                let fam = lattice::Family::initial_segment(size, w, b)?;
                let c = lattice::genlov_check(&fam)?;
                if !c.holds {
                    violations += 1;
                    println!("violation: size={size} x={:.6} shadow={} bound={:.6}", c.x, c.shad, c.bound);
                }
            }
            println!("segments={total} violations={violations}");
            Ok(violations == 0)
        }
    }
}
