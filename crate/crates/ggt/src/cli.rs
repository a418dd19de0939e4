//! Subcommands and report formatting.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ggt_core::cayley::{
    build_ball, check_quasiconvex, check_slim, check_triangle, quasiconvexity_constant, Ball, BallMetric,
    EqualityOracle, ExponentVector, FreeReduction, Metric, QcVerdict, SlimVerdict, SlimWitness,
};
use ggt_core::conjugate::{finiteness_verdict, IntersectionVerdict};
use ggt_core::dehn::{dehn_reduce, DehnOracle};
use ggt_core::finite_enum::{brady_bound, enumerate_groups, MultTable, SmallGroups, DEFAULT_ORDER_CAP};
use ggt_core::free_oracle::SubgroupGraph;
use ggt_core::subgroup::{
    build_nielsen_set, decide_membership, enumerate_subgroup_ball, ConstructionMode, Membership, NielsenDecider,
    NielsenSet, SubgroupSpec,
};
use ggt_core::{Alphabet, Error, Limits, Presentation, Word};

use crate::{io, CliError, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_USAGE};

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "ggt", version, about = "Algorithms for finitely presented and hyperbolic groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Freely (or cyclically) reduce a word
    Reduce {
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long)]
        cyclic: bool,
    },
    /// Decide whether a word is trivial
    Wp {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        word: String,
        /// Print every rewriting step
        #[arg(long)]
        trace: bool,
    },
    /// Breadth-first ball in the Cayley graph
    Ball {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        count_only: bool,
    },
    /// Check that geodesic triangles are δ-slim
    SlimCheck {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        delta: u32,
        /// Check one triangle given by three comma-separated corner words
        #[arg(long)]
        triangle: Option<String>,
    },
    /// Check that geodesics between subgroup elements stay K-close
    QcCheck {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        subgroup: SubgroupArgs,
        #[arg(long)]
        radius: usize,
    },
    /// Evaluate the torsion bound C = (2|X|)^(2δ+1) + 1
    Brady {
        #[arg(long)]
        generators: u32,
        #[arg(long)]
        delta: u32,
    },
    /// Groups of small order up to isomorphism
    EnumGroups {
        #[arg(long)]
        max_order: usize,
        #[arg(long, default_value_t = DEFAULT_ORDER_CAP)]
        cap: usize,
        #[arg(long)]
        tables: bool,
        #[arg(long)]
        count_only: bool,
    },
    /// Weakly Nielsen generating set of a quasiconvex subgroup
    NielsenSet {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        subgroup: SubgroupArgs,
    },
    /// Decide membership in a quasiconvex subgroup
    Member {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        subgroup: SubgroupArgs,
        #[arg(long)]
        word: String,
        #[arg(long)]
        witness: bool,
    },
    /// Decide membership in a subgroup of a free group by folding
    OracleMember {
        #[arg(long)]
        presentation: Option<PathBuf>,
        #[arg(long)]
        subgroup: String,
        #[arg(long)]
        word: String,
    },
    /// Decide whether H ∩ g⁻¹Hg is finite
    Conj {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        subgroup: SubgroupArgs,
        #[arg(long)]
        element: String,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        delta: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_ORDER_CAP)]
        cap: usize,
    },
}

#[derive(Args, Debug)]
struct GroupArgs {
    #[arg(long)]
    presentation: PathBuf,
    /// Equality oracle: free reduction, Dehn's algorithm, or exponent sums
    #[arg(long, value_enum, default_value_t = OracleChoice::Auto)]
    oracle: OracleChoice,
}

#[derive(Args, Debug)]
struct SubgroupArgs {
    /// Comma-separated generator words
    #[arg(long)]
    subgroup: String,
    /// Asserted quasiconvexity constant
    #[arg(long)]
    k: u32,
    #[arg(long, value_enum, default_value_t = ModeChoice::Auto)]
    mode: ModeChoice,
    /// Product depth for --mode product (default 2K+1)
    #[arg(long)]
    depth: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OracleChoice {
    Auto,
    Free,
    Dehn,
    Abelian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeChoice {
    Auto,
    Oracle,
    Product,
}

struct Report {
    out: String,
    err: String,
    code: i32,
}

impl Report {
    fn new() -> Self {
        Report { out: String::new(), err: String::new(), code: EXIT_OK }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.out.push_str(s.as_ref());
        self.out.push('\n');
    }

    fn warn(&mut self, s: impl AsRef<str>) {
        let _ = writeln!(self.err, "warning: {}", s.as_ref());
    }
}

/// Runs one invocation. `max_states` is the raw value of the cap override,
/// normally read from [`crate::MAX_STATES_ENV`].
pub fn run<I, T>(args: I, max_states: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.to_string();
            return if e.use_stderr() {
                let (first, rest) = text.split_once('\n').unwrap_or((&text, ""));
                let first = first.trim_start_matches("error: ");
                Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: usage: {first}\n{rest}") }
            } else {
                Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    let mut report = Report::new();
    let result = limits(max_states).and_then(|limits| dispatch(cli.command, &limits, &mut report));
    match result {
        Ok(()) => Outcome { code: report.code, stdout: report.out, stderr: report.err },
        Err(e) => {
            let mut stderr = format!("error: {}: {e}\n", e.code());
            stderr.push_str(&report.err);
            Outcome { code: e.exit_code(), stdout: report.out, stderr }
        }
    }
}

fn limits(max_states: Option<&str>) -> Result<Limits, CliError> {
    match max_states {
        None => Ok(Limits::default()),
        Some(raw) => raw
            .trim()
            .parse::<usize>()
            .map(Limits::with_max_states)
            .map_err(|_| CliError::Usage(format!("{} must be a non-negative integer, got {raw:?}", crate::MAX_STATES_ENV))),
    }
}

fn show(w: &Word) -> String {
    if w.is_empty() {
        "1".to_string()
    } else {
        w.to_string()
    }
}

fn parse_word(alphabet: &Alphabet, text: &str) -> Result<Word, CliError> {
    let text = text.trim();
    if text == "1" {
        return Ok(Word::new());
    }
    Ok(alphabet.parse_word(text)?)
}

fn equality_oracle(p: &Presentation, choice: OracleChoice) -> Result<Box<dyn EqualityOracle>, CliError> {
    Ok(match choice {
        OracleChoice::Auto if p.is_free() => Box::new(FreeReduction::new(p.alphabet().clone())),
        OracleChoice::Auto | OracleChoice::Dehn => Box::new(DehnOracle::for_presentation(p)),
        OracleChoice::Free if p.is_free() => Box::new(FreeReduction::new(p.alphabet().clone())),
        OracleChoice::Free => return Err(Error::NotFree.into()),
        OracleChoice::Abelian => Box::new(ExponentVector::new(p.alphabet().clone())),
    })
}

fn note_reliability(oracle: &dyn EqualityOracle, report: &mut Report) {
    if !oracle.is_reliable() {
        report.warn("the presentation is neither trusted nor certified C'(1/6); non-trivial verdicts are unverified");
    }
}

fn subgroup_spec(alphabet: &Alphabet, args: &SubgroupArgs) -> Result<SubgroupSpec, CliError> {
    let words = args
        .subgroup
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| parse_word(alphabet, t))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SubgroupSpec::new(words, Some(args.k))?)
}

fn nielsen_set(
    p: &Presentation,
    h: &SubgroupSpec,
    args: &SubgroupArgs,
    metric: &mut Metric<'_>,
) -> Result<NielsenSet, CliError> {
    let oracle_mode = match args.mode {
        ModeChoice::Auto => p.is_free(),
        ModeChoice::Oracle => true,
        ModeChoice::Product => false,
    };
    if oracle_mode {
        if !p.is_free() {
            return Err(Error::OracleUnavailable.into());
        }
        let mut graph = SubgroupGraph::fold(h.generators());
        Ok(build_nielsen_set(h, metric, ConstructionMode::OracleFilter, Some(&mut graph))?)
    } else {
        let depth = args.depth.unwrap_or(2 * args.k as usize + 1);
        Ok(build_nielsen_set(h, metric, ConstructionMode::GeneratorProduct { depth }, None)?)
    }
}

fn dispatch(command: Command, limits: &Limits, r: &mut Report) -> Result<(), CliError> {
    match command {
        Command::Reduce { word, cyclic } => {
            let w = parse_word(&Alphabet::standard(26), &word)?;
            r.line(show(&if cyclic { w.cyclically_reduced() } else { w.free_reduced() }));
        }
        Command::Wp { group, word, trace } => {
            let p = io::read_presentation(&group.presentation)?;
            let w = parse_word(p.alphabet(), &word)?;
            let uses_dehn = match group.oracle {
                OracleChoice::Dehn => true,
                OracleChoice::Auto => !p.is_free(),
                OracleChoice::Free | OracleChoice::Abelian => false,
            };
            if trace && uses_dehn {
                let oracle = DehnOracle::for_presentation(&p);
                note_reliability(&oracle, r);
                let t = dehn_reduce(&w, oracle.relators());
                r.line(if t.is_trivial() { "trivial" } else { "nontrivial" });
                r.line(format!("input: {}", show(&t.input)));
                for (i, s) in t.steps.iter().enumerate() {
                    r.line(format!(
                        "step {}: at {} replace {} by {} (relator {}) -> {}",
                        i + 1,
                        s.position,
                        show(&s.removed),
                        show(&s.inserted),
                        s.relator,
                        show(&s.result)
                    ));
                }
                r.line(format!("final: {}", show(&t.final_word)));
            } else {
                let oracle = equality_oracle(&p, group.oracle)?;
                note_reliability(oracle.as_ref(), r);
                let reduced = oracle.shorten(&w);
                r.line(if oracle.is_trivial(&w) { "trivial" } else { "nontrivial" });
                if trace {
                    r.line(format!("input: {}", show(&w)));
                    r.line(format!("final: {}", show(&reduced)));
                }
            }
        }
        Command::Ball { group, radius, count_only } => {
            let p = io::read_presentation(&group.presentation)?;
            let oracle = equality_oracle(&p, group.oracle)?;
            note_reliability(oracle.as_ref(), r);
            let ball = build_ball(oracle.as_ref(), radius, limits)?;
            r.line(format!("radius: {radius}"));
            r.line(format!("vertices: {}", ball.len()));
            let layers: Vec<String> = ball.layer_counts().iter().map(usize::to_string).collect();
            r.line(format!("layers: {}", layers.join(" ")));
            if !count_only {
                for (i, v) in ball.vertices().iter().enumerate() {
                    r.line(format!("{i} {} {}", v.layer, show(&v.word)));
                }
            }
        }
        Command::SlimCheck { group, radius, delta, triangle } => {
            let p = io::read_presentation(&group.presentation)?;
            let oracle = equality_oracle(&p, group.oracle)?;
            note_reliability(oracle.as_ref(), r);
            let ball = build_ball(oracle.as_ref(), radius, limits)?;
            let metric = BallMetric::new(&ball)?;
            r.line(format!("radius: {radius}"));
            r.line(format!("delta: {delta}"));
            match triangle {
                Some(text) => {
                    let corners = corner_vertices(&ball, oracle.as_ref(), p.alphabet(), &text)?;
                    match check_triangle(&metric, corners, delta, limits)? {
                        Some(w) => write_slim_witness(r, &ball, &w),
                        None => r.line("no violation"),
                    }
                }
                None => match check_slim(&metric, delta, limits)? {
                    SlimVerdict::NoViolation { inner_radius, triangles, .. } => {
                        r.line("no violation");
                        r.line(format!("corners within radius: {inner_radius}"));
                        r.line(format!("triangles checked: {triangles}"));
                    }
                    SlimVerdict::Violation(w) => write_slim_witness(r, &ball, &w),
                },
            }
        }
        Command::QcCheck { group, subgroup, radius } => {
            let p = io::read_presentation(&group.presentation)?;
            let oracle = equality_oracle(&p, group.oracle)?;
            note_reliability(oracle.as_ref(), r);
            let h = subgroup_spec(p.alphabet(), &subgroup)?;
            let ball = build_ball(oracle.as_ref(), radius, limits)?;
            let members: Vec<usize> = if p.is_free() && subgroup.mode != ModeChoice::Product {
                let graph = SubgroupGraph::fold(h.generators());
                (0..ball.len()).filter(|&v| graph.oracle_member(&ball.vertex(v).word)).collect()
            } else {
                let depth = subgroup.depth.unwrap_or(radius);
                let mut m = Metric::new(oracle.as_ref(), *limits);
                let found = enumerate_subgroup_ball(&h, radius, depth, &mut m)?;
                r.warn(format!("subgroup elements found from products of at most {depth} generators"));
                let mut v: Vec<usize> = std::iter::once(0)
                    .chain(found.iter().filter_map(|w| ball.locate(&oracle.shorten(w))))
                    .collect();
                v.sort_unstable();
                v.dedup();
                v
            };
            let metric = BallMetric::new(&ball)?;
            r.line(format!("radius: {radius}"));
            r.line(format!("subgroup elements in ball: {}", members.len()));
            r.line(format!("constant on ball: {}", quasiconvexity_constant(&metric, &members)));
            match check_quasiconvex(&metric, &members, subgroup.k) {
                QcVerdict::NoViolation { pairs, .. } => {
                    r.line(format!("K = {}: no violation", subgroup.k));
                    r.line(format!("pairs checked: {pairs}"));
                }
                QcVerdict::Violation(w) => {
                    r.line(format!("K = {}: violation", subgroup.k));
                    r.line(format!(
                        "geodesic {} from {} to {} passes {} at distance {} from the subgroup",
                        show(&w.geodesic),
                        show(&ball.vertex(w.from).word),
                        show(&ball.vertex(w.to).word),
                        show(&ball.vertex(w.vertex).word),
                        w.distance
                    ));
                }
            }
        }
        Command::Brady { generators, delta } => {
            r.line(format!("C = {}", brady_bound(generators, delta)?.c));
        }
        Command::EnumGroups { max_order, cap, tables, count_only } => {
            let groups = enumerate_groups(max_order, cap)?;
            for n in 1..=max_order {
                let of_order: Vec<&MultTable> = groups.iter().filter(|g| g.order() == n).collect();
                r.line(format!("order {n}: {}", of_order.len()));
                if count_only {
                    continue;
                }
                for (i, g) in of_order.iter().enumerate() {
                    let orders: Vec<String> = g.order_profile().iter().map(usize::to_string).collect();
                    r.line(format!(
                        "  group {n}.{}: {}, element orders {}",
                        i + 1,
                        if g.is_abelian() { "abelian" } else { "non-abelian" },
                        orders.join(" ")
                    ));
                    if tables {
                        write_table(r, g, "    ");
                    }
                }
            }
            r.line(format!("total: {}", groups.len()));
        }
        Command::NielsenSet { group, subgroup } => {
            let p = io::read_presentation(&group.presentation)?;
            let oracle = equality_oracle(&p, group.oracle)?;
            note_reliability(oracle.as_ref(), r);
            let h = subgroup_spec(p.alphabet(), &subgroup)?;
            let mut metric = Metric::new(oracle.as_ref(), *limits);
            let s = nielsen_set(&p, &h, &subgroup, &mut metric)?;
            r.line(format!("mode: {}", s.mode()));
            r.line(format!("K: {}", s.k()));
            r.line(format!("length bound: {}", 2 * s.k() + 1));
            r.line(format!("elements: {}", s.len()));
            for w in s.elements() {
                r.line(w.to_string());
            }
        }
        Command::Member { group, subgroup, word, witness } => {
            let p = io::read_presentation(&group.presentation)?;
            let oracle = equality_oracle(&p, group.oracle)?;
            note_reliability(oracle.as_ref(), r);
            let h = subgroup_spec(p.alphabet(), &subgroup)?;
            let g = parse_word(p.alphabet(), &word)?;
            let mut metric = Metric::new(oracle.as_ref(), *limits);
            let s = nielsen_set(&p, &h, &subgroup, &mut metric)?;
            match decide_membership(&g, &s, &mut metric)? {
                Membership::Member(wit) => {
                    r.line("member");
                    if witness {
                        r.line(format!("geodesic: {}", show(&wit.word)));
                        r.line(format!("factors: {} (n = {})", wit.len(), wit.word.len()));
                        for f in &wit.factors {
                            r.line(f.to_string());
                        }
                    }
                }
                Membership::NonMember => r.line("non-member"),
            }
        }
        Command::OracleMember { presentation, subgroup, word } => {
            let p = match presentation {
                Some(path) => io::read_presentation(&path)?,
                None => Presentation::free(26),
            };
            let gens = subgroup
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| parse_word(p.alphabet(), t))
                .collect::<Result<Vec<_>, _>>()?;
            let graph = SubgroupGraph::for_presentation(&p, &gens)?;
            let g = parse_word(p.alphabet(), &word)?;
            r.line(if graph.oracle_member(&g) { "member" } else { "non-member" });
        }
        Command::Conj { group, subgroup, element, radius, delta, cap } => {
            let p = io::read_presentation(&group.presentation)?;
            let oracle = equality_oracle(&p, group.oracle)?;
            note_reliability(oracle.as_ref(), r);
            let h = subgroup_spec(p.alphabet(), &subgroup)?;
            let g = parse_word(p.alphabet(), &element)?;
            let delta = delta
                .or(p.delta())
                .ok_or_else(|| Error::Precondition("δ is required: pass --delta or set it in the presentation".into()))?;
            let bound = brady_bound(p.alphabet().rank() as u32, delta)?;
            let mut metric = Metric::new(oracle.as_ref(), *limits);
            let s = nielsen_set(&p, &h, &subgroup, &mut metric)?;
            let mode = s.mode();
            let mut decider = NielsenDecider::new(s, Metric::new(oracle.as_ref(), *limits));
            let mut groups = SmallGroups::new(cap);
            let report = finiteness_verdict(&g, radius, bound, &mut decider, &mut metric, &mut groups)?;
            match &report.verdict {
                IntersectionVerdict::Finite { table, class } => {
                    r.line("verdict: finite");
                    let orders: Vec<String> = table.order_profile().iter().map(usize::to_string).collect();
                    r.line(format!(
                        "group: order {}, class {}.{}, {}, element orders {}",
                        table.order(),
                        table.order(),
                        class + 1,
                        if table.is_abelian() { "abelian" } else { "non-abelian" },
                        orders.join(" ")
                    ));
                    write_table(r, table, "  ");
                }
                IntersectionVerdict::Infinite { witness } => {
                    r.line("verdict: infinite");
                    r.line(format!("witness: {}", show(witness)));
                    r.line(format!("no power x^k with 1 <= k <= {} is trivial", bound.c));
                }
                IntersectionVerdict::Inconclusive { radius } => {
                    r.line("verdict: inconclusive");
                    r.line(format!("found elements are not closed under products inside radius {radius}"));
                    r.code = EXIT_INCONCLUSIVE;
                }
            }
            let found: Vec<String> = report.elements.iter().map(show).collect();
            r.line(format!("elements found: {} [{}]", found.len(), found.join(" ")));
            r.line(format!("radius: {}", report.radius));
            r.line(format!("C = {} (generators {}, delta {})", bound.c, bound.generators, bound.delta));
            r.line(format!("membership: {mode}, K = {}", subgroup.k));
        }
    }
    Ok(())
}

fn corner_vertices(ball: &Ball, oracle: &dyn EqualityOracle, alphabet: &Alphabet, text: &str) -> Result<[usize; 3], CliError> {
    let words: Vec<&str> = text.split(',').map(str::trim).collect();
    if words.len() != 3 {
        return Err(CliError::Usage(format!("--triangle needs three corners, got {}", words.len())));
    }
    let mut corners = [0; 3];
    for (slot, t) in corners.iter_mut().zip(&words) {
        let w = parse_word(alphabet, t)?;
        *slot = ball.locate(&oracle.shorten(&w)).ok_or_else(|| {
            Error::Precondition(format!("corner {} lies outside the ball of radius {}", show(&w), ball.radius()))
        })?;
    }
    Ok(corners)
}

fn write_slim_witness(r: &mut Report, ball: &Ball, w: &SlimWitness) {
    let name = |v: usize| show(&ball.vertex(v).word);
    r.line("violation");
    r.line(format!("triangle: {} {} {}", name(w.corners[0]), name(w.corners[1]), name(w.corners[2])));
    r.line(format!("side: {} to {} along {}", name(w.side.0), name(w.side.1), show(&w.side_word)));
    r.line(format!("vertex: {} at distance {} from the other sides", name(w.vertex), w.distance));
    for ((a, b), word) in &w.other_sides {
        r.line(format!("other side: {} to {} along {}", name(*a), name(*b), show(word)));
    }
}

fn write_table(r: &mut Report, t: &MultTable, indent: &str) {
    let n = t.order();
    let width = (n.max(2) - 1).to_string().len();
    for a in 0..n {
        let row: Vec<String> = (0..n).map(|b| format!("{:>width$}", t.product(a, b))).collect();
        r.line(format!("{indent}{}", row.join(" ")));
    }
}
