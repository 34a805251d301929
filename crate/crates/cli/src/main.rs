//! Command-line front end for posetdyn.
//!
//! Exit codes: 0 success, 1 a check failed, 2 inconsistent or degenerate
//! restriction, 3 parse or usage error, 4 budget exceeded, 5 the action does
//! not apply to the instance (for example an unranked poset).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use posetdyn::gamma::{rank_shift_iso, GammaPoset};
use posetdyn::io::{self, Instance};
use posetdyn::promotion::{self, Verdict};
use posetdyn::toggles::{self, OrbitReport, ToggleOrder};
use posetdyn::{fixtures, Error, Labeling, LabelingSpace, OrderIdeal, Poset, RestrictionFunction, Strictness};

// Writes to stdout, ignoring a closed pipe.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = write!(std::io::stdout().lock(), $($t)*);
    }};
}

macro_rules! outln {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

#[derive(Parser, Debug)]
#[command(
    name = "posetdyn",
    version,
    about = "Increasing labelings, promotion and toggle dynamics on finite posets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the pair poset whose order ideals encode the labelings.
    Gamma {
        #[command(flatten)]
        ctx: Ctx,
        /// Also check that its ideals are as many as the labelings.
        #[arg(long)]
        check: bool,
    },
    /// List or count the increasing labelings.
    Labelings {
        #[command(flatten)]
        ctx: Ctx,
        #[arg(long)]
        count: bool,
    },
    /// Promote a labeling.
    Promote {
        #[command(flatten)]
        ctx: Ctx,
        /// Labeling as JSON `{"name": label, ...}`; defaults to the one in the input file.
        #[arg(long)]
        labeling: Option<String>,
        #[arg(long, value_enum, default_value_t = Promotion::Incpro)]
        action: Promotion,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        /// Emit every involution step of one promotion.
        #[arg(long)]
        trace: bool,
    },
    /// Apply rowmotion to an order ideal.
    Rowmotion {
        #[command(flatten)]
        ctx: Ctx,
        /// Comma-separated element names; empty means the empty ideal.
        #[arg(long, default_value = "")]
        ideal: String,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Target::Poset)]
        on: Target,
    },
    /// Decompose an action into orbits.
    Orbits {
        #[command(flatten)]
        ctx: Ctx,
        #[arg(long, value_enum, default_value_t = Action::Row, conflicts_with = "compare")]
        action: Action,
        /// Compare the orbit length multisets of two actions.
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        compare: Option<Vec<Action>>,
        #[arg(long, value_enum, default_value_t = Target::Auto)]
        on: Target,
    },
    /// Check identities by exhaustive enumeration.
    Verify {
        #[command(flatten)]
        ctx: Ctx,
        /// Further inputs or check names (counting, equivariance, resonance,
        /// bkjdt, conjugacy, rankshift); no check names means every check.
        words: Vec<String>,
        /// Run on every shipped fixture when no input is given.
        #[arg(long)]
        all: bool,
    },
    /// Write the input poset in canonical form.
    Export {
        #[command(flatten)]
        ctx: Ctx,
    },
}

#[derive(Args, Debug, Clone)]
struct Ctx {
    /// A JSON file, a shipped fixture name, or a generator such as
    /// `chain:4`, `antichain:3`, `grid:2x3`, `empty`, `random:6`, `ranked:8`.
    input: Option<String>,
    /// Bound labels by 1..=q.
    #[arg(long, conflicts_with = "restriction")]
    q: Option<i32>,
    /// JSON file mapping each element to its allowed labels.
    #[arg(long)]
    restriction: Option<PathBuf>,
    /// Labels may repeat along covers.
    #[arg(long)]
    weak: bool,
    #[arg(long, env = "POSETDYN_BUDGET", default_value_t = toggles::DEFAULT_ORBIT_BUDGET)]
    budget: usize,
    /// Output format; `verify` defaults to text, everything else to JSON.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Seed for generated inputs.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Promotion {
    Incpro,
    Jdtpro,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Action {
    Row,
    Togpro,
    Gyr,
    Incpro,
    Jdtpro,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Target {
    /// The pair poset when labels are constrained, else the poset.
    Auto,
    Poset,
    Gamma,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Check {
    Counting,
    Equivariance,
    Resonance,
    Bkjdt,
    Conjugacy,
    Rankshift,
}

/// A failure with its exit code.
#[derive(Debug)]
struct Fail {
    code: u8,
    message: String,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InconsistentRestriction { .. }
            | Error::WeaklyInconsistentRestriction { .. }
            | Error::Degenerate { .. }
            | Error::EmptyRestriction(_) => 2,
            Error::DuplicateElement(_)
            | Error::UnknownElement(_)
            | Error::Cycle(_)
            | Error::MissingRestriction(_)
            | Error::NotAnIdeal(_)
            | Error::InvalidLabeling(_)
            | Error::LabelOutOfRange { .. }
            | Error::MismatchedContext
            | Error::Parse(_) => 3,
            Error::BudgetExceeded { .. } => 4,
            Error::RelationViolation(_) => 1,
            _ => 5,
        };
        Fail {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Fail {
    Fail {
        code: 3,
        message: message.into(),
    }
}

type Outcome = Result<u8, Fail>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(fail) => {
            eprintln!("error: {}", fail.message);
            ExitCode::from(fail.code)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Gamma { ctx, check } => cmd_gamma(&ctx, check),
        Command::Labelings { ctx, count } => cmd_labelings(&ctx, count),
        Command::Promote {
            ctx,
            labeling,
            action,
            steps,
            trace,
        } => cmd_promote(&ctx, labeling.as_deref(), action, steps, trace),
        Command::Rowmotion { ctx, ideal, steps, on } => cmd_rowmotion(&ctx, &ideal, steps, on),
        Command::Orbits { ctx, action, compare, on } => cmd_orbits(&ctx, action, compare, on),
        Command::Verify { ctx, words, all } => cmd_verify(&ctx, &words, all),
        Command::Export { ctx } => cmd_export(&ctx),
    }
}

// ---- input resolution ----

fn load_input(ctx: &Ctx) -> Result<(String, Instance), Fail> {
    let spec = ctx.input.as_deref().ok_or_else(|| usage("an input is required"))?;
    let path = std::path::Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {spec}: {e}")))?;
        return Ok((spec.to_string(), io::parse_instance(&text)?));
    }
    if let Some(text) = fixtures::source(spec) {
        return Ok((spec.to_string(), io::parse_instance(text)?));
    }
    let bare = |poset: Poset| Instance {
        poset,
        restriction: None,
        q: None,
        labeling: None,
    };
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    let num = |s: &str| s.parse::<usize>().map_err(|_| usage(format!("bad size `{s}` in `{spec}`")));
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let poset = match kind {
        "empty" => Poset::empty(),
        "chain" => Poset::chain(num(arg)?),
        "antichain" => Poset::antichain(num(arg)?),
        "grid" => {
            let (a, b) = arg.split_once('x').ok_or_else(|| usage("grid needs AxB"))?;
            Poset::grid(num(a)?, num(b)?)
        }
        "random" => fixtures::random_poset(&mut rng, num(arg)?, 0.35),
        "ranked" => fixtures::random_ranked_poset(&mut rng, num(arg)?, 4),
        _ => return Err(usage(format!("`{spec}` is neither a file, a fixture nor a generator"))),
    };
    Ok((spec.to_string(), bare(poset)))
}

/// The restriction chosen by flags, falling back to the input file.
fn restriction(ctx: &Ctx, inst: &Instance) -> Result<Option<RestrictionFunction>, Fail> {
    if let Some(path) = &ctx.restriction {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        return Ok(Some(io::parse_restriction(&text, &inst.poset)?));
    }
    let q = ctx.q.or(if inst.restriction.is_some() { None } else { inst.q });
    match q {
        Some(q) if ctx.weak => Ok(Some(RestrictionFunction::constant(&inst.poset, 1, q)?)),
        Some(q) => Ok(Some(posetdyn::induced_restriction(&inst.poset, q)?)),
        None => Ok(inst.restriction.clone()),
    }
}

fn space(ctx: &Ctx, inst: &Instance) -> Result<LabelingSpace, Fail> {
    let r = restriction(ctx, inst)?.ok_or_else(|| usage("labels need bounds: pass --q or --restriction"))?;
    let strictness = if ctx.weak { Strictness::Weak } else { Strictness::Strict };
    let space = LabelingSpace::new(inst.poset.clone(), r, strictness)?;
    space.require_consistent()?;
    Ok(space)
}

fn emit(ctx: &Ctx, value: &Value, text: impl FnOnce() -> String) -> Result<(), Fail> {
    match ctx.format.unwrap_or(Format::Json) {
        Format::Json => outln!("{}", serde_json::to_string_pretty(value).expect("json values serialize")),
        Format::Text => out!("{}", text()),
        Format::Dot => return Err(usage("DOT output is only available for gamma and export")),
    }
    Ok(())
}

fn labeling_text(poset: &Poset, f: &Labeling) -> String {
    poset
        .names()
        .iter()
        .zip(f.values())
        .map(|(n, k)| format!("{n}:{k}"))
        .collect::<Vec<_>>()
        .join(" ")
}

// ---- verbs ----

fn cmd_gamma(ctx: &Ctx, check: bool) -> Outcome {
    let (name, inst) = load_input(ctx)?;
    let gamma = GammaPoset::new(space(ctx, &inst)?)?;
    let mut status = 0;
    let mut count_line = None;
    if check {
        let ideals = gamma.poset().order_ideals_within(ctx.budget)?.len();
        let labelings = gamma
            .space()
            .count_within(ctx.budget)
            .ok_or(Error::BudgetExceeded { budget: ctx.budget })?;
        if ideals != labelings {
            status = 1;
        }
        count_line = Some((ideals, labelings));
    }
    match ctx.format.unwrap_or(Format::Json) {
        Format::Dot => out!("{}", io::gamma_to_dot(&gamma, &name)),
        Format::Json => {
            let mut v = io::gamma_to_value(&gamma);
            if let Some((i, l)) = count_line {
                v["check"] = json!({"ideals": i, "labelings": l, "equal": i == l});
            }
            outln!("{}", serde_json::to_string_pretty(&v).expect("json values serialize"));
        }
        Format::Text => {
            let g = gamma.poset();
            outln!("{} elements, {} covers, {} ghosts", g.len(), g.covers().len(), gamma.ghosts().len());
            for (a, b) in g.covers() {
                outln!("{} < {}", g.name(a), g.name(b));
            }
            if let Some((i, l)) = count_line {
                outln!("ideals {i}, labelings {l}: {}", if i == l { "EQUAL" } else { "DIFFERENT" });
            }
        }
    }
    Ok(status)
}

fn cmd_labelings(ctx: &Ctx, count: bool) -> Outcome {
    let (_, inst) = load_input(ctx)?;
    let space = space(ctx, &inst)?;
    if count {
        let n = space.count_within(ctx.budget).ok_or(Error::BudgetExceeded { budget: ctx.budget })?;
        emit(ctx, &json!({"count": n}), || format!("{n}\n"))?;
        return Ok(0);
    }
    let all = space.enumerate_within(ctx.budget)?;
    let p = space.poset();
    let value = Value::from(all.iter().map(|f| io::labeling_to_value(p, f)).collect::<Vec<_>>());
    emit(ctx, &value, || all.iter().map(|f| labeling_text(p, f) + "\n").collect())?;
    Ok(0)
}

fn cmd_promote(ctx: &Ctx, labeling: Option<&str>, action: Promotion, steps: usize, trace: bool) -> Outcome {
    let (_, inst) = load_input(ctx)?;
    let space = space(ctx, &inst)?;
    let p = space.poset();
    let f = match labeling {
        Some(text) => io::parse_labeling(text, p)?,
        None => inst
            .labeling
            .clone()
            .ok_or_else(|| usage("pass --labeling; the input names none"))?,
    };
    space.check(&f)?;
    if trace {
        if action != Promotion::Incpro {
            return Err(usage("--trace follows the involution steps of incpro"));
        }
        let t = promotion::inc_promotion_trace(&space, &f)?;
        emit(ctx, &io::trace_to_value(p, &t), || {
            t.iter()
                .map(|s| format!("{:>8}  {}\n", s.operator, labeling_text(p, &s.labeling)))
                .collect()
        })?;
        return Ok(0);
    }
    let mut states = vec![f];
    for _ in 0..steps {
        let last = states.last().expect("nonempty");
        let next = match action {
            Promotion::Incpro => promotion::inc_promotion(&space, last)?,
            Promotion::Jdtpro => promotion::jdt_promotion_in(&space, last)?,
        };
        states.push(next);
    }
    let value = Value::from(states.iter().map(|f| io::labeling_to_value(p, f)).collect::<Vec<_>>());
    emit(ctx, &value, || states.iter().map(|f| labeling_text(p, f) + "\n").collect())?;
    Ok(0)
}

/// The poset acted on, with its level map when there is one.
struct Stage {
    poset: Poset,
    order: Option<ToggleOrder>,
}

fn stage(ctx: &Ctx, inst: &Instance, on: Target) -> Result<Stage, Fail> {
    let constrained = ctx.q.is_some() || ctx.restriction.is_some() || inst.q.is_some() || inst.restriction.is_some();
    let on_gamma = match on {
        Target::Auto => constrained,
        Target::Gamma => true,
        Target::Poset => false,
    };
    if on_gamma {
        let gamma = GammaPoset::new(space(ctx, inst)?)?;
        let order = gamma.toggle_order();
        Ok(Stage {
            poset: gamma.poset().clone(),
            order: Some(order),
        })
    } else {
        let order = ToggleOrder::from_rank(&inst.poset).ok();
        Ok(Stage {
            poset: inst.poset.clone(),
            order,
        })
    }
}

fn cmd_rowmotion(ctx: &Ctx, ideal: &str, steps: usize, on: Target) -> Outcome {
    let (_, inst) = load_input(ctx)?;
    let st = stage(ctx, &inst, on)?;
    let names: Vec<&str> = ideal.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    let mut states = vec![st.poset.ideal_from_names(names)?];
    for _ in 0..steps {
        let next = toggles::rowmotion(&st.poset, states.last().expect("nonempty"));
        states.push(next);
    }
    let value = Value::from(states.iter().map(|i| io::ideal_to_value(&st.poset, i)).collect::<Vec<_>>());
    emit(ctx, &value, || {
        states
            .iter()
            .map(|i: &OrderIdeal| format!("{{{}}}\n", i.iter().map(|p| st.poset.name(p)).collect::<Vec<_>>().join(",")))
            .collect()
    })?;
    Ok(0)
}

fn orbit_report(ctx: &Ctx, inst: &Instance, action: Action, on: Target) -> Result<OrbitReport, Fail> {
    let name = format!("{action:?}").to_lowercase();
    match action {
        Action::Incpro | Action::Jdtpro => {
            let space = space(ctx, inst)?;
            let all = space.enumerate_within(ctx.budget)?;
            let q = if action == Action::Jdtpro {
                Some(promotion::global_bound(&space)?)
            } else {
                None
            };
            let table = toggles::action_table(&all, |f| match q {
                Some(q) => promotion::jdt_promotion(space.poset(), q, f).expect("member labeling"),
                None => promotion::inc_promotion(&space, f).expect("member labeling"),
            })?;
            Ok(OrbitReport::from_table(name, &table, |i| {
                io::labeling_to_value(space.poset(), &all[i])
            }))
        }
        Action::Row | Action::Togpro | Action::Gyr => {
            let st = stage(ctx, inst, on)?;
            let p = &st.poset;
            let order = || st.order.clone().ok_or(Error::NotRanked);
            let report = match action {
                Action::Row => toggles::orbit_structure(p, &name, ctx.budget, |s| toggles::rowmotion_set(p, s))?,
                Action::Togpro => {
                    let order = order()?;
                    toggles::orbit_structure(p, &name, ctx.budget, |s| {
                        let mut t = s.clone();
                        toggles::toggle_promotion_set(p, &order, &mut t);
                        t
                    })?
                }
                _ => {
                    let order = order()?;
                    order.require_column(p)?;
                    toggles::orbit_structure(p, &name, ctx.budget, |s| {
                        let mut t = s.clone();
                        toggles::gyration_set(p, &order, &mut t);
                        t
                    })?
                }
            };
            Ok(report)
        }
    }
}

fn report_text(r: &OrbitReport) -> String {
    format!(
        "{}: {} states, {} orbits, lengths {:?}, order {}\n",
        r.action,
        r.total,
        r.orbits.len(),
        r.lengths(),
        r.order()
    )
}

fn cmd_orbits(ctx: &Ctx, action: Action, compare: Option<Vec<Action>>, on: Target) -> Outcome {
    let (_, inst) = load_input(ctx)?;
    match compare.as_deref() {
        Some([a, b]) => {
            let ra = orbit_report(ctx, &inst, *a, on)?;
            let rb = orbit_report(ctx, &inst, *b, on)?;
            let verdict = if ra.same_structure(&rb) { "EQUAL" } else { "DIFFERENT" };
            let value = json!({
                "verdict": verdict,
                "reports": [summary(&ra), summary(&rb)],
            });
            emit(ctx, &value, || format!("{}{}{verdict}\n", report_text(&ra), report_text(&rb)))?;
            Ok(0)
        }
        Some(_) => Err(usage("--compare takes two actions")),
        None => {
            let r = orbit_report(ctx, &inst, action, on)?;
            let mut value = serde_json::to_value(&r).expect("reports serialize");
            value["lengths"] = json!(r.lengths());
            value["order"] = json!(r.order());
            emit(ctx, &value, || report_text(&r))?;
            Ok(0)
        }
    }
}

fn summary(r: &OrbitReport) -> Value {
    json!({"action": r.action, "total": r.total, "lengths": r.lengths(), "order": r.order()})
}

fn cmd_export(ctx: &Ctx) -> Outcome {
    let (name, inst) = load_input(ctx)?;
    let r = restriction(ctx, &inst)?;
    match ctx.format.unwrap_or(Format::Json) {
        Format::Dot => out!("{}", io::poset_to_dot(&inst.poset, &name)),
        _ => {
            let q = if r.is_some() { None } else { inst.q };
            outln!("{}", io::poset_to_json(&inst.poset, r.as_ref(), q));
        }
    }
    Ok(0)
}

// ---- verify ----

#[derive(Debug)]
enum Status {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn verdict_status(v: Verdict, poset: &Poset, what: &str) -> Status {
    match v.counterexample {
        None => Status::Pass(format!("{} {what}", v.checked)),
        Some(c) => Status::Fail(format!("{} at {}", c.step, io::labeling_to_value(poset, &c.input))),
    }
}

/// Errors that mean "does not apply" become skips; budget and input errors propagate.
fn skip_or(e: Error) -> Result<Status, Fail> {
    match e {
        Error::NotGlobalBoundMode | Error::NotRanked | Error::NotColumnOrder { .. } | Error::NotAToggleOrder { .. } => {
            Ok(Status::Skip(e.to_string()))
        }
        Error::RelationViolation(m) => Ok(Status::Fail(m)),
        other => Err(other.into()),
    }
}

fn run_check(ctx: &Ctx, inst: &Instance, check: Check) -> Result<Status, Fail> {
    let space = space(ctx, inst)?;
    let p = space.poset().clone();
    let budget = ctx.budget;
    let outcome = (|| -> posetdyn::Result<Status> {
        match check {
            Check::Counting => {
                let gamma = GammaPoset::new(space.clone())?;
                let ideals = gamma.poset().order_ideals_within(budget)?.len();
                let labelings = space.enumerate_within(budget)?.len();
                Ok(if ideals == labelings {
                    Status::Pass(format!("{ideals} ideals and labelings"))
                } else {
                    Status::Fail(format!("{ideals} ideals but {labelings} labelings"))
                })
            }
            Check::Equivariance => {
                let gamma = GammaPoset::new(space.clone())?;
                let levels = promotion::promotion_range(&space).len();
                let v = promotion::verify_equivariance(&gamma, budget)?;
                Ok(verdict_status(v, &p, &format!("identities over {levels} levels")))
            }
            Check::Resonance => {
                let q = promotion::global_bound(&space)?;
                let v = promotion::verify_resonance(&p, q, budget)?;
                if !v.holds() {
                    return Ok(verdict_status(v, &p, ""));
                }
                let gamma = GammaPoset::new(space.clone())?;
                let d = match toggles::row_to_promotion_conjugator(gamma.poset(), &gamma.toggle_order(), budget) {
                    Ok(d) => d,
                    Err(e @ Error::LayerGap { .. }) => {
                        return Ok(Status::Pass(format!(
                            "{} labelings rotate content; rowmotion part not run: {e}",
                            v.checked
                        )));
                    }
                    Err(e) => return Err(e),
                };
                let w = promotion::verify_row_resonance(&gamma, &d, budget)?;
                Ok(match verdict_status(w, &p, "") {
                    Status::Pass(_) => Status::Pass(format!("{} labelings and ideals rotate content", v.checked)),
                    other => other,
                })
            }
            Check::Bkjdt => {
                let v = promotion::verify_bk_equals_jdt(&space, budget)?;
                let mut status = verdict_status(v, &p, "labelings");
                if let (Status::Pass(msg), Some(f)) = (&mut status, &inst.labeling) {
                    if space.contains(f) {
                        let q = promotion::global_bound(&space)?;
                        let g = promotion::jdt_promotion(&p, q, f)?;
                        write!(msg, "; promotes {} to {}", labeling_text(&p, f), labeling_text(&p, &g)).unwrap();
                    }
                }
                Ok(status)
            }
            Check::Conjugacy => {
                let gamma = GammaPoset::new(space.clone())?;
                let g = gamma.poset();
                let order = gamma.toggle_order();
                order.require_column(g)?;
                let row = toggles::orbit_structure(g, "row", budget, |s| toggles::rowmotion_set(g, s))?;
                let pro = toggles::orbit_structure(g, "togpro", budget, |s| {
                    let mut t = s.clone();
                    toggles::toggle_promotion_set(g, &order, &mut t);
                    t
                })?;
                let gyr = toggles::orbit_structure(g, "gyr", budget, |s| {
                    let mut t = s.clone();
                    toggles::gyration_set(g, &order, &mut t);
                    t
                })?;
                if !(row.same_structure(&pro) && row.same_structure(&gyr)) {
                    return Ok(Status::Fail(format!(
                        "orbit lengths differ: row {:?}, togpro {:?}, gyr {:?}",
                        row.lengths(),
                        pro.lengths(),
                        gyr.lengths()
                    )));
                }
                Ok(match toggles::row_to_promotion_conjugator(g, &order, budget) {
                    Ok(d) => Status::Pass(format!("{} ideals, conjugating word of {} toggles", row.total, d.len())),
                    Err(e @ Error::LayerGap { .. }) => {
                        Status::Pass(format!("{} ideals, orbit lengths agree; no layer conjugator: {e}", row.total))
                    }
                    Err(e) => return Err(e),
                })
            }
            Check::Rankshift => {
                let rk = p.rank_function().ok_or(Error::NotRanked)?;
                let weak = match space.strictness() {
                    Strictness::Weak => space.restriction().clone(),
                    Strictness::Strict => space.restriction().shifted(&rk.values().iter().map(|r| -r).collect::<Vec<_>>()),
                };
                let iso = rank_shift_iso(&p, &weak)?;
                Ok(Status::Pass(format!("{} pairs matched", iso.map.len())))
            }
        }
    })();
    outcome.or_else(skip_or)
}

const ALL_CHECKS: [Check; 6] = [
    Check::Counting,
    Check::Equivariance,
    Check::Resonance,
    Check::Bkjdt,
    Check::Conjugacy,
    Check::Rankshift,
];

fn cmd_verify(ctx: &Ctx, words: &[String], all: bool) -> Outcome {
    let mut checks = Vec::new();
    let mut specs = Vec::new();
    for word in ctx.input.iter().chain(words) {
        match Check::from_str(word, true) {
            Ok(c) => checks.push(c),
            Err(_) => specs.push(word.clone()),
        }
    }
    if checks.is_empty() {
        checks = ALL_CHECKS.to_vec();
    }
    let inputs: Vec<(String, Instance)> = if specs.is_empty() {
        if !all {
            return Err(usage("pass an input or --all"));
        }
        fixtures::names()
            .map(|n| Ok((n.to_string(), fixtures::load(n)?)))
            .collect::<Result<_, Fail>>()?
    } else {
        specs
            .into_iter()
            .map(|spec| {
                let one = Ctx {
                    input: Some(spec),
                    ..ctx.clone()
                };
                load_input(&one)
            })
            .collect::<Result<_, Fail>>()?
    };
    let mut failed = false;
    let mut rows = Vec::new();
    let mut text = String::new();
    for (name, inst) in &inputs {
        for &check in &checks {
            let status = run_check(ctx, inst, check)?;
            let check_name = format!("{check:?}").to_lowercase();
            let (word, detail) = match &status {
                Status::Pass(d) => ("PASS", d),
                Status::Fail(d) => {
                    failed = true;
                    ("FAIL", d)
                }
                Status::Skip(d) => ("SKIP", d),
            };
            writeln!(text, "{word} {name} {check_name}: {detail}").unwrap();
            rows.push(json!({"input": name, "check": check_name, "status": word, "detail": detail}));
        }
    }
    match ctx.format.unwrap_or(Format::Text) {
        Format::Json => outln!(
            "{}",
            serde_json::to_string_pretty(&Value::from(rows)).expect("json values serialize")
        ),
        _ => out!("{text}"),
    }
    Ok(u8::from(failed))
}
