//! The `catlang` command line.
//!
//! Every subcommand produces an [`Outcome`]: a status, a few human-readable
//! lines and a JSON report. Exit codes: 0 pass, 1 counterexample, 2 invalid
//! input, 3 inconclusive at the search bound.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::biequiv::{
    essential_preimage, h_object, roundtrip_compcat, roundtrip_finlim, u_object, zeta_component, FinLimCat,
};
use crate::compcat::CompCat;
use crate::displayed::{arrow_displayed, find_cleaving, DispCat};
use crate::fincat::{
    check_equivalence, check_functor, find_adjoint, find_colimit, find_limit, is_gaunt, slice_category,
    validate_category, AdjointError, ColimitShape, FinCat, FinFunctor, MorId, SearchBound, ShapeKind, Side,
};
use crate::io::{self, InputError, ModelSource};
use crate::localprops::{self, compcat_satisfies, extend_biequiv_check, LocalProperty, Verdict};
use crate::ttlang::{interpret_source, Model, TTError};
use crate::typeformers::{check_dfl, is_adjequiv_1cell};

#[derive(Parser, Debug)]
#[command(name = "catlang", version, about = "Finite categorical semantics workbench")]
pub struct Cli {
    /// Print the JSON report instead of a summary.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub emit_report: Option<PathBuf>,
    /// Search budget for adjoint, Σ/Π and property searches.
    #[arg(long, global = true, env = "CATLANG_BOUND", default_value_t = 40)]
    pub bound: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Finite categories.
    #[command(subcommand)]
    Cat(CatCmd),
    /// Functors between finite categories.
    #[command(subcommand)]
    Functor(FunctorCmd),
    /// Displayed categories.
    #[command(subcommand)]
    Disp(DispCmd),
    /// Comprehension categories.
    #[command(subcommand)]
    Compcat(CompcatCmd),
    /// Finite-limit categories versus DFL comprehension categories.
    #[command(subcommand)]
    Biequiv(BiequivCmd),
    /// Which classes of the finite-limit hierarchy a category belongs to.
    Classify { category: PathBuf },
    /// Local properties.
    #[command(subcommand)]
    Prop(PropCmd),
    /// The type theory front end.
    #[command(subcommand)]
    Tt(TtCmd),
}

#[derive(Subcommand, Debug)]
pub enum CatCmd {
    /// Check the category laws.
    Validate { category: PathBuf },
    /// Search every terminal/product/equalizer/pullback (and the dual colimits).
    Limits { category: PathBuf },
    /// Build the slice over an object.
    Slice {
        category: PathBuf,
        #[arg(long)]
        over: String,
        /// Write the slice as a category file.
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Every isomorphism is an identity.
    Gaunt { category: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Subcommand, Debug)]
pub enum FunctorCmd {
    /// Faithfulness, fullness, essential surjectivity and limit preservation.
    Check { functor: PathBuf },
    /// Search for an adjoint.
    Adjoint {
        functor: PathBuf,
        #[arg(long, value_enum, default_value = "right")]
        side: SideArg,
    },
    /// Decide whether the functor is an equivalence.
    Equiv { functor: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum DispCmd {
    /// The arrow displayed category: cleaving and fiber/slice comparison.
    Arrow {
        category: PathBuf,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Search for a cleaving.
    Cleaving { displayed: PathBuf },
    /// The fiber over a base object.
    Fiber {
        displayed: PathBuf,
        #[arg(long)]
        over: String,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CompcatCmd {
    /// Read a bundle (or the self-indexing of a category) and validate it.
    Assemble {
        model: PathBuf,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Fullness, unit, products, equalizers, strong Σ and democracy.
    Dfl { model: PathBuf },
    /// Essential preimages of context morphisms.
    Eso {
        model: PathBuf,
        /// Only this base morphism.
        #[arg(long)]
        morphism: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum BiequivCmd {
    /// The self-indexing of a finite-limit category.
    H {
        category: PathBuf,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// The base of a DFL comprehension category with its chosen limits.
    U {
        model: PathBuf,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// The comparison into the self-indexing of the base.
    Zeta { model: PathBuf },
    /// Roundtrip laws for a category or a comprehension category.
    Roundtrip { input: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum PropCmd {
    /// Check a property on a category.
    Check {
        category: PathBuf,
        #[arg(long)]
        property: String,
    },
    /// Identity, composition, slice and pullback closure.
    Closure {
        category: PathBuf,
        #[arg(long)]
        property: String,
    },
    /// The property fiberwise in a comprehension category.
    Fiberwise {
        model: PathBuf,
        #[arg(long)]
        property: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum TtCmd {
    /// Interpret judgment files in a model.
    Check {
        #[arg(long)]
        model: PathBuf,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
    Invalid,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Invalid => 2,
            Status::Inconclusive => 3,
        }
    }

    fn of(v: &Verdict) -> Status {
        match v {
            Verdict::Verified { .. } => Status::Pass,
            Verdict::Counterexample { .. } => Status::Fail,
            Verdict::InconclusiveAtBound { .. } => Status::Inconclusive,
        }
    }

    fn pass_if(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub status: Status,
    pub lines: Vec<String>,
    pub report: Value,
}

impl Outcome {
    fn new(status: Status, lines: Vec<String>, report: Value) -> Self {
        Outcome { status, lines, report }
    }

    fn invalid(msg: impl ToString) -> Self {
        let msg = msg.to_string();
        Outcome::new(Status::Invalid, vec![format!("error: {msg}")], json!({ "error": msg }))
    }
}

impl From<InputError> for Outcome {
    fn from(e: InputError) -> Self {
        Outcome::invalid(e)
    }
}

fn mark(v: &Verdict) -> &'static str {
    match v {
        Verdict::Verified { .. } => "✓",
        Verdict::Counterexample { .. } => "✗",
        Verdict::InconclusiveAtBound { .. } => "?",
    }
}

fn verdict_line(name: &str, v: &Verdict) -> String {
    match v {
        Verdict::Verified { .. } => format!("{} {name}", mark(v)),
        Verdict::Counterexample { witness } => format!("{} {name}: {witness}", mark(v)),
        Verdict::InconclusiveAtBound { bound } => format!("{} {name}: inconclusive at bound {bound}", mark(v)),
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn write_artifact<T: Serialize>(path: &Option<PathBuf>, t: &T) -> Result<(), Outcome> {
    if let Some(p) = path {
        let text = serde_json::to_string_pretty(t).expect("artifacts serialize");
        std::fs::write(p, text + "\n").map_err(|e| Outcome::invalid(format!("cannot write `{}`: {e}", p.display())))?;
    }
    Ok(())
}

fn object(c: &FinCat, name: &str) -> Result<crate::fincat::ObjId, Outcome> {
    c.object(name).ok_or_else(|| Outcome::invalid(format!("unknown object `{name}`")))
}

fn property(name: &str) -> Result<LocalProperty, Outcome> {
    localprops::lookup(name).ok_or_else(|| {
        let known: Vec<String> = localprops::registry().iter().map(|p| p.name().to_string()).collect();
        Outcome::invalid(format!("unknown property `{name}` (known: {})", known.join(", ")))
    })
}

fn finlim(c: &Arc<FinCat>) -> Result<FinLimCat, Outcome> {
    FinLimCat::new(c.clone()).map_err(|e| Outcome::invalid(format!("finite limits required: {e}")))
}

fn map_names(f: &FinFunctor) -> Value {
    json!({ "objects": f.object_names(), "morphisms": f.morphism_names() })
}

/// Parses `argv` (including the program name) and runs the command, writing
/// to `out`. Returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = write!(out, "{}", e.render());
            return if code == 0 { 0 } else { Status::Invalid.exit_code() };
        }
    };
    let name = command_name(&cli.command);
    let outcome = execute(&cli).unwrap_or_else(|o| o);
    let envelope = json!({
        "command": name,
        "status": outcome.status,
        "exit_code": outcome.status.exit_code(),
        "report": outcome.report,
    });
    let text = serde_json::to_string_pretty(&envelope).expect("reports serialize");
    if let Some(p) = &cli.emit_report {
        if let Err(e) = std::fs::write(p, format!("{text}\n")) {
            let _ = writeln!(out, "error: cannot write `{}`: {e}", p.display());
            return Status::Invalid.exit_code();
        }
    }
    if cli.json {
        let _ = writeln!(out, "{text}");
    } else {
        for l in &outcome.lines {
            let _ = writeln!(out, "{l}");
        }
        let _ = writeln!(out, "result: {}", serde_json::to_value(outcome.status).unwrap().as_str().unwrap());
    }
    outcome.status.exit_code()
}

/// Runs against the real stdout.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    run_with(argv, &mut lock)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Cat(CatCmd::Validate { .. }) => "cat validate",
        Command::Cat(CatCmd::Limits { .. }) => "cat limits",
        Command::Cat(CatCmd::Slice { .. }) => "cat slice",
        Command::Cat(CatCmd::Gaunt { .. }) => "cat gaunt",
        Command::Functor(FunctorCmd::Check { .. }) => "functor check",
        Command::Functor(FunctorCmd::Adjoint { .. }) => "functor adjoint",
        Command::Functor(FunctorCmd::Equiv { .. }) => "functor equiv",
        Command::Disp(DispCmd::Arrow { .. }) => "disp arrow",
        Command::Disp(DispCmd::Cleaving { .. }) => "disp cleaving",
        Command::Disp(DispCmd::Fiber { .. }) => "disp fiber",
        Command::Compcat(CompcatCmd::Assemble { .. }) => "compcat assemble",
        Command::Compcat(CompcatCmd::Dfl { .. }) => "compcat dfl",
        Command::Compcat(CompcatCmd::Eso { .. }) => "compcat eso",
        Command::Biequiv(BiequivCmd::H { .. }) => "biequiv h",
        Command::Biequiv(BiequivCmd::U { .. }) => "biequiv u",
        Command::Biequiv(BiequivCmd::Zeta { .. }) => "biequiv zeta",
        Command::Biequiv(BiequivCmd::Roundtrip { .. }) => "biequiv roundtrip",
        Command::Classify { .. } => "classify",
        Command::Prop(PropCmd::Check { .. }) => "prop check",
        Command::Prop(PropCmd::Closure { .. }) => "prop closure",
        Command::Prop(PropCmd::Fiberwise { .. }) => "prop fiberwise",
        Command::Tt(TtCmd::Check { .. }) => "tt check",
    }
}

fn execute(cli: &Cli) -> Result<Outcome, Outcome> {
    let bound = SearchBound::from_budget(cli.bound);
    match &cli.command {
        Command::Cat(c) => cat(c),
        Command::Functor(c) => functor(c, bound),
        Command::Disp(c) => disp(c),
        Command::Compcat(c) => compcat(c, bound),
        Command::Biequiv(c) => biequiv(c, bound),
        Command::Classify { category } => classify(category, bound),
        Command::Prop(c) => prop(c, bound),
        Command::Tt(TtCmd::Check { model, files }) => tt_check(model, files, bound),
    }
}

// ---------------------------------------------------------------------------

fn cat(cmd: &CatCmd) -> Result<Outcome, Outcome> {
    match cmd {
        CatCmd::Validate { category } => {
            let p = io::read_presentation(category)?;
            Ok(match validate_category(&p) {
                Ok(c) => Outcome::new(
                    Status::Pass,
                    vec![format!("valid category: {} objects, {} morphisms", c.num_objects(), c.num_morphisms())],
                    json!({ "valid": true, "objects": c.num_objects(), "morphisms": c.num_morphisms() }),
                ),
                Err(e) => Outcome::new(
                    Status::Fail,
                    vec![format!("not a category: {e}")],
                    json!({ "valid": false, "violation": e.to_string() }),
                ),
            })
        }
        CatCmd::Limits { category } => Ok(limits(&*io::load_category(category)?)),
        CatCmd::Slice { category, over, output } => {
            let c = io::load_category(category)?;
            let x = object(&c, over)?;
            let s = slice_category(&c, x).map_err(Outcome::invalid)?;
            let p = s.cat.to_presentation();
            write_artifact(output, &p)?;
            Ok(Outcome::new(
                Status::Pass,
                vec![format!(
                    "slice over `{over}`: {} objects, {} morphisms",
                    s.cat.num_objects(),
                    s.cat.num_morphisms()
                )],
                json!({ "over": over, "slice": p }),
            ))
        }
        CatCmd::Gaunt { category } => {
            let c = io::load_category(category)?;
            Ok(match is_gaunt(&c) {
                None => Outcome::new(Status::Pass, vec!["gaunt: every isomorphism is an identity".into()], json!({ "gaunt": true })),
                Some((f, g)) => {
                    let (f, g) = (c.morphism_name(f), c.morphism_name(g));
                    Outcome::new(
                        Status::Fail,
                        vec![format!("not gaunt: `{f}` is a non-identity isomorphism with inverse `{g}`")],
                        json!({ "gaunt": false, "iso": f, "inverse": g }),
                    )
                }
            })
        }
    }
}

fn colimit_instances(c: &FinCat) -> Vec<(&'static str, ColimitShape, String)> {
    let mut out = vec![("initial", ColimitShape::Initial, "initial".to_string())];
    for a in c.objects() {
        for b in c.objects() {
            out.push((
                "binary_coproduct",
                ColimitShape::BinaryCoproduct(a, b),
                format!("binary_coproduct({}, {})", c.object_name(a), c.object_name(b)),
            ));
        }
    }
    for f in c.morphisms() {
        for &g in c.hom(c.src(f), c.dst(f)) {
            out.push((
                "coequalizer",
                ColimitShape::Coequalizer(f, g),
                format!("coequalizer({}, {})", c.morphism_name(f), c.morphism_name(g)),
            ));
        }
    }
    out
}

fn limits(c: &FinCat) -> Outcome {
    let legs = |ls: &[MorId]| ls.iter().map(|&l| c.morphism_name(l).to_string()).collect::<Vec<_>>();
    let mut complete = true;
    let mut lines = Vec::new();
    let mut lim = Vec::new();
    for kind in ShapeKind::ALL {
        let mut found = Vec::new();
        let mut missing = Vec::new();
        for shape in kind.instances(c) {
            match find_limit(c, shape).expect("instances are well formed") {
                Some(w) => found.push(json!({
                    "diagram": shape.describe(c), "apex": c.object_name(w.apex), "legs": legs(&w.legs),
                })),
                None => missing.push(shape.describe(c)),
            }
        }
        complete &= missing.is_empty();
        lines.push(match missing.first() {
            None => format!("✓ {}: {} of {}", kind.name(), found.len(), found.len()),
            Some(m) => format!("✗ {}: {} of {}, first missing {m}", kind.name(), found.len(), found.len() + missing.len()),
        });
        lim.push(json!({ "shape": kind.name(), "found": found, "missing": missing }));
    }
    let mut colim: Vec<Value> = Vec::new();
    for tag in ["initial", "binary_coproduct", "coequalizer"] {
        let mut found = Vec::new();
        let mut missing = Vec::new();
        for (_, shape, d) in colimit_instances(c).into_iter().filter(|(t, _, _)| *t == tag) {
            match find_colimit(c, shape).expect("instances are well formed") {
                Some(w) => found.push(json!({ "diagram": d, "apex": c.object_name(w.apex), "legs": legs(&w.legs) })),
                None => missing.push(d),
            }
        }
        lines.push(format!("  {tag}: {} of {}", found.len(), found.len() + missing.len()));
        colim.push(json!({ "shape": tag, "found": found, "missing": missing }));
    }
    lines.insert(0, format!("finite limits: {}", if complete { "yes" } else { "no" }));
    Outcome::new(Status::pass_if(complete), lines, json!({ "finitely_complete": complete, "limits": lim, "colimits": colim }))
}

// ---------------------------------------------------------------------------

fn functor(cmd: &FunctorCmd, bound: SearchBound) -> Result<Outcome, Outcome> {
    match cmd {
        FunctorCmd::Check { functor } => {
            let f = io::load_functor(functor)?;
            let r = check_functor(&f);
            let yn = |b: bool| if b { "yes" } else { "no" };
            let lines = vec![
                format!("functorial: {}", yn(r.functorial)),
                format!("faithful: {}", yn(r.faithful)),
                format!("full: {}", yn(r.full)),
                format!("essentially surjective: {}", yn(r.essentially_surjective)),
                format!(
                    "preserves terminal/products/equalizers/pullbacks: {}/{}/{}/{}",
                    yn(r.preserves.terminal),
                    yn(r.preserves.binary_product),
                    yn(r.preserves.equalizer),
                    yn(r.preserves.pullback)
                ),
            ];
            Ok(Outcome::new(Status::pass_if(r.functorial), lines, to_value(&r)))
        }
        FunctorCmd::Adjoint { functor, side } => {
            let f = io::load_functor(functor)?;
            let (side, name) = match side {
                SideArg::Left => (Side::Left, "left"),
                SideArg::Right => (Side::Right, "right"),
            };
            Ok(match find_adjoint(&f, side, bound) {
                Ok(adj) => {
                    let g = if matches!(side, Side::Right) { &adj.right } else { &adj.left };
                    let names = |t: &crate::fincat::NatTrans| {
                        let d = t.source().target().clone();
                        t.components().iter().map(|&m| d.morphism_name(m).to_string()).collect::<Vec<_>>()
                    };
                    Outcome::new(
                        Status::Pass,
                        g.object_names().iter().map(|(a, b)| format!("{name} adjoint: {a} ↦ {b}")).collect(),
                        json!({ "side": name, "adjoint": map_names(g), "unit": names(&adj.unit), "counit": names(&adj.counit) }),
                    )
                }
                Err(e @ AdjointError::NotFound { .. }) => {
                    Outcome::new(Status::Fail, vec![format!("no {name} adjoint: {e}")], json!({ "side": name, "failure": e.to_string() }))
                }
                Err(e @ AdjointError::SearchBoundExceeded { .. }) => Outcome::new(
                    Status::Inconclusive,
                    vec![e.to_string()],
                    json!({ "side": name, "inconclusive": e.to_string() }),
                ),
            })
        }
        FunctorCmd::Equiv { functor } => {
            let f = io::load_functor(functor)?;
            Ok(match check_equivalence(&f) {
                Ok(w) => Outcome::new(
                    Status::Pass,
                    vec!["equivalence".into()],
                    json!({ "equivalence": true, "inverse": map_names(&w.inverse) }),
                ),
                Err(e) => Outcome::new(
                    Status::Fail,
                    vec![format!("not an equivalence: {e}")],
                    json!({ "equivalence": false, "failure": to_value(&e) }),
                ),
            })
        }
    }
}

// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct DispFileOut {
    base: crate::fincat::Presentation,
    #[serde(flatten)]
    types: crate::displayed::DispPresentation,
}

fn cleaving_report(d: &Arc<DispCat>) -> Outcome {
    let c = d.base();
    match find_cleaving(d) {
        Ok(cl) => {
            let mut lifts = Vec::new();
            for f in c.morphisms() {
                for &y in d.over(c.dst(f)) {
                    let (x, l) = cl.lift(f, y);
                    lifts.push(json!([c.morphism_name(f), d.dobject_name(y), d.dobject_name(x), d.dmorphism_name(l)]));
                }
            }
            let ok = cl.verify();
            Outcome::new(
                Status::pass_if(ok),
                vec![format!("cleaving: {} Cartesian lifts", lifts.len())],
                json!({ "cleaving": true, "verified": ok, "lifts": lifts }),
            )
        }
        Err(m) => Outcome::new(
            Status::Fail,
            vec![format!("no cleaving: `{}` has no Cartesian lift at `{}`", m.morphism, m.dobject)],
            json!({ "cleaving": false, "missing": to_value(&m) }),
        ),
    }
}

fn disp(cmd: &DispCmd) -> Result<Outcome, Outcome> {
    match cmd {
        DispCmd::Arrow { category, output } => {
            let c = io::load_category(category)?;
            let a = arrow_displayed(&c);
            write_artifact(output, &DispFileOut { base: c.to_presentation(), types: a.disp.to_presentation() })?;
            let mut out = cleaving_report(&a.disp);
            let mut fibers = Vec::new();
            let mut all = true;
            for x in c.objects() {
                let s = slice_category(&c, x).expect("object of c");
                let ok = check_equivalence(&a.fiber_to_slice(x, &s)).is_ok();
                all &= ok;
                fibers.push(json!({ "object": c.object_name(x), "fiber_equivalent_to_slice": ok }));
            }
            out.lines.insert(0, format!("arrow category: {} types, {} squares", a.disp.num_dobjects(), a.disp.num_dmorphisms()));
            out.lines.push(format!("fiber ≃ slice at every object: {}", if all { "yes" } else { "no" }));
            if !all && out.status == Status::Pass {
                out.status = Status::Fail;
            }
            out.report["fibers"] = Value::Array(fibers);
            Ok(out)
        }
        DispCmd::Cleaving { displayed } => Ok(cleaving_report(&io::load_displayed(displayed)?)),
        DispCmd::Fiber { displayed, over, output } => {
            let d = io::load_displayed(displayed)?;
            let x = object(d.base(), over)?;
            let f = d.fiber_category(x).map_err(Outcome::invalid)?;
            let p = f.to_presentation();
            write_artifact(output, &p)?;
            Ok(Outcome::new(
                Status::Pass,
                vec![format!("fiber over `{over}`: {} objects, {} morphisms", f.num_objects(), f.num_morphisms())],
                json!({ "over": over, "fiber": p }),
            ))
        }
    }
}

// ---------------------------------------------------------------------------

fn dfl_lines(k: &CompCat, bound: SearchBound) -> (Status, Vec<String>, Value, crate::typeformers::DFLReport) {
    let r = check_dfl(k, bound);
    let status = if r.passed() {
        Status::Pass
    } else if r.inconclusive() {
        Status::Inconclusive
    } else {
        Status::Fail
    };
    let yn = |b: bool| if b { "✓" } else { "✗" };
    let lines = vec![
        format!("{} full", yn(r.full)),
        format!("{} unit types", yn(r.unit.is_ok())),
        format!("{} binary products", yn(r.prod.fibers.iter().all(|f| f.failure.is_none()))),
        format!("{} equalizers", yn(r.eq.fibers.iter().all(|f| f.failure.is_none()))),
        format!("{} strong Σ", yn(r.sigma.is_ok())),
        format!("{} democracy", yn(r.dem.is_ok())),
    ]
    .into_iter()
    .chain(r.verdict.first_failure.iter().map(|f| format!("first failure: {f}")))
    .collect();
    let json = r.to_json(k);
    (status, lines, json, r)
}

fn compcat(cmd: &CompcatCmd, bound: SearchBound) -> Result<Outcome, Outcome> {
    match cmd {
        CompcatCmd::Assemble { model, output } => {
            let (k, src) = io::load_compcat(model)?;
            write_artifact(output, &k.to_bundle())?;
            let source = match src {
                ModelSource::Bundle => "bundle",
                ModelSource::SelfIndexing => "self_indexing",
            };
            Ok(Outcome::new(
                Status::Pass,
                vec![
                    format!("comprehension category ({source})"),
                    format!(
                        "base: {} contexts, {} morphisms; terminal `{}`",
                        k.base.num_objects(),
                        k.base.num_morphisms(),
                        k.base.object_name(k.terminal)
                    ),
                    format!("types: {}, type morphisms: {}", k.types.num_dobjects(), k.types.num_dmorphisms()),
                    format!("full: {}", if k.is_full() { "yes" } else { "no" }),
                ],
                json!({
                    "source": source,
                    "contexts": k.base.num_objects(),
                    "terminal": k.base.object_name(k.terminal),
                    "types": k.types.num_dobjects(),
                    "type_morphisms": k.types.num_dmorphisms(),
                    "full": k.is_full(),
                }),
            ))
        }
        CompcatCmd::Dfl { model } => {
            let (k, _) = io::load_compcat(model)?;
            let (status, lines, json, _) = dfl_lines(&k, bound);
            Ok(Outcome::new(status, lines, json))
        }
        CompcatCmd::Eso { model, morphism } => {
            let (k, _) = io::load_compcat(model)?;
            let dfl = check_dfl(&k, bound);
            let c = &k.base;
            let targets: Vec<MorId> = match morphism {
                Some(n) => vec![c.morphism(n).ok_or_else(|| Outcome::invalid(format!("unknown morphism `{n}`")))?],
                None => c.morphisms().collect(),
            };
            let mut status = Status::Pass;
            let mut lines = Vec::new();
            let mut entries = Vec::new();
            for s in targets {
                let name = c.morphism_name(s);
                match essential_preimage(&k, &dfl, s) {
                    Ok(e) => {
                        let ty = k.types.dobject_name(e.ty);
                        lines.push(format!("✓ {name}: Γ.{ty} ≅ dom via `{}` / `{}`", c.morphism_name(e.to), c.morphism_name(e.from)));
                        entries.push(json!({
                            "morphism": name, "type": ty, "to": c.morphism_name(e.to), "from": c.morphism_name(e.from),
                            "id_type": k.types.dobject_name(e.id_type),
                        }));
                    }
                    Err(e) => {
                        status = status.max(if dfl.inconclusive() { Status::Inconclusive } else { Status::Fail });
                        lines.push(format!("✗ {name}: {e}"));
                        entries.push(json!({ "morphism": name, "failure": e.to_string() }));
                    }
                }
            }
            Ok(Outcome::new(status, lines, json!({ "preimages": entries })))
        }
    }
}

// ---------------------------------------------------------------------------

fn biequiv(cmd: &BiequivCmd, bound: SearchBound) -> Result<Outcome, Outcome> {
    match cmd {
        BiequivCmd::H { category, output } => {
            let c = io::load_category(category)?;
            let fl = finlim(&c)?;
            let k = h_object(&fl).map_err(Outcome::invalid)?;
            write_artifact(output, &k.to_bundle())?;
            let (status, mut lines, json, _) = dfl_lines(&k, bound);
            lines.insert(0, format!("H: {} types over {} contexts", k.types.num_dobjects(), k.base.num_objects()));
            Ok(Outcome::new(status, lines, json!({ "types": k.types.num_dobjects(), "dfl": json })))
        }
        BiequivCmd::U { model, output } => {
            let (k, _) = io::load_compcat(model)?;
            Ok(match u_object(&k) {
                Ok(u) => {
                    let p = u.cat.to_presentation();
                    write_artifact(output, &p)?;
                    Outcome::new(
                        Status::Pass,
                        vec![format!(
                            "U: {} objects, {} morphisms, {} chosen limits",
                            u.cat.num_objects(),
                            u.cat.num_morphisms(),
                            u.witnesses.len()
                        )],
                        json!({ "category": p, "chosen_limits": u.witnesses.len() }),
                    )
                }
                Err(e) => Outcome::new(Status::Fail, vec![format!("U undefined: {e}")], json!({ "failure": e.to_string() })),
            })
        }
        BiequivCmd::Zeta { model } => {
            let (k, _) = io::load_compcat(model)?;
            Ok(match zeta_component(&k) {
                Ok(z) => {
                    let ok = is_adjequiv_1cell(&z);
                    Outcome::new(
                        Status::pass_if(ok),
                        vec![format!("ζ is an adjoint equivalence: {}", if ok { "yes" } else { "no" })],
                        json!({ "adjoint_equivalence": ok, "base": map_names(&z.functor) }),
                    )
                }
                Err(e) => Outcome::new(Status::Fail, vec![format!("ζ undefined: {e}")], json!({ "failure": e.to_string() })),
            })
        }
        BiequivCmd::Roundtrip { input } => {
            let (k, src) = io::load_compcat(input)?;
            let r = match src {
                ModelSource::Bundle => roundtrip_compcat(&k),
                ModelSource::SelfIndexing => roundtrip_finlim(&finlim(&k.base)?),
            };
            Ok(match r {
                Ok(r) => Outcome::new(
                    Status::pass_if(r.pass),
                    r.checks.iter().map(|c| format!("{} {}", if c.pass { "✓" } else { "✗" }, c.name)).collect(),
                    to_value(&r),
                ),
                Err(e) => Outcome::new(Status::Fail, vec![format!("roundtrip failed: {e}")], json!({ "failure": e.to_string() })),
            })
        }
    }
}

// ---------------------------------------------------------------------------

fn classify(category: &Path, bound: SearchBound) -> Result<Outcome, Outcome> {
    let c = io::load_category(category)?;
    let r = localprops::classify_cat(&c, bound);
    let mut lines: Vec<String> = r.flags().iter().map(|(n, v)| verdict_line(n, v)).collect();
    lines.push(format!("class: {}", r.class.as_deref().unwrap_or("none")));
    if let Some(s) = &r.signature {
        lines.push(format!("signature: {s}"));
    }
    let inconclusive = r.flags().iter().any(|(_, v)| matches!(v, Verdict::InconclusiveAtBound { .. }));
    let status = if inconclusive { Status::Inconclusive } else { Status::Pass };
    Ok(Outcome::new(status, lines, to_value(&r)))
}

fn prop(cmd: &PropCmd, bound: SearchBound) -> Result<Outcome, Outcome> {
    match cmd {
        PropCmd::Check { category, property: name } => {
            let p = property(name)?;
            let c = io::load_category(category)?;
            let v = p.cat_check(&c, bound);
            Ok(Outcome::new(Status::of(&v), vec![verdict_line(p.name(), &v)], json!({ "property": p.name(), "verdict": v })))
        }
        PropCmd::Closure { category, property: name } => {
            let p = property(name)?;
            let c = io::load_category(category)?;
            let r = localprops::check_property_closure(&p, &finlim(&c)?, bound);
            let lines = r
                .axioms
                .iter()
                .map(|a| match (&a.failure, a.inconclusive) {
                    (Some(f), _) => format!("✗ {} ({} instances): {f}", a.axiom, a.instances),
                    (None, true) => format!("? {} ({} instances): inconclusive", a.axiom, a.instances),
                    (None, false) => format!("✓ {} ({} instances)", a.axiom, a.instances),
                })
                .collect();
            let status = if r.pass {
                Status::Pass
            } else if r.axioms.iter().any(|a| a.failure.is_some()) {
                Status::Fail
            } else {
                Status::Inconclusive
            };
            Ok(Outcome::new(status, lines, to_value(&r)))
        }
        PropCmd::Fiberwise { model, property: name } => {
            let p = property(name)?;
            let (k, src) = io::load_compcat(model)?;
            match src {
                ModelSource::Bundle => {
                    let r = compcat_satisfies(&k, &p, bound);
                    let lines = vec![verdict_line(&format!("{} fiberwise", p.name()), &r.verdict)];
                    Ok(Outcome::new(Status::of(&r.verdict), lines, to_value(&r)))
                }
                ModelSource::SelfIndexing => {
                    let r = extend_biequiv_check(&finlim(&k.base)?, &p, bound);
                    let lines = vec![
                        verdict_line(&format!("{} fiberwise in H", p.name()), &r.fiberwise),
                        verdict_line(&format!("{} on the fiber over ⊤", p.name()), &r.fiber_at_terminal),
                        format!("fiber over ⊤ ≃ base: {}", if r.equivalence { "yes" } else { "no" }),
                        verdict_line(&format!("{} on the base", p.name()), &r.base),
                    ];
                    let status = if r.pass {
                        Status::Pass
                    } else if [&r.fiberwise, &r.base].iter().any(|v| matches!(v, Verdict::InconclusiveAtBound { .. })) {
                        Status::Inconclusive
                    } else {
                        Status::Fail
                    };
                    Ok(Outcome::new(status, lines, to_value(&r)))
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------

fn tt_check(model: &Path, files: &[PathBuf], bound: SearchBound) -> Result<Outcome, Outcome> {
    let (k, _) = io::load_compcat(model)?;
    let m = Model::new(k, bound).map_err(Outcome::invalid)?;
    let mut status = Status::Pass;
    let mut lines = Vec::new();
    let mut reports = Vec::new();
    for path in files {
        let shown = path.display().to_string();
        let src = std::fs::read_to_string(path).map_err(|e| Outcome::invalid(format!("cannot read `{shown}`: {e}")))?;
        match interpret_source(&src, &m) {
            Ok(i) => {
                let checks = i.checks();
                let failed = checks.iter().filter(|&&b| !b).count();
                let ok = failed == 0 && i.comparisons_invertible();
                status = status.max(Status::pass_if(ok));
                lines.push(if ok {
                    format!("✓ {shown}: {} declarations, {} checks", i.entries.len(), checks.len())
                } else {
                    format!("✗ {shown}: {failed} of {} checks fail", checks.len())
                });
                reports.push(json!({ "file": shown, "pass": ok, "interpretation": i.to_json(&m) }));
            }
            Err(e) => {
                let s = if matches!(e, TTError::Syntax { .. }) { Status::Invalid } else { Status::Fail };
                status = status.max(s);
                lines.push(format!("✗ {shown}: {e}"));
                reports.push(json!({ "file": shown, "pass": false, "error": to_value(&e) }));
            }
        }
    }
    let pi = m.pi.is_some();
    lines.insert(0, format!("model: {} contexts, Pi {}", m.k.base.num_objects(), if pi { "available" } else { "unavailable" }));
    Ok(Outcome::new(status, lines, json!({ "pi": pi, "files": reports })))
}
