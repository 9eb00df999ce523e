//! Command-line front end. Every subcommand prints one JSON document.
//! Exit codes: 0 pass, 1 check failure, 2 usage or group-spec error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arrangements::arrangement_of;
use crate::error::{Error, Result};
use crate::forms::{build_form, jacobian_form, pullback_deviation, FormTerm};
use crate::invariants::{weight_involution, Invariant, Polynomial};
use crate::linalg::{Matrix, Vector};
use crate::num::Num;
use crate::oracle::{bounded_affine_orbit, finite_orbit, oracle_separation_audit, product_orbit};
use crate::reflection_groups::{AffineWeylGroup, CoxeterGroup, Factor, FiniteCoxeterGroup, Isometry};
use crate::root_systems::{build_root_system, classical_degrees, TypeLabel};
use crate::separator::{
    build_separating_map, check_invariance, check_oracle_consistency, check_separation, INVARIANCE_TOL, SEPARATION_TOL,
};
use crate::transnormal::check_transnormal;

/// Group description: one irreducible type, a product of specs, or (with
/// neither) the trivial group on `trivial_dims` coordinates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(rename = "type", default, skip_serializing_if = "Option::is_none")]
    pub type_label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub affine: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub product: Option<Vec<GroupSpec>>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub trivial_dims: usize,
}

fn is_false(b: &bool) -> bool {
    !b
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

impl GroupSpec {
    pub fn parse(s: &str) -> Result<GroupSpec> {
        serde_json::from_str(s).map_err(|e| Error::InvalidSpec(e.to_string()))
    }

    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    fn factors(&self) -> Result<Vec<Factor>> {
        if let Some(parts) = &self.product {
            if self.type_label.is_some() {
                return Err(Error::InvalidSpec("give either \"type\" or \"product\"".into()));
            }
            let mut out = Vec::new();
            for p in parts {
                if p.trivial_dims != 0 {
                    return Err(Error::InvalidSpec("trivial_dims only at the top level".into()));
                }
                out.extend(p.factors()?);
            }
            return Ok(out);
        }
        let Some(letter) = &self.type_label else { return Ok(Vec::new()) };
        let label = TypeLabel::parse(letter, self.m)?;
        let rank = match (label, self.rank) {
            (TypeLabel::I2(_), None) => 2,
            (_, Some(r)) => r,
            (_, None) => return Err(Error::InvalidSpec("missing \"rank\"".into())),
        };
        let rs = build_root_system(label, rank)?;
        Ok(vec![if self.affine {
            Factor::Affine(AffineWeylGroup::new(rs)?)
        } else {
            Factor::Finite(FiniteCoxeterGroup::new(rs))
        }])
    }

    pub fn build(&self) -> Result<CoxeterGroup> {
        let factors = self.factors()?;
        if factors.is_empty() && self.trivial_dims == 0 {
            return Err(Error::InvalidSpec("empty group spec".into()));
        }
        Ok(CoxeterGroup::product(factors, self.trivial_dims))
    }
}

pub fn group_label(g: &CoxeterGroup) -> String {
    let mut parts: Vec<String> = g.components().iter().map(|c| c.factor.label()).collect();
    let used: usize = g.components().iter().map(|c| c.factor.dim()).sum();
    if g.dim() > used {
        parts.push(format!("R{}", g.dim() - used));
    }
    parts.join(" x ")
}

#[derive(Parser, Debug)]
#[command(name = "coxinv", about = "Coxeter group invariants, separating maps and their checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GroupArgs {
    /// Inline group spec, e.g. '{"type":"B","rank":2}'.
    #[arg(long)]
    group: Option<String>,
    /// Path to a file holding the group spec.
    #[arg(long = "group-file")]
    group_file: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Order, degrees, chamber count and arrangement size.
    Info(GroupArgs),
    /// Generator systems per factor.
    Invariants(GroupArgs),
    /// Invariance, separation, oracle consistency and audit reports.
    Separate {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
        #[arg(long, default_value_t = SEPARATION_TOL)]
        tol: f64,
        #[arg(long, default_value_t = 3)]
        radius: usize,
    },
    /// Gram, bracket and Laplacian checks.
    Transnormal {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long, default_value_t = 300)]
        pairs: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Pullback invariance of generator-basis forms of degree 0, 1, 2.
    FormsCheck {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long, default_value_t = 50)]
        pairs: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Orbit dump: exhaustive for finite factors, bounded for affine ones.
    Orbit {
        #[command(flatten)]
        g: GroupArgs,
        /// Point as a JSON array; entries are numbers or [num, den] pairs.
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 1)]
        radius: usize,
    },
    /// Reflection arrangement, chamber count and invariance.
    Arrangement(GroupArgs),
}

impl GroupArgs {
    fn spec(&self) -> Result<GroupSpec> {
        match (&self.group, &self.group_file) {
            (Some(s), None) => GroupSpec::parse(s),
            (None, Some(p)) => {
                let s = std::fs::read_to_string(p).map_err(|e| Error::InvalidSpec(e.to_string()))?;
                GroupSpec::parse(&s)
            }
            _ => Err(Error::InvalidSpec("give exactly one of --group, --group-file".into())),
        }
    }
}

/// Report plus pass flag; informational commands always pass.
struct Outcome {
    report: Value,
    pass: bool,
}

fn info(g: &CoxeterGroup, seed: u64) -> Result<Outcome> {
    let order = if g.is_finite() {
        match g.enumerate() {
            Ok(els) => Some(els.len() as u128),
            Err(Error::EnumerationTooLarge(_)) => g.order(),
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let mut degrees = Vec::new();
    let mut involutions = Vec::new();
    for c in g.components() {
        match &c.factor {
            Factor::Finite(f) if f.rank() <= 4 => match crate::invariants::chevalley_generators(f) {
                Ok(sys) => degrees.extend(sys.degrees()),
                Err(Error::NotIrreducible(_)) => degrees.extend(classical_degrees(f.root_system.type_label, f.rank())),
                Err(e) => return Err(e),
            },
            Factor::Finite(f) => degrees.extend(classical_degrees(f.root_system.type_label, f.rank())),
            Factor::Affine(a) => involutions.push(weight_involution(a)?),
        }
    }
    let arrangement = arrangement_of(g)?;
    let rank: usize = g.components().iter().map(|c| c.factor.root_system().rank).sum();
    let chambers = if g.is_finite() && rank <= 4 { Some(arrangement.count_chambers(seed)?) } else { None };
    Ok(Outcome {
        report: json!({
            "group": group_label(g),
            "dim": g.dim(),
            "rank": rank,
            "finite": g.is_finite(),
            "order": order,
            "degrees": if g.is_finite() { json!(degrees) } else { Value::Null },
            "involutions": involutions,
            "hyperplanes": arrangement.len(),
            "chambers": chambers,
        }),
        pass: true,
    })
}

fn invariants(g: &CoxeterGroup) -> Result<Outcome> {
    let f = build_separating_map(g)?;
    let realness = f.blocks.iter().flat_map(|b| &b.system.generators).all(Invariant::is_real);
    let systems: Vec<Value> = f.blocks.iter().map(|b| json!({"offset": b.offset, "system": b.system})).collect();
    Ok(Outcome {
        report: json!({
            "group": group_label(g),
            "e0_dim": f.e0_basis.len(),
            "output_dim": f.output_dim,
            "realness": realness,
            "factors": systems,
        }),
        pass: true,
    })
}

fn separate(g: &CoxeterGroup, pairs: usize, tol: f64, radius: usize, seed: u64) -> Result<Outcome> {
    let f = build_separating_map(g)?;
    let inv = check_invariance(&f, g, pairs.min(500), INVARIANCE_TOL, seed);
    let sep = check_separation(&f, g, pairs, tol, seed);
    let cons = check_oracle_consistency(&f, g, pairs.min(200), tol, seed);
    let audit = oracle_separation_audit(&f, g, 20, radius, seed)?;
    let pass = inv.pass && sep.pass && cons.pass && audit.pass;
    Ok(Outcome {
        report: json!({
            "group": group_label(g),
            "seed": seed,
            "invariance_max": inv.max_deviation,
            "separation_min": sep.separation_min,
            "pass": pass,
            "invariance": inv,
            "separation": sep,
            "oracle_consistency": cons,
            "audit": audit,
        }),
        pass,
    })
}

fn transnormal(g: &CoxeterGroup, pairs: usize, tol: f64, seed: u64) -> Result<Outcome> {
    let f = build_separating_map(g)?;
    let r = check_transnormal(&f, g, pairs, tol, tol, seed);
    let pass = r.pass;
    Ok(Outcome { report: json!({"group": group_label(g), "report": r}), pass })
}

fn rotation_by_degrees(n: usize, deg: f64) -> Isometry {
    let (s, c) = deg.to_radians().sin_cos();
    let mut m = Matrix::identity(n);
    m[(0, 0)] = Num::Float(c);
    m[(0, 1)] = Num::Float(-s);
    m[(1, 0)] = Num::Float(s);
    m[(1, 1)] = Num::Float(c);
    Isometry::linear(m)
}

fn forms_check(g: &CoxeterGroup, samples: usize, tol: f64, seed: u64) -> Result<Outcome> {
    let f = build_separating_map(g)?;
    let n = f.output_dim;
    let one = Polynomial::constant(n, Num::ONE);
    let mut forms = vec![(
        "degree0",
        build_form(&f, 0, vec![FormTerm { indices: vec![], coefficient: Polynomial::var(n, n - 1) }])?,
    )];
    forms.push((
        "degree1",
        build_form(&f, 1, vec![FormTerm { indices: vec![n - 1], coefficient: Polynomial::var(n, 0) }])?,
    ));
    if n >= 2 {
        forms.push((
            "degree2",
            build_form(&f, 2, vec![FormTerm { indices: vec![n - 2, n - 1], coefficient: one.clone() }])?,
        ));
    }
    forms.push(("jacobian", jacobian_form(&f)?));
    let gens = g.generators();
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for (name, w) in &forms {
        let dev = gens.iter().map(|h| pullback_deviation(w, h, samples, seed)).fold(0.0, f64::max);
        worst = worst.max(dev);
        rows.push(json!({"form": name, "degree": w.degree, "map_hash": w.descriptor().map_hash, "max_deviation": dev}));
    }
    // A 10° rotation of the first coordinate plane is not a group element.
    let control = if g.dim() >= 2 && !g.components().is_empty() {
        let (_, jac) = forms.last().expect("jacobian form");
        Some(pullback_deviation(jac, &rotation_by_degrees(g.dim(), 10.0), samples, seed))
    } else {
        None
    };
    let pass = worst < tol;
    Ok(Outcome {
        report: json!({
            "group": group_label(g),
            "seed": seed,
            "forms": rows,
            "max_deviation": worst,
            "rotation_control": control,
            "pass": pass,
        }),
        pass,
    })
}

fn orbit(g: &CoxeterGroup, point: &str, radius: usize) -> Result<Outcome> {
    let x: Vector = serde_json::from_str(point).map_err(|e| Error::InvalidSpec(format!("--point: {e}")))?;
    if x.len() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), got: x.len() });
    }
    let points = match g.components() {
        [c] if c.factor.is_affine() && c.factor.dim() == g.dim() => {
            let Factor::Affine(a) = &c.factor else { unreachable!() };
            serde_json::to_value(bounded_affine_orbit(a, &x, radius)?)?
        }
        _ if g.is_finite() => json!({"base_point": x, "points": finite_orbit(g, &x)?}),
        _ => json!({"base_point": x, "radius": radius, "points": product_orbit(g, &x, radius)?}),
    };
    let size = points["points"].as_array().map_or(0, Vec::len);
    Ok(Outcome {
        report: json!({"group": group_label(g), "size": size, "representative": g.fold(&x), "orbit": points}),
        pass: true,
    })
}

fn arrangement(g: &CoxeterGroup, seed: u64) -> Result<Outcome> {
    let a = arrangement_of(g)?;
    let gens = g.generators();
    let invariant = [1.0, 10.0].iter().all(|&r| gens.iter().all(|h| a.is_invariant(h, r)));
    let chambers = if a.kind == crate::arrangements::ArrangementKind::Finite && a.dim() <= 4 {
        Some(a.count_chambers(seed)?)
    } else {
        None
    };
    Ok(Outcome {
        report: json!({
            "group": group_label(g),
            "arrangement": a,
            "chambers": chambers,
            "invariant": invariant,
            "pass": invariant,
        }),
        pass: invariant,
    })
}

fn dispatch(cmd: &Command) -> Result<(Outcome, Option<PathBuf>)> {
    let (args, outcome) = match cmd {
        Command::Info(a) => (a, info(&a.spec()?.build()?, a.seed)?),
        Command::Invariants(a) => (a, invariants(&a.spec()?.build()?)?),
        Command::Separate { g, pairs, tol, radius } => {
            (g, separate(&g.spec()?.build()?, *pairs, *tol, *radius, g.seed)?)
        }
        Command::Transnormal { g, pairs, tol } => (g, transnormal(&g.spec()?.build()?, *pairs, *tol, g.seed)?),
        Command::FormsCheck { g, pairs, tol } => (g, forms_check(&g.spec()?.build()?, *pairs, *tol, g.seed)?),
        Command::Orbit { g, point, radius } => (g, orbit(&g.spec()?.build()?, point, *radius)?),
        Command::Arrangement(a) => (a, arrangement(&a.spec()?.build()?, a.seed)?),
    };
    Ok((outcome, args.out.clone()))
}

fn error_json(msg: &str) -> String {
    json!({ "error": msg }).to_string()
}

/// Run with explicit argument list and output streams; returns the exit code.
pub fn run_with<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("usage error").trim_start_matches("error: ");
            let _ = writeln!(stderr, "{}", error_json(first));
            return 2;
        }
    };
    match dispatch(&cli.command) {
        Ok((outcome, out)) => {
            let text = serde_json::to_string_pretty(&outcome.report).expect("serializable") + "\n";
            let written = match out {
                Some(p) => std::fs::write(&p, &text).map_err(|e| e.to_string()),
                None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "{}", error_json(&e));
                return 2;
            }
            if outcome.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "{}", error_json(&e.to_string()));
            2
        }
    }
}

/// Entry point for the binary.
pub fn run() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
