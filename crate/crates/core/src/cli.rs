//! The `toricaut` command line.
//!
//! Every subcommand builds one JSON value. `--json` prints it with sorted
//! keys; otherwise it is rendered as aligned tables.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::bundle::{projectivize, ProjectivizedFan};
use crate::cayley::{cayley_form, cox_names, extract_coefficients};
use crate::divisor::{is_ample, is_cartier, monomials_of_degree, TorusInvariantDivisor};
use crate::error::Error;
use crate::fan::Fan;
use crate::grading::{class_group, ClassElement, GradingData};
use crate::io::{load_polyfile, to_canonical_json, BundleFile, FanFile, FileError};
use crate::poly::{parse_polynomial, Substitution, VariableNames};
use crate::polyhedra::DEFAULT_ENUMERATION_LIMIT;
use crate::roots::{
    aut_report, demazure_crosscheck, enumerate_roots, is_base_shape, is_fiber_shape, moduli_dimension,
    split_roots_of_projectivization, Root,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable capping lattice-point enumeration.
pub const MAX_ENUM_VAR: &str = "TORICAUT_MAX_ENUM";

#[derive(Debug, Parser)]
#[command(
    name = "toricaut",
    version,
    about = "Exact toric geometry: class groups, projective bundles, roots, Cayley forms"
)]
struct Cli {
    /// Print the report as JSON with sorted keys
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a fan file describes a simplicial fan
    Validate { fan: PathBuf },
    /// Class group and variable degrees of a complete fan
    Classgroup { fan: PathBuf },
    /// Monomial basis of the graded piece of a given degree
    Sections {
        fan: PathBuf,
        /// Class group element, e.g. `2` or `1,0`
        #[arg(long, allow_hyphen_values = true)]
        degree: String,
    },
    /// Cartier and ampleness test for a torus-invariant divisor
    Ample {
        fan: PathBuf,
        /// One coefficient per ray, e.g. `1,0,0`
        #[arg(long, allow_hyphen_values = true)]
        divisor: String,
    },
    /// Write the fan of P(L_1 + ... + L_r)
    Projectivize {
        fan: PathBuf,
        bundle: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Roots of the graded automorphism group
    Roots { fan: PathBuf },
    /// Levi blocks, root counts and dimensions
    AutReport { fan: PathBuf },
    /// Split the roots of a projectivized fan into base and fiber roots
    SplitRoots { pfan: PathBuf },
    /// Assemble F = f_1 y_1 + ... + f_r y_r
    Cayley {
        pfan: PathBuf,
        #[arg(long)]
        forms: PathBuf,
    },
    /// Apply a one-variable substitution to a Cayley form
    CayleyAct {
        pfan: PathBuf,
        #[arg(long)]
        forms: PathBuf,
        /// e.g. `y1 -> y1 + 2*x1^2*y2`
        #[arg(long, allow_hyphen_values = true)]
        root: String,
    },
    /// Moduli count for Cayley forms on P(E)
    ModuliDim { fan: PathBuf, bundle: PathBuf },
    /// Compare monomial roots with lattice roots on a smooth complete fan
    DemazureCheck { fan: PathBuf },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Validation(String),
}

impl From<FileError> for Failure {
    fn from(e: FileError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) => Failure::Usage(e.to_string()),
            e => Failure::Validation(e.to_string()),
        }
    }
}

/// Result of a subcommand: the report and whether it describes a failure.
struct Outcome {
    report: Value,
    ok: bool,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome { report, ok: true }
    }
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let result = enumeration_limit().and_then(|limit| dispatch(&cli.command, limit));
    match result {
        Ok(outcome) => {
            let text = if cli.json { to_canonical_json(&outcome.report) } else { render_table(&outcome.report) };
            let _ = write!(out, "{text}");
            if outcome.ok {
                EXIT_OK
            } else {
                EXIT_VALIDATION
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Validation(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_VALIDATION
        }
    }
}

fn enumeration_limit() -> Result<u64, Failure> {
    match std::env::var(MAX_ENUM_VAR) {
        Err(_) => Ok(DEFAULT_ENUMERATION_LIMIT),
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .map_err(|_| Failure::Usage(format!("{MAX_ENUM_VAR} must be a non-negative integer, got {v:?}"))),
    }
}

/// A fan file with its grading: the projectivized one when the file has a
/// bundle sidecar, the class group of the fan otherwise.
struct Loaded {
    grading: GradingData,
    names: VariableNames,
    projectivized: Option<ProjectivizedFan>,
}

fn load_fan(path: &Path) -> Result<(FanFile, Fan), Failure> {
    let file = FanFile::load(path)?;
    let fan = file.fan();
    Ok((file, fan))
}

fn load_graded(path: &Path) -> Result<Loaded, Failure> {
    let (file, fan) = load_fan(path)?;
    fan.ensure_valid()?;
    match file.projectivized(&path.display().to_string())? {
        Some(p) => Ok(Loaded { grading: p.picard().clone(), names: cox_names(&p), projectivized: Some(p) }),
        None => {
            let grading = class_group(&fan)?;
            let names = VariableNames::cox(fan.num_rays(), 0);
            Ok(Loaded { grading, names, projectivized: None })
        }
    }
}

fn load_projectivized(path: &Path) -> Result<ProjectivizedFan, Failure> {
    load_graded(path)?.projectivized.ok_or_else(|| {
        Failure::Usage(format!("{}: not a projectivized fan (no projective_bundle field)", path.display()))
    })
}

fn parse_int_list(s: &str, what: &str) -> Result<Vec<i64>, Failure> {
    let inner = s.trim().trim_matches(|c| matches!(c, '(' | ')' | '[' | ']'));
    inner
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| Failure::Usage(format!("bad {what} entry {t:?} in {s:?}"))))
        .collect()
}

fn degree_json(d: &ClassElement) -> Value {
    serde_json::to_value(d).expect("class elements serialize")
}

fn root_json(r: &Root, names: &VariableNames) -> Value {
    json!({
        "variable": names.name(r.variable),
        "monomial": names.monomial(&r.monomial),
        "exponents": r.monomial,
        "kind": r.kind,
    })
}

fn group_description(g: &GradingData) -> String {
    let cg = g.class_group();
    let mut parts = Vec::new();
    match cg.free_rank() {
        0 => {}
        1 => parts.push("Z".to_string()),
        n => parts.push(format!("Z^{n}")),
    }
    parts.extend(cg.torsion().iter().map(|d| format!("Z/{d}")));
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn dispatch(cmd: &Command, limit: u64) -> Result<Outcome, Failure> {
    match cmd {
        Command::Validate { fan } => validate(fan),
        Command::Classgroup { fan } => {
            let l = load_graded(fan)?;
            let degrees: Vec<Value> = l
                .grading
                .variable_degrees()
                .iter()
                .enumerate()
                .map(|(i, d)| json!({"variable": l.names.name(i), "degree": degree_json(d)}))
                .collect();
            let cg = l.grading.class_group();
            Ok(Outcome::ok(json!({
                "group": group_description(&l.grading),
                "free_rank": cg.free_rank(),
                "torsion": cg.torsion().iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                "variable_degrees": degrees,
            })))
        }
        Command::Sections { fan, degree } => {
            let l = load_graded(fan)?;
            let alpha: ClassElement = degree.parse()?;
            let alpha = l.grading.normalize(&alpha)?;
            let monos = monomials_of_degree(&l.grading, &alpha, limit)?;
            Ok(Outcome::ok(json!({
                "degree": degree_json(&alpha),
                "dimension": monos.len(),
                "monomials": monos.iter().map(|m| l.names.monomial(m)).collect::<Vec<_>>(),
            })))
        }
        Command::Ample { fan, divisor } => {
            let (_, f) = load_fan(fan)?;
            let d = TorusInvariantDivisor::new(parse_int_list(divisor, "divisor")?);
            let g = class_group(&f)?;
            d.check_length(&f)?;
            Ok(Outcome::ok(json!({
                "divisor": d.coeffs,
                "class": degree_json(&d.class(&g)),
                "cartier": is_cartier(&f, &d)?,
                "ample": is_ample(&f, &d)?,
            })))
        }
        Command::Projectivize { fan, bundle, output } => {
            let (_, base) = load_fan(fan)?;
            base.ensure_valid()?;
            let b = BundleFile::load(bundle, base.num_rays())?;
            let p = projectivize(&base, b.divisors())?;
            let file = FanFile::from_projectivized(&p);
            std::fs::write(output, file.to_json()).map_err(|e| Failure::Usage(format!("{}: {e}", output.display())))?;
            let names = cox_names(&p);
            let degrees: Vec<Value> = p
                .picard()
                .variable_degrees()
                .iter()
                .enumerate()
                .map(|(i, d)| json!({"variable": names.name(i), "degree": degree_json(d), "ray": p.fan().ray(i)}))
                .collect();
            Ok(Outcome::ok(json!({
                "output": output.display().to_string(),
                "rank": p.fan().rank(),
                "num_rays": p.fan().num_rays(),
                "num_max_cones": p.fan().max_cones().len(),
                "smooth": p.fan().is_smooth().smooth,
                "picard_group": group_description(p.picard()),
                "variables": degrees,
            })))
        }
        Command::Roots { fan } => {
            let l = load_graded(fan)?;
            let roots = enumerate_roots(&l.grading, limit)?;
            let reductive = roots.iter().filter(|r| r.kind == crate::roots::RootKind::Reductive).count();
            Ok(Outcome::ok(json!({
                "count": roots.len(),
                "reductive_count": reductive,
                "unipotent_count": roots.len() - reductive,
                "roots": roots.iter().map(|r| root_json(r, &l.names)).collect::<Vec<_>>(),
            })))
        }
        Command::AutReport { fan } => {
            let l = load_graded(fan)?;
            let rep = aut_report(&l.grading, limit)?;
            let blocks: Vec<Value> = rep
                .levi_blocks
                .iter()
                .map(|b| {
                    json!({
                        "degree": degree_json(&b.degree),
                        "multiplicity": b.multiplicity,
                        "variables": b.variables.iter().map(|&v| l.names.name(v)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let levi = rep.levi_blocks.iter().map(|b| format!("GL{}", b.multiplicity)).collect::<Vec<_>>().join(" x ");
            Ok(Outcome::ok(json!({
                "levi": levi,
                "levi_blocks": blocks,
                "reductive_root_count": rep.reductive_root_count,
                "unipotent_root_count": rep.unipotent_root_count,
                "dim_g": rep.dim_g,
                "dim_levi": rep.dim_levi,
                "dim_torus": rep.dim_torus,
                "dim_aut0": rep.dim_aut0,
                "dim_unipotent_radical": rep.dim_unipotent_radical,
            })))
        }
        Command::SplitRoots { pfan } => {
            let p = load_projectivized(pfan)?;
            let names = cox_names(&p);
            let split = split_roots_of_projectivization(&p, limit)?;
            let list = |rs: &[Root]| rs.iter().map(|r| root_json(r, &names)).collect::<Vec<_>>();
            Ok(Outcome::ok(json!({
                "base_roots": list(&split.base_roots),
                "fiber_roots": list(&split.fiber_roots),
                "base_count": split.base_roots.len(),
                "fiber_count": split.fiber_roots.len(),
                "total": split.total(),
                "base_unipotent": split.base_unipotent(),
                "fiber_unipotent": split.fiber_unipotent(),
            })))
        }
        Command::Cayley { pfan, forms } => {
            let p = load_projectivized(pfan)?;
            let fs = load_polyfile(forms, &VariableNames::cox(p.num_base(), 0))?;
            let f = cayley_form(&fs, &p)?;
            let names = cox_names(&p);
            let base_names = VariableNames::cox(p.num_base(), 0);
            let space = monomials_of_degree(p.picard(), &p.tautological_class(), limit)?.len();
            Ok(Outcome::ok(json!({
                "coefficients": f.coefficients().iter().map(|c| c.display(&base_names).to_string()).collect::<Vec<_>>(),
                "form": f.form().display(&names).to_string(),
                "degree": degree_json(&p.tautological_class()),
                "space_dimension": space,
            })))
        }
        Command::CayleyAct { pfan, forms, root } => cayley_act(pfan, forms, root),
        Command::ModuliDim { fan, bundle } => {
            let (_, base) = load_fan(fan)?;
            base.ensure_valid()?;
            let b = BundleFile::load(bundle, base.num_rays())?;
            let p = projectivize(&base, b.divisors())?;
            let m = moduli_dimension(&p, limit)?;
            Ok(Outcome::ok(json!({
                "bundle_classes": p.bundle().classes().iter().map(degree_json).collect::<Vec<_>>(),
                "dim_cayley_forms": m.dim_cayley_forms,
                "dim_g": m.dim_g,
                "dim_torus": m.dim_torus,
                "dim_effective_group": m.dim_effective_group,
                "moduli_dim": m.moduli_dim,
                "ample": m.ample,
                "warnings": m.warnings,
                "classical": {
                    "projective_section_dims": m.classical.projective_section_dims,
                    "base_aut0_dim": m.classical.base_aut0_dim,
                },
            })))
        }
        Command::DemazureCheck { fan } => {
            let (_, f) = load_fan(fan)?;
            f.ensure_valid()?;
            let rep = demazure_crosscheck(&f, limit)?;
            let names = VariableNames::cox(f.num_rays(), 0);
            let witness: Vec<Value> = rep
                .witness
                .iter()
                .map(|w| {
                    json!({
                        "ray": w.ray,
                        "m": w.m,
                        "root": format!("{} -> {} + t*{}", names.name(w.ray), names.name(w.ray), names.monomial(&w.monomial)),
                    })
                })
                .collect();
            Ok(Outcome {
                ok: rep.bijective,
                report: json!({
                    "root_count": rep.root_count,
                    "lattice_pair_count": rep.lattice_pair_count,
                    "bijective": rep.bijective,
                    "witness": witness,
                }),
            })
        }
    }
}

fn validate(path: &Path) -> Result<Outcome, Failure> {
    let (_, fan) = load_fan(path)?;
    let report = fan.validate();
    let valid = report.is_valid();
    let issues: Vec<Value> = report
        .issues
        .iter()
        .map(|i| {
            let mut v = serde_json::to_value(i).expect("issues serialize");
            v["message"] = Value::String(i.to_string());
            v
        })
        .collect();
    let mut obj = Map::new();
    obj.insert("valid".into(), json!(valid));
    obj.insert("rank".into(), json!(fan.rank()));
    obj.insert("num_rays".into(), json!(fan.num_rays()));
    obj.insert("num_max_cones".into(), json!(fan.max_cones().len()));
    obj.insert("issues".into(), Value::Array(issues));
    if valid {
        let s = fan.is_smooth();
        obj.insert("complete".into(), json!(fan.is_complete()));
        obj.insert("smooth".into(), json!(s.smooth));
        obj.insert("non_smooth_cone".into(), json!(s.witness));
    }
    Ok(Outcome { report: Value::Object(obj), ok: valid })
}

fn cayley_act(pfan: &Path, forms: &Path, spec: &str) -> Result<Outcome, Failure> {
    let p = load_projectivized(pfan)?;
    let names = cox_names(&p);
    let base_names = VariableNames::cox(p.num_base(), 0);
    let fs = load_polyfile(forms, &base_names)?;
    let f = cayley_form(&fs, &p)?;

    let (lhs, rhs) = spec
        .split_once("->")
        .ok_or_else(|| Failure::Usage(format!("root spec {spec:?} must look like `y1 -> y1 + x1^2*y2`")))?;
    let var = names
        .index(lhs.trim())
        .ok_or_else(|| Failure::Usage(format!("unknown variable {:?} in root spec", lhs.trim())))?;
    let image = parse_polynomial(rhs, &names)?;
    let mut images: Vec<_> = (0..names.len()).map(|i| crate::poly::QPolynomial::variable(names.len(), i)).collect();
    images[var] = image.clone();
    let sub = Substitution::graded(images, p.picard())?;

    let addend = image.sub(&crate::poly::QPolynomial::variable(names.len(), var));
    let shape = match addend.terms().collect::<Vec<_>>().as_slice() {
        [(e, _)] if e[var] == 0 => {
            let r = Root { variable: var, monomial: (*e).clone(), kind: crate::roots::RootKind::Unipotent };
            if is_fiber_shape(&p, &r) {
                "fiber_root"
            } else if is_base_shape(&p, &r) {
                "base_root"
            } else {
                "other"
            }
        }
        _ => "substitution",
    };

    let after = sub.apply(f.form());
    let coeffs = extract_coefficients(&after, &p)?;
    let changed: Vec<usize> = (0..coeffs.len()).filter(|&j| coeffs[j] != f.coefficients()[j]).map(|j| j + 1).collect();
    let show =
        |ps: &[crate::poly::QPolynomial]| ps.iter().map(|c| c.display(&base_names).to_string()).collect::<Vec<_>>();
    Ok(Outcome::ok(json!({
        "substitution": format!("{} -> {}", names.name(var), image.display(&names)),
        "shape": shape,
        "form_before": f.form().display(&names).to_string(),
        "form_after": after.display(&names).to_string(),
        "coefficients_before": show(f.coefficients()),
        "coefficients_after": show(&coeffs),
        "changed_slots": changed,
    })))
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) if items.is_empty() => "-".into(),
        Value::Array(items) if items.iter().all(|i| !i.is_object()) => {
            let inner: Vec<String> = items.iter().map(scalar_text).collect();
            if items.iter().all(|i| i.is_number()) {
                format!("({})", inner.join(","))
            } else {
                inner.join(", ")
            }
        }
        other => other.to_string(),
    }
}

fn aligned(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in rows {
        let mut line = String::new();
        for (c, cell) in r.iter().enumerate() {
            if c + 1 == r.len() {
                line.push_str(cell);
            } else {
                line.push_str(&format!("{cell:<w$}  ", w = widths[c]));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn flatten(
    prefix: &str,
    v: &Value,
    scalars: &mut Vec<Vec<String>>,
    tables: &mut Vec<(String, Vec<Map<String, Value>>)>,
) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, scalars, tables);
            }
        }
        Value::Array(items) if !items.is_empty() && items.iter().all(Value::is_object) => {
            let rows = items.iter().filter_map(|i| i.as_object().cloned()).collect();
            tables.push((prefix.to_string(), rows));
        }
        other => scalars.push(vec![prefix.to_string(), scalar_text(other)]),
    }
}

/// Human-readable rendering: scalar fields as a key/value table, arrays of
/// objects as their own tables with one column per key.
pub fn render_table(v: &Value) -> String {
    let mut scalars = Vec::new();
    let mut tables = Vec::new();
    flatten("", v, &mut scalars, &mut tables);
    let mut out = aligned(&scalars);
    for (name, rows) in tables {
        let mut keys: Vec<&String> = Vec::new();
        for r in &rows {
            for k in r.keys() {
                if !keys.contains(&k) {
                    keys.push(k);
                }
            }
        }
        let mut grid = vec![keys.iter().map(|k| k.to_uppercase()).collect::<Vec<_>>()];
        for r in &rows {
            grid.push(keys.iter().map(|k| r.get(*k).map(scalar_text).unwrap_or_default()).collect());
        }
        out.push_str(&format!("\n{name} ({})\n", rows.len()));
        out.push_str(&aligned(&grid));
    }
    out
}
