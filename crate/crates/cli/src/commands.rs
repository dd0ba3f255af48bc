use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use fillperm::enumeration::{
    count_classes, enumerate_filling, BoundsReport, EnumerationError, EnumerationOptions, Guard,
};
use fillperm::gluing::{polygon_sizes, vertex_count, GluingPattern, PatternError};
use fillperm::hyperbolic::HyperbolicReport;
use fillperm::zpiece::{derive_template, detect_zpieces, splice, TemplateCache, TemplateDerivation, ZPieceError};
use fillperm::{FillingError, FillingPermutation, GenusContext, Permutation, TwistingClosure};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::diagram;
use crate::error::CliError;
use crate::{Command, Outcome, Output, PermArgs};

type CmdResult = Result<Outcome, CliError>;

/// A count as a JSON number when it fits in 64 bits, else a decimal string.
fn count(b: &BigUint) -> Value {
    match u64::try_from(b) {
        Ok(v) => json!(v),
        Err(_) => json!(b.to_string()),
    }
}

fn fields<T: Serialize>(v: &T) -> Map<String, Value> {
    match serde_json::to_value(v).expect("reports serialize") {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("value".into(), other);
            m
        }
    }
}

fn report(genus: Option<u32>, params: Value, result: Map<String, Value>) -> Outcome {
    Outcome { output: Output::Report { genus, params, result }, failure: None }
}

fn context(g: u32) -> Result<GenusContext, CliError> {
    GenusContext::new(g).map_err(|e| CliError::Usage(e.to_string()))
}

fn parse_perm(args: &PermArgs) -> Result<(GenusContext, Permutation), CliError> {
    let ctx = context(args.genus.genus)?;
    let p = Permutation::parse_with_degree(&args.perm, Some(ctx.n() as usize))
        .map_err(|e| CliError::Parse(format!("cannot parse permutation {:?}: {e}", args.perm)))?;
    Ok((ctx, p))
}

fn filling(args: &PermArgs) -> Result<FillingPermutation, CliError> {
    let (ctx, p) = parse_perm(args)?;
    FillingPermutation::new(ctx, p).map_err(|e| CliError::Validation(e.to_string()))
}

fn enumeration_error(e: EnumerationError) -> CliError {
    match e {
        EnumerationError::GuardExceeded { .. } => CliError::Guard(e.to_string()),
        EnumerationError::BoundsUndefined(_) => CliError::Usage(e.to_string()),
        EnumerationError::ThreadPool(_) | EnumerationError::Filling(_) => CliError::Validation(e.to_string()),
    }
}

fn read_pattern(path: &Path) -> Result<GluingPattern, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn run(command: Command) -> CmdResult {
    match command {
        Command::Enumerate { genus, count_only, classes, limit, jobs, force } => {
            enumerate(genus.genus, count_only, classes, limit, jobs.map(|j| j as usize), force)
        }
        Command::Verify(args) => verify(&args),
        Command::Reconstruct(args) => reconstruct(&args),
        Command::Extend { perm, vertex, template_cache } => extend(&perm, vertex, template_cache),
        Command::T1 { pattern } => t1(&pattern),
        Command::Genus { pattern } => genus(&pattern),
        Command::Bounds(g) => bounds(g.genus),
        Command::Hyp(g) => hyp(g.genus),
        Command::Diagram { perm, output } => draw(&perm, output),
    }
}

fn enumerate(
    g: u32,
    count_only: bool,
    classes: bool,
    limit: Option<usize>,
    jobs: Option<usize>,
    force: bool,
) -> CmdResult {
    let ctx = context(g)?;
    let guard = if force { Guard::unlimited() } else { Guard::from_env() };
    let options = EnumerationOptions { jobs, guard };
    let counted = count_classes(&ctx, &options).map_err(enumeration_error)?;
    let params = json!({ "count_only": count_only, "classes": classes, "limit": limit });
    let mut out = Map::new();
    out.insert("root_count".into(), count(&fillperm::enumeration::root_count(&ctx)));
    out.insert("filling_count".into(), json!(counted.solutions));
    out.insert("class_count".into(), json!(counted.classes()));
    if count_only {
        return Ok(report(Some(g), params, out));
    }
    out.insert(
        "search".into(),
        json!({
            "roots_covered": count(&counted.stats.roots_covered),
            "leaves": counted.stats.leaves,
            "pruned_by_depth": counted.stats.pruned,
        }),
    );
    let shown = limit.unwrap_or(usize::MAX).min(counted.representatives.len());
    let reps = &counted.representatives[..shown];
    if classes {
        let closure = TwistingClosure::new(&ctx);
        let list: Vec<Value> = reps
            .iter()
            .map(|r| {
                let orbit: BTreeSet<Permutation> =
                    closure.elements().iter().map(|h| r.conjugate(h).expect("same degree")).collect();
                json!({ "representative": r.to_string(), "cycles": r.cycle_notation(), "size": orbit.len() })
            })
            .collect();
        out.insert("classes".into(), Value::Array(list));
    } else {
        out.insert("representatives".into(), json!(reps.iter().map(|r| r.to_string()).collect::<Vec<_>>()));
    }
    out.insert("truncated".into(), json!(shown < counted.representatives.len()));
    Ok(report(Some(g), params, out))
}

fn verify(args: &PermArgs) -> CmdResult {
    let (ctx, p) = parse_perm(args)?;
    let params = json!({ "perm": args.perm });
    let mut out = Map::new();
    out.insert("perm".into(), json!(p.to_string()));
    out.insert("cycles".into(), json!(p.cycle_notation()));
    let failure = match ctx.check_filling(&p) {
        Ok(()) => None,
        Err(FillingError::NotFilling(f)) => {
            out.insert("failed_condition".into(), serde_json::to_value(f).expect("serializes"));
            Some(f.to_string())
        }
        Err(e) => {
            out.insert("failed_condition".into(), json!("degree"));
            Some(e.to_string())
        }
    };
    out.insert("pass".into(), json!(failure.is_none()));
    out.insert("message".into(), json!(failure.clone().unwrap_or_else(|| "filling permutation".into())));
    Ok(Outcome { output: Output::Report { genus: Some(ctx.genus()), params, result: out }, failure })
}

fn reconstruct(args: &PermArgs) -> CmdResult {
    let fp = filling(args)?;
    let surface = fp.reconstruct();
    let mut out = fields(&surface);
    out.insert("perm".into(), json!(fp.perm().to_string()));
    out.insert("pattern".into(), serde_json::to_value(GluingPattern::from_filling(&fp)).expect("serializes"));
    let failure = (surface.genus != fp.ctx().genus() as i64
        || !surface.alpha_is_single_curve
        || !surface.beta_is_single_curve
        || surface.vertex_classes.iter().any(|c| c.len() != 4))
    .then(|| "glued surface does not match the expected invariants".to_string());
    Ok(Outcome {
        output: Output::Report { genus: Some(fp.ctx().genus()), params: json!({ "perm": args.perm }), result: out },
        failure,
    })
}

fn template(cache: Option<PathBuf>) -> Result<TemplateDerivation, CliError> {
    let genus3 = || {
        let ctx = GenusContext::new(3).expect("genus 3 is valid");
        enumerate_filling(&ctx, &EnumerationOptions::default()).expect("genus 3 is within the default guard")
    };
    let derived = match cache {
        Some(dir) => {
            fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
            TemplateCache::new(dir).load_or_derive(genus3)
        }
        None => derive_template(&genus3()),
    };
    derived.map_err(|e| match e {
        ZPieceError::Cache(msg) => CliError::Io(msg),
        other => CliError::Validation(other.to_string()),
    })
}

fn extend(args: &PermArgs, vertex: u32, cache: Option<PathBuf>) -> CmdResult {
    let fp = filling(args)?;
    let derivation = template(cache)?;
    let t = &derivation.template;
    let out_fp = splice(&fp, vertex, t).map_err(|e| match e {
        ZPieceError::VertexOutOfRange { .. } => CliError::Usage(e.to_string()),
        other => CliError::Validation(other.to_string()),
    })?;
    let pieces = detect_zpieces(&out_fp, t);
    let mut out = Map::new();
    out.insert("input".into(), json!(fp.perm().to_string()));
    out.insert("vertex".into(), json!(vertex));
    out.insert("genus_out".into(), json!(out_fp.ctx().genus()));
    out.insert("perm".into(), json!(out_fp.perm().to_string()));
    out.insert("cycles".into(), json!(out_fp.perm().cycle_notation()));
    out.insert("verified".into(), json!(out_fp.ctx().is_filling(out_fp.perm()).unwrap_or(false)));
    out.insert("template".into(), serde_json::to_value(t).expect("serializes"));
    out.insert("zpieces".into(), serde_json::to_value(&pieces).expect("serializes"));
    Ok(report(Some(fp.ctx().genus()), json!({ "perm": args.perm, "vertex": vertex }), out))
}

/// Shared front half of `t1` and `genus`: a report that lists the failures of
/// an invalid pattern.
struct PatternReport {
    pattern: GluingPattern,
    out: Map<String, Value>,
    failure: Option<String>,
}

fn pattern_report(path: &Path) -> Result<PatternReport, CliError> {
    let p = read_pattern(path)?;
    let v = p.validate();
    let mut out = Map::new();
    out.insert("i".into(), json!(p.i));
    out.insert("polygons".into(), json!(p.polygons.len()));
    out.insert("valid".into(), json!(v.is_valid()));
    out.insert("failures".into(), serde_json::to_value(&v.failures).expect("serializes"));
    let failure = v.into_result().err().map(|e| e.to_string());
    Ok(PatternReport { pattern: p, out, failure })
}

fn pattern_error(e: PatternError) -> CliError {
    CliError::Validation(e.to_string())
}

fn t1(path: &Path) -> CmdResult {
    let params = json!({ "pattern": path.display().to_string() });
    let PatternReport { pattern: p, mut out, failure } = pattern_report(path)?;
    if failure.is_none() {
        let g = p.euler_genus().map_err(pattern_error)? as i64;
        let t = p.t1().map_err(pattern_error)?;
        let sizes = polygon_sizes(&p);
        let irregular = sizes.keys().any(|s| s % 4 != 0);
        let bound = if irregular { 4 * g - 4 } else { 4 * g - 2 };
        out.insert("genus".into(), json!(g));
        out.insert("t1".into(), json!(t));
        out.insert("polygon_sizes".into(), json!(sizes));
        out.insert("side_count_not_multiple_of_4".into(), json!(irregular));
        out.insert("t1_bound".into(), json!(bound));
        out.insert("within_bound".into(), json!(t as i64 <= bound));
    }
    Ok(Outcome { output: Output::Report { genus: None, params, result: out }, failure })
}

fn genus(path: &Path) -> CmdResult {
    let params = json!({ "pattern": path.display().to_string() });
    let PatternReport { pattern: p, mut out, mut failure } = pattern_report(path)?;
    if failure.is_none() {
        match p.euler_genus() {
            Ok(g) => {
                let v = vertex_count(&p).map_err(pattern_error)? as i64;
                let e = 2 * p.i as i64;
                let f = p.polygons.len() as i64;
                out.insert("genus".into(), json!(g));
                out.insert("vertices".into(), json!(v));
                out.insert("edges".into(), json!(e));
                out.insert("faces".into(), json!(f));
                out.insert("euler_characteristic".into(), json!(v - e + f));
                out.insert("minimal".into(), json!(g >= 1 && p.i == 2 * g - 1));
            }
            Err(e) => failure = Some(e.to_string()),
        }
    }
    Ok(Outcome { output: Output::Report { genus: None, params, result: out }, failure })
}

fn bounds(g: u32) -> CmdResult {
    let ctx = context(g)?;
    let b = BoundsReport::new(&ctx).map_err(enumeration_error)?;
    let mut out = Map::new();
    out.insert("root_count".into(), count(&b.root_count));
    out.insert("excluded".into(), count(&b.excluded));
    out.insert("upper_bound".into(), count(&b.upper_bound));
    out.insert("lg".into(), b.lg.as_ref().map_or(Value::Null, count));
    out.insert("lower_bound".into(), json!(b.lower_bound.as_ref().map(|r| r.to_string())));
    out.insert("lower_bound_f64".into(), json!(b.lower_bound_f64()));
    Ok(report(Some(g), json!({}), out))
}

fn hyp(g: u32) -> CmdResult {
    let r = HyperbolicReport::new(g).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut out = fields(&r);
    out.remove("genus");
    Ok(report(Some(g), json!({}), out))
}

fn draw(args: &PermArgs, output: Option<PathBuf>) -> CmdResult {
    let fp = filling(args)?;
    let d = diagram::render(&fp);
    let Some(path) = output else {
        return Ok(Outcome { output: Output::Raw(d.svg), failure: None });
    };
    fs::write(&path, &d.svg).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut out = Map::new();
    out.insert("output".into(), json!(path.display().to_string()));
    out.insert("edges".into(), json!(d.edges));
    out.insert("chords".into(), json!(d.chords));
    Ok(report(Some(fp.ctx().genus()), json!({ "perm": args.perm }), out))
}
