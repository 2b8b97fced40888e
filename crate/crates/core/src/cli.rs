//! Batch front-end.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::baric::{gamma_window, serre_window_data, wall_crossing_report};
use crate::charkit::{Cocharacter, Weight};
use crate::error::{Error, ErrorKind, Result};
use crate::gradedalg::{parse_element, ComplexGen, FreeComplex};
use crate::kloc::{
    chi_chains, chi_fixed, chi_semistable, chi_series, e_class, verify_localization, LocalizationOptions, Verdict,
};
use crate::stack::StackModel;
use crate::strat::{git_stratify, support_indices, validate_stratification};

#[derive(Parser, Debug)]
#[command(name = "thetastrat", version, about = "Θ-stratifications, windows and localization for Koszul quotient stacks")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, default_value_t = -12, allow_negative_numbers = true)]
    pub cutoff: i64,
    #[arg(long, global = true, default_value_t = 12)]
    pub degree_bound: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[arg(long, global = true)]
    pub max_koszul_level: Option<usize>,
    /// Sheaf file; the structure sheaf when omitted.
    #[arg(long, global = true)]
    pub sheaf: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Series,
    Chains,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a model file and report its generators
    Validate { model: PathBuf },
    /// Compute the Θ-stratification of the unstable locus
    Stratify { model: PathBuf },
    /// Euler characteristic of the sheaf on the whole stack
    Chi {
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Series)]
        method: Method,
    },
    /// E-classes and fixed-locus contributions of every stratum
    Localize { model: PathBuf },
    /// Check χ(X, F) = χ(X^ss, F) + Σ_S χ(Z_S, E_S ⊗ F|_Z)
    VerifyLocalization { model: PathBuf },
    /// Baric decomposition and Koszul-system stabilization per stratum
    Windows {
        model: PathBuf,
        /// `w` or `w,i=v,...`: weight `w` for every stratum, `v` for stratum `i`.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        window: String,
    },
    /// Window data for the two sides of a rank-one wall
    Wallcross {
        model: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Check that Serre-duality window flips are involutive
    DualityCheck { model: PathBuf },
}

/// Exit code and rendered output of one run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(kind: ErrorKind) -> i32 {
    match kind {
        ErrorKind::Math => 1,
        ErrorKind::Indeterminate => 2,
        ErrorKind::Input => 3,
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SheafGen {
    degree: i64,
    weight: Vec<i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SheafEntry {
    row: usize,
    col: usize,
    entry: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SheafSpec {
    generators: Vec<SheafGen>,
    #[serde(default)]
    differential: Vec<SheafEntry>,
}

/// Parses a complex over the model's CDGA; weights are representation weights.
pub fn sheaf_from_json(m: &StackModel, text: &str) -> Result<FreeComplex> {
    let spec: SheafSpec = serde_json::from_str(text).map_err(|e| Error::input("sheaf", e.to_string()))?;
    let mut gens = Vec::new();
    for (i, g) in spec.generators.iter().enumerate() {
        if g.weight.len() != m.rank() {
            return Err(Error::input(
                format!("generators[{i}].weight"),
                format!("expected length {}, found {}", m.rank(), g.weight.len()),
            ));
        }
        gens.push(ComplexGen::new(g.degree, Weight(g.weight.clone())));
    }
    let mut diff = BTreeMap::new();
    for (j, e) in spec.differential.iter().enumerate() {
        if e.row >= gens.len() || e.col >= gens.len() {
            return Err(Error::input(format!("differential[{j}]"), "generator index out of range"));
        }
        let a = parse_element(&e.entry, m.cdga()).map_err(|err| Error::input(format!("differential[{j}].entry"), err.to_string()))?;
        diff.insert((e.row, e.col), a);
    }
    FreeComplex::new(m.cdga().clone(), gens, diff)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })
}

fn load_model(path: &Path) -> Result<StackModel> {
    StackModel::from_json(&read(path)?)
}

fn load_sheaf(m: &StackModel, path: Option<&Path>) -> Result<FreeComplex> {
    match path {
        Some(p) => sheaf_from_json(m, &read(p)?),
        None => Ok(FreeComplex::unit(m.cdga().clone())),
    }
}

fn support_names(m: &StackModel, mask: u64) -> String {
    let names: Vec<&str> = support_indices(mask).into_iter().map(|i| m.cdga().even()[i].name.as_str()).collect();
    format!("{{{}}}", names.join(","))
}

fn render(value: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(value).expect("serializable") + "\n",
        Format::Table => {
            let mut out = String::new();
            table(value, "", &mut out);
            out
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn table(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                table(x, &key, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in items.iter().enumerate() {
                table(x, &format!("{prefix}[{i}]"), out);
            }
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            out.push_str(&format!("{prefix:<32} [{}]\n", parts.join(", ")));
        }
        x => out.push_str(&format!("{prefix:<32} {}\n", scalar(x))),
    }
}

fn parse_ints(text: &str, what: &str) -> Result<Vec<i64>> {
    text.split(',')
        .map(|p| p.trim().parse::<i64>().map_err(|_| Error::input(what, format!("not an integer list: {text:?}"))))
        .collect()
}

/// `w` or `w,i=v,...`.
fn parse_window(text: &str) -> Result<(i64, BTreeMap<usize, i64>)> {
    let mut parts = text.split(',');
    let base = parts
        .next()
        .and_then(|p| p.trim().parse().ok())
        .ok_or_else(|| Error::input("--window", format!("expected an integer weight, found {text:?}")))?;
    let mut over = BTreeMap::new();
    for p in parts {
        let (i, v) = p
            .split_once('=')
            .and_then(|(i, v)| Some((i.trim().parse().ok()?, v.trim().parse().ok()?)))
            .ok_or_else(|| Error::input("--window", format!("expected index=weight, found {p:?}")))?;
        over.insert(i, v);
    }
    Ok((base, over))
}

fn stratify_value(m: &StackModel) -> Result<(Value, bool)> {
    let strata = git_stratify(m)?;
    let mut rows = Vec::new();
    for (i, s) in strata.iter().enumerate() {
        let names = |idx: &[usize]| -> Vec<String> { idx.iter().map(|&k| m.cdga().even()[k].name.clone()).collect() };
        let odd = |idx: &[usize]| -> Vec<String> { idx.iter().map(|&k| m.cdga().odd()[k].name.clone()).collect() };
        rows.push(json!({
            "index": i,
            "lambda": s.lambda.components(),
            "mu": s.mu.render(),
            "supports": s.supports.iter().map(|&k| support_names(m, k)).collect::<Vec<_>>(),
            "killed_coordinates": names(&s.killed_even),
            "killed_relations": odd(&s.killed_odd),
            "stratum": s.a.to_string(),
            "fixed_locus": s.b.to_string(),
            "l_plus": s.lplus.to_string(),
            "l_minus": s.lminus.to_string(),
            "regular_embedding": s.flags.regular_embedding,
            "affine_bundle_over_fixed_locus": s.flags.affine_bundle_over_z,
            "quasi_smooth_window": s.flags.quasi_smooth_window_ok,
        }));
    }
    let (ok, violations) = match validate_stratification(m, &strata) {
        Ok(()) => (true, Vec::new()),
        Err(v) => (false, v.into_iter().map(|v| v.message).collect()),
    };
    Ok((json!({ "strata": rows, "valid": ok, "violations": violations }), ok))
}

fn dispatch(cfg: &RunConfig) -> Result<(Value, i32)> {
    let sheaf = cfg.sheaf.as_deref();
    match &cfg.command {
        Command::Validate { model } => {
            let m = load_model(model)?;
            Ok((
                json!({
                    "valid": true,
                    "rank": m.rank(),
                    "coordinates": m.n_coordinates(),
                    "relations": m.cdga().n_odd(),
                    "algebra": m.cdga().to_string(),
                    "linearization": m.linearization().0,
                }),
                0,
            ))
        }
        Command::Stratify { model } => {
            let m = load_model(model)?;
            let (v, ok) = stratify_value(&m)?;
            Ok((v, if ok { 0 } else { 1 }))
        }
        Command::Chi { model, method } => {
            let m = load_model(model)?;
            let f = load_sheaf(&m, sheaf)?;
            match method {
                Method::Series => Ok((json!({ "chi": chi_series(&m, &f)?, "method": "series" }), 0)),
                Method::Chains => {
                    let (v, stable) = chi_chains(&m, &f, cfg.degree_bound)?;
                    Ok((
                        json!({ "chi": v, "method": "chains", "stabilized": stable, "degree_bound": cfg.degree_bound }),
                        if stable { 0 } else { 2 },
                    ))
                }
            }
        }
        Command::Localize { model } => {
            let m = load_model(model)?;
            let f = load_sheaf(&m, sheaf)?;
            let strata = git_stratify(&m)?;
            let mut code = 0;
            let mut rows = Vec::new();
            for s in &strata {
                let e = e_class(&m, s, cfg.cutoff.min(0))?;
                let term = match chi_fixed(&m, s, &f, Some(cfg.cutoff), cfg.degree_bound) {
                    Ok(v) => json!(v),
                    Err(err) => {
                        code = code.max(exit_code(err.kind()));
                        json!(format!("unavailable: {err}"))
                    }
                };
                rows.push(json!({
                    "lambda": s.lambda.components(),
                    "mu": s.mu.render(),
                    "e_class": e.series.euler_specialize().to_string(),
                    "correction": term,
                }));
            }
            let ss = match chi_semistable(&m, &strata, &f, cfg.degree_bound) {
                Ok((v, method)) => json!({ "value": v, "method": method }),
                Err(err) => {
                    code = code.max(exit_code(err.kind()));
                    json!({ "value": Value::Null, "method": format!("unavailable: {err}") })
                }
            };
            Ok((json!({ "strata": rows, "semistable": ss }), code))
        }
        Command::VerifyLocalization { model } => {
            let m = load_model(model)?;
            let f = load_sheaf(&m, sheaf)?;
            let opts = LocalizationOptions { cutoff: Some(cfg.cutoff), degree_bound: cfg.degree_bound };
            let r = verify_localization(&m, &f, opts)?;
            let code = match r.verdict {
                Verdict::Verified => 0,
                Verdict::Mismatch => 1,
                Verdict::Indeterminate => 2,
            };
            let mut v = serde_json::to_value(&r).expect("serializable");
            v["identity"] = json!(r.identity());
            Ok((v, code))
        }
        Command::Windows { model, window } => {
            let m = load_model(model)?;
            let f = load_sheaf(&m, sheaf)?;
            let (base, over) = parse_window(window)?;
            let strata = git_stratify(&m)?;
            if let Some(&i) = over.keys().find(|&&i| i >= strata.len()) {
                return Err(Error::input("--window", format!("stratum index {i} out of range")));
            }
            let mut rows = Vec::new();
            for (i, s) in strata.iter().enumerate() {
                let w = over.get(&i).copied().unwrap_or(base);
                let g = gamma_window(&m, &f, s, w, cfg.max_koszul_level)?;
                let sw = serre_window_data(s);
                rows.push(json!({
                    "lambda": s.lambda.components(),
                    "weight": w,
                    "window_size": -sw.a,
                    "geq": g.geq.generator_character().to_string(),
                    "lt": g.lt.generator_character().to_string(),
                    "stabilized_at": g.stabilized_at,
                    "max_koszul_level": g.max_level,
                }));
            }
            Ok((json!({ "strata": rows }), 0))
        }
        Command::Wallcross { model, lambda } => {
            let m = load_model(model)?;
            let l = Cocharacter::primitive(parse_ints(lambda, "--lambda")?)?;
            if l.rank() != m.rank() {
                return Err(Error::RankMismatch { expected: m.rank(), found: l.rank() });
            }
            let r = wall_crossing_report(&m, &l)?;
            Ok((serde_json::to_value(&r).expect("serializable"), 0))
        }
        Command::DualityCheck { model } => {
            let m = load_model(model)?;
            let strata = git_stratify(&m)?;
            let mut ok = true;
            let mut rows = Vec::new();
            for s in &strata {
                let sw = serre_window_data(s);
                let ws: Vec<i64> = (sw.a - 3..=sw.a + 4).collect();
                let flipped: Vec<i64> = ws.iter().map(|&w| sw.flip(w)).collect();
                let involutive = ws.iter().all(|&w| sw.flip(sw.flip(w)) == w);
                ok &= involutive;
                rows.push(json!({
                    "lambda": s.lambda.components(),
                    "a": sw.a,
                    "weights": ws,
                    "flipped": flipped,
                    "involutive": involutive,
                }));
            }
            Ok((json!({ "strata": rows, "ok": ok }), if ok { 0 } else { 1 }))
        }
    }
}

pub fn run(cfg: &RunConfig) -> Outcome {
    match dispatch(cfg) {
        Ok((v, code)) => Outcome { code, stdout: render(&v, cfg.format), stderr: String::new() },
        Err(e) => {
            let code = exit_code(e.kind());
            let mut stderr = format!("error: {e}\n");
            if let Error::Validation(problems) = &e {
                for p in problems {
                    stderr.push_str(&format!("  {p}\n"));
                }
            }
            Outcome { code, stdout: String::new(), stderr }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_spec() {
        assert_eq!(parse_window("-1").unwrap(), (-1, BTreeMap::new()));
        assert_eq!(parse_window("2,0=-3,4=1").unwrap(), (2, BTreeMap::from([(0, -3), (4, 1)])));
        assert!(parse_window("a").is_err());
        assert!(parse_window("0,1").is_err());
    }

    #[test]
    fn sheaf_parsing() {
        let m = StackModel::from_json(r#"{"rank":1,"coordinates":[{"name":"x","action_weight":[1]}],"linearization":[1]}"#).unwrap();
        let f = sheaf_from_json(
            &m,
            r#"{"generators":[{"degree":0,"weight":[0]},{"degree":1,"weight":[-1]}],"differential":[{"row":0,"col":1,"entry":"x"}]}"#,
        )
        .unwrap();
        assert_eq!(f.rank(), 2);
        match sheaf_from_json(&m, r#"{"generators":[{"degree":0,"weight":[0,1]}]}"#) {
            Err(Error::Input { path, .. }) => assert_eq!(path, "generators[0].weight"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            sheaf_from_json(&m, r#"{"generators":[{"degree":0,"weight":[0]}],"differential":[{"row":0,"col":0,"entry":"x+"}]}"#),
            Err(Error::Input { .. })
        ));
    }
}
