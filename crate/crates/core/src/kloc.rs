//! Virtual non-abelian localization: E-classes, Euler characteristic
//! backends and the identity check.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::charkit::{det_and_rank, sym_series, BigradedCharacter, Cocharacter, GradedGen, TruncatedSeries, Weight};
use crate::error::{Error, Result};
use crate::gradedalg::{weight0_truncated_homology, EvenGen, FreeComplex, MultiPoly, OddGen};
use crate::stack::StackModel;
use crate::strat::{git_stratify, semistable_supports, ThetaStratum};

/// `Sym(L^- ⊕ (L^+)^∨) ⊗ det(L^+)^∨[-rank L^+]` in the grading of the stratum.
#[derive(Clone, Debug)]
pub struct EClass {
    pub lambda: Cocharacter,
    pub series: TruncatedSeries,
    pub det_weight: Weight,
    pub rank_shift: i64,
}

fn gens_of(c: &BigradedCharacter, what: &str) -> Result<Vec<GradedGen>> {
    c.to_gens().ok_or_else(|| Error::Internal(format!("{what} has a negative multiplicity")))
}

pub fn e_class(m: &StackModel, s: &ThetaStratum, cutoff: i64) -> Result<EClass> {
    if cutoff > 0 {
        return Err(Error::input("cutoff", "must be <= 0"));
    }
    let plus = gens_of(&s.lplus, "L+")?;
    let mut gens = gens_of(&s.lminus, "L-")?;
    gens.extend(gens_of(&s.lplus.dual(), "L+ dual")?);
    let (det, rank) = det_and_rank(m.rank(), &plus);
    let shift = s.lambda.pair(&det);
    let series = sym_series(&gens, &s.lambda, cutoff + shift)?.twist(&det.neg(), -rank).truncate_to(cutoff);
    Ok(EClass { lambda: s.lambda.clone(), series, det_weight: det, rank_shift: rank })
}

fn parity(d: i64) -> i64 {
    if d.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn to_i64(c: BigInt) -> Result<i64> {
    c.to_i64().ok_or_else(|| Error::Internal("Euler characteristic overflows i64".into()))
}

/// A cocharacter pairing to at most `-1` with every even generator, chosen
/// by increasing box search; the first one of least norm wins.
pub fn series_grading(m: &StackModel) -> Option<Cocharacter> {
    let evens = m.cdga().even_weights();
    let r = m.rank();
    for bound in 1..=6i64 {
        let mut best: Option<(i64, Vec<i64>)> = None;
        let mut v = vec![-bound; r];
        loop {
            if v.iter().any(|&c| c != 0) && evens.iter().all(|w| w.0.iter().zip(&v).map(|(a, b)| a * b).sum::<i64>() <= -1) {
                let n: i64 = v.iter().map(|c| c * c).sum();
                if best.as_ref().is_none_or(|(b, _)| n < *b) {
                    best = Some((n, v.clone()));
                }
            }
            let mut i = 0;
            while i < r && v[i] == bound {
                v[i] = -bound;
                i += 1;
            }
            if i == r {
                break;
            }
            v[i] += 1;
        }
        if let Some((_, v)) = best {
            return Cocharacter::primitive(v).ok();
        }
    }
    None
}

/// `χ` read off the weight-0 coefficient of `char(A) · char(F)`.
pub fn chi_series(m: &StackModel, f: &FreeComplex) -> Result<i64> {
    if **f.base() != **m.cdga() {
        return Err(Error::BaseMismatch);
    }
    let eta = series_grading(m)
        .ok_or_else(|| Error::SeriesInapplicable("no cocharacter is negative on every coordinate".into()))?;
    let gc = f.generator_character();
    let top = gc.level_range(&eta).map_or(0, |(_, hi)| hi.max(0));
    let sym = sym_series(&m.cdga().graded_gens(), &eta, -top)?;
    let prod = sym.mul_character(&gc)?.euler_specialize();
    to_i64(prod.coefficient_at(&Weight::zero(m.rank()))?)
}

/// Euler characteristic of the weight-0 truncated homology.
pub fn chi_chains(m: &StackModel, f: &FreeComplex, degree_bound: u32) -> Result<(i64, bool)> {
    if **f.base() != **m.cdga() {
        return Err(Error::BaseMismatch);
    }
    let h = weight0_truncated_homology(f, degree_bound)?;
    Ok((h.euler_characteristic(), h.stabilized))
}

/// Euler characteristic of the weight-`v` part of `B_λ`.
fn chi_b(s: &ThetaStratum, exterior: Option<&BigradedCharacter>, v: &Weight, degree_bound: u32) -> Result<i64> {
    match exterior {
        Some(ch) => to_i64(ch.coefficient_at(v)),
        None => {
            let c = FreeComplex::twisted_unit(s.b.clone(), v.neg());
            let h = weight0_truncated_homology(&c, degree_bound)?;
            if !h.stabilized {
                return Err(Error::NotStabilized { max_level: degree_bound as usize });
            }
            Ok(h.euler_characteristic())
        }
    }
}

/// `χ(Z, F|_Z ⊗ E)` for one stratum.
pub fn chi_fixed(m: &StackModel, s: &ThetaStratum, f: &FreeComplex, cutoff: Option<i64>, degree_bound: u32) -> Result<i64> {
    let gc = f.generator_character();
    let top = gc.level_range(&s.lambda).map_or(0, |(_, hi)| hi);
    let e_cut = cutoff.unwrap_or(0).min(-top).min(0);
    let e = e_class(m, s, e_cut)?;
    let level0 = e.series.mul_character(&gc)?.level_part(0)?;
    let exterior = if s.b.n_even() == 0 {
        let mut ch = BigradedCharacter::one(m.rank());
        for g in s.b.odd() {
            ch = ch.mul(&BigradedCharacter::one(m.rank()).sub(&BigradedCharacter::monomial(g.weight.clone(), 0, 1))?)?;
        }
        Some(ch)
    } else {
        None
    };
    let mut total = 0i64;
    for ((w, d), c) in level0.terms() {
        if c.is_zero() {
            continue;
        }
        let chi = chi_b(s, exterior.as_ref(), &w.neg(), degree_bound)?;
        total += parity(*d) * to_i64(c.clone())? * chi;
    }
    Ok(total)
}

/// `χ(X^ss, F)` through an independent oracle, or `Unavailable`.
pub fn chi_semistable(m: &StackModel, strata: &[ThetaStratum], f: &FreeComplex, degree_bound: u32) -> Result<(i64, String)> {
    let ss = semistable_supports(m)?;
    if ss.is_empty() {
        return Ok((0, "empty".into()));
    }
    let mut killed: Vec<usize> = strata.iter().flat_map(|s| s.killed_even.iter().copied()).collect();
    killed.sort_unstable();
    killed.dedup();
    let [x] = killed[..] else {
        return Err(Error::Unavailable("semistable locus is not a single inverted-coordinate chart".into()));
    };
    let n = m.n_coordinates();
    let chart: Vec<u64> = (0..1u64 << n).filter(|mask| mask >> x & 1 == 1).collect();
    if ss != chart {
        return Err(Error::Unavailable("semistable supports differ from the chart of one coordinate".into()));
    }
    let a = m.cdga();
    let xw = a.even()[x].weight.clone();
    let inv_name = format!("{}'", a.even()[x].name);
    let mut e = vec![0u32; n + 1];
    e[x] = 1;
    e[n] = 1;
    let mut dv = MultiPoly::zero(n + 1);
    dv.add_term(e, BigRational::from_integer(1.into()));
    dv.add_term(vec![0; n + 1], BigRational::from_integer((-1).into()));
    let ext = a.extend(
        vec![EvenGen { name: inv_name, weight: xw.neg() }],
        vec![OddGen { name: "v'".into(), weight: Weight::zero(m.rank()), d: dv }],
    )?;
    let g = f.extend_base(Arc::new(ext))?;
    let h = weight0_truncated_homology(&g, degree_bound)?;
    if !h.stabilized {
        return Err(Error::NotStabilized { max_level: degree_bound as usize });
    }
    Ok((h.euler_characteristic(), format!("chart {}≠0", a.even()[x].name)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Verified,
    Mismatch,
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Term {
    pub value: Option<i64>,
    pub method: String,
}

impl Term {
    fn from(r: Result<(i64, String)>) -> Self {
        match r {
            Ok((v, method)) => Term { value: Some(v), method },
            Err(e @ Error::Unavailable(_)) => Term { value: None, method: e.to_string() },
            Err(e) => Term { value: None, method: format!("unavailable: {e}") },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumTerm {
    pub lambda: Vec<i64>,
    pub mu: String,
    pub term: Term,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalizationReport {
    pub lhs: Term,
    pub semistable: Term,
    pub corrections: Vec<StratumTerm>,
    pub verdict: Verdict,
}

impl LocalizationReport {
    /// `lhs = ss + c_1 + ...`, with `?` for unavailable terms.
    pub fn identity(&self) -> String {
        let show = |t: &Term| t.value.map_or("?".to_string(), |v| v.to_string());
        let mut rhs = vec![show(&self.semistable)];
        rhs.extend(self.corrections.iter().map(|c| show(&c.term)));
        format!("{} = {}", show(&self.lhs), rhs.join(" + "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalizationOptions {
    pub cutoff: Option<i64>,
    pub degree_bound: u32,
}

impl Default for LocalizationOptions {
    fn default() -> Self {
        LocalizationOptions { cutoff: None, degree_bound: 12 }
    }
}

/// The left side by the series oracle when it applies, else by chains.
pub fn chi_total(m: &StackModel, f: &FreeComplex, degree_bound: u32) -> Result<(i64, String)> {
    match chi_series(m, f) {
        Ok(v) => Ok((v, "series".into())),
        Err(Error::SeriesInapplicable(_)) => {
            let (v, stable) = chi_chains(m, f, degree_bound)?;
            if stable {
                Ok((v, "chains".into()))
            } else {
                Err(Error::NotStabilized { max_level: degree_bound as usize })
            }
        }
        Err(e) => Err(e),
    }
}

pub fn verify_localization(m: &StackModel, f: &FreeComplex, opts: LocalizationOptions) -> Result<LocalizationReport> {
    if **f.base() != **m.cdga() {
        return Err(Error::BaseMismatch);
    }
    let strata = git_stratify(m)?;
    let lhs = Term::from(chi_total(m, f, opts.degree_bound));
    let semistable = Term::from(chi_semistable(m, &strata, f, opts.degree_bound));
    let corrections: Vec<StratumTerm> = strata
        .par_iter()
        .map(|s| StratumTerm {
            lambda: s.lambda.components().to_vec(),
            mu: s.mu.render(),
            term: Term::from(chi_fixed(m, s, f, opts.cutoff, opts.degree_bound).map(|v| (v, "fixed".into()))),
        })
        .collect();
    let rhs: Option<i64> = std::iter::once(semistable.value)
        .chain(corrections.iter().map(|c| c.term.value))
        .sum();
    let verdict = match (lhs.value, rhs) {
        (Some(l), Some(r)) if l == r => Verdict::Verified,
        (Some(_), Some(_)) => Verdict::Mismatch,
        _ => Verdict::Indeterminate,
    };
    Ok(LocalizationReport { lhs, semistable, corrections, verdict })
}

/// Character of the associated graded of the filtration on `RΓ_S(O)`,
/// relative to `A_λ`: `Sym` of the shifted dual of `L_{S/X}` twisted by its
/// determinant, Euler-specialized.
pub fn filtration_character(m: &StackModel, s: &ThetaStratum, cutoff: i64) -> Result<TruncatedSeries> {
    let rel = s.relative_cotangent_gens(m);
    let (det, rank) = det_and_rank(m.rank(), &rel);
    let shifted: Vec<GradedGen> = rel.iter().map(|(w, d)| (w.neg(), 1 - d)).collect();
    let shift = s.lambda.pair(&det);
    let series = sym_series(&shifted, &s.lambda, cutoff - shift)?.twist(&det, 0);
    let series = if rank.rem_euclid(2) == 1 { series.negate() } else { series };
    Ok(series.euler_specialize().truncate_to(cutoff))
}

/// Character of `π_* O_S` relative to `B_λ`: `Sym(L^-)`, Euler-specialized.
pub fn pushforward_character(s: &ThetaStratum, cutoff: i64) -> Result<TruncatedSeries> {
    let gens = gens_of(&s.lminus, "L-")?;
    Ok(sym_series(&gens, &s.lambda, cutoff)?.euler_specialize())
}
