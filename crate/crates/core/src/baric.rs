//! Chain-level baric truncation, Koszul systems, window functors,
//! semiorthogonality certificates, Serre-duality windows and wall crossing.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::charkit::{det_and_rank, BigradedCharacter, Cocharacter, TruncatedSeries, Weight};
use crate::error::{Error, Result};
use crate::gradedalg::{
    weight_truncated_homology, CdgaElement, ComplexGen, EvenGen, FreeComplex, HomologyResult, KoszulCdga,
};
use crate::stack::{cotangent_character, StackModel};
use crate::strat::{stratum_from_cocharacter, ThetaStratum};

/// Splits `F` over `A_λ` into the subcomplex on generators of level `>= w`
/// and the quotient on the rest.
pub fn baric_truncate(f: &FreeComplex, lambda: &Cocharacter, w: i64) -> Result<(FreeComplex, FreeComplex)> {
    let base = f.base();
    for (&(k, l), e) in f.diff() {
        for m in e.terms().keys() {
            let level = lambda.pair(&base.mono_weight(m));
            if level > 0 {
                return Err(Error::PositiveLevelEntry { row: k, col: l, level });
            }
        }
    }
    let level: Vec<i64> = f.gens().iter().map(|g| lambda.pair(&g.weight)).collect();
    let geq: Vec<usize> = (0..f.rank()).filter(|&i| level[i] >= w).collect();
    let lt: Vec<usize> = (0..f.rank()).filter(|&i| level[i] < w).collect();
    for (&(k, l), _) in f.diff() {
        if level[l] >= w && level[k] < w {
            return Err(Error::Internal(format!("d(e{l}) leaves the level >= {w} part through e{k}")));
        }
    }
    Ok((f.select(&geq), f.select(&lt)))
}

/// One level of the Koszul system of a stratum.
#[derive(Clone, Debug)]
pub struct KoszulSystemLevel {
    pub n: usize,
    pub complex: FreeComplex,
    /// Matrix of `K_n -> K_{n+1}`, keyed `(row in K_{n+1}, column in K_n)`.
    pub transition: BTreeMap<(usize, usize), CdgaElement>,
    /// Generator mapped to `1` by the augmentation `K_n -> O`.
    pub augmentation_index: usize,
}

fn power(base: &KoszulCdga, i: usize, n: usize) -> CdgaElement {
    let mut p = base.one();
    for _ in 0..n {
        p = p.mul(&base.x(i));
    }
    p
}

/// `[e_0 -> e_1^*]` with `d e_0 = x^n e_1^*`, `e_1^*` in degree `-1`.
fn single_koszul(base: &Arc<KoszulCdga>, i: usize, n: usize) -> Result<(FreeComplex, BTreeMap<(usize, usize), CdgaElement>)> {
    let rho = base.even()[i].weight.clone();
    let gens = vec![ComplexGen::new(0, Weight::zero(base.rank())), ComplexGen::new(-1, rho.scale(-(n as i64)))];
    let c = FreeComplex::new(base.clone(), gens, BTreeMap::from([((1, 0), power(base, i, n))]))?;
    let t = BTreeMap::from([((0, 0), base.one()), ((1, 1), base.x(i))]);
    Ok((c, t))
}

fn tensor_transition(
    a: &BTreeMap<(usize, usize), CdgaElement>,
    b: &BTreeMap<(usize, usize), CdgaElement>,
    nb: usize,
) -> BTreeMap<(usize, usize), CdgaElement> {
    let mut out = BTreeMap::new();
    for (&(i2, i), x) in a {
        for (&(j2, j), y) in b {
            out.insert((i2 * nb + j2, i * nb + j), x.mul(y));
        }
    }
    out
}

/// `K_n` over the ambient CDGA: tensor product over the killed even
/// coordinates of the dual Koszul complexes on their `n`-th powers.
pub fn koszul_system(m: &StackModel, s: &ThetaStratum, n: usize) -> Result<KoszulSystemLevel> {
    if n == 0 {
        return Err(Error::input("n", "Koszul levels start at 1"));
    }
    let base = m.cdga();
    let mut complex = FreeComplex::unit(base.clone());
    let mut transition = BTreeMap::from([((0, 0), base.one())]);
    for &i in &s.killed_even {
        let (k, t) = single_koszul(base, i, n)?;
        transition = tensor_transition(&transition, &t, k.rank());
        complex = complex.tensor(&k)?;
    }
    Ok(KoszulSystemLevel { n, complex, transition, augmentation_index: 0 })
}

#[derive(Clone, Debug)]
pub struct GammaWindow {
    pub geq: FreeComplex,
    pub lt: FreeComplex,
    pub stabilized_at: usize,
    pub max_level: usize,
}

fn level_range(f: &FreeComplex, lambda: &Cocharacter) -> Option<(i64, i64)> {
    f.generator_character().level_range(lambda)
}

/// The default bound on the Koszul level searched by [`gamma_window`].
pub fn default_max_koszul_level(m: &StackModel, s: &ThetaStratum, f: &FreeComplex, w: i64) -> usize {
    let a = m.cdga();
    let min_killed = s.killed_even.iter().map(|&i| s.lambda.pair(&a.even()[i].weight)).min().unwrap_or(1).max(1);
    let spread = match level_range(f, &s.lambda) {
        Some((lo, hi)) => (hi - w + 1).max(w - lo).max(0),
        None => 0,
    };
    2 + ((spread + min_killed - 1) / min_killed) as usize
}

/// `β^{>=w}` and `β^{<w}` of `(K_n ⊗ F)|_S` and `(K_n^∨ ⊗ F)|_S`, at the first
/// level `n` where both are stationary.
pub fn gamma_window(m: &StackModel, f: &FreeComplex, s: &ThetaStratum, w: i64, max_level: Option<usize>) -> Result<GammaWindow> {
    if **f.base() != **m.cdga() {
        return Err(Error::BaseMismatch);
    }
    let max_level = max_level.unwrap_or_else(|| default_max_koszul_level(m, s, f, w));
    if f.is_zero() {
        let z = FreeComplex::zero(s.a.clone());
        return Ok(GammaWindow { geq: z.clone(), lt: z, stabilized_at: 1, max_level });
    }
    let at = |n: usize| -> Result<(FreeComplex, FreeComplex)> {
        let k = koszul_system(m, s, n)?.complex;
        let plus = k.tensor(f)?.restrict(s.a.clone(), &s.a_map)?;
        let minus = k.dual()?.tensor(f)?.restrict(s.a.clone(), &s.a_map)?;
        let (geq, _) = baric_truncate(&plus, &s.lambda, w)?;
        let (_, lt) = baric_truncate(&minus, &s.lambda, w)?;
        Ok((geq, lt))
    };
    let mut prev = at(1)?;
    for n in 1..=max_level {
        let next = at(n + 1)?;
        if prev == next {
            return Ok(GammaWindow { geq: prev.0, lt: prev.1, stabilized_at: n, max_level });
        }
        prev = next;
    }
    Err(Error::NotStabilized { max_level })
}

/// `i_*(A_λ<e>)` for a stratum cut out by killed even coordinates only: the
/// Koszul complex on those coordinates, twisted by `weight`.
pub fn pushforward_twisted_unit(m: &StackModel, s: &ThetaStratum, weight: &Weight) -> Result<FreeComplex> {
    if !s.flags.regular_embedding {
        return Err(Error::Unavailable("pushforward needs a regular embedding".into()));
    }
    let base = m.cdga();
    let mut c = FreeComplex::twisted_unit(base.clone(), weight.clone());
    for &i in &s.killed_even {
        let rho = base.even()[i].weight.clone();
        let gens = vec![ComplexGen::new(0, Weight::zero(base.rank())), ComplexGen::new(1, rho)];
        let k = FreeComplex::new(base.clone(), gens, BTreeMap::from([((0, 1), base.x(i))]))?;
        c = c.tensor(&k)?;
    }
    Ok(c)
}

/// A weight vector at the given level of a primitive cocharacter.
pub fn weight_at_level(lambda: &Cocharacter, level: i64) -> Weight {
    // extended Euclid on the components
    let comps = lambda.components();
    let mut coeffs = vec![0i64; comps.len()];
    let mut g = 0i64;
    for (i, &c) in comps.iter().enumerate() {
        if c == 0 {
            continue;
        }
        if g == 0 {
            g = c;
            coeffs[i] = 1;
            continue;
        }
        let (d, s, t) = ext_gcd(g, c);
        for x in coeffs.iter_mut() {
            *x *= s;
        }
        coeffs[i] = t;
        g = d;
    }
    if g < 0 {
        for x in coeffs.iter_mut() {
            *x = -*x;
        }
    }
    Weight(coeffs.into_iter().map(|c| c * level).collect())
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (d, s, t) = ext_gcd(b, a.rem_euclid(b));
        (d, t, s - a.div_euclid(b) * t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateVerdict {
    Certified,
    Failed,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub verdict: CertificateVerdict,
    pub homology: HomologyResult,
}

/// Checks `RHom(F, G)^T = 0` through the weight-0 truncated homology of the
/// Hom complex.
pub fn semiorthogonality_certificate(f: &FreeComplex, g: &FreeComplex, degree_bound: u32) -> Result<Certificate> {
    let h = f.hom(g)?;
    let homology = weight_truncated_homology(&h, &Weight::zero(h.base().rank()), degree_bound)?;
    let verdict = match (homology.stabilized, homology.is_acyclic()) {
        (false, _) => CertificateVerdict::Inconclusive,
        (true, true) => CertificateVerdict::Certified,
        (true, false) => CertificateVerdict::Failed,
    };
    Ok(Certificate { verdict, homology })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SerreWindow {
    /// `λ`-weight of the dualizing sheaf of the stratum along the fixed locus.
    pub a: i64,
}

impl SerreWindow {
    pub fn flip(&self, w: i64) -> i64 {
        self.a + 1 - w
    }
}

pub fn serre_window_data(s: &ThetaStratum) -> SerreWindow {
    let a = s
        .a
        .graded_gens()
        .iter()
        .map(|(w, d)| if d.rem_euclid(2) == 0 { s.lambda.pair(w) } else { -s.lambda.pair(w) })
        .sum();
    SerreWindow { a }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WallCrossingCase {
    Equivalence,
    EmbedPlusIntoMinus,
    EmbedMinusIntoPlus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WallCrossingReport {
    pub lambda_plus: Vec<i64>,
    pub c: i64,
    pub case: WallCrossingCase,
    pub a_plus: i64,
    pub a_minus: i64,
    pub window_plus: i64,
    pub window_minus: i64,
}

/// Compares the windows of the strata of `λ_+` and `λ_+^{-1}`.
pub fn wall_crossing_report(m: &StackModel, lambda_plus: &Cocharacter) -> Result<WallCrossingReport> {
    for g in m.cdga().odd() {
        let p = lambda_plus.pair(&g.weight);
        if p != 0 {
            return Err(Error::HypothesisViolated(format!(
                "relation {} has weight {p} under the wall cocharacter, so the degree-1 cotangent part is not of weight 0",
                g.name
            )));
        }
    }
    let cot = cotangent_character(m);
    let c = lambda_plus.pair(&cot.det_weight);
    let plus = stratum_from_cocharacter(m, lambda_plus)?;
    let minus = stratum_from_cocharacter(m, &lambda_plus.inverse())?;
    let a_plus = serre_window_data(&plus).a;
    let a_minus = serre_window_data(&minus).a;
    let case = match c {
        0 => WallCrossingCase::Equivalence,
        c if c > 0 => WallCrossingCase::EmbedPlusIntoMinus,
        _ => WallCrossingCase::EmbedMinusIntoPlus,
    };
    Ok(WallCrossingReport {
        lambda_plus: lambda_plus.components().to_vec(),
        c,
        case,
        a_plus,
        a_minus,
        window_plus: -a_plus,
        window_minus: -a_minus,
    })
}

/// Character of `RΓ_S(O)` divided by the character of `A_λ`, through level
/// `cutoff`, computed from the homology of the one-variable Koszul systems
/// and the exterior factors of the killed odd generators.
pub fn koszul_colimit_character(m: &StackModel, s: &ThetaStratum, cutoff: i64) -> Result<TruncatedSeries> {
    let base = m.cdga();
    let lambda = &s.lambda;
    let rank = m.rank();
    let lift: i64 = s.killed_odd.iter().map(|&j| lambda.pair(&base.odd()[j].weight)).sum();
    let inner = cutoff - lift;
    let mut acc = TruncatedSeries::one(lambda.clone());
    for &i in &s.killed_even {
        let rho = base.even()[i].weight.clone();
        let l = lambda.pair(&rho);
        let one_var = Arc::new(KoszulCdga::new(rank, vec![EvenGen { name: "x".into(), weight: rho.clone() }], vec![])?);
        let k_min = inner.div_euclid(l) - if inner.rem_euclid(l) == 0 { 0 } else { -1 };
        let factor_at = |n: usize| -> Result<BigradedCharacter> {
            let (k, _) = single_koszul(&one_var, 0, n)?;
            let mut ch = BigradedCharacter::zero(rank);
            let bound = (n as i64 + k_min.abs() + 2) as u32;
            for j in k_min..=1 {
                let v = rho.scale(j);
                let h = weight_truncated_homology(&k, &v, bound)?;
                if !h.stabilized {
                    return Err(Error::NotStabilized { max_level: n });
                }
                ch.add_term(v, 0, h.euler_characteristic().into());
            }
            Ok(ch)
        };
        let limit = k_min.unsigned_abs() as usize + 2;
        let mut prev = factor_at(1)?;
        let mut found = None;
        for n in 1..=limit {
            let next = factor_at(n + 1)?;
            if next == prev {
                found = Some(prev.clone());
                break;
            }
            prev = next;
        }
        let factor = found.ok_or(Error::NotStabilized { max_level: limit })?;
        acc = acc.mul(&TruncatedSeries::truncated(lambda.clone(), inner, &factor)?)?;
    }
    for &j in &s.killed_odd {
        let mut f = BigradedCharacter::one(rank);
        f.add_term(base.odd()[j].weight.clone(), 0, (-1).into());
        acc = acc.mul_character(&f)?;
    }
    Ok(acc.truncate_to(cutoff))
}

/// Relative cotangent character of a stratum with its determinant and rank.
pub fn relative_cotangent(m: &StackModel, s: &ThetaStratum) -> (BigradedCharacter, Weight, i64) {
    let gens = s.relative_cotangent_gens(m);
    let (det, rank) = det_and_rank(m.rank(), &gens);
    (BigradedCharacter::from_gens(m.rank(), &gens), det, rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strat::git_stratify;

    fn model(json: &str) -> StackModel {
        StackModel::from_json(json).unwrap()
    }

    fn lam(v: &[i64]) -> Cocharacter {
        Cocharacter::primitive(v.to_vec()).unwrap()
    }

    #[test]
    fn split_complex_truncation() {
        let a = Arc::new(KoszulCdga::point(1));
        let f = FreeComplex::twisted_unit(a.clone(), Weight(vec![0]))
            .direct_sum(&FreeComplex::twisted_unit(a, Weight(vec![-2])))
            .unwrap();
        let (geq, lt) = baric_truncate(&f, &lam(&[1]), -1).unwrap();
        assert_eq!(geq.gens(), &f.gens()[..1]);
        assert_eq!(lt.gens(), &f.gens()[1..]);
        let (all, none) = baric_truncate(&f, &lam(&[1]), -10).unwrap();
        assert_eq!(all, f);
        assert!(none.is_zero());
    }

    #[test]
    fn truncation_of_y_multiplication() {
        let a = Arc::new(KoszulCdga::new(1, vec![EvenGen { name: "y".into(), weight: Weight(vec![-1]) }], vec![]).unwrap());
        let gens = vec![ComplexGen::new(0, Weight(vec![0])), ComplexGen::new(1, Weight(vec![-1]))];
        let f = FreeComplex::new(a.clone(), gens, BTreeMap::from([((0, 1), a.x(0))])).unwrap();
        let (geq, lt) = baric_truncate(&f, &lam(&[1]), 0).unwrap();
        assert_eq!(geq.gens(), &[ComplexGen::new(0, Weight(vec![0]))]);
        assert_eq!(lt.gens(), &[ComplexGen::new(1, Weight(vec![-1]))]);
        assert!(geq.diff().is_empty() && lt.diff().is_empty());
    }

    #[test]
    fn positive_level_entry_rejected() {
        let a = Arc::new(KoszulCdga::new(1, vec![EvenGen { name: "x".into(), weight: Weight(vec![1]) }], vec![]).unwrap());
        let gens = vec![ComplexGen::new(0, Weight(vec![0])), ComplexGen::new(1, Weight(vec![1]))];
        let f = FreeComplex::new(a.clone(), gens, BTreeMap::from([((0, 1), a.x(0))])).unwrap();
        assert!(matches!(baric_truncate(&f, &lam(&[1]), 0), Err(Error::PositiveLevelEntry { .. })));
    }

    #[test]
    fn koszul_levels_and_transitions() {
        let m = model(r#"{"rank":1,"coordinates":[{"name":"x","action_weight":[1]}],"linearization":[1]}"#);
        let s = &git_stratify(&m).unwrap()[0];
        let k2 = koszul_system(&m, s, 2).unwrap();
        assert_eq!(k2.complex.gens()[1], ComplexGen::new(-1, Weight(vec![2])));
        assert_eq!(k2.transition.get(&(1, 1)), Some(&m.cdga().x(0)));
        let m2 = model(
            r#"{"rank":1,"coordinates":[{"name":"x","action_weight":[1]},{"name":"y","action_weight":[2]}],"linearization":[1]}"#,
        );
        let s2 = &git_stratify(&m2).unwrap()[0];
        let k = koszul_system(&m2, s2, 1).unwrap();
        assert_eq!(k.complex.rank(), 4);
    }

    #[test]
    fn serre_examples() {
        let m = model(
            r#"{"rank":1,"coordinates":[{"name":"x","action_weight":[1]},{"name":"y","action_weight":[-1]}],
                "relations":[{"name":"u","action_weight":[0],"du":"x*y"}],"linearization":[1]}"#,
        );
        let s = &git_stratify(&m).unwrap()[0];
        let sw = serre_window_data(s);
        assert_eq!(sw.a, -1);
        assert_eq!(sw.flip(sw.flip(5)), 5);
        let pt = model(r#"{"rank":1,"coordinates":[{"name":"x","action_weight":[1]}],"linearization":[1]}"#);
        assert_eq!(serre_window_data(&git_stratify(&pt).unwrap()[0]).a, 0);
    }

    #[test]
    fn wall_crossing_examples() {
        let flop = model(
            r#"{"rank":1,"coordinates":[{"name":"x","action_weight":[1]},{"name":"y","action_weight":[-1]}],"linearization":[1]}"#,
        );
        let r = wall_crossing_report(&flop, &lam(&[1])).unwrap();
        assert_eq!((r.c, r.case), (0, WallCrossingCase::Equivalence));
        let m = model(
            r#"{"rank":1,"coordinates":[{"name":"x","action_weight":[1]},{"name":"y","action_weight":[-2]}],"linearization":[1]}"#,
        );
        let r = wall_crossing_report(&m, &lam(&[1])).unwrap();
        assert_eq!((r.c, r.a_plus, r.a_minus), (1, -1, -2));
        assert_eq!(r.window_minus - r.window_plus, r.c);
        let bad = model(
            r#"{"rank":1,"coordinates":[{"name":"x","action_weight":[1]}],
                "relations":[{"name":"u","action_weight":[2],"du":"x^2"}],"linearization":[1]}"#,
        );
        assert!(matches!(wall_crossing_report(&bad, &lam(&[1])), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn weight_at_level_hits_level() {
        for v in [vec![3, -2], vec![0, 1], vec![-4, 6, 9], vec![-1]] {
            let l = lam(&v);
            for level in [-3, 0, 5] {
                assert_eq!(l.pair(&weight_at_level(&l, level)), level);
            }
        }
    }
}
