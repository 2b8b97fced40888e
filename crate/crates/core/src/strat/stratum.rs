use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::charkit::{BigradedCharacter, Cocharacter, GradedGen, Weight};
use crate::error::{Error, Result};
use crate::gradedalg::{KoszulCdga, VarMap};
use crate::stack::{cotangent_character, StackModel};

/// Instability value `μ = -<ℓ, λ>/|λ|`, stored exactly as a sign and a square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mu {
    negative: bool,
    square: BigRational,
}

impl Mu {
    pub fn from_pairing(pairing: i64, norm_sq: i64) -> Self {
        let square = BigRational::new(BigInt::from(pairing) * pairing, BigInt::from(norm_sq));
        Mu { negative: pairing > 0, square }
    }

    pub fn from_square(square: BigRational) -> Self {
        Mu { negative: false, square }
    }

    pub fn square(&self) -> &BigRational {
        &self.square
    }

    pub fn is_positive(&self) -> bool {
        !self.negative && !self.square.is_zero()
    }

    fn signed_cmp_key(&self) -> (i8, BigRational) {
        match (self.negative, self.square.is_zero()) {
            (_, true) => (0, BigRational::zero()),
            (false, false) => (1, self.square.clone()),
            (true, false) => (-1, -self.square.clone()),
        }
    }

    /// `(p/q)` when `μ` is rational, otherwise `sqrt(p/q)`.
    pub fn render(&self) -> String {
        let sign = if self.negative && !self.square.is_zero() { "-" } else { "" };
        let n = self.square.numer();
        let d = self.square.denom();
        let (rn, rd) = (n.sqrt(), d.sqrt());
        if &(&rn * &rn) == n && &(&rd * &rd) == d {
            let r = BigRational::new(rn, rd);
            if r.denom() == &BigInt::from(1) {
                format!("{sign}{}", r.numer())
            } else {
                format!("{sign}{}/{}", r.numer(), r.denom())
            }
        } else if d == &BigInt::from(1) {
            format!("{sign}sqrt({n})")
        } else {
            format!("{sign}sqrt({n}/{d})")
        }
    }
}

impl PartialOrd for Mu {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mu {
    fn cmp(&self, other: &Self) -> Ordering {
        self.signed_cmp_key().cmp(&other.signed_cmp_key())
    }
}

impl fmt::Display for Mu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StratumFlags {
    pub regular_embedding: bool,
    pub affine_bundle_over_z: bool,
    pub quasi_smooth_window_ok: bool,
}

/// A derived Θ-stratum attached to a cocharacter.
#[derive(Clone, Debug)]
pub struct ThetaStratum {
    pub lambda: Cocharacter,
    pub mu: Mu,
    pub killed_even: Vec<usize>,
    pub killed_odd: Vec<usize>,
    pub kept_even: Vec<usize>,
    pub kept_odd: Vec<usize>,
    /// `A_λ`: generators of level `<= 0`.
    pub a: Arc<KoszulCdga>,
    pub a_map: VarMap,
    /// `B_λ`: generators of level exactly `0`.
    pub b: Arc<KoszulCdga>,
    pub b_map: VarMap,
    pub lplus: BigradedCharacter,
    pub lminus: BigradedCharacter,
    pub flags: StratumFlags,
    /// Coordinate supports (bitmasks) whose optimal destabilizer is `λ`.
    pub supports: Vec<u64>,
}

impl ThetaStratum {
    /// Conormal contributions of the killed generators, degree raised by one.
    pub fn relative_cotangent_gens(&self, m: &StackModel) -> Vec<GradedGen> {
        let a = m.cdga();
        self.killed_even
            .iter()
            .map(|&i| (a.even()[i].weight.clone(), 1))
            .chain(self.killed_odd.iter().map(|&j| (a.odd()[j].weight.clone(), 2)))
            .collect()
    }

    /// Generators of `A_λ` plus the torus directions.
    pub fn stratum_cotangent(&self) -> BigradedCharacter {
        let mut gens = self.a.graded_gens();
        for _ in 0..self.a.rank() {
            gens.push((Weight::zero(self.a.rank()), -1));
        }
        BigradedCharacter::from_gens(self.a.rank(), &gens)
    }

    /// Kept generators at negative level.
    pub fn negative_gens(&self) -> Vec<GradedGen> {
        self.a
            .graded_gens()
            .into_iter()
            .filter(|(w, _)| self.lambda.pair(w) < 0)
            .collect()
    }

    pub fn level(&self, w: &Weight) -> i64 {
        self.lambda.pair(w)
    }
}

/// Builds `A_λ`, `B_λ` and `L^±` for `λ`.
pub fn stratum_from_cocharacter(m: &StackModel, lambda: &Cocharacter) -> Result<ThetaStratum> {
    if lambda.rank() != m.rank() {
        return Err(Error::RankMismatch { expected: m.rank(), found: lambda.rank() });
    }
    let x = m.cdga();
    let (le, lo) = x.levels(lambda);
    let killed_even: Vec<usize> = (0..le.len()).filter(|&i| le[i] >= 1).collect();
    let killed_odd: Vec<usize> = (0..lo.len()).filter(|&j| lo[j] >= 1).collect();
    let kept_even: Vec<usize> = (0..le.len()).filter(|&i| le[i] <= 0).collect();
    let kept_odd: Vec<usize> = (0..lo.len()).filter(|&j| lo[j] <= 0).collect();
    let (a, a_map) = x.sub_presentation(&kept_even, &kept_odd)?;
    let (ae, ao) = a.levels(lambda);
    let zero_even: Vec<usize> = (0..ae.len()).filter(|&i| ae[i] == 0).collect();
    let zero_odd: Vec<usize> = (0..ao.len()).filter(|&j| ao[j] == 0).collect();
    let (b, ab_map) = a.sub_presentation(&zero_even, &zero_odd)?;
    let b_map = a_map.then(&ab_map);

    let full = cotangent_character(m).full;
    let lplus = full.filter(|w, _| lambda.pair(w) >= 1);
    let lminus = full.filter(|w, _| lambda.pair(w) <= -1);

    let pairing = lambda.pair(m.linearization());
    let norm_sq: i64 = lambda.components().iter().map(|c| c * c).sum();
    let mu = Mu::from_pairing(pairing, norm_sq);

    let mut s = ThetaStratum {
        lambda: lambda.clone(),
        mu,
        killed_even,
        killed_odd,
        kept_even,
        kept_odd,
        a: Arc::new(a),
        a_map,
        b: Arc::new(b),
        b_map,
        lplus,
        lminus,
        flags: StratumFlags { regular_embedding: true, affine_bundle_over_z: true, quasi_smooth_window_ok: true },
        supports: Vec::new(),
    };
    s.flags = classify(&s);
    Ok(s)
}

pub fn classify(s: &ThetaStratum) -> StratumFlags {
    let (_, ao) = s.a.levels(&s.lambda);
    StratumFlags {
        regular_embedding: s.killed_odd.is_empty(),
        affine_bundle_over_z: ao.iter().all(|&l| l == 0),
        quasi_smooth_window_ok: s.lminus.terms().keys().all(|(_, d)| *d != 1),
    }
}

/// Primitive integer vector on the ray of a nonzero rational vector.
pub(crate) fn primitive_from_rational(v: &[BigRational]) -> Result<Cocharacter> {
    let mut lcm = BigInt::from(1);
    for x in v {
        lcm = num_integer::lcm(lcm, x.denom().clone());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = num_integer::gcd(g, x.abs());
    }
    if g.is_zero() {
        return Err(Error::ZeroCocharacter);
    }
    let comps: Result<Vec<i64>> = ints
        .iter()
        .map(|x| (x / &g).to_i64().ok_or_else(|| Error::Internal("cocharacter entry overflows i64".into())))
        .collect();
    Cocharacter::primitive(comps?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(coords: &[(&str, i64)], rels: &[(&str, i64, &str)], l: i64) -> StackModel {
        let c: Vec<String> = coords
            .iter()
            .map(|(n, w)| format!(r#"{{"name":"{n}","action_weight":[{w}]}}"#))
            .collect();
        let r: Vec<String> = rels
            .iter()
            .map(|(n, w, f)| format!(r#"{{"name":"{n}","degree":1,"action_weight":[{w}],"du":"{f}"}}"#))
            .collect();
        StackModel::from_json(&format!(
            r#"{{"rank":1,"coordinates":[{}],"relations":[{}],"linearization":[{l}]}}"#,
            c.join(","),
            r.join(",")
        ))
        .unwrap()
    }

    fn lam(v: i64) -> Cocharacter {
        Cocharacter::primitive(vec![v]).unwrap()
    }

    #[test]
    fn positive_relation_weight_is_classical() {
        let m = model(&[("x", 1), ("y", -1)], &[("u", 2, "x^2")], 1);
        let s = stratum_from_cocharacter(&m, &lam(-1)).unwrap();
        assert_eq!(s.a.to_string(), "k[y]");
        assert_eq!(s.killed_odd, vec![0]);
        assert!(!s.flags.regular_embedding);
        assert!(s.flags.affine_bundle_over_z);
    }

    #[test]
    fn zero_relation_weight() {
        let m = model(&[("x", 1), ("y", -1)], &[("u", 0, "x*y")], 1);
        let s = stratum_from_cocharacter(&m, &lam(-1)).unwrap();
        assert_eq!(s.a.to_string(), "k[y,u | du = 0]");
        assert_eq!(s.b.to_string(), "k[u | du = 0]");
        assert!(s.flags.regular_embedding);
        assert!(s.flags.affine_bundle_over_z);
    }

    #[test]
    fn negative_relation_weight() {
        let m = model(&[("x", 1), ("y", -1)], &[("u", -2, "y^2")], 1);
        let s = stratum_from_cocharacter(&m, &lam(-1)).unwrap();
        assert_eq!(s.a.to_string(), "k[y,u | du = y^2]");
        assert_eq!(s.b.to_string(), "k[]");
        assert!(s.flags.regular_embedding);
        assert!(!s.flags.affine_bundle_over_z);
    }

    #[test]
    fn smooth_case_is_regular() {
        let m = model(&[("x", 1)], &[], 1);
        let s = stratum_from_cocharacter(&m, &lam(-1)).unwrap();
        assert!(s.flags.regular_embedding);
        assert_eq!(s.mu.render(), "1");
    }

    #[test]
    fn mu_rendering() {
        assert_eq!(Mu::from_pairing(-1, 2).render(), "sqrt(1/2)");
        assert_eq!(Mu::from_pairing(-2, 1).render(), "2");
        assert_eq!(Mu::from_pairing(-3, 4).render(), "3/2");
        assert_eq!(Mu::from_pairing(-2, 8).render(), "sqrt(1/2)");
        assert_eq!(Mu::from_pairing(-2, 16).render(), "1/2");
        assert_eq!(Mu::from_pairing(1, 1).render(), "-1");
        assert!(Mu::from_pairing(-1, 1) > Mu::from_pairing(-1, 2));
        assert!(Mu::from_pairing(1, 1) < Mu::from_pairing(0, 1));
    }
}
