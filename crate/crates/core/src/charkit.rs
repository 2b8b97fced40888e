//! Torus characters bigraded by lattice weight and homological degree.
//!
//! Every K-theoretic quantity in the engine is a finitely supported function
//! `(weight, degree) -> integer`. Infinite classes such as `Sym` of a
//! negatively weighted bundle are kept as [`TruncatedSeries`]: exact for all
//! terms whose pairing with a reference cocharacter is at least a cutoff.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An element of the character lattice `Z^r`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), other.rank());
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), other.rank());
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * k).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A one-parameter subgroup of the torus, stored primitive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cocharacter(Vec<i64>);

impl Cocharacter {
    /// Builds the primitive cocharacter on the ray through `components`.
    pub fn primitive(components: Vec<i64>) -> Result<Self> {
        let g = components.iter().fold(0i64, |g, &c| g.gcd(&c));
        if g == 0 {
            return Err(Error::ZeroCocharacter);
        }
        Ok(Cocharacter(components.into_iter().map(|c| c / g).collect()))
    }

    pub fn components(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn inverse(&self) -> Cocharacter {
        Cocharacter(self.0.iter().map(|c| -c).collect())
    }

    /// The pairing `<lambda, w>`.
    pub fn pair(&self, w: &Weight) -> i64 {
        debug_assert_eq!(self.rank(), w.rank());
        self.0.iter().zip(&w.0).map(|(a, b)| a * b).sum()
    }
}

impl fmt::Display for Cocharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Weight(self.0.clone()))
    }
}

/// A generator of a graded-commutative algebra or of a perfect class:
/// representation weight plus homological degree.
pub type GradedGen = (Weight, i64);

fn parity_sign(degree: i64) -> i64 {
    if degree.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn insert_term(terms: &mut BTreeMap<(Weight, i64), BigInt>, key: (Weight, i64), c: BigInt) {
    if c.is_zero() {
        return;
    }
    let entry = terms.entry(key);
    match entry {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, terms: &BTreeMap<(Weight, i64), BigInt>) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (i, ((w, d), c)) in terms.iter().enumerate() {
        if i > 0 {
            write!(f, " + ")?;
        }
        write!(f, "{c} * t^{w} * q^{d}")?;
    }
    Ok(())
}

/// A finitely supported integer function on `(weight, degree)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BigradedCharacter {
    rank: usize,
    terms: BTreeMap<(Weight, i64), BigInt>,
}

impl BigradedCharacter {
    pub fn zero(rank: usize) -> Self {
        BigradedCharacter { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(Weight::zero(rank), 0, BigInt::one())
    }

    pub fn monomial(weight: Weight, degree: i64, coeff: impl Into<BigInt>) -> Self {
        let mut c = Self::zero(weight.rank());
        c.add_term(weight, degree, coeff.into());
        c
    }

    /// Sum of `t^w q^d` over a generator list.
    pub fn from_gens<'a>(rank: usize, gens: impl IntoIterator<Item = &'a GradedGen>) -> Self {
        let mut c = Self::zero(rank);
        for (w, d) in gens {
            c.add_term(w.clone(), *d, BigInt::one());
        }
        c
    }

    pub fn from_terms(
        rank: usize,
        terms: impl IntoIterator<Item = ((Weight, i64), BigInt)>,
    ) -> Result<Self> {
        let mut c = Self::zero(rank);
        for ((w, d), k) in terms {
            if w.rank() != rank {
                return Err(Error::RankMismatch { expected: rank, found: w.rank() });
            }
            c.add_term(w, d, k);
        }
        Ok(c)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<(Weight, i64), BigInt> {
        &self.terms
    }

    pub fn add_term(&mut self, weight: Weight, degree: i64, coeff: BigInt) {
        debug_assert_eq!(weight.rank(), self.rank);
        insert_term(&mut self.terms, (weight, degree), coeff);
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: other.rank });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for ((w, d), c) in &other.terms {
            out.add_term(w.clone(), *d, c.clone());
        }
        Ok(out)
    }

    pub fn negate(&self) -> Self {
        BigradedCharacter {
            rank: self.rank,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.negate())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = Self::zero(self.rank);
        for ((w1, d1), c1) in &self.terms {
            for ((w2, d2), c2) in &other.terms {
                out.add_term(w1.add(w2), d1 + d2, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Multiplies by `t^w q^d`.
    pub fn twist(&self, weight: &Weight, degree: i64) -> Self {
        BigradedCharacter {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|((w, d), c)| ((w.add(weight), d + degree), c.clone()))
                .collect(),
        }
    }

    /// Dual class: weights and degrees negated.
    pub fn dual(&self) -> Self {
        BigradedCharacter {
            rank: self.rank,
            terms: self.terms.iter().map(|((w, d), c)| ((w.neg(), -d), c.clone())).collect(),
        }
    }

    /// Collapses degrees with the Euler sign `(-1)^degree`.
    pub fn euler_specialize(&self) -> Self {
        let mut out = Self::zero(self.rank);
        for ((w, d), c) in &self.terms {
            out.add_term(w.clone(), 0, c * parity_sign(*d));
        }
        out
    }

    /// Euler-specialized coefficient at `w`.
    pub fn coefficient_at(&self, w: &Weight) -> BigInt {
        self.terms
            .iter()
            .filter(|((tw, _), _)| tw == w)
            .map(|((_, d), c)| c * parity_sign(*d))
            .sum()
    }

    /// Keeps only the terms satisfying `keep(weight, degree)`.
    pub fn filter(&self, mut keep: impl FnMut(&Weight, i64) -> bool) -> Self {
        BigradedCharacter {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .filter(|((w, d), _)| keep(w, *d))
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// The terms as a generator list with multiplicity; fails on negative
    /// coefficients.
    pub fn to_gens(&self) -> Option<Vec<GradedGen>> {
        let mut gens = Vec::new();
        for ((w, d), c) in &self.terms {
            if c.is_negative() {
                return None;
            }
            let n: usize = c.try_into().ok()?;
            gens.extend(std::iter::repeat((w.clone(), *d)).take(n));
        }
        Some(gens)
    }

    /// Maximum and minimum level `<lambda, w>` over the support.
    pub fn level_range(&self, lambda: &Cocharacter) -> Option<(i64, i64)> {
        let mut it = self.terms.keys().map(|(w, _)| lambda.pair(w));
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), l| (lo.min(l), hi.max(l))))
    }
}

impl fmt::Display for BigradedCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.terms)
    }
}

/// A character exact at every level `<lambda, w> >= cutoff`.
///
/// When `truncated` is false the stored terms are the whole class and the
/// cutoff is only a lower bound on the support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    lambda: Cocharacter,
    cutoff: i64,
    truncated: bool,
    terms: BTreeMap<(Weight, i64), BigInt>,
}

impl TruncatedSeries {
    /// Wraps a finite character exactly.
    pub fn exact(lambda: Cocharacter, c: &BigradedCharacter) -> Result<Self> {
        if c.rank() != lambda.rank() {
            return Err(Error::RankMismatch { expected: lambda.rank(), found: c.rank() });
        }
        let cutoff = c.level_range(&lambda).map(|(lo, _)| lo).unwrap_or(0);
        Ok(TruncatedSeries { lambda, cutoff, truncated: false, terms: c.terms.clone() })
    }

    pub fn one(lambda: Cocharacter) -> Self {
        let rank = lambda.rank();
        Self::exact(lambda, &BigradedCharacter::one(rank)).expect("rank matches")
    }

    /// A series whose known terms are `c` restricted to levels `>= cutoff`;
    /// everything below is declared unknown.
    pub fn truncated(lambda: Cocharacter, cutoff: i64, c: &BigradedCharacter) -> Result<Self> {
        if c.rank() != lambda.rank() {
            return Err(Error::RankMismatch { expected: lambda.rank(), found: c.rank() });
        }
        let terms = c
            .terms
            .iter()
            .filter(|((w, _), _)| lambda.pair(w) >= cutoff)
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        Ok(TruncatedSeries { lambda, cutoff, truncated: true, terms })
    }

    pub fn lambda(&self) -> &Cocharacter {
        &self.lambda
    }

    pub fn cutoff(&self) -> i64 {
        self.cutoff
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn rank(&self) -> usize {
        self.lambda.rank()
    }

    pub fn terms(&self) -> &BTreeMap<(Weight, i64), BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_level(&self) -> Option<i64> {
        self.terms.keys().map(|(w, _)| self.lambda.pair(w)).max()
    }

    /// The known part as a plain character.
    pub fn known_part(&self) -> BigradedCharacter {
        BigradedCharacter { rank: self.rank(), terms: self.terms.clone() }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), found: other.rank() });
        }
        if self.lambda != other.lambda {
            return Err(Error::CocharacterMismatch {
                left: self.lambda.to_string(),
                right: other.lambda.to_string(),
            });
        }
        Ok(())
    }

    fn with_terms(&self, cutoff: i64, truncated: bool, terms: BTreeMap<(Weight, i64), BigInt>) -> Self {
        let lambda = self.lambda.clone();
        let terms = terms.into_iter().filter(|((w, _), _)| lambda.pair(w) >= cutoff).collect();
        TruncatedSeries { lambda, cutoff, truncated, terms }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let truncated = self.truncated || other.truncated;
        let cutoff = match (self.truncated, other.truncated) {
            (true, true) => self.cutoff.max(other.cutoff),
            (true, false) => self.cutoff,
            (false, true) => other.cutoff,
            (false, false) => self.cutoff.min(other.cutoff),
        };
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            insert_term(&mut terms, k.clone(), c.clone());
        }
        Ok(self.with_terms(cutoff, truncated, terms))
    }

    pub fn negate(&self) -> Self {
        let terms = self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect();
        TruncatedSeries { terms, ..self.clone() }
    }

    /// Upper bound for the level of any term that is stored or hidden.
    fn top(&self) -> Option<i64> {
        match (self.max_level(), self.truncated) {
            (Some(m), true) => Some(m.max(self.cutoff - 1)),
            (None, true) => Some(self.cutoff - 1),
            (m, false) => m,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        // An exact zero annihilates any unknown tail.
        if (!self.truncated && self.terms.is_empty()) || (!other.truncated && other.terms.is_empty()) {
            return Ok(TruncatedSeries {
                lambda: self.lambda.clone(),
                cutoff: self.cutoff.min(other.cutoff),
                truncated: false,
                terms: BTreeMap::new(),
            });
        }
        let mut bounds = Vec::new();
        if self.truncated {
            if let Some(t) = other.top() {
                bounds.push(self.cutoff + t);
            }
        }
        if other.truncated {
            if let Some(t) = self.top() {
                bounds.push(other.cutoff + t);
            }
        }
        let truncated = !bounds.is_empty();
        let cutoff = bounds.into_iter().max().unwrap_or(self.cutoff + other.cutoff);
        let mut terms = BTreeMap::new();
        for ((w1, d1), c1) in &self.terms {
            let l1 = self.lambda.pair(w1);
            for ((w2, d2), c2) in &other.terms {
                if truncated && l1 + self.lambda.pair(w2) < cutoff {
                    continue;
                }
                insert_term(&mut terms, (w1.add(w2), d1 + d2), c1 * c2);
            }
        }
        Ok(self.with_terms(cutoff, truncated, terms))
    }

    pub fn mul_character(&self, c: &BigradedCharacter) -> Result<Self> {
        self.mul(&TruncatedSeries::exact(self.lambda.clone(), c)?)
    }

    /// Multiplies by `t^w q^d`; shifts the cutoff by the level of `w`.
    pub fn twist(&self, weight: &Weight, degree: i64) -> Self {
        let shift = self.lambda.pair(weight);
        TruncatedSeries {
            lambda: self.lambda.clone(),
            cutoff: self.cutoff + shift,
            truncated: self.truncated,
            terms: self
                .terms
                .iter()
                .map(|((w, d), c)| ((w.add(weight), d + degree), c.clone()))
                .collect(),
        }
    }

    /// Drops every term below `cutoff` (raising the cutoff if needed).
    pub fn truncate_to(&self, cutoff: i64) -> Self {
        if cutoff <= self.cutoff && self.truncated {
            return self.clone();
        }
        let min_level = self.terms.keys().map(|(w, _)| self.lambda.pair(w)).min();
        let dropped = min_level.is_some_and(|m| m < cutoff);
        let truncated = self.truncated || dropped;
        let new_cutoff = if self.truncated { cutoff.max(self.cutoff) } else { cutoff };
        if !truncated {
            return TruncatedSeries { cutoff: new_cutoff.min(self.cutoff), ..self.clone() };
        }
        self.with_terms(new_cutoff, true, self.terms.clone())
    }

    pub fn euler_specialize(&self) -> Self {
        let mut terms = BTreeMap::new();
        for ((w, d), c) in &self.terms {
            insert_term(&mut terms, (w.clone(), 0), c * parity_sign(*d));
        }
        TruncatedSeries { terms, ..self.clone() }
    }

    /// Euler-specialized coefficient at `w`; refuses to answer below the cutoff.
    pub fn coefficient_at(&self, w: &Weight) -> Result<BigInt> {
        let level = self.lambda.pair(w);
        if self.truncated && level < self.cutoff {
            return Err(Error::InsufficientTruncation { level, cutoff: self.cutoff });
        }
        Ok(self
            .terms
            .iter()
            .filter(|((tw, _), _)| tw == w)
            .map(|((_, d), c)| c * parity_sign(*d))
            .sum())
    }

    /// Terms at one level.
    pub fn level_part(&self, level: i64) -> Result<BigradedCharacter> {
        if self.truncated && level < self.cutoff {
            return Err(Error::InsufficientTruncation { level, cutoff: self.cutoff });
        }
        Ok(BigradedCharacter {
            rank: self.rank(),
            terms: self
                .terms
                .iter()
                .filter(|((w, _), _)| self.lambda.pair(w) == level)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        })
    }

    /// Equality of the parts both series know, i.e. at levels above both cutoffs.
    pub fn agrees_with(&self, other: &Self) -> Result<bool> {
        self.check_compatible(other)?;
        let floor = match (self.truncated, other.truncated) {
            (true, true) => self.cutoff.max(other.cutoff),
            (true, false) => self.cutoff,
            (false, true) => other.cutoff,
            (false, false) => i64::MIN,
        };
        let a = self.truncate_to(floor);
        let b = other.truncate_to(floor);
        let keep = |t: &BTreeMap<(Weight, i64), BigInt>| -> BTreeMap<(Weight, i64), BigInt> {
            t.iter().filter(|((w, _), _)| self.lambda.pair(w) >= floor).map(|(k, c)| (k.clone(), c.clone())).collect()
        };
        Ok(keep(&a.terms) == keep(&b.terms))
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.terms)?;
        if self.truncated {
            write!(f, " + O(<{}, w> < {})", self.lambda, self.cutoff)?;
        }
        Ok(())
    }
}

/// Character of the free graded-commutative algebra on `gens`, exact through
/// level `cutoff` of `lambda`.
///
/// Even-degree generators contribute geometric factors and must pair to at
/// most `-1` with `lambda`. Odd-degree generators contribute two-term
/// exterior factors and may sit at any level.
pub fn sym_series(gens: &[GradedGen], lambda: &Cocharacter, cutoff: i64) -> Result<TruncatedSeries> {
    let rank = lambda.rank();
    for (w, _) in gens {
        if w.rank() != rank {
            return Err(Error::RankMismatch { expected: rank, found: w.rank() });
        }
    }
    let (odd, even): (Vec<&GradedGen>, Vec<&GradedGen>) = gens.iter().partition(|(_, d)| d.rem_euclid(2) == 1);
    for (w, d) in &even {
        let level = lambda.pair(w);
        if level >= 0 {
            return Err(Error::NonConvergentSym { weight: w.to_string(), degree: *d, level });
        }
    }
    // Positive-level exterior factors lift the validity floor of the product,
    // so the geometric part is computed that much deeper.
    let lift: i64 = odd.iter().map(|(w, _)| lambda.pair(w).max(0)).sum();
    let inner = cutoff - lift;

    let mut acc = TruncatedSeries::one(lambda.clone());
    for (w, d) in &even {
        let level = lambda.pair(w);
        let mut factor = BigradedCharacter::zero(rank);
        let mut n = 0i64;
        while n * level >= inner {
            factor.add_term(w.scale(n), d * n, BigInt::one());
            n += 1;
        }
        acc = acc.mul(&TruncatedSeries::truncated(lambda.clone(), inner, &factor)?)?;
    }
    for (w, d) in &odd {
        let mut factor = BigradedCharacter::one(rank);
        factor.add_term((*w).clone(), *d, BigInt::one());
        acc = acc.mul_character(&factor)?;
    }
    if acc.truncated || acc.terms.keys().any(|(w, _)| lambda.pair(w) < cutoff) {
        acc = acc.truncate_to(cutoff);
    }
    Ok(acc)
}

/// Virtual determinant weight and rank of a perfect class given by generators.
pub fn det_and_rank(rank: usize, gens: &[GradedGen]) -> (Weight, i64) {
    gens.iter().fold((Weight::zero(rank), 0), |(w, r), (gw, d)| {
        let s = parity_sign(*d);
        (w.add(&gw.scale(s)), r + s)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w1(a: i64) -> Weight {
        Weight(vec![a])
    }

    fn lam(a: i64) -> Cocharacter {
        Cocharacter::primitive(vec![a]).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let mut a = BigradedCharacter::one(1);
        a.add_term(w1(1), 0, 1.into());
        let mut b = BigradedCharacter::one(1);
        b.add_term(w1(1), 0, (-1).into());
        let mut expect = BigradedCharacter::one(1);
        expect.add_term(w1(2), 0, (-1).into());
        assert_eq!(a.mul(&b).unwrap(), expect);
    }

    #[test]
    fn additive_inverse_is_empty() {
        let mut a = BigradedCharacter::one(2);
        a.add_term(Weight(vec![1, -3]), 4, 7.into());
        assert!(a.add(&a.negate()).unwrap().is_zero());
    }

    #[test]
    fn rank_mismatch_is_reported() {
        let a = BigradedCharacter::one(1);
        let b = BigradedCharacter::one(2);
        assert!(matches!(a.mul(&b), Err(Error::RankMismatch { .. })));
    }

    #[test]
    fn series_cutoff_tracks_twist_factor() {
        let mut geo = BigradedCharacter::zero(1);
        for k in 0..=2 {
            geo.add_term(w1(-k), 0, 1.into());
        }
        let s = TruncatedSeries::truncated(lam(1), -2, &geo).unwrap();
        let t = TruncatedSeries::exact(lam(1), &BigradedCharacter::monomial(w1(1), 0, 1)).unwrap();
        let p = s.mul(&t).unwrap();
        assert_eq!(p.cutoff(), -1);
        assert!(p.is_truncated());
        let expect: Vec<i64> = vec![-1, 0, 1];
        let got: Vec<i64> = p.terms().keys().map(|(w, _)| w.0[0]).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn mismatched_reference_cocharacters() {
        let a = TruncatedSeries::one(lam(1));
        let b = TruncatedSeries::one(lam(-1));
        assert!(matches!(a.mul(&b), Err(Error::CocharacterMismatch { .. })));
    }

    #[test]
    fn euler_examples() {
        let mut c = BigradedCharacter::zero(1);
        c.add_term(w1(0), 0, 1.into());
        c.add_term(w1(0), 1, 1.into());
        assert!(c.euler_specialize().is_zero());
        let d = BigradedCharacter::monomial(w1(2), 0, 3);
        assert_eq!(d.euler_specialize(), d);
    }

    #[test]
    fn coefficient_queries() {
        let s = sym_series(&[(w1(-1), 0)], &lam(1), -5).unwrap();
        assert_eq!(s.coefficient_at(&w1(0)).unwrap(), BigInt::from(1));
        assert!(matches!(s.coefficient_at(&w1(-6)), Err(Error::InsufficientTruncation { .. })));
        assert_eq!(BigradedCharacter::zero(1).coefficient_at(&w1(3)), BigInt::from(0));
    }

    #[test]
    fn sym_examples() {
        let s = sym_series(&[(w1(-1), 0)], &lam(1), -3).unwrap();
        let got: Vec<(i64, i64)> = s.terms().iter().map(|((w, _), c)| (w.0[0], c.try_into().unwrap())).collect();
        assert_eq!(got, vec![(-3, 1), (-2, 1), (-1, 1), (0, 1)]);

        let e = sym_series(&[(w1(-1), 1)], &lam(1), -3).unwrap();
        assert!(!e.is_truncated());
        let mut expect = BigradedCharacter::one(1);
        expect.add_term(w1(-1), 1, 1.into());
        assert_eq!(e.known_part(), expect);
        assert_eq!(e.coefficient_at(&w1(-1)).unwrap(), BigInt::from(-1));

        let two = sym_series(&[(w1(-1), 0), (w1(-1), 0)], &lam(1), -2).unwrap();
        let got: Vec<(i64, i64)> = two.terms().iter().map(|((w, _), c)| (w.0[0], c.try_into().unwrap())).collect();
        assert_eq!(got, vec![(-2, 3), (-1, 2), (0, 1)]);
    }

    #[test]
    fn sym_rejects_nonnegative_even_generator() {
        assert!(matches!(sym_series(&[(w1(0), 0)], &lam(1), -3), Err(Error::NonConvergentSym { .. })));
        assert!(matches!(sym_series(&[(w1(2), 2)], &lam(1), -3), Err(Error::NonConvergentSym { .. })));
    }

    #[test]
    fn det_rank_examples() {
        assert_eq!(det_and_rank(1, &[(w1(1), 0)]), (w1(1), 1));
        assert_eq!(det_and_rank(1, &[(w1(1), 0), (w1(-1), 0)]), (w1(0), 2));
        assert_eq!(det_and_rank(1, &[(w1(2), 1)]), (w1(-2), -1));
    }

    #[test]
    fn canonical_text() {
        let mut c = BigradedCharacter::zero(2);
        c.add_term(Weight(vec![1, 0]), 1, (-2).into());
        c.add_term(Weight(vec![0, 0]), 0, 1.into());
        assert_eq!(c.to_string(), "1 * t^(0,0) * q^0 + -2 * t^(1,0) * q^1");
        assert_eq!(BigradedCharacter::zero(1).to_string(), "0");
    }

    #[test]
    fn primitive_cocharacter() {
        assert_eq!(Cocharacter::primitive(vec![4, -6]).unwrap().components(), &[2, -3]);
        assert!(Cocharacter::primitive(vec![0, 0]).is_err());
    }
}
