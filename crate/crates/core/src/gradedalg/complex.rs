use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;

use super::cdga::{CdgaElement, KoszulCdga, VarMap};
use crate::charkit::{BigradedCharacter, Weight};
use crate::error::{Error, Result};

/// A free generator of a semifree module.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComplexGen {
    pub degree: i64,
    /// Representation weight.
    pub weight: Weight,
}

impl ComplexGen {
    pub fn new(degree: i64, weight: Weight) -> Self {
        ComplexGen { degree, weight }
    }
}

/// `A ⊗ E` with `d(e_l) = Σ_k D[k][l] e_k` and `d(a e) = da e + (-1)^|a| a de`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeComplex {
    base: Arc<KoszulCdga>,
    gens: Vec<ComplexGen>,
    diff: BTreeMap<(usize, usize), CdgaElement>,
}

fn sign(odd: bool) -> BigRational {
    if odd {
        -BigRational::one()
    } else {
        BigRational::one()
    }
}

fn parity(n: i64) -> bool {
    n.rem_euclid(2) == 1
}

impl FreeComplex {
    /// Builds a complex, checking homogeneity of every entry and `d^2 = 0`.
    pub fn new(base: Arc<KoszulCdga>, gens: Vec<ComplexGen>, diff: BTreeMap<(usize, usize), CdgaElement>) -> Result<Self> {
        let n = gens.len();
        for g in &gens {
            if g.weight.rank() != base.rank() {
                return Err(Error::RankMismatch { expected: base.rank(), found: g.weight.rank() });
            }
        }
        let diff: BTreeMap<(usize, usize), CdgaElement> = diff.into_iter().filter(|(_, e)| !e.is_zero()).collect();
        for (&(k, l), e) in &diff {
            if k >= n || l >= n {
                return Err(Error::input(format!("differential[{k},{l}]"), format!("index out of range for {n} generators")));
            }
            if e.n_even() != base.n_even() {
                return Err(Error::BaseMismatch);
            }
            let want_deg = gens[l].degree - gens[k].degree - 1;
            match e.degree() {
                Some(d) if d == want_deg => {}
                Some(d) => {
                    return Err(Error::Inhomogeneous {
                        row: k,
                        col: l,
                        message: format!("entry has degree {d}, expected {want_deg}"),
                    })
                }
                None => return Err(Error::Inhomogeneous { row: k, col: l, message: "mixed degrees".into() }),
            }
            let want_w = gens[l].weight.sub(&gens[k].weight);
            match base.weight_of(e) {
                Some(w) if w == want_w => {}
                Some(w) => {
                    return Err(Error::Inhomogeneous {
                        row: k,
                        col: l,
                        message: format!("entry has weight {w}, expected {want_w}"),
                    })
                }
                None => return Err(Error::Inhomogeneous { row: k, col: l, message: "mixed weights".into() }),
            }
        }
        let c = FreeComplex { base, gens, diff };
        c.check_d_squared()?;
        Ok(c)
    }

    pub fn zero(base: Arc<KoszulCdga>) -> Self {
        FreeComplex { base, gens: Vec::new(), diff: BTreeMap::new() }
    }

    /// `A` itself on one generator of degree 0 and weight 0.
    pub fn unit(base: Arc<KoszulCdga>) -> Self {
        let w = Weight::zero(base.rank());
        Self::twisted_unit(base, w)
    }

    /// `A<e>` with `e` of the given representation weight.
    pub fn twisted_unit(base: Arc<KoszulCdga>, weight: Weight) -> Self {
        FreeComplex { base, gens: vec![ComplexGen::new(0, weight)], diff: BTreeMap::new() }
    }

    pub fn base(&self) -> &Arc<KoszulCdga> {
        &self.base
    }

    pub fn gens(&self) -> &[ComplexGen] {
        &self.gens
    }

    pub fn diff(&self) -> &BTreeMap<(usize, usize), CdgaElement> {
        &self.diff
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// Image of generator `l` under `d`, as `(k, coefficient)` pairs.
    pub fn column(&self, l: usize) -> impl Iterator<Item = (usize, &CdgaElement)> {
        self.diff.range((0, l)..).filter(move |((_, c), _)| *c == l).map(|((k, _), e)| (*k, e))
    }

    fn check_d_squared(&self) -> Result<()> {
        let n_even = self.base.n_even();
        let mut by_col: BTreeMap<usize, Vec<(usize, &CdgaElement)>> = BTreeMap::new();
        for (&(k, l), e) in &self.diff {
            by_col.entry(l).or_default().push((k, e));
        }
        for (&l, entries) in &by_col {
            let mut acc: BTreeMap<usize, CdgaElement> = BTreeMap::new();
            for &(k, dkl) in entries {
                let slot = acc.entry(k).or_insert_with(|| CdgaElement::zero(n_even));
                *slot = slot.add(&self.base.d(dkl));
                let s = sign(parity(dkl.degree().unwrap_or(0)));
                if let Some(next) = by_col.get(&k) {
                    for &(m, dmk) in next {
                        let slot = acc.entry(m).or_insert_with(|| CdgaElement::zero(n_even));
                        *slot = slot.add(&dkl.mul(dmk).scale(&s));
                    }
                }
            }
            if let Some((m, e)) = acc.iter().find(|(_, e)| !e.is_zero()) {
                return Err(Error::NotAComplex(format!(
                    "coefficient of e{m} in d^2(e{l}) is {}",
                    self.base.element_to_string(e)
                )));
            }
        }
        Ok(())
    }

    /// `Σ_k t^{weight(e_k)} q^{degree(e_k)}`.
    pub fn generator_character(&self) -> BigradedCharacter {
        let mut c = BigradedCharacter::zero(self.base.rank());
        for g in &self.gens {
            c.add_term(g.weight.clone(), g.degree, 1.into());
        }
        c
    }

    /// `F[n]`: degrees raised by `n`, differential scaled by `(-1)^n`.
    pub fn shift(&self, n: i64) -> Self {
        let s = sign(parity(n));
        FreeComplex {
            base: self.base.clone(),
            gens: self.gens.iter().map(|g| ComplexGen::new(g.degree + n, g.weight.clone())).collect(),
            diff: self.diff.iter().map(|(k, e)| (*k, e.scale(&s))).collect(),
        }
    }

    /// Multiplies every generator weight by a character twist.
    pub fn twist(&self, w: &Weight) -> Self {
        FreeComplex {
            base: self.base.clone(),
            gens: self.gens.iter().map(|g| ComplexGen::new(g.degree, g.weight.add(w))).collect(),
            diff: self.diff.clone(),
        }
    }

    fn same_base(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.base, &other.base) || *self.base == *other.base {
            Ok(())
        } else {
            Err(Error::BaseMismatch)
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        self.same_base(other)?;
        let off = self.rank();
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        let mut diff = self.diff.clone();
        for ((k, l), e) in &other.diff {
            diff.insert((k + off, l + off), e.clone());
        }
        Ok(FreeComplex { base: self.base.clone(), gens, diff })
    }

    /// `F ⊗_A G` on generators `e_i ⊗ f_j`, indexed `i * rank(G) + j`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.same_base(other)?;
        let ng = other.rank();
        let mut gens = Vec::with_capacity(self.rank() * ng);
        for a in &self.gens {
            for b in &other.gens {
                gens.push(ComplexGen::new(a.degree + b.degree, a.weight.add(&b.weight)));
            }
        }
        let mut diff = BTreeMap::new();
        for (&(i, l), e) in &self.diff {
            for j in 0..ng {
                diff.insert((i * ng + j, l * ng + j), e.clone());
            }
        }
        for (&(j, l), e) in &other.diff {
            let de = e.degree().unwrap_or(0);
            for k in 0..self.rank() {
                let dk = self.gens[k].degree;
                let s = sign(parity(dk) ^ (parity(dk) && parity(de)));
                diff.insert((k * ng + j, k * ng + l), e.scale(&s));
            }
        }
        let out = FreeComplex { base: self.base.clone(), gens, diff };
        out.check_d_squared()?;
        Ok(out)
    }

    /// `Hom_A(F, A)` on the dual basis.
    pub fn dual(&self) -> Result<Self> {
        let gens: Vec<ComplexGen> = self.gens.iter().map(|g| ComplexGen::new(-g.degree, g.weight.neg())).collect();
        let mut diff = BTreeMap::new();
        for (&(l, j), e) in &self.diff {
            // (d e_l^*)(e_j) = -(-1)^{|e_l^*| + |e_l^*||D_lj|} D_lj
            let dl = gens[l].degree;
            let de = e.degree().unwrap_or(0);
            let s = sign(!(parity(dl) ^ (parity(dl) && parity(de))));
            diff.insert((j, l), e.scale(&s));
        }
        let out = FreeComplex { base: self.base.clone(), gens, diff };
        out.check_d_squared()?;
        Ok(out)
    }

    /// `Hom_A(F, G) = F^∨ ⊗ G`.
    pub fn hom(&self, other: &Self) -> Result<Self> {
        self.dual()?.tensor(other)
    }

    /// Base change along a quotient map of presentations.
    pub fn restrict(&self, target: Arc<KoszulCdga>, map: &VarMap) -> Result<Self> {
        let diff = self.diff.iter().map(|(k, e)| (*k, map.apply(e))).filter(|(_, e)| !e.is_zero()).collect();
        let out = FreeComplex { base: target, gens: self.gens.clone(), diff };
        out.check_d_squared()?;
        Ok(out)
    }

    /// Base change along an inclusion that appends generators after the
    /// existing ones.
    pub fn extend_base(&self, target: Arc<KoszulCdga>) -> Result<Self> {
        let extra = target.n_even().checked_sub(self.base.n_even()).ok_or(Error::BaseMismatch)?;
        if target.n_odd() < self.base.n_odd() {
            return Err(Error::BaseMismatch);
        }
        let diff = self.diff.iter().map(|(k, e)| (*k, e.pad(extra))).collect();
        Ok(FreeComplex { base: target, gens: self.gens.clone(), diff })
    }

    /// Keeps the listed generators (which must span a subcomplex or quotient).
    pub(crate) fn select(&self, keep: &[usize]) -> Self {
        let mut index = vec![None; self.rank()];
        for (new, &old) in keep.iter().enumerate() {
            index[old] = Some(new);
        }
        let gens = keep.iter().map(|&i| self.gens[i].clone()).collect();
        let diff = self
            .diff
            .iter()
            .filter_map(|(&(k, l), e)| Some(((index[k]?, index[l]?), e.clone())))
            .collect();
        FreeComplex { base: self.base.clone(), gens, diff }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradedalg::cdga::{EvenGen, OddGen};
    use crate::gradedalg::poly::MultiPoly;

    fn xy() -> Arc<KoszulCdga> {
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        Arc::new(
            KoszulCdga::new(
                1,
                vec![
                    EvenGen { name: "x".into(), weight: Weight(vec![-1]) },
                    EvenGen { name: "y".into(), weight: Weight(vec![1]) },
                ],
                vec![OddGen { name: "u".into(), weight: Weight(vec![0]), d: x.mul(&y) }],
            )
            .unwrap(),
        )
    }

    /// `[A<e1> --x--> A<e0>]`, the resolution of `A/x`.
    fn kos_x(a: &Arc<KoszulCdga>) -> FreeComplex {
        let gens = vec![ComplexGen::new(0, Weight(vec![0])), ComplexGen::new(1, Weight(vec![-1]))];
        FreeComplex::new(a.clone(), gens, BTreeMap::from([((0, 1), a.x(0))])).unwrap()
    }

    #[test]
    fn koszul_generator_character() {
        let a = xy();
        let c = kos_x(&a).generator_character();
        let mut expect = BigradedCharacter::one(1);
        expect.add_term(Weight(vec![-1]), 1, 1.into());
        assert_eq!(c, expect);
        assert_eq!(kos_x(&a).shift(1).generator_character(), expect.twist(&Weight(vec![0]), 1));
    }

    #[test]
    fn d_squared_violation_detected() {
        let a = xy();
        let gens = vec![
            ComplexGen::new(0, Weight(vec![0])),
            ComplexGen::new(1, Weight(vec![-1])),
            ComplexGen::new(2, Weight(vec![-1])),
        ];
        let diff = BTreeMap::from([((0, 1), a.x(0)), ((1, 2), a.one())]);
        assert!(matches!(FreeComplex::new(a, gens, diff), Err(Error::NotAComplex(_))));
    }

    #[test]
    fn entry_with_odd_coefficient() {
        let a = xy();
        let gens = vec![
            ComplexGen::new(0, Weight(vec![0])),
            ComplexGen::new(2, Weight(vec![0])),
            ComplexGen::new(1, Weight(vec![0])),
        ];
        let good = BTreeMap::from([
            ((0, 1), a.u(0)),
            ((2, 1), a.one().neg()),
            ((0, 2), a.x(0).mul(&a.x(1))),
        ]);
        FreeComplex::new(a.clone(), gens.clone(), good).unwrap();
        let bad = BTreeMap::from([((0, 1), a.u(0))]);
        assert!(matches!(FreeComplex::new(a, gens, bad), Err(Error::NotAComplex(_))));
    }

    #[test]
    fn unit_is_tensor_identity() {
        let a = xy();
        let k = kos_x(&a);
        let t = k.tensor(&FreeComplex::unit(a.clone())).unwrap();
        assert_eq!(t, k);
        let t = FreeComplex::unit(a).tensor(&k).unwrap();
        assert_eq!(t, k);
    }

    #[test]
    fn dual_is_involutive_on_generators() {
        let a = xy();
        let k = kos_x(&a).tensor(&kos_x(&a).twist(&Weight(vec![2]))).unwrap();
        let dd = k.dual().unwrap().dual().unwrap();
        assert_eq!(dd.gens(), k.gens());
        // equal after the basis change e -> (-1)^|e| e
        let g = k.gens();
        let rebased = k
            .diff()
            .iter()
            .map(|(&(r, c), e)| ((r, c), if (g[r].degree + g[c].degree) % 2 == 0 { e.clone() } else { e.neg() }))
            .collect();
        let expect = FreeComplex::new(a.clone(), g.to_vec(), rebased).unwrap();
        assert_eq!(dd, expect);
    }

    #[test]
    fn hom_character() {
        let a = xy();
        let f = kos_x(&a);
        let g = kos_x(&a).shift(1).twist(&Weight(vec![3]));
        let h = f.hom(&g).unwrap();
        let expect = f.generator_character().dual().mul(&g.generator_character()).unwrap();
        assert_eq!(h.generator_character(), expect);
    }
}
