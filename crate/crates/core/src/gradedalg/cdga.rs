use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::One;

use super::poly::{add_sparse, monomial_weight, MultiPoly};
use crate::charkit::{Cocharacter, GradedGen, Weight};
use crate::error::{Error, Result};

pub const MAX_ODD: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenGen {
    pub name: String,
    /// Representation weight.
    pub weight: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OddGen {
    pub name: String,
    /// Representation weight.
    pub weight: Weight,
    pub d: MultiPoly,
}

/// `k[x_1..x_n; u_1..u_m | du_j = f_j]` with torus weights, `x` in degree 0
/// and `u` in degree 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulCdga {
    rank: usize,
    even: Vec<EvenGen>,
    odd: Vec<OddGen>,
}

/// A monomial `x^e * u_S`, with `S` a bitmask read in increasing index order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono {
    pub even: Vec<u32>,
    pub odd: u64,
}

impl Mono {
    pub fn unit(n_even: usize) -> Self {
        Mono { even: vec![0; n_even], odd: 0 }
    }

    pub fn odd_degree(&self) -> i64 {
        self.odd.count_ones() as i64
    }
}

/// Sign of `u_S * u_T` after sorting into increasing order; zero if they overlap.
pub(crate) fn odd_product_sign(s: u64, t: u64) -> i32 {
    if s & t != 0 {
        return 0;
    }
    let mut inversions = 0u32;
    let mut rest = t;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        // elements of s strictly greater than j
        let above = if j >= 63 { 0 } else { s & !((1u64 << (j + 1)) - 1) };
        inversions += above.count_ones();
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Finite sum of rational multiples of monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CdgaElement {
    n_even: usize,
    terms: BTreeMap<Mono, BigRational>,
}

impl CdgaElement {
    pub fn zero(n_even: usize) -> Self {
        CdgaElement { n_even, terms: BTreeMap::new() }
    }

    pub fn scalar(n_even: usize, c: BigRational) -> Self {
        let mut a = Self::zero(n_even);
        a.add_term(Mono::unit(n_even), c);
        a
    }

    pub fn one(n_even: usize) -> Self {
        Self::scalar(n_even, BigRational::one())
    }

    pub fn monomial(mono: Mono, c: BigRational) -> Self {
        let mut a = Self::zero(mono.even.len());
        a.add_term(mono, c);
        a
    }

    pub fn from_poly(p: &MultiPoly) -> Self {
        let mut a = Self::zero(p.nvars());
        for (e, c) in p.terms() {
            a.add_term(Mono { even: e.clone(), odd: 0 }, c.clone());
        }
        a
    }

    pub fn n_even(&self) -> usize {
        self.n_even
    }

    pub fn terms(&self) -> &BTreeMap<Mono, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Mono, c: BigRational) {
        debug_assert_eq!(m.even.len(), self.n_even);
        add_sparse(&mut self.terms, m, c);
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(self.n_even);
        for (m, k) in &self.terms {
            out.add_term(m.clone(), k * c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    /// Graded-commutative product with Koszul signs.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n_even);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let s = odd_product_sign(m1.odd, m2.odd);
                if s == 0 {
                    continue;
                }
                let even = m1.even.iter().zip(&m2.even).map(|(a, b)| a + b).collect();
                let c = c1 * c2;
                out.add_term(Mono { even, odd: m1.odd | m2.odd }, if s > 0 { c } else { -c });
            }
        }
        out
    }

    /// Homological degree if homogeneous.
    pub fn degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(Mono::odd_degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Adds `extra` trailing even variables (all exponents zero).
    pub fn pad(&self, extra: usize) -> Self {
        let mut out = Self::zero(self.n_even + extra);
        for (m, c) in &self.terms {
            let mut even = m.even.clone();
            even.resize(self.n_even + extra, 0);
            out.add_term(Mono { even, odd: m.odd }, c.clone());
        }
        out
    }
}

impl KoszulCdga {
    pub fn new(rank: usize, even: Vec<EvenGen>, odd: Vec<OddGen>) -> Result<Self> {
        let mut problems = Vec::new();
        if odd.len() > MAX_ODD {
            problems.push(format!("at most {MAX_ODD} odd generators are supported, found {}", odd.len()));
        }
        for g in &even {
            if g.weight.rank() != rank {
                problems.push(format!("generator {}: weight has length {}, torus rank is {rank}", g.name, g.weight.rank()));
            }
        }
        for g in &odd {
            if g.weight.rank() != rank {
                problems.push(format!("generator {}: weight has length {}, torus rank is {rank}", g.name, g.weight.rank()));
            }
            if g.d.nvars() != even.len() {
                problems.push(format!("generator {}: differential uses {} variables, expected {}", g.name, g.d.nvars(), even.len()));
            }
        }
        if problems.is_empty() {
            let weights: Vec<Weight> = even.iter().map(|g| g.weight.clone()).collect();
            for g in &odd {
                for w in g.d.term_weights(&weights) {
                    if w != g.weight {
                        problems.push(format!(
                            "generator {}: differential has a term of weight {w}, but the generator has weight {}",
                            g.name, g.weight
                        ));
                    }
                }
            }
        }
        if !problems.is_empty() {
            return Err(Error::Validation(problems));
        }
        Ok(KoszulCdga { rank, even, odd })
    }

    /// The ground field `k` over a rank-`rank` torus.
    pub fn point(rank: usize) -> Self {
        KoszulCdga { rank, even: Vec::new(), odd: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn even(&self) -> &[EvenGen] {
        &self.even
    }

    pub fn odd(&self) -> &[OddGen] {
        &self.odd
    }

    pub fn n_even(&self) -> usize {
        self.even.len()
    }

    pub fn n_odd(&self) -> usize {
        self.odd.len()
    }

    pub fn even_weights(&self) -> Vec<Weight> {
        self.even.iter().map(|g| g.weight.clone()).collect()
    }

    /// Generators as `(weight, degree)` pairs, evens first.
    pub fn graded_gens(&self) -> Vec<GradedGen> {
        self.even
            .iter()
            .map(|g| (g.weight.clone(), 0))
            .chain(self.odd.iter().map(|g| (g.weight.clone(), 1)))
            .collect()
    }

    pub fn x(&self, i: usize) -> CdgaElement {
        let mut m = Mono::unit(self.n_even());
        m.even[i] = 1;
        CdgaElement::monomial(m, BigRational::one())
    }

    pub fn u(&self, j: usize) -> CdgaElement {
        let mut m = Mono::unit(self.n_even());
        m.odd = 1 << j;
        CdgaElement::monomial(m, BigRational::one())
    }

    pub fn one(&self) -> CdgaElement {
        CdgaElement::one(self.n_even())
    }

    pub fn mono_weight(&self, m: &Mono) -> Weight {
        let mut w = monomial_weight(self.rank, &m.even, &self.even_weights());
        for (j, g) in self.odd.iter().enumerate() {
            if m.odd >> j & 1 == 1 {
                w = w.add(&g.weight);
            }
        }
        w
    }

    /// Filtration weight of an odd generator: `max(1, deg du)`.
    pub fn odd_filtration(&self, j: usize) -> u32 {
        self.odd[j].d.total_degree().unwrap_or(0).max(1)
    }

    /// Filtration of a monomial: polynomial degree plus odd filtrations.
    pub fn mono_filtration(&self, m: &Mono) -> u32 {
        let mut f: u32 = m.even.iter().sum();
        for j in 0..self.n_odd() {
            if m.odd >> j & 1 == 1 {
                f += self.odd_filtration(j);
            }
        }
        f
    }

    pub fn filtration(&self, a: &CdgaElement) -> u32 {
        a.terms.keys().map(|m| self.mono_filtration(m)).max().unwrap_or(0)
    }

    /// Weight if homogeneous; `None` for zero or mixed elements.
    pub fn weight_of(&self, a: &CdgaElement) -> Option<Weight> {
        let mut it = a.terms.keys().map(|m| self.mono_weight(m));
        let first = it.next()?;
        it.all(|w| w == first).then_some(first)
    }

    /// The degree `-1` derivation with `d x_i = 0`, `d u_j = f_j`.
    pub fn d(&self, a: &CdgaElement) -> CdgaElement {
        let mut out = CdgaElement::zero(self.n_even());
        for (m, c) in &a.terms {
            let mut position = 0;
            let mut rest = m.odd;
            while rest != 0 {
                let j = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let sign = if position % 2 == 0 { c.clone() } else { -c.clone() };
                position += 1;
                let remaining = m.odd & !(1u64 << j);
                for (e, k) in self.odd[j].d.terms() {
                    let even = m.even.iter().zip(e).map(|(a, b)| a + b).collect();
                    out.add_term(Mono { even, odd: remaining }, &sign * k);
                }
            }
        }
        out
    }

    /// Asserts `d^2 = 0` on every generator.
    pub fn check_d_squared(&self) -> Result<()> {
        for j in 0..self.n_odd() {
            let dd = self.d(&self.d(&self.u(j)));
            if !dd.is_zero() {
                return Err(Error::NotAComplex(format!("d^2({}) != 0", self.odd[j].name)));
            }
        }
        Ok(())
    }

    /// Level `<lambda, w>` of each even and odd generator.
    pub fn levels(&self, lambda: &Cocharacter) -> (Vec<i64>, Vec<i64>) {
        (
            self.even.iter().map(|g| lambda.pair(&g.weight)).collect(),
            self.odd.iter().map(|g| lambda.pair(&g.weight)).collect(),
        )
    }

    /// Keeps the selected generators, setting the others to zero in every
    /// surviving differential.
    pub fn sub_presentation(&self, keep_even: &[usize], keep_odd: &[usize]) -> Result<(KoszulCdga, VarMap)> {
        let map = VarMap::new(self.n_even(), self.n_odd(), keep_even, keep_odd);
        let killed: Vec<usize> = (0..self.n_even()).filter(|i| map.even[*i].is_none()).collect();
        let even = keep_even.iter().map(|&i| self.even[i].clone()).collect();
        let mut odd = Vec::new();
        for &j in keep_odd {
            let f = self.odd[j].d.kill(&killed);
            let mut g = MultiPoly::zero(keep_even.len());
            for (e, c) in f.terms() {
                g.add_term(keep_even.iter().map(|&i| e[i]).collect(), c.clone());
            }
            odd.push(OddGen { name: self.odd[j].name.clone(), weight: self.odd[j].weight.clone(), d: g });
        }
        Ok((KoszulCdga::new(self.rank, even, odd)?, map))
    }

    /// Adjoins new generators after the existing ones.
    pub fn extend(&self, even: Vec<EvenGen>, odd: Vec<OddGen>) -> Result<KoszulCdga> {
        let n = self.n_even() + even.len();
        let mut all_even = self.even.clone();
        all_even.extend(even);
        let mut all_odd: Vec<OddGen> = self
            .odd
            .iter()
            .map(|g| {
                let mut d = MultiPoly::zero(n);
                for (e, c) in g.d.terms() {
                    let mut e = e.clone();
                    e.resize(n, 0);
                    d.add_term(e, c.clone());
                }
                OddGen { d, ..g.clone() }
            })
            .collect();
        all_odd.extend(odd);
        KoszulCdga::new(self.rank, all_even, all_odd)
    }

    pub fn element_to_string(&self, a: &CdgaElement) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in &a.terms {
            let mut factors = Vec::new();
            for (i, &e) in m.even.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.even[i].name.clone()),
                    _ => factors.push(format!("{}^{e}", self.even[i].name)),
                }
            }
            for j in 0..self.n_odd() {
                if m.odd >> j & 1 == 1 {
                    factors.push(self.odd[j].name.clone());
                }
            }
            let coeff = c.to_string();
            let s = if factors.is_empty() {
                coeff
            } else if c.is_one() {
                factors.join("*")
            } else if *c == -BigRational::one() {
                format!("-{}", factors.join("*"))
            } else {
                format!("{coeff}*{}", factors.join("*"))
            };
            parts.push(s);
        }
        parts.join(" + ")
    }
}

impl fmt::Display for KoszulCdga {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self
            .even
            .iter()
            .map(|g| g.name.as_str())
            .chain(self.odd.iter().map(|g| g.name.as_str()))
            .collect();
        write!(f, "k[{}", names.join(","))?;
        let rels: Vec<String> = self
            .odd
            .iter()
            .map(|g| format!("d{} = {}", g.name, self.element_to_string(&CdgaElement::from_poly(&g.d))))
            .collect();
        if !rels.is_empty() {
            write!(f, " | {}", rels.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Index map from a presentation to one with some generators set to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarMap {
    pub even: Vec<Option<usize>>,
    pub odd: Vec<Option<usize>>,
    target_even: usize,
}

impl VarMap {
    pub fn new(n_even: usize, n_odd: usize, keep_even: &[usize], keep_odd: &[usize]) -> Self {
        debug_assert!(keep_even.windows(2).all(|p| p[0] < p[1]));
        debug_assert!(keep_odd.windows(2).all(|p| p[0] < p[1]));
        let mut even = vec![None; n_even];
        for (k, &i) in keep_even.iter().enumerate() {
            even[i] = Some(k);
        }
        let mut odd = vec![None; n_odd];
        for (k, &j) in keep_odd.iter().enumerate() {
            odd[j] = Some(k);
        }
        VarMap { even, odd, target_even: keep_even.len() }
    }

    pub fn identity(n_even: usize, n_odd: usize) -> Self {
        let e: Vec<usize> = (0..n_even).collect();
        let o: Vec<usize> = (0..n_odd).collect();
        Self::new(n_even, n_odd, &e, &o)
    }

    /// Composition `other ∘ self`.
    pub fn then(&self, other: &VarMap) -> VarMap {
        VarMap {
            even: self.even.iter().map(|i| i.and_then(|i| other.even[i])).collect(),
            odd: self.odd.iter().map(|j| j.and_then(|j| other.odd[j])).collect(),
            target_even: other.target_even,
        }
    }

    /// Applies the quotient map. Relative order of kept odd generators is
    /// preserved, so no signs arise.
    pub fn apply(&self, a: &CdgaElement) -> CdgaElement {
        let mut out = CdgaElement::zero(self.target_even);
        'terms: for (m, c) in a.terms() {
            let mut even = vec![0; self.target_even];
            for (i, &e) in m.even.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match self.even[i] {
                    Some(k) => even[k] = e,
                    None => continue 'terms,
                }
            }
            let mut odd = 0u64;
            let mut rest = m.odd;
            while rest != 0 {
                let j = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                match self.odd[j] {
                    Some(k) => odd |= 1 << k,
                    None => continue 'terms,
                }
            }
            out.add_term(Mono { even, odd }, c.clone());
        }
        out
    }
}
