use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::charkit::Weight;

/// Exponent vector over the even variables.
pub type Exponents = Vec<u32>;

/// Polynomial with exact rational coefficients in a fixed number of even variables.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Exponents, BigRational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, BigRational::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Exponents, c: BigRational) {
        debug_assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        add_sparse(&mut self.terms, e, c);
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    /// Sets the listed variables to zero.
    pub fn kill(&self, vars: &[usize]) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| vars.iter().all(|&v| e[v] == 0))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Maximal total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// The set of weights of the monomials, given variable weights.
    pub fn term_weights(&self, var_weights: &[Weight]) -> Vec<Weight> {
        let rank = var_weights.first().map(Weight::rank).unwrap_or(0);
        let mut ws: Vec<Weight> = self.terms.keys().map(|e| monomial_weight(rank, e, var_weights)).collect();
        ws.sort();
        ws.dedup();
        ws
    }
}

pub(crate) fn add_sparse<K: Ord>(terms: &mut BTreeMap<K, BigRational>, key: K, c: BigRational) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match terms.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

pub(crate) fn monomial_weight(rank: usize, e: &[u32], var_weights: &[Weight]) -> Weight {
    let mut w = Weight::zero(rank);
    for (k, &a) in e.iter().enumerate() {
        if a > 0 {
            w = w.add(&var_weights[k].scale(a as i64));
        }
    }
    w
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (k, a) in e.iter().enumerate() {
                match a {
                    0 => {}
                    1 => write!(f, "*x{k}")?,
                    _ => write!(f, "*x{k}^{a}")?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kill_drops_monomials() {
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        let p = x.mul(&y).add(&y.mul(&y));
        assert_eq!(p.kill(&[0]), y.mul(&y));
        assert_eq!(p.total_degree(), Some(2));
    }

    #[test]
    fn cancellation_prunes() {
        let x = MultiPoly::var(1, 0);
        let mut neg = MultiPoly::zero(1);
        neg.add_term(vec![1], -BigRational::one());
        assert!(x.add(&neg).is_zero());
    }
}
