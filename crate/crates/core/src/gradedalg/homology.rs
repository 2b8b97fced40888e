//! Ground-field homology of one lattice-weight space of a semifree complex,
//! truncated by a filtration that the differential never increases.
//!
//! Filtration: each even variable counts 1, each odd generator `u_j` counts
//! `max(1, deg du_j)`, and generator `e_l` carries an offset large enough to
//! dominate every term of `d(e_l)`. The truncated chains then form a subcomplex.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use super::cdga::{CdgaElement, Mono};
use super::complex::FreeComplex;
use super::linalg::{rank, SparseRow};
use crate::charkit::Weight;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyResult {
    /// Homological degree of `dims[0]`.
    pub min_degree: i64,
    pub dims: Vec<usize>,
    pub stabilized: bool,
    pub degree_bound: u32,
}

impl HomologyResult {
    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(i, &d)| if (self.min_degree + i as i64).rem_euclid(2) == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }

    pub fn is_acyclic(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    fn nonzero(&self) -> BTreeMap<i64, usize> {
        self.dims
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 0)
            .map(|(i, &d)| (self.min_degree + i as i64, d))
            .collect()
    }
}

/// Homology of the weight-0 part with filtration at most `degree_bound`.
pub fn weight0_truncated_homology(f: &FreeComplex, degree_bound: u32) -> Result<HomologyResult> {
    weight_truncated_homology(f, &Weight::zero(f.base().rank()), degree_bound)
}

/// Homology of the weight-`target` part with filtration at most `degree_bound`.
///
/// `stabilized` records whether bounds `degree_bound - 1` and `degree_bound`
/// give the same nonzero homology.
pub fn weight_truncated_homology(f: &FreeComplex, target: &Weight, degree_bound: u32) -> Result<HomologyResult> {
    if target.rank() != f.base().rank() {
        return Err(Error::RankMismatch { expected: f.base().rank(), found: target.rank() });
    }
    let offsets = generator_offsets(f);
    let (hi, lo) = rayon::join(
        || homology_at(f, target, &offsets, degree_bound),
        || degree_bound.checked_sub(1).map(|d| homology_at(f, target, &offsets, d)),
    );
    let mut hi = hi?;
    hi.stabilized = match lo {
        Some(lo) => lo?.nonzero() == hi.nonzero(),
        None => false,
    };
    Ok(hi)
}

fn generator_offsets(f: &FreeComplex) -> Vec<u32> {
    let base = f.base();
    let mut order: Vec<usize> = (0..f.rank()).collect();
    order.sort_by_key(|&l| f.gens()[l].degree);
    let mut off = vec![0u32; f.rank()];
    for &l in &order {
        let mut o = 0;
        for (k, e) in f.column(l) {
            o = o.max(off[k] + base.filtration(e));
        }
        off[l] = o;
    }
    off
}

/// Basis element: monomial times generator index.
type Cell = (Mono, usize);

fn enumerate_even(
    weights: &[Vec<i64>],
    budget: u32,
    need: &[i64],
    idx: usize,
    current: &mut Vec<u32>,
    acc: &mut Vec<i64>,
    out: &mut Vec<Vec<u32>>,
) {
    if idx == weights.len() {
        if acc.as_slice() == need {
            out.push(current.clone());
        }
        return;
    }
    for e in 0..=budget {
        current[idx] = e;
        for (a, w) in acc.iter_mut().zip(&weights[idx]) {
            *a += w * e as i64;
        }
        enumerate_even(weights, budget - e, need, idx + 1, current, acc, out);
        for (a, w) in acc.iter_mut().zip(&weights[idx]) {
            *a -= w * e as i64;
        }
    }
    current[idx] = 0;
}

fn chain_basis(f: &FreeComplex, target: &Weight, offsets: &[u32], bound: u32) -> BTreeMap<i64, Vec<Cell>> {
    let base = f.base();
    let even_w: Vec<Vec<i64>> = base.even().iter().map(|g| g.weight.0.clone()).collect();
    let n_odd = base.n_odd();
    let mut cells: BTreeMap<i64, Vec<Cell>> = BTreeMap::new();
    for (l, g) in f.gens().iter().enumerate() {
        if offsets[l] > bound {
            continue;
        }
        let budget = bound - offsets[l];
        let subsets: u64 = if n_odd >= 64 { u64::MAX } else { (1u64 << n_odd) - 1 };
        let mut s: u64 = 0;
        loop {
            let mono_s = Mono { even: vec![0; base.n_even()], odd: s };
            let fs = base.mono_filtration(&mono_s);
            if fs <= budget {
                let need = target.sub(&g.weight).sub(&base.mono_weight(&mono_s));
                let mut out = Vec::new();
                let mut current = vec![0; base.n_even()];
                let mut acc = vec![0; base.rank()];
                enumerate_even(&even_w, budget - fs, &need.0, 0, &mut current, &mut acc, &mut out);
                let degree = g.degree + s.count_ones() as i64;
                for e in out {
                    cells.entry(degree).or_default().push((Mono { even: e, odd: s }, l));
                }
            }
            if s == subsets {
                break;
            }
            s += 1;
        }
    }
    for v in cells.values_mut() {
        v.sort();
    }
    cells
}

fn apply_d(f: &FreeComplex, columns: &[Vec<(usize, &CdgaElement)>], cell: &Cell) -> Vec<(Cell, BigRational)> {
    let base = f.base();
    let (m, l) = cell;
    let me = CdgaElement::monomial(m.clone(), BigRational::one());
    let mut out: Vec<(Cell, BigRational)> = Vec::new();
    for (m2, c) in base.d(&me).terms() {
        out.push(((m2.clone(), *l), c.clone()));
    }
    let s = if m.odd_degree() % 2 == 0 { BigRational::one() } else { -BigRational::one() };
    for &(k, e) in &columns[*l] {
        for (m2, c) in me.mul(e).terms() {
            out.push(((m2.clone(), k), c * &s));
        }
    }
    out
}

fn homology_at(f: &FreeComplex, target: &Weight, offsets: &[u32], bound: u32) -> Result<HomologyResult> {
    let cells = chain_basis(f, target, offsets, bound);
    let empty = HomologyResult { min_degree: 0, dims: Vec::new(), stabilized: false, degree_bound: bound };
    let (Some(&lo), Some(&hi)) = (cells.keys().next(), cells.keys().next_back()) else {
        return Ok(empty);
    };
    let index: HashMap<i64, HashMap<&Cell, usize>> = cells
        .iter()
        .map(|(&p, v)| (p, v.iter().enumerate().map(|(i, c)| (c, i)).collect()))
        .collect();
    let mut columns: Vec<Vec<(usize, &CdgaElement)>> = vec![Vec::new(); f.rank()];
    for (&(k, l), e) in f.diff() {
        columns[l].push((k, e));
    }
    let degrees: Vec<i64> = (lo..=hi).collect();
    // rank of d_p : C_p -> C_{p-1}
    let ranks: Vec<Result<usize>> = degrees
        .par_iter()
        .map(|&p| {
            let (Some(src), Some(dst)) = (cells.get(&p), index.get(&(p - 1))) else {
                if let Some(src) = cells.get(&p) {
                    for cell in src {
                        let mut img: BTreeMap<Cell, BigRational> = BTreeMap::new();
                        for (c, v) in apply_d(f, &columns, cell) {
                            super::poly::add_sparse(&mut img, c, v);
                        }
                        if !img.is_empty() {
                            return Err(Error::Internal("differential leaves the truncated chains".into()));
                        }
                    }
                }
                return Ok(0);
            };
            let mut rows = Vec::with_capacity(src.len());
            for cell in src {
                let mut row: BTreeMap<usize, BigRational> = BTreeMap::new();
                for (img, c) in apply_d(f, &columns, cell) {
                    let Some(&j) = dst.get(&img) else {
                        return Err(Error::Internal("differential leaves the truncated chains".into()));
                    };
                    super::poly::add_sparse(&mut row, j, c);
                }
                rows.push(row.into_iter().collect::<SparseRow>());
            }
            Ok(rank(rows))
        })
        .collect();
    let ranks: Vec<usize> = ranks.into_iter().collect::<Result<_>>()?;
    let dims = degrees
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let c = cells.get(p).map_or(0, Vec::len);
            let out = ranks[i];
            let inc = ranks.get(i + 1).copied().unwrap_or(0);
            c - out - inc
        })
        .collect();
    Ok(HomologyResult { min_degree: lo, dims, stabilized: false, degree_bound: bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradedalg::cdga::{EvenGen, KoszulCdga, OddGen};
    use crate::gradedalg::poly::MultiPoly;
    use std::sync::Arc;

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

    #[test]
    fn xy_model_weight_zero() {
        let h = weight0_truncated_homology(&FreeComplex::unit(xy()), 8).unwrap();
        assert_eq!((h.min_degree, h.dims.clone()), (0, vec![1, 0]));
        assert!(h.stabilized);
        assert_eq!(h.euler_characteristic(), 1);
    }

    #[test]
    fn polynomial_ring_invariants() {
        let a = Arc::new(
            KoszulCdga::new(1, vec![EvenGen { name: "x".into(), weight: Weight(vec![-1]) }], vec![]).unwrap(),
        );
        let h = weight0_truncated_homology(&FreeComplex::unit(a.clone()), 5).unwrap();
        assert_eq!(h.dims, vec![1]);
        assert!(h.stabilized);
        let z = weight0_truncated_homology(&FreeComplex::zero(a.clone()), 5).unwrap();
        assert!(z.dims.is_empty());
        let tw = FreeComplex::twisted_unit(a, Weight(vec![2]));
        let h = weight0_truncated_homology(&tw, 5).unwrap();
        assert_eq!(h.dims, vec![1]);
    }

    #[test]
    fn koszul_resolution_of_a_point() {
        // [A<e1> --x--> A<e0>] over k[x] resolves k; at weight 0 only e0 survives.
        let a = Arc::new(
            KoszulCdga::new(1, vec![EvenGen { name: "x".into(), weight: Weight(vec![-1]) }], vec![]).unwrap(),
        );
        let gens = vec![
            crate::gradedalg::ComplexGen::new(0, Weight(vec![0])),
            crate::gradedalg::ComplexGen::new(1, Weight(vec![-1])),
        ];
        let f = FreeComplex::new(a.clone(), gens, BTreeMap::from([((0, 1), a.x(0))])).unwrap();
        let h = weight0_truncated_homology(&f, 6).unwrap();
        assert_eq!(h.dims, vec![1]);
        let h = weight_truncated_homology(&f, &Weight(vec![-3]), 6).unwrap();
        assert!(h.is_acyclic());
        assert!(h.stabilized);
    }
}
