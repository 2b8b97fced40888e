#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use thetastrat::charkit::Weight;
use thetastrat::gradedalg::{CdgaElement, ComplexGen, FreeComplex, KoszulCdga, Mono};
use thetastrat::stack::StackModel;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn model(json: &str) -> StackModel {
    StackModel::from_json(json).unwrap()
}

pub fn a1(l: i64) -> StackModel {
    model(&format!(r#"{{"rank":1,"coordinates":[{{"name":"x","action_weight":[1]}}],"linearization":[{l}]}}"#))
}

pub fn xy() -> StackModel {
    model(
        r#"{"rank":1,"coordinates":[{"name":"x","action_weight":[1]},{"name":"y","action_weight":[-1]}],
            "relations":[{"name":"u","action_weight":[0],"du":"x*y"}],"linearization":[1]}"#,
    )
}

pub fn a2(p: i64, q: i64) -> StackModel {
    model(&format!(
        r#"{{"rank":1,"coordinates":[{{"name":"x","action_weight":[{p}]}},{{"name":"y","action_weight":[{q}]}}],"linearization":[1]}}"#
    ))
}

fn weight_of(exps: &[u32], weights: &[Vec<i64>]) -> Vec<i64> {
    let r = weights[0].len();
    (0..r).map(|k| exps.iter().zip(weights).map(|(&e, w)| e as i64 * w[k]).sum()).collect()
}

fn all_monomials(n: usize, max_deg: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|e: Vec<u32>| {
                let used: u32 = e.iter().sum();
                (0..=max_deg - used).map(move |a| {
                    let mut e = e.clone();
                    e.push(a);
                    e
                })
            })
            .collect();
    }
    out.retain(|e| e.iter().sum::<u32>() >= 1);
    out
}

/// A random weight-homogeneous polynomial in the coordinates, as text, with
/// its action weight.
fn relation(rng: &mut ChaCha8Rng, weights: &[Vec<i64>]) -> (String, Vec<i64>) {
    let monos = all_monomials(weights.len(), 3);
    let lead = monos.choose(rng).unwrap().clone();
    let w = weight_of(&lead, weights);
    let mut same: Vec<Vec<u32>> = monos.into_iter().filter(|e| weight_of(e, weights) == w && *e != lead).collect();
    same.shuffle(rng);
    let extra = rng.gen_range(0..=same.len().min(2));
    let mut parts = Vec::new();
    for e in std::iter::once(&lead).chain(same.iter().take(extra)) {
        let mut c: i64 = rng.gen_range(1..=3);
        if rng.gen_bool(0.5) {
            c = -c;
        }
        let mut factors = vec![c.to_string()];
        for (i, &a) in e.iter().enumerate() {
            if a > 0 {
                factors.push(format!("x{i}^{a}"));
            }
        }
        parts.push(factors.join("*"));
    }
    (parts.join(" + "), w)
}

fn assemble(rank: usize, weights: &[Vec<i64>], relations: &[(String, Vec<i64>)], l: &[i64]) -> StackModel {
    let coords: Vec<String> = weights
        .iter()
        .enumerate()
        .map(|(i, w)| format!(r#"{{"name":"x{i}","action_weight":{w:?}}}"#))
        .collect();
    let rels: Vec<String> = relations
        .iter()
        .enumerate()
        .map(|(j, (f, w))| format!(r#"{{"name":"u{j}","action_weight":{w:?},"du":"{f}"}}"#))
        .collect();
    model(&format!(
        r#"{{"rank":{rank},"coordinates":[{}],"relations":[{}],"linearization":{l:?}}}"#,
        coords.join(","),
        rels.join(",")
    ))
}

/// All action weights pair positively with `-ℓ`: one stratum, empty
/// semistable locus.
pub fn random_one_sign_model(rng: &mut ChaCha8Rng) -> StackModel {
    let rank = rng.gen_range(1..=2);
    let n = rng.gen_range(1..=4);
    let (weights, l): (Vec<Vec<i64>>, Vec<i64>) = if rank == 1 {
        ((0..n).map(|_| vec![rng.gen_range(1..=3)]).collect(), vec![-rng.gen_range(1..=3)])
    } else {
        let dir = [rng.gen_range(1..=2i64), rng.gen_range(1..=2i64)];
        let mut ws = Vec::new();
        while ws.len() < n {
            let w = vec![rng.gen_range(-1..=3i64), rng.gen_range(-1..=3i64)];
            if w[0] * dir[0] + w[1] * dir[1] >= 1 {
                ws.push(w);
            }
        }
        (ws, vec![-dir[0], -dir[1]])
    };
    let k = rng.gen_range(0..=2);
    let rels: Vec<_> = (0..k).map(|_| relation(rng, &weights)).collect();
    assemble(rank, &weights, &rels, &l)
}

/// Mixed-sign weights, arbitrary linearization.
pub fn random_model(rng: &mut ChaCha8Rng) -> StackModel {
    let rank = rng.gen_range(1..=2);
    let n = rng.gen_range(1..=4);
    let weights: Vec<Vec<i64>> = (0..n).map(|_| (0..rank).map(|_| rng.gen_range(-2..=2)).collect()).collect();
    let l: Vec<i64> = loop {
        let l: Vec<i64> = (0..rank).map(|_| rng.gen_range(-2..=2)).collect();
        if l.iter().any(|&c| c != 0) {
            break l;
        }
    };
    let k = rng.gen_range(0..=2);
    let rels: Vec<_> = (0..k).map(|_| relation(rng, &weights)).collect();
    assemble(rank, &weights, &rels, &l)
}

fn random_weight(rng: &mut ChaCha8Rng, rank: usize, r: i64) -> Weight {
    Weight((0..rank).map(|_| rng.gen_range(-r..=r)).collect())
}

/// Direct sum of shifted twisted units.
pub fn random_twisted_units(rng: &mut ChaCha8Rng, base: &Arc<KoszulCdga>) -> FreeComplex {
    let k = rng.gen_range(1..=3);
    let mut f = FreeComplex::zero(base.clone());
    for _ in 0..k {
        let shift = rng.gen_range(-1..=1);
        let t = FreeComplex::twisted_unit(base.clone(), random_weight(rng, base.rank(), 3)).shift(shift);
        f = f.direct_sum(&t).unwrap();
    }
    f
}

fn random_monomial(rng: &mut ChaCha8Rng, base: &KoszulCdga) -> CdgaElement {
    let n = base.n_even();
    let mut e = vec![0u32; n];
    if n > 0 {
        for _ in 0..rng.gen_range(0..=2) {
            e[rng.gen_range(0..n)] += 1;
        }
    }
    CdgaElement::monomial(Mono { even: e, odd: 0 }, num_rational::BigRational::from_integer(1.into()))
}

/// `[e_1 -> e_0]` with `d e_1 = m e_0` for a random even monomial `m`.
fn random_koszul(rng: &mut ChaCha8Rng, base: &Arc<KoszulCdga>) -> FreeComplex {
    let m = random_monomial(rng, base);
    let w = base.weight_of(&m).unwrap();
    let gens = vec![ComplexGen::new(0, Weight::zero(base.rank())), ComplexGen::new(1, w)];
    FreeComplex::new(base.clone(), gens, BTreeMap::from([((0, 1), m)])).unwrap()
}

/// Tensor products of Koszul complexes on monomials, twisted and shifted,
/// summed with twisted units.
pub fn random_complex(rng: &mut ChaCha8Rng, base: &Arc<KoszulCdga>) -> FreeComplex {
    let mut f = FreeComplex::twisted_unit(base.clone(), random_weight(rng, base.rank(), 3));
    for _ in 0..rng.gen_range(0..=2) {
        f = f.tensor(&random_koszul(rng, base)).unwrap();
    }
    f = f.shift(rng.gen_range(-1..=1));
    if rng.gen_bool(0.5) {
        f = f.direct_sum(&random_twisted_units(rng, base)).unwrap();
    }
    f
}
