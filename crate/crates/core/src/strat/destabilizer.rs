//! Optimal destabilizers by exact projection onto faces of the constraint cone.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::stratum::{primitive_from_rational, Mu};
use crate::charkit::Cocharacter;
use crate::error::{Error, Result};
use crate::stack::StackModel;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Destabilization {
    Semistable,
    Unstable { lambda: Cocharacter, mu: Mu },
}

type QVec = Vec<BigRational>;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).fold(BigRational::zero(), |s, t| s + t)
}

/// Solves `g c = b` for invertible `g` by Gauss-Jordan elimination.
fn solve(mut g: Vec<QVec>, mut b: QVec) -> Option<QVec> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !g[r][col].is_zero())?;
        g.swap(col, piv);
        b.swap(col, piv);
        let inv = BigRational::one() / &g[col][col];
        for x in g[col].iter_mut() {
            *x *= &inv;
        }
        b[col] *= &inv;
        for r in 0..n {
            if r != col && !g[r][col].is_zero() {
                let f = g[r][col].clone();
                for c in 0..n {
                    let t = &f * &g[col][c];
                    g[r][c] -= t;
                }
                let t = &f * &b[col];
                b[r] -= t;
            }
        }
    }
    Some(b)
}

/// Projection of `v` onto the orthogonal complement of the span of `rows`
/// (assumed linearly independent).
fn project_away(v: &QVec, rows: &[&QVec]) -> Option<QVec> {
    if rows.is_empty() {
        return Some(v.clone());
    }
    let g: Vec<QVec> = rows.iter().map(|a| rows.iter().map(|b| dot(a, b)).collect()).collect();
    let b: QVec = rows.iter().map(|a| dot(a, v)).collect();
    let c = solve(g, b)?;
    let mut out = v.clone();
    for (ci, a) in c.iter().zip(rows) {
        for (o, x) in out.iter_mut().zip(a.iter()) {
            *o -= ci * x;
        }
    }
    Some(out)
}

fn independent(rows: &[&QVec]) -> bool {
    let mut m: Vec<QVec> = rows.iter().map(|r| (*r).clone()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let f = &m[r][col] / &m[rank][col];
                for c in 0..cols {
                    let t = &f * &m[rank][c];
                    m[r][c] -= t;
                }
            }
        }
        rank += 1;
    }
    rank == m.len()
}

fn subsets_up_to(n: usize, k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(current.clone());
    if current.len() == k {
        return;
    }
    for i in start..n {
        current.push(i);
        subsets_up_to(n, k, i + 1, current, out);
        current.pop();
    }
}

/// The primitive `λ` maximizing `-<ℓ, λ>/|λ|` over `λ` pairing non-negatively
/// with the action weights of the support, or `Semistable` when that maximum
/// is not positive.
pub fn optimal_destabilizer(m: &StackModel, support: &[usize]) -> Result<Destabilization> {
    let r = m.rank();
    let mut constraints: Vec<QVec> = Vec::new();
    for &i in support {
        if i >= m.n_coordinates() {
            return Err(Error::input("support", format!("coordinate index {i} out of range")));
        }
        let w: QVec = m.action_weight(i).0.iter().map(|&c| q(c)).collect();
        if w.iter().all(Zero::is_zero) {
            continue;
        }
        if !constraints.contains(&w) {
            constraints.push(w);
        }
    }
    let v: QVec = m.linearization().0.iter().map(|&c| q(-c)).collect();

    let mut faces = Vec::new();
    subsets_up_to(constraints.len(), r, 0, &mut Vec::new(), &mut faces);

    let mut best: Option<(BigRational, QVec)> = None;
    let mut tied: Option<QVec> = None;
    for face in faces {
        let rows: Vec<&QVec> = face.iter().map(|&i| &constraints[i]).collect();
        if !independent(&rows) {
            continue;
        }
        let Some(lambda) = project_away(&v, &rows) else { continue };
        if lambda.iter().all(Zero::is_zero) {
            continue;
        }
        if constraints.iter().any(|a| dot(&lambda, a).is_negative()) {
            continue;
        }
        let norm = dot(&lambda, &lambda);
        match &best {
            Some((b, bl)) if &norm == b => {
                if &lambda != bl {
                    tied = Some(lambda);
                }
            }
            Some((b, _)) if &norm < b => {}
            _ => {
                best = Some((norm, lambda));
                tied = None;
            }
        }
    }
    match best {
        None => Ok(Destabilization::Semistable),
        Some((norm, lambda)) => {
            if let Some(other) = tied {
                let show = |x: &QVec| x.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
                return Err(Error::NonUniqueDestabilizer(format!("({}) and ({})", show(&lambda), show(&other))));
            }
            Ok(Destabilization::Unstable { lambda: primitive_from_rational(&lambda)?, mu: Mu::from_square(norm) })
        }
    }
}

/// Support of a bitmask as a sorted index list.
pub fn support_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a1(l: i64) -> StackModel {
        StackModel::from_json(&format!(
            r#"{{"rank":1,"coordinates":[{{"name":"x","action_weight":[1]}}],"linearization":[{l}]}}"#
        ))
        .unwrap()
    }

    fn unstable(d: Destabilization) -> (Vec<i64>, String) {
        match d {
            Destabilization::Unstable { lambda, mu } => (lambda.components().to_vec(), mu.render()),
            Destabilization::Semistable => panic!("expected unstable"),
        }
    }

    #[test]
    fn a1_examples() {
        assert_eq!(optimal_destabilizer(&a1(1), &[0]).unwrap(), Destabilization::Semistable);
        assert_eq!(unstable(optimal_destabilizer(&a1(1), &[]).unwrap()), (vec![-1], "1".into()));
        assert_eq!(unstable(optimal_destabilizer(&a1(-1), &[0]).unwrap()), (vec![1], "1".into()));
    }

    #[test]
    fn xy_support_y() {
        let m = StackModel::from_json(
            r#"{"rank":1,"coordinates":[{"name":"x","action_weight":[1]},{"name":"y","action_weight":[-1]}],
                "relations":[{"name":"u","action_weight":[0],"du":"x*y"}],"linearization":[1]}"#,
        )
        .unwrap();
        assert_eq!(unstable(optimal_destabilizer(&m, &[1]).unwrap()), (vec![-1], "1".into()));
        assert_eq!(optimal_destabilizer(&m, &[0, 1]).unwrap(), Destabilization::Semistable);
    }

    #[test]
    fn rank_two_face_projection() {
        // weights (1,0), (0,1); ℓ = (1,2): support {x} forces λ_1 >= 0, optimum (0,-1).
        let m = StackModel::from_json(
            r#"{"rank":2,"coordinates":[{"name":"x","action_weight":[1,0]},{"name":"y","action_weight":[0,1]}],
                "linearization":[1,2]}"#,
        )
        .unwrap();
        assert_eq!(unstable(optimal_destabilizer(&m, &[0]).unwrap()), (vec![0, -1], "2".into()));
        assert_eq!(unstable(optimal_destabilizer(&m, &[]).unwrap()), (vec![-1, -2], "sqrt(5)".into()));
        assert_eq!(optimal_destabilizer(&m, &[0, 1]).unwrap(), Destabilization::Semistable);
    }
}
