use std::collections::BTreeMap;

use rayon::prelude::*;

use super::destabilizer::{optimal_destabilizer, support_indices, Destabilization};
use super::stratum::{stratum_from_cocharacter, Mu, ThetaStratum};
use crate::charkit::Cocharacter;
use crate::error::{Error, Result};
use crate::stack::StackModel;

/// Largest coordinate count accepted by support enumeration.
pub const SUPPORT_LIMIT: usize = 16;

/// Destabilization data of every coordinate support, indexed by bitmask.
pub fn classify_supports(m: &StackModel) -> Result<Vec<Destabilization>> {
    let n = m.n_coordinates();
    if n > SUPPORT_LIMIT {
        return Err(Error::SupportLimit { found: n, limit: SUPPORT_LIMIT });
    }
    (0..1u64 << n)
        .into_par_iter()
        .map(|mask| optimal_destabilizer(m, &support_indices(mask)))
        .collect()
}

/// Groups unstable supports by optimal destabilizer; strata are ordered by
/// `μ` descending, then by `λ`.
pub fn git_stratify(m: &StackModel) -> Result<Vec<ThetaStratum>> {
    let classes = classify_supports(m)?;
    let mut groups: BTreeMap<Cocharacter, (Mu, Vec<u64>)> = BTreeMap::new();
    for (mask, d) in classes.into_iter().enumerate() {
        if let Destabilization::Unstable { lambda, mu } = d {
            let entry = groups.entry(lambda).or_insert_with(|| (mu.clone(), Vec::new()));
            if entry.0 != mu {
                return Err(Error::Internal("one destabilizer with two instability values".into()));
            }
            entry.1.push(mask as u64);
        }
    }
    let mut strata: Vec<ThetaStratum> = groups
        .into_iter()
        .map(|(lambda, (mu, supports))| {
            let mut s = stratum_from_cocharacter(m, &lambda)?;
            if s.mu != mu {
                return Err(Error::Internal(format!("instability of {lambda} disagrees: {} vs {}", s.mu, mu)));
            }
            s.supports = supports;
            Ok(s)
        })
        .collect::<Result<_>>()?;
    strata.sort_by(|a, b| b.mu.cmp(&a.mu).then_with(|| a.lambda.cmp(&b.lambda)));
    Ok(strata)
}

/// Bitmasks of the semistable supports.
pub fn semistable_supports(m: &StackModel) -> Result<Vec<u64>> {
    Ok(classify_supports(m)?
        .into_iter()
        .enumerate()
        .filter(|(_, d)| matches!(d, Destabilization::Semistable))
        .map(|(mask, _)| mask as u64)
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub message: String,
}

fn subsets(mask: u64) -> impl Iterator<Item = u64> {
    // all submasks of `mask`, including 0 and `mask`
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

/// Checks the ordering and closure conditions on supports.
pub fn validate_stratification(_m: &StackModel, strata: &[ThetaStratum]) -> std::result::Result<(), Vec<Violation>> {
    let mut violations = Vec::new();
    for (i, pair) in strata.windows(2).enumerate() {
        if pair[0].mu < pair[1].mu {
            violations.push(Violation {
                message: format!(
                    "strata {i} and {} are out of order: μ = {} precedes μ = {}",
                    i + 1,
                    pair[0].mu,
                    pair[1].mu
                ),
            });
        }
    }
    let mut owner: BTreeMap<u64, usize> = BTreeMap::new();
    for (i, s) in strata.iter().enumerate() {
        if !s.mu.is_positive() {
            violations.push(Violation { message: format!("stratum {i} has non-positive μ = {}", s.mu) });
        }
        for &sup in &s.supports {
            if let Some(j) = owner.insert(sup, i) {
                violations.push(Violation { message: format!("support {sup:#b} lies in strata {j} and {i}") });
            }
        }
    }
    for (i, s) in strata.iter().enumerate() {
        for &sup in &s.supports {
            for t in subsets(sup) {
                match owner.get(&t) {
                    Some(&j) if j == i || strata[j].mu > s.mu => {}
                    Some(&j) => violations.push(Violation {
                        message: format!(
                            "support {t:#b} in the closure of {sup:#b} (stratum {i}, μ = {}) lies in stratum {j} with μ = {}",
                            s.mu, strata[j].mu
                        ),
                    }),
                    None => violations.push(Violation {
                        message: format!("support {t:#b} in the closure of unstable {sup:#b} (stratum {i}) is semistable"),
                    }),
                }
            }
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(json: &str) -> StackModel {
        StackModel::from_json(json).unwrap()
    }

    #[test]
    fn a1_strata() {
        let m = model(r#"{"rank":1,"coordinates":[{"name":"x","action_weight":[1]}],"linearization":[1]}"#);
        let s = git_stratify(&m).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].lambda.components(), &[-1]);
        assert_eq!(s[0].supports, vec![0]);
        validate_stratification(&m, &s).unwrap();

        let m = m.with_linearization(crate::charkit::Weight(vec![-1])).unwrap();
        let s = git_stratify(&m).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].lambda.components(), &[1]);
        assert_eq!(s[0].supports, vec![0, 1]);
        assert!(s[0].killed_even.is_empty());
        validate_stratification(&m, &s).unwrap();
    }

    #[test]
    fn a2_opposite_weights() {
        let m = model(
            r#"{"rank":1,"coordinates":[{"name":"x","action_weight":[1]},{"name":"y","action_weight":[-1]}],"linearization":[1]}"#,
        );
        let s = git_stratify(&m).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].lambda.components(), &[-1]);
        assert_eq!(s[0].supports, vec![0, 2]);
        assert_eq!(s[0].killed_even, vec![0]);
        validate_stratification(&m, &s).unwrap();
    }

    #[test]
    fn inverted_order_is_reported() {
        let m = model(
            r#"{"rank":2,"coordinates":[{"name":"x","action_weight":[1,0]},{"name":"y","action_weight":[0,1]}],"linearization":[1,1]}"#,
        );
        let s = git_stratify(&m).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s[0].mu.render(), "sqrt(2)");
        validate_stratification(&m, &s).unwrap();
        let mut rev = s.clone();
        rev.reverse();
        let v = validate_stratification(&m, &rev).unwrap_err();
        assert!(v.iter().any(|v| v.message.contains("out of order")));
        validate_stratification(&m, &s[..1]).unwrap();
    }

    #[test]
    fn support_limit_guard() {
        let coords: Vec<String> =
            (0..17).map(|i| format!(r#"{{"name":"x{i}","action_weight":[1]}}"#)).collect();
        let m = model(&format!(r#"{{"rank":1,"coordinates":[{}],"linearization":[1]}}"#, coords.join(",")));
        assert!(matches!(git_stratify(&m), Err(Error::SupportLimit { .. })));
    }
}
