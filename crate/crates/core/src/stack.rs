//! Input model: a linear torus action on affine space with Koszul relations
//! and a linearization character.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::charkit::{det_and_rank, BigradedCharacter, Weight};
use crate::error::{Error, Result};
use crate::gradedalg::{parse_poly, EvenGen, KoszulCdga, OddGen};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoordinateSpec {
    pub name: String,
    pub action_weight: Vec<i64>,
}

fn one() -> i64 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationSpec {
    pub name: String,
    #[serde(default = "one")]
    pub degree: i64,
    pub action_weight: Vec<i64>,
    pub du: String,
}

/// The JSON schema of a model file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub rank: usize,
    #[serde(default)]
    pub coordinates: Vec<CoordinateSpec>,
    #[serde(default)]
    pub relations: Vec<RelationSpec>,
    pub linearization: Vec<i64>,
}

/// The single place where action weights become representation weights.
pub fn action_to_rep(w: &Weight) -> Weight {
    w.neg()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StackModel {
    rank: usize,
    cdga: Arc<KoszulCdga>,
    linearization: Weight,
}

fn check_len(path: &str, v: &[i64], rank: usize) -> Result<Weight> {
    if v.len() != rank {
        return Err(Error::input(path, format!("expected a weight vector of length {rank}, found length {}", v.len())));
    }
    Ok(Weight(v.to_vec()))
}

fn check_name(path: &str, name: &str, seen: &mut BTreeSet<String>) -> Result<()> {
    let mut chars = name.chars();
    let ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'');
    if !ok {
        return Err(Error::input(path, format!("invalid generator name {name:?}")));
    }
    if !seen.insert(name.to_string()) {
        return Err(Error::input(path, format!("duplicate generator name {name:?}")));
    }
    Ok(())
}

impl StackModel {
    pub fn from_spec(spec: &ModelSpec) -> Result<Self> {
        let rank = spec.rank;
        if rank == 0 {
            return Err(Error::input("rank", "torus rank must be at least 1"));
        }
        let mut seen = BTreeSet::new();
        let mut even = Vec::new();
        for (i, c) in spec.coordinates.iter().enumerate() {
            check_name(&format!("coordinates[{i}].name"), &c.name, &mut seen)?;
            let w = check_len(&format!("coordinates[{i}].action_weight"), &c.action_weight, rank)?;
            even.push(EvenGen { name: c.name.clone(), weight: action_to_rep(&w) });
        }
        let names: Vec<String> = spec.coordinates.iter().map(|c| c.name.clone()).collect();
        let even_weights: Vec<Weight> = even.iter().map(|g| g.weight.clone()).collect();
        let mut odd = Vec::new();
        let mut problems = Vec::new();
        for (j, r) in spec.relations.iter().enumerate() {
            check_name(&format!("relations[{j}].name"), &r.name, &mut seen)?;
            if r.degree != 1 {
                return Err(Error::input(
                    format!("relations[{j}].degree"),
                    format!("only degree-1 relation generators are supported, found {}", r.degree),
                ));
            }
            let w = action_to_rep(&check_len(&format!("relations[{j}].action_weight"), &r.action_weight, rank)?);
            let f = parse_poly(&r.du, &names).map_err(|e| Error::input(format!("relations[{j}].du"), e.to_string()))?;
            for tw in f.term_weights(&even_weights) {
                if tw != w {
                    problems.push(format!(
                        "relations[{j}] ({}): du has a term of action weight {}, declared {}",
                        r.name,
                        action_to_rep(&tw),
                        action_to_rep(&w)
                    ));
                }
            }
            odd.push(OddGen { name: r.name.clone(), weight: w, d: f });
        }
        let linearization = check_len("linearization", &spec.linearization, rank)?;
        if !problems.is_empty() {
            return Err(Error::Validation(problems));
        }
        let cdga = KoszulCdga::new(rank, even, odd)?;
        let m = StackModel { rank, cdga: Arc::new(cdga), linearization };
        validate_model(&m)?;
        Ok(m)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ModelSpec = serde_json::from_str(text).map_err(|e| Error::input("model", e.to_string()))?;
        Self::from_spec(&spec)
    }

    /// Builds a model from an already-constructed CDGA (representation weights).
    pub fn from_cdga(cdga: KoszulCdga, linearization: Weight) -> Result<Self> {
        if linearization.rank() != cdga.rank() {
            return Err(Error::RankMismatch { expected: cdga.rank(), found: linearization.rank() });
        }
        let m = StackModel { rank: cdga.rank(), cdga: Arc::new(cdga), linearization };
        validate_model(&m)?;
        Ok(m)
    }

    pub fn to_spec(&self) -> ModelSpec {
        let names: Vec<&str> = self.cdga.even().iter().map(|g| g.name.as_str()).collect();
        ModelSpec {
            rank: self.rank,
            coordinates: self
                .cdga
                .even()
                .iter()
                .map(|g| CoordinateSpec { name: g.name.clone(), action_weight: action_to_rep(&g.weight).0 })
                .collect(),
            relations: self
                .cdga
                .odd()
                .iter()
                .map(|g| RelationSpec {
                    name: g.name.clone(),
                    degree: 1,
                    action_weight: action_to_rep(&g.weight).0,
                    du: poly_to_string(&g.d, &names),
                })
                .collect(),
            linearization: self.linearization.0.clone(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cdga(&self) -> &Arc<KoszulCdga> {
        &self.cdga
    }

    pub fn linearization(&self) -> &Weight {
        &self.linearization
    }

    pub fn n_coordinates(&self) -> usize {
        self.cdga.n_even()
    }

    /// Action weight of coordinate `i`.
    pub fn action_weight(&self, i: usize) -> Weight {
        action_to_rep(&self.cdga.even()[i].weight)
    }

    pub fn with_linearization(&self, l: Weight) -> Result<Self> {
        if l.rank() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: l.rank() });
        }
        Ok(StackModel { linearization: l, ..self.clone() })
    }
}

fn poly_to_string(p: &crate::gradedalg::MultiPoly, names: &[&str]) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (e, c) in p.terms() {
        let mut factors = vec![c.to_string()];
        for (i, &a) in e.iter().enumerate() {
            match a {
                0 => {}
                1 => factors.push(names[i].to_string()),
                _ => factors.push(format!("{}^{a}", names[i])),
            }
        }
        parts.push(factors.join("*"));
    }
    parts.join(" + ").replace("+ -", "- ")
}

/// Re-checks homogeneity, rank consistency and `d^2 = 0`.
pub fn validate_model(m: &StackModel) -> Result<()> {
    let a = &m.cdga;
    let mut problems = Vec::new();
    if m.linearization.rank() != m.rank {
        problems.push(format!("linearization has length {}, torus rank is {}", m.linearization.rank(), m.rank));
    }
    let weights = a.even_weights();
    for g in a.even() {
        if g.weight.rank() != m.rank {
            problems.push(format!("coordinate {}: weight length {}", g.name, g.weight.rank()));
        }
    }
    for g in a.odd() {
        for w in g.d.term_weights(&weights) {
            if w != g.weight {
                problems.push(format!("relation {}: du is not homogeneous of weight {}", g.name, action_to_rep(&g.weight)));
            }
        }
    }
    if let Err(e) = a.check_d_squared() {
        problems.push(e.to_string());
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(problems))
    }
}

/// Character of the cotangent complex at a fixed point, with its virtual
/// determinant and rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CotangentData {
    pub full: BigradedCharacter,
    pub det_weight: Weight,
    pub euler_rank: i64,
}

pub fn cotangent_character(m: &StackModel) -> CotangentData {
    let a = &m.cdga;
    let mut gens = a.graded_gens();
    for _ in 0..m.rank {
        gens.push((Weight::zero(m.rank), -1));
    }
    let full = BigradedCharacter::from_gens(m.rank, &gens);
    let (det_weight, euler_rank) = det_and_rank(m.rank, &gens);
    CotangentData { full, det_weight, euler_rank }
}
