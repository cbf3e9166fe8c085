//! JSON forms of matrices, words and rows. Output is deterministic: fields
//! are emitted in declaration order and elements in their normal form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::RingMatrix;
use crate::parse::{parse_element, parse_ring};
use crate::poly::RingElement;
use crate::ring::Ring;
use crate::unimodular::UnimodularVector;
use crate::word::{ElementaryMatrix, Factor, FactorWord, Shape, TriangularUnipotent};

pub fn matrix_to_strings(m: &RingMatrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}

pub fn matrix_from_strings(ring: &Ring, rows: &[Vec<String>]) -> Result<RingMatrix> {
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|s| parse_element(ring, s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    RingMatrix::new(ring, parsed)
}

/// Parses a matrix given as a JSON array of arrays of element strings.
pub fn parse_matrix_json(ring: &Ring, text: &str) -> Result<RingMatrix> {
    let rows: Vec<Vec<String>> = serde_json::from_str(text)?;
    matrix_from_strings(ring, &rows)
}

/// One factor. Indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FactorJson {
    Elementary { i: usize, j: usize, value: String },
    Triangular { shape: Shape, entries: Vec<Vec<String>> },
    ScalarExp { h: String },
}

/// Number of factors measured against a claimed bound; scalar factors are
/// not counted.
pub fn counted_length(w: &FactorWord) -> usize {
    w.factors().iter().filter(|f| !matches!(f, Factor::ScalarExp { .. })).count()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub ring: String,
    pub target: Vec<Vec<String>>,
    pub factors: Vec<FactorJson>,
    pub claimed_bound: Option<usize>,
    pub verified: bool,
}

impl Certificate {
    pub fn from_word(w: &FactorWord, claimed_bound: Option<usize>) -> Certificate {
        let factors = w
            .factors()
            .iter()
            .map(|f| match f {
                Factor::Elementary(e) => {
                    let (i, j) = e.position();
                    FactorJson::Elementary { i: i + 1, j: j + 1, value: e.value().to_string() }
                }
                Factor::Triangular(t) => {
                    FactorJson::Triangular { shape: t.shape(), entries: matrix_to_strings(t.matrix()) }
                }
                Factor::ScalarExp { h, .. } => FactorJson::ScalarExp { h: h.to_string() },
            })
            .collect();
        let verified = w.verify() && claimed_bound.is_none_or(|b| counted_length(w) <= b);
        Certificate { ring: w.ring().to_string(), target: matrix_to_strings(w.target()), factors, claimed_bound, verified }
    }

    pub fn to_word(&self) -> Result<FactorWord> {
        let ring = parse_ring(&self.ring)?;
        let target = matrix_from_strings(&ring, &self.target)?;
        let n = target.rows();
        let factors = self
            .factors
            .iter()
            .map(|f| {
                Ok(match f {
                    FactorJson::Elementary { i, j, value } => {
                        if *i == 0 || *j == 0 {
                            return Err(Error::DimensionMismatch("indices are 1-based".into()));
                        }
                        Factor::Elementary(ElementaryMatrix::new(n, i - 1, j - 1, parse_element(&ring, value)?)?)
                    }
                    FactorJson::Triangular { shape, entries } => {
                        Factor::Triangular(TriangularUnipotent::new(*shape, matrix_from_strings(&ring, entries)?)?)
                    }
                    FactorJson::ScalarExp { h } => Factor::ScalarExp { size: n, h: parse_element(&ring, h)? },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        FactorWord::new(&ring, n, factors, target)
    }

    /// Rebuilds the word and checks it independently of the stored flag.
    pub fn recheck(&self) -> bool {
        self.to_word().is_ok_and(|w| w.verify() && self.claimed_bound.is_none_or(|b| counted_length(&w) <= b))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Certificate> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorJson {
    pub ring: String,
    pub components: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

impl VectorJson {
    pub fn from_vector(u: &UnimodularVector) -> VectorJson {
        VectorJson {
            ring: u.ring().to_string(),
            components: u.components().iter().map(ToString::to_string).collect(),
            witness: Some(u.cofactors().iter().map(ToString::to_string).collect()),
        }
    }

    pub fn from_row(row: &[RingElement]) -> VectorJson {
        VectorJson {
            ring: row.first().map(|e| e.ring().to_string()).unwrap_or_default(),
            components: row.iter().map(ToString::to_string).collect(),
            witness: None,
        }
    }

    pub fn components(&self) -> Result<(Ring, Vec<RingElement>)> {
        let ring = parse_ring(&self.ring)?;
        let comps = self.components.iter().map(|s| parse_element(&ring, s)).collect::<Result<_>>()?;
        Ok((ring, comps))
    }

    /// The row with its witness re-verified.
    pub fn to_vector(&self) -> Result<UnimodularVector> {
        let (ring, comps) = self.components()?;
        let Some(w) = &self.witness else {
            return Err(Error::WitnessMismatch("no witness attached".into()));
        };
        let b = w.iter().map(|s| parse_element(&ring, s)).collect::<Result<_>>()?;
        UnimodularVector::new(comps, b)
    }
}
