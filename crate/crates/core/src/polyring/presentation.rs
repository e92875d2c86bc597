use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::poly::{IntPoly, PolyJson};
use crate::charmatrix::StandardForm;
use crate::error::{Error, Result};

/// `ℤ[t₁..tₙ]/(relations)`, `|t_i| = 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingPresentation {
    nvars: usize,
    relations: Vec<IntPoly>,
    source: Option<String>,
}

impl RingPresentation {
    /// Rejects relations in the wrong ring and inhomogeneous relations.
    pub fn new(nvars: usize, relations: Vec<IntPoly>) -> Result<Self> {
        for (i, r) in relations.iter().enumerate() {
            if r.nvars() != nvars {
                return Err(Error::DimensionMismatch(format!(
                    "relation {} lives in {} variables, expected {nvars}",
                    i + 1,
                    r.nvars()
                )));
            }
            if !r.is_homogeneous() {
                return Err(Error::Parse(format!("relation {} is not homogeneous", i + 1)));
            }
        }
        Ok(RingPresentation { nvars, relations, source: None })
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = Some(source.into());
        self
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn relations(&self) -> &[IntPoly] {
        &self.relations
    }

    pub fn source(&self) -> Option<&str> {
        self.source.as_deref()
    }

    pub fn to_json(&self) -> PresentationJson {
        PresentationJson {
            n: self.nvars,
            relations: self.relations.iter().map(IntPoly::to_json).collect(),
            source: self.source.clone(),
        }
    }
}

/// `{"n": 2, "relations": [<polynomial>, ...], "source": "..."}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub n: usize,
    pub relations: Vec<PolyJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

impl TryFrom<PresentationJson> for RingPresentation {
    type Error = Error;

    fn try_from(j: PresentationJson) -> Result<Self> {
        let relations = j.relations.iter().map(IntPoly::from_json).collect::<Result<Vec<_>>>()?;
        let mut p = RingPresentation::new(j.n, relations)?;
        p.source = j.source;
        Ok(p)
    }
}

/// Cohomology relations for a standard form:
/// `q_i = t_i · ∏_{j=1..3} (Σ_k a_{ik}^j t_k)`, expanded over the integers.
pub fn dj_relations(sf: &StandardForm) -> RingPresentation {
    let n = sf.n();
    let relations = (0..n)
        .map(|i| {
            let mut q = IntPoly::var(n, i);
            for j in 0..3 {
                let coeffs: Vec<BigInt> = (0..n).map(|k| sf.block(i, k)[j].clone()).collect();
                q = &q * &IntPoly::linear(&coeffs);
            }
            q
        })
        .collect();
    RingPresentation { nvars: n, relations, source: Some("standard_form".into()) }
}
