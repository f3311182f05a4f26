//! JSON document formats: the polygon interchange document and the spectral
//! report. Rationals are serialized as canonical "p/q" strings so every
//! document is lossless.

use serde::{Deserialize, Serialize};

use pentagram_core::error::{Error, Result};
use pentagram_core::polygon::CoefficientArray;
use pentagram_core::scalar::{format_rat, parse_rat};
use pentagram_core::spectral::{BranchData, CasimirCheck, InvariantSet, LaxVariant};

/// The polygon interchange document used by every command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolygonDoc {
    pub d: usize,
    pub n: usize,
    pub coeffs: Vec<Vec<String>>,
}

impl PolygonDoc {
    pub fn from_coefficients(c: &CoefficientArray) -> Self {
        PolygonDoc {
            d: c.d,
            n: c.n,
            coeffs: c.rows.iter().map(|r| r.iter().map(format_rat).collect()).collect(),
        }
    }

    pub fn to_coefficients(&self) -> Result<CoefficientArray> {
        let rows = self
            .coeffs
            .iter()
            .map(|r| r.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        CoefficientArray::new(self.d, self.n, rows)
    }
}

/// Serializable name of a Lax variant as accepted by the spectrum command.
pub fn parse_variant(name: &str, m: Option<usize>, l: Option<usize>) -> Result<LaxVariant> {
    match name {
        "dented" => Ok(LaxVariant::Dented {
            m: m.ok_or_else(|| Error::DegenerateInput("dented variant needs --m".into()))?,
        }),
        "tilde" => Ok(LaxVariant::Tilde {
            m: m.ok_or_else(|| Error::DegenerateInput("tilde variant needs --m".into()))?,
        }),
        "partial" => Ok(LaxVariant::Partial {
            m: m.ok_or_else(|| Error::DegenerateInput("partial variant needs --m".into()))?,
            l: l.ok_or_else(|| Error::DegenerateInput("partial variant needs --l".into()))?,
        }),
        "short_diagonal" => Ok(LaxVariant::ShortDiagonal3d),
        "corrugated" => Ok(LaxVariant::Corrugated3d),
        other => Err(Error::DegenerateInput(format!("unknown Lax variant {other:?}"))),
    }
}

/// One monomial of the spectral function.
#[derive(Debug, Serialize)]
pub struct SpectralTerm {
    pub k: u32,
    pub lambda: i64,
    pub coeff: String,
}

/// The spectral report document.
#[derive(Debug, Serialize)]
pub struct SpectralReport {
    pub variant: LaxVariant,
    pub n: usize,
    pub d: usize,
    #[serde(rename = "R")]
    pub r: Vec<SpectralTerm>,
    pub invariants: InvariantSet,
    pub casimirs: Vec<CasimirCheck>,
    pub genus: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub genus_note: Option<String>,
    pub finite_branch_count: usize,
    pub squarefree: bool,
    pub branches_at_zero: BranchData,
    pub branches_at_infinity: BranchData,
}
