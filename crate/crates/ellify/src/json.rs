//! JSON interchange: matrix polynomials with optional block metadata,
//! placement plans, and verification reports. Entries travel as strings in
//! the scalar text form so exact values survive the round trip bit for bit.

use serde::{Deserialize, Serialize};

use crate::block::{Atom, BlockPolynomial, Labels, SlotLabel};
use crate::error::{Error, Result};
use crate::matpoly::MatrixPolynomial;
use crate::matrix::Matrix;
use crate::scalar::{parse_scalar, Backend};
use crate::verify::{DetRatio, VerificationReport};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatPolyDto {
    pub rows: usize,
    pub cols: usize,
    pub grade: usize,
    /// "rational" | "gaussian" | "float"
    pub field: String,
    /// Indexed by power, then row, then column.
    pub coeffs: Vec<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub block_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub provenance: Option<Vec<ProvenanceDto>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProvenanceDto {
    pub i: usize,
    pub s: usize,
    pub t: usize,
    pub label: LabelDto,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LabelDto {
    Zero,
    Lin { terms: Vec<TermDto> },
    Expr { in_ring: bool },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermDto {
    pub alpha: String,
    /// "I" for the identity, "P3" for a coefficient, "P3*" for its star.
    pub atom: String,
}

fn backend_of(field: &str) -> Result<Backend> {
    match field {
        "rational" => Ok(Backend::Rational),
        "gaussian" => Ok(Backend::Gaussian),
        "float" => Ok(Backend::Float),
        other => Err(Error::Schema(format!("unknown field `{other}`"))),
    }
}

pub fn matpoly_to_dto(p: &MatrixPolynomial) -> MatPolyDto {
    MatPolyDto {
        rows: p.rows(),
        cols: p.cols(),
        grade: p.grade(),
        field: p.backend().name().to_string(),
        coeffs: p
            .coeffs()
            .iter()
            .map(|c| {
                (0..p.rows())
                    .map(|i| (0..p.cols()).map(|j| c.get(i, j).to_string()).collect())
                    .collect()
            })
            .collect(),
        block_size: None,
        provenance: None,
    }
}

pub fn matpoly_from_dto(dto: &MatPolyDto) -> Result<MatrixPolynomial> {
    let backend = backend_of(&dto.field)?;
    if dto.coeffs.len() != dto.grade + 1 {
        return Err(Error::Schema(format!(
            "grade {} needs {} coefficient matrices, got {}",
            dto.grade,
            dto.grade + 1,
            dto.coeffs.len()
        )));
    }
    let mut coeffs = Vec::with_capacity(dto.coeffs.len());
    for c in &dto.coeffs {
        if c.len() != dto.rows {
            return Err(Error::Schema("row count mismatch".into()));
        }
        let mut m = Matrix::zero(dto.rows, dto.cols, backend);
        for (i, row) in c.iter().enumerate() {
            if row.len() != dto.cols {
                return Err(Error::Schema("column count mismatch".into()));
            }
            for (j, entry) in row.iter().enumerate() {
                m.set(i, j, parse_scalar(entry, backend)?);
            }
        }
        coeffs.push(m);
    }
    MatrixPolynomial::new(dto.rows, dto.cols, dto.grade, coeffs)
}

fn label_to_dto(label: &SlotLabel) -> LabelDto {
    match label {
        SlotLabel::Zero => LabelDto::Zero,
        SlotLabel::Expression { in_ring } => LabelDto::Expr { in_ring: *in_ring },
        SlotLabel::Lin(terms) => LabelDto::Lin {
            terms: terms
                .iter()
                .map(|(alpha, atom)| TermDto {
                    alpha: alpha.to_string(),
                    atom: match atom {
                        Atom::Identity => "I".to_string(),
                        Atom::Coef(j) => format!("P{j}"),
                        Atom::StarCoef(j) => format!("P{j}*"),
                    },
                })
                .collect(),
        },
    }
}

fn label_from_dto(dto: &LabelDto, backend: Backend) -> Result<SlotLabel> {
    Ok(match dto {
        LabelDto::Zero => SlotLabel::Zero,
        LabelDto::Expr { in_ring } => SlotLabel::Expression { in_ring: *in_ring },
        LabelDto::Lin { terms } => {
            let mut out = Vec::with_capacity(terms.len());
            for t in terms {
                let alpha = parse_scalar(&t.alpha, backend)?;
                let atom = if t.atom == "I" {
                    Atom::Identity
                } else if let Some(body) = t.atom.strip_prefix('P') {
                    if let Some(idx) = body.strip_suffix('*') {
                        Atom::StarCoef(idx.parse().map_err(|_| {
                            Error::Schema(format!("bad atom `{}`", t.atom))
                        })?)
                    } else {
                        Atom::Coef(body.parse().map_err(|_| {
                            Error::Schema(format!("bad atom `{}`", t.atom))
                        })?)
                    }
                } else {
                    return Err(Error::Schema(format!("bad atom `{}`", t.atom)));
                };
                out.push((alpha, atom));
            }
            SlotLabel::Lin(out)
        }
    })
}

pub fn block_to_dto(b: &BlockPolynomial) -> MatPolyDto {
    let mut dto = matpoly_to_dto(b.base());
    dto.block_size = Some(b.block_size());
    dto.provenance = b.labels().map(|labels| {
        let mut list = Vec::new();
        for i in 0..=b.grade() {
            for s in 1..=b.block_rows() {
                for t in 1..=b.block_cols() {
                    let label = labels.get(i, s, t);
                    if !label.is_zero() {
                        list.push(ProvenanceDto {
                            i,
                            s,
                            t,
                            label: label_to_dto(label),
                        });
                    }
                }
            }
        }
        list
    });
    dto
}

pub fn block_from_dto(dto: &MatPolyDto) -> Result<BlockPolynomial> {
    let base = matpoly_from_dto(dto)?;
    let n = dto
        .block_size
        .ok_or_else(|| Error::Schema("missing block_size".into()))?;
    if n == 0 || base.rows() % n != 0 || base.cols() % n != 0 {
        return Err(Error::Schema("block_size does not tile the matrix".into()));
    }
    let backend = base.backend();
    let (br, bc) = (base.rows() / n, base.cols() / n);
    let labels = match &dto.provenance {
        None => None,
        Some(list) => {
            let mut labels = Labels::zeroed(base.grade(), br, bc);
            for p in list {
                if p.i > base.grade() || p.s < 1 || p.s > br || p.t < 1 || p.t > bc {
                    return Err(Error::Schema("provenance slot out of range".into()));
                }
                labels.set(p.i, p.s, p.t, label_from_dto(&p.label, backend)?);
            }
            Some(labels)
        }
    };
    BlockPolynomial::new(base, br, bc, n, labels)
}

pub fn matpoly_to_string(p: &MatrixPolynomial) -> String {
    serde_json::to_string_pretty(&matpoly_to_dto(p)).expect("serializable")
}

pub fn matpoly_from_str(s: &str) -> Result<MatrixPolynomial> {
    let dto: MatPolyDto =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("bad polynomial JSON: {e}")))?;
    matpoly_from_dto(&dto)
}

pub fn block_to_string(b: &BlockPolynomial) -> String {
    serde_json::to_string_pretty(&block_to_dto(b)).expect("serializable")
}

pub fn block_from_str(s: &str) -> Result<BlockPolynomial> {
    let dto: MatPolyDto =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("bad polynomial JSON: {e}")))?;
    block_from_dto(&dto)
}

/// Either a bare matrix polynomial or one with block metadata.
pub fn matpoly_or_block_from_str(s: &str) -> Result<(MatrixPolynomial, Option<BlockPolynomial>)> {
    let dto: MatPolyDto =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("bad polynomial JSON: {e}")))?;
    let base = matpoly_from_dto(&dto)?;
    let block = if dto.block_size.is_some() {
        Some(block_from_dto(&dto)?)
    } else {
        None
    };
    Ok((base, block))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportDto {
    pub is_lification: bool,
    pub is_strong: bool,
    pub s: usize,
    pub invariant_factors_p: Vec<String>,
    pub invariant_factors_l: Vec<String>,
    /// Scalar text, "nonconstant", or null when the target is singular.
    pub det_ratio: Option<String>,
    pub right_indices_p: Vec<usize>,
    pub left_indices_p: Vec<usize>,
    pub right_indices_l: Vec<usize>,
    pub left_indices_l: Vec<usize>,
    pub structure_checks: std::collections::BTreeMap<String, bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub block_census: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
}

pub fn report_to_dto(
    report: &VerificationReport,
    indices: Option<&IndexSets>,
    structure_checks: std::collections::BTreeMap<String, bool>,
    block_census: Option<usize>,
) -> ReportDto {
    ReportDto {
        is_lification: report.is_lification,
        is_strong: report.is_strong,
        s: report.padding,
        invariant_factors_p: report
            .invariant_factors_p
            .iter()
            .map(|f| f.to_string())
            .collect(),
        invariant_factors_l: report
            .invariant_factors_l
            .iter()
            .map(|f| f.to_string())
            .collect(),
        det_ratio: report.det_ratio.as_ref().map(|r| match r {
            DetRatio::Constant(c) => c.to_string(),
            DetRatio::NonConstant => "nonconstant".to_string(),
        }),
        right_indices_p: indices.map(|i| i.right_p.clone()).unwrap_or_default(),
        left_indices_p: indices.map(|i| i.left_p.clone()).unwrap_or_default(),
        right_indices_l: indices.map(|i| i.right_l.clone()).unwrap_or_default(),
        left_indices_l: indices.map(|i| i.left_l.clone()).unwrap_or_default(),
        structure_checks,
        block_census,
        seed: None,
    }
}

/// Measured minimal indices for a report; all empty for regular targets.
#[derive(Debug, Clone, Default)]
pub struct IndexSets {
    pub right_p: Vec<usize>,
    pub left_p: Vec<usize>,
    pub right_l: Vec<usize>,
    pub left_l: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::Rng;

    #[test]
    fn matpoly_roundtrip_is_bit_exact() {
        let mut rng = Rng::new(2024);
        for backend in [Backend::Rational, Backend::Gaussian] {
            let p = rng.matpoly(2, 3, 2, backend);
            let s = matpoly_to_string(&p);
            let q = matpoly_from_str(&s).unwrap();
            assert_eq!(p, q);
        }
    }

    #[test]
    fn block_roundtrip_keeps_labels() {
        let p = crate::testkit::tagged_scalar_poly(3, Backend::Rational);
        let f = crate::lification::frobenius_pencil(&p, 1).unwrap();
        let s = block_to_string(&f);
        let g = block_from_str(&s).unwrap();
        assert_eq!(f, g);
        assert!(g.labels().is_some());
    }

    #[test]
    fn schema_errors_are_reported() {
        assert!(matpoly_from_str("{}").is_err());
        let bad = r#"{"rows":1,"cols":1,"grade":1,"field":"rational","coeffs":[[["1"]]]}"#;
        assert!(matches!(matpoly_from_str(bad), Err(Error::Schema(_))));
        let bad_field = r#"{"rows":1,"cols":1,"grade":0,"field":"septenary","coeffs":[[["1"]]]}"#;
        assert!(matches!(matpoly_from_str(bad_field), Err(Error::Schema(_))));
    }

    #[test]
    fn plan_json_matches_the_documented_shape() {
        let plan = crate::conditions::PlacementPlan {
            name: "demo".into(),
            kind: "AS".into(),
            assignments: vec![crate::conditions::Assignment {
                j: 4,
                s: 2,
                t: 2,
                i: 0,
                alpha: "1/2".into(),
            }],
        };
        let s = serde_json::to_string(&plan).unwrap();
        assert!(s.contains("\"kind\":\"AS\""));
        assert!(s.contains("\"alpha\":\"1/2\""));
        let back: crate::conditions::PlacementPlan = serde_json::from_str(&s).unwrap();
        assert_eq!(back, plan);
    }
}
