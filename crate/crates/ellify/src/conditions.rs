//! The three placement conditions tying the middle block of a construction
//! to the coefficients of the target polynomial, and the plan machinery
//! that builds a middle block from explicit slot assignments.
//!
//! Throughout, the middle block M is a grade-`ell` polynomial on a
//! `(d+1) x (d+1)` grid of `n x n` blocks, the target P has grade
//! `k = (2d+1) ell`, and block coordinates are 1-based.

use serde::{Deserialize, Serialize};

use crate::block::{BlockPolynomial, Labels, SlotLabel};
use crate::error::{Error, Result};
use crate::matpoly::MatrixPolynomial;
use crate::matrix::Matrix;
use crate::structure::ConditionKind;

/// Row sign used by the signed anti-diagonal sum: `-1` exactly when d and s
/// have the same parity (d even and s even, or d odd and s odd).
pub fn ass_sign(d: usize, s: usize) -> i64 {
    if (d + s) % 2 == 0 {
        -1
    } else {
        1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub holds: bool,
    /// (r, c) of the first failing equation, if any.
    pub first_failure: Option<(usize, usize)>,
}

/// Check every equation of the chosen condition exactly.
pub fn verify_condition(
    m: &BlockPolynomial,
    p: &MatrixPolynomial,
    kind: ConditionKind,
    d: usize,
    ell: usize,
) -> Result<ConditionReport> {
    let n = m.block_size();
    if m.block_rows() != d + 1 || m.block_cols() != d + 1 {
        return Err(Error::ShapeMismatch(format!(
            "middle block must tile {}x{} blocks, got {}x{}",
            d + 1,
            d + 1,
            m.block_rows(),
            m.block_cols()
        )));
    }
    if m.grade() != ell {
        return Err(Error::ShapeMismatch(format!(
            "middle block must have grade {ell}, got {}",
            m.grade()
        )));
    }
    let k = (2 * d + 1) * ell;
    if p.grade() != k || p.rows() != n || p.cols() != n {
        return Err(Error::ShapeMismatch(format!(
            "target must be {n}x{n} of grade {k}"
        )));
    }
    let backend = p.backend();

    // sum of the blocks of coefficient i over a block diagonal or
    // anti-diagonal, with optional row signs
    let sum_line = |i: usize, line: Line, signed: bool| -> Matrix {
        let mut acc = Matrix::zero(n, n, backend);
        for s in 1..=d + 1 {
            let t_opt = match line {
                Line::Anti(a) => a.checked_sub(s),
                Line::Diag(delta) => {
                    let t = s as i64 - delta;
                    (t >= 1).then_some(t as usize)
                }
            };
            let Some(t) = t_opt else { continue };
            if t < 1 || t > d + 1 {
                continue;
            }
            let blk = m.block(s, t);
            let c = blk.coeff(i);
            if c.is_zero() {
                continue;
            }
            if signed && ass_sign(d, s) < 0 {
                acc = acc.sub(c);
            } else {
                acc = acc.add(c);
            }
        }
        acc
    };

    let signed = kind == ConditionKind::ASS;
    // first line: coefficients at multiples of ell combine the extreme
    // powers of two neighbouring lines
    for r in 0..=2 * d + 1 {
        let (low_line, high_line) = match kind {
            ConditionKind::AS | ConditionKind::ASS => {
                (Line::Anti(2 * d + 2 - r), Line::Anti(2 * d + 3 - r))
            }
            ConditionKind::DS => (
                Line::Diag(r as i64 - d as i64),
                Line::Diag(r as i64 - d as i64 - 1),
            ),
        };
        let got = sum_line(0, low_line, signed).add(&sum_line(ell, high_line, signed));
        if &got != p.coeff(ell * r) {
            return Ok(ConditionReport {
                holds: false,
                first_failure: Some((r, 0)),
            });
        }
    }
    // second line: interior powers
    for r in 0..=2 * d {
        for c in 1..ell {
            let line = match kind {
                ConditionKind::AS | ConditionKind::ASS => Line::Anti(2 * d + 2 - r),
                ConditionKind::DS => Line::Diag(r as i64 - d as i64),
            };
            let got = sum_line(c, line, signed);
            if &got != p.coeff(ell * r + c) {
                return Ok(ConditionReport {
                    holds: false,
                    first_failure: Some((r, c)),
                });
            }
        }
    }
    Ok(ConditionReport {
        holds: true,
        first_failure: None,
    })
}

#[derive(Clone, Copy)]
enum Line {
    /// Blocks with s + t equal to the value.
    Anti(usize),
    /// Blocks with s - t equal to the value.
    Diag(i64),
}

/// One slot assignment: write `alpha * P_j` into block (s, t) at power i.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub j: usize,
    pub s: usize,
    pub t: usize,
    pub i: usize,
    /// Scalar multiplier in text form, e.g. "1" or "1/2" or "-1".
    pub alpha: String,
}

impl Assignment {
    pub fn unit(j: usize, s: usize, t: usize, i: usize) -> Self {
        Assignment {
            j,
            s,
            t,
            i,
            alpha: "1".into(),
        }
    }

    pub fn signed(j: usize, s: usize, t: usize, i: usize, sign: i64) -> Self {
        Assignment {
            j,
            s,
            t,
            i,
            alpha: if sign < 0 { "-1".into() } else { "1".into() },
        }
    }
}

/// An explicit placement of the coefficients of P onto the middle block.
/// Plans are data, not code, so custom placements can come from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacementPlan {
    pub name: String,
    /// "AS" | "ASS" | "DS"
    pub kind: String,
    pub assignments: Vec<Assignment>,
}

impl PlacementPlan {
    pub fn condition_kind(&self) -> Result<ConditionKind> {
        ConditionKind::parse(&self.kind)
    }
}

/// Materialize the middle block M from a plan. The result carries
/// coefficient provenance labels and is verified against the plan's
/// intended condition before being returned.
pub fn build_middle_block(
    p: &MatrixPolynomial,
    plan: &PlacementPlan,
    d: usize,
    ell: usize,
) -> Result<BlockPolynomial> {
    let kind = plan.condition_kind()?;
    let n = p.rows();
    let k = (2 * d + 1) * ell;
    if p.grade() != k || p.rows() != p.cols() {
        return Err(Error::ShapeMismatch(format!(
            "plan targets square polynomials of grade {k}"
        )));
    }
    let backend = p.backend();

    // coverage check before any work
    let mut covered = vec![false; k + 1];
    for a in &plan.assignments {
        if a.j > k {
            return Err(Error::Schema(format!("assignment touches P_{} > P_{k}", a.j)));
        }
        covered[a.j] = true;
    }
    if let Some(j) = covered.iter().position(|c| !c) {
        return Err(Error::IncompletePlan(j));
    }

    let dim = (d + 1) * n;
    let mut base = MatrixPolynomial::zero(dim, dim, ell, backend);
    let mut labels = Labels::zeroed(ell, d + 1, d + 1);
    let mut seen: Vec<(usize, usize, usize, usize)> = Vec::new();
    for a in &plan.assignments {
        if a.s < 1 || a.s > d + 1 || a.t < 1 || a.t > d + 1 || a.i > ell {
            return Err(Error::Schema(format!(
                "assignment out of range: s={}, t={}, i={}",
                a.s, a.t, a.i
            )));
        }
        if seen.contains(&(a.j, a.s, a.t, a.i)) {
            return Err(Error::OverlapConflict {
                j: a.j,
                s: a.s,
                t: a.t,
                i: a.i,
            });
        }
        seen.push((a.j, a.s, a.t, a.i));
        let alpha = crate::scalar::parse_scalar(&a.alpha, backend)?;
        if alpha.is_zero() {
            return Err(Error::Schema("zero multiplier in plan".into()));
        }
        let contribution = p.coeff(a.j).scale(&alpha);
        for row in 0..n {
            for col in 0..n {
                let v = base.coeff(a.i).get((a.s - 1) * n + row, (a.t - 1) * n + col)
                    + contribution.get(row, col);
                base.coeff_mut(a.i)
                    .set((a.s - 1) * n + row, (a.t - 1) * n + col, v);
            }
        }
        labels.add_into(a.i, a.s, a.t, &SlotLabel::coef(alpha, a.j));
    }
    let block = BlockPolynomial::new(base, d + 1, d + 1, n, Some(labels))?;
    let report = verify_condition(&block, p, kind, d, ell)?;
    if !report.holds {
        let (r, c) = report.first_failure.unwrap_or((0, 0));
        return Err(Error::ConditionFailed {
            name: plan.name.clone(),
            kind: kind.name().into(),
            r,
            c,
        });
    }
    Ok(block)
}

/// Wrap explicit unit-multiplier slots into a plan; test and builder helper.
pub fn plan_from_slots(
    name: &str,
    kind: ConditionKind,
    slots: &[(usize, usize, usize, usize)],
) -> PlacementPlan {
    PlacementPlan {
        name: name.into(),
        kind: kind.name().into(),
        assignments: slots
            .iter()
            .map(|&(j, s, t, i)| Assignment::unit(j, s, t, i))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Backend;
    use crate::testkit;

    #[test]
    fn ass_sign_rule() {
        // -1 when d even in even rows, d odd in odd rows
        assert_eq!(ass_sign(2, 2), -1);
        assert_eq!(ass_sign(2, 1), 1);
        assert_eq!(ass_sign(3, 1), -1);
        assert_eq!(ass_sign(3, 2), 1);
    }

    fn grade10_p() -> MatrixPolynomial {
        testkit::tagged_scalar_poly(10, Backend::Rational)
    }

    fn m1_plan() -> PlacementPlan {
        plan_from_slots(
            "m1",
            ConditionKind::AS,
            &[
                (0, 3, 3, 0),
                (1, 3, 3, 1),
                (2, 2, 3, 0),
                (3, 2, 3, 1),
                (4, 2, 2, 0),
                (5, 2, 2, 1),
                (6, 1, 2, 0),
                (7, 1, 2, 1),
                (8, 1, 2, 2),
                (9, 1, 1, 1),
                (10, 1, 1, 2),
            ],
        )
    }

    fn m3_plan() -> PlacementPlan {
        plan_from_slots(
            "m3",
            ConditionKind::DS,
            &[
                (0, 1, 3, 0),
                (1, 1, 3, 1),
                (2, 1, 3, 2),
                (3, 2, 3, 1),
                (4, 1, 1, 0),
                (5, 1, 1, 1),
                (6, 1, 1, 2),
                (7, 2, 1, 1),
                (8, 3, 1, 0),
                (9, 3, 1, 1),
                (10, 3, 1, 2),
            ],
        )
    }

    #[test]
    fn reference_as_block_satisfies_as() {
        let p = grade10_p();
        let m = build_middle_block(&p, &m1_plan(), 2, 2).unwrap();
        assert!(verify_condition(&m, &p, ConditionKind::AS, 2, 2).unwrap().holds);
        // the same block fails the diagonal-sum condition at the first group
        let ds = verify_condition(&m, &p, ConditionKind::DS, 2, 2).unwrap();
        assert!(!ds.holds);
        assert_eq!(ds.first_failure, Some((0, 0)));
    }

    #[test]
    fn reference_ds_block_satisfies_ds() {
        let p = grade10_p();
        let m = build_middle_block(&p, &m3_plan(), 2, 2).unwrap();
        assert!(verify_condition(&m, &p, ConditionKind::DS, 2, 2).unwrap().holds);
    }

    #[test]
    fn incomplete_plan_is_rejected() {
        let p = grade10_p();
        let mut plan = m1_plan();
        plan.assignments.retain(|a| a.j != 7);
        assert!(matches!(
            build_middle_block(&p, &plan, 2, 2),
            Err(Error::IncompletePlan(7))
        ));
    }

    #[test]
    fn duplicate_slot_for_same_coefficient_is_rejected() {
        let p = grade10_p();
        let mut plan = m1_plan();
        plan.assignments.push(Assignment::unit(7, 1, 2, 1));
        assert!(matches!(
            build_middle_block(&p, &plan, 2, 2),
            Err(Error::OverlapConflict { j: 7, .. })
        ));
    }

    #[test]
    fn split_coefficient_with_halves_still_verifies() {
        let p = grade10_p();
        let mut plan = m1_plan();
        plan.assignments.retain(|a| a.j != 4);
        plan.assignments.push(Assignment {
            j: 4,
            s: 2,
            t: 2,
            i: 0,
            alpha: "1/2".into(),
        });
        plan.assignments.push(Assignment {
            j: 4,
            s: 3,
            t: 1,
            i: 0,
            alpha: "1/2".into(),
        });
        let m = build_middle_block(&p, &plan, 2, 2).unwrap();
        assert!(verify_condition(&m, &p, ConditionKind::AS, 2, 2).unwrap().holds);
    }
}
