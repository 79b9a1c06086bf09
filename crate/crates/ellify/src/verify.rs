//! Exact certification: structure checks, unimodular-equivalence tests for
//! (strong) l-ification claims, minimal-index measurement by degree sweep,
//! companion-form predicates, and block-sparsity accounting.

use std::collections::BTreeMap;

use crate::block::BlockPolynomial;
use crate::error::{Error, Result};
use crate::matpoly::{MatrixPolynomial, StarFlavor};
use crate::matrix::Matrix;
use crate::mobius::{mobius, MobiusMatrix};
use crate::poly::SPoly;
use crate::scalar::Scalar;
use crate::smith::{classify_factors, smith_form};
use crate::structure::{Sign, StructureKind, StructureTag};

/// Coefficient-wise structure test: `P_j^* = sign(j) P_{partner(j)}` with
/// partner and sign determined by the class and the declared grade.
pub fn check_structure(p: &MatrixPolynomial, tag: StructureTag) -> bool {
    if p.rows() != p.cols() {
        return false;
    }
    let k = p.grade();
    (0..=k).all(|j| {
        let (partner, sign) = tag.star_partner(j, k);
        let lhs = match tag.flavor {
            StarFlavor::Transpose => p.coeff(j).transpose(),
            StarFlavor::ConjugateTranspose => p.coeff(j).transpose().conj(),
        };
        let rhs = if sign < 0 {
            p.coeff(partner).neg()
        } else {
            p.coeff(partner).clone()
        };
        lhs == rhs
    })
}

/// The umbrella identity `M_A[±P] = P^*` for an arbitrary matrix.
pub fn check_ma_structured(
    p: &MatrixPolynomial,
    a: &MobiusMatrix,
    sign: Sign,
    flavor: StarFlavor,
) -> Result<bool> {
    let lhs = mobius(a, p, sign)?;
    Ok(lhs == p.star(flavor))
}

/// All twelve (class, flavor) combinations, keyed for reports.
pub fn structure_survey(p: &MatrixPolynomial) -> BTreeMap<String, bool> {
    let mut out = BTreeMap::new();
    for kind in StructureKind::ALL {
        for flavor in [StarFlavor::Transpose, StarFlavor::ConjugateTranspose] {
            let tag = StructureTag::new(kind, flavor);
            out.insert(
                format!("{}-{}", flavor.short(), kind.cli_name()),
                check_structure(p, tag),
            );
        }
    }
    out
}

/// Everything the certifier learned about a candidate pair.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub is_lification: bool,
    pub is_strong: bool,
    /// Identity padding: size(L) - size(P).
    pub padding: usize,
    pub invariant_factors_p: Vec<SPoly>,
    pub invariant_factors_l: Vec<SPoly>,
    /// `det L / det P` when both are nonzero; `None` when P is singular.
    pub det_ratio: Option<DetRatio>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DetRatio {
    Constant(Scalar),
    NonConstant,
}

/// Certify that `L` (grade `ell`) is an l-ification of `P` (grade `k`), and
/// whether it is strong. Equivalence to `diag(I_s, P)` is decided on Smith
/// invariants: the nonconstant invariant factors and the nullities must
/// agree. A constant nonzero determinant ratio is also recorded; for
/// regular P it is a necessary consequence of the equivalence.
pub fn certify_lification(
    l: &MatrixPolynomial,
    p: &MatrixPolynomial,
    ell: usize,
    k: usize,
) -> Result<VerificationReport> {
    if l.rows() != l.cols() || p.rows() != p.cols() {
        return Err(Error::ShapeMismatch("both polynomials must be square".into()));
    }
    if l.rows() < p.rows() {
        return Err(Error::ShapeMismatch(
            "the candidate is smaller than the target".into(),
        ));
    }
    if l.grade() != ell {
        return Err(Error::WrongGrade { expected: ell, got: l.grade() });
    }
    if p.grade() != k {
        return Err(Error::WrongGrade { expected: k, got: p.grade() });
    }
    let sf_l = smith_form(l)?;
    let sf_p = smith_form(p)?;
    let is_lification = equivalent_up_to_identity(&sf_l, &sf_p);

    let rev_l = l.rev(ell)?;
    let rev_p = p.rev(k)?;
    let sf_rev_l = smith_form(&rev_l)?;
    let sf_rev_p = smith_form(&rev_p)?;
    let is_strong = is_lification && equivalent_up_to_identity(&sf_rev_l, &sf_rev_p);

    let det_p = p.det_poly()?;
    let det_ratio = if det_p.is_zero() {
        None
    } else {
        let det_l = l.det_poly()?;
        match det_l.div_rem(&det_p) {
            Ok((q, r)) if r.is_zero() && q.is_nonzero_constant() => {
                Some(DetRatio::Constant(q.coeff(0)))
            }
            _ => Some(DetRatio::NonConstant),
        }
    };

    Ok(VerificationReport {
        is_lification,
        is_strong,
        padding: l.rows() - p.rows(),
        invariant_factors_p: sf_p,
        invariant_factors_l: sf_l,
        det_ratio,
    })
}

/// Smith(L) = diag(identity padding, Smith(P)): same nonconstant factors,
/// same number of zero factors.
fn equivalent_up_to_identity(sf_l: &[SPoly], sf_p: &[SPoly]) -> bool {
    let (_, nc_l, z_l) = classify_factors(sf_l);
    let (_, nc_p, z_p) = classify_factors(sf_p);
    nc_l == nc_p && z_l == z_p
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NullSide {
    Right,
    Left,
}

/// Minimal indices of the chosen rational null space, measured by a degree
/// sweep. For each candidate degree the polynomial solutions form a linear
/// space whose dimension is `sum over indices e <= deg of (deg - e + 1)`,
/// so consecutive dimension differences recover the index multiset. The
/// sweep is capped at `size * grade`.
pub fn measure_minimal_indices(p: &MatrixPolynomial, side: NullSide) -> Result<Vec<usize>> {
    let work = match side {
        NullSide::Right => p.clone(),
        NullSide::Left => p.star(StarFlavor::Transpose),
    };
    let rank = smith_form(&work)?
        .iter()
        .filter(|f| !f.is_zero())
        .count();
    let nullity = work.cols() - rank;
    if nullity == 0 {
        return Err(Error::NotSingular(match side {
            NullSide::Right => "right",
            NullSide::Left => "left",
        }));
    }
    let cap = work.cols().max(work.rows()) * (work.grade() + 1);
    let mut indices = Vec::with_capacity(nullity);
    let mut prev_dim = 0usize;
    let mut prev_delta = 0usize;
    for delta in 0..=cap {
        let dim = polynomial_null_dimension(&work, delta)?;
        let count_le = dim - prev_dim; // number of indices <= delta
        let new_here = count_le - prev_delta;
        for _ in 0..new_here {
            indices.push(delta);
        }
        if count_le == nullity {
            return Ok(indices);
        }
        prev_dim = dim;
        prev_delta = count_le;
    }
    Err(Error::DegreeSweepCapExceeded(cap))
}

/// Dimension of `{ v polynomial, deg v <= delta : P v = 0 }`, via the exact
/// null space of the stacked coefficient convolution system.
fn polynomial_null_dimension(p: &MatrixPolynomial, delta: usize) -> Result<usize> {
    let (m, n, g) = (p.rows(), p.cols(), p.grade());
    let backend = p.backend();
    let rows = m * (g + delta + 1);
    let cols = n * (delta + 1);
    let mut sys = Matrix::zero(rows, cols, backend);
    for j in 0..=g {
        let c = p.coeff(j);
        if c.is_zero() {
            continue;
        }
        for e in 0..=delta {
            // coefficient of x^{j+e} receives C_j * v_e
            for r in 0..m {
                for q in 0..n {
                    let v = c.get(r, q);
                    if v.is_zero() {
                        continue;
                    }
                    let row = (j + e) * m + r;
                    let col = e * n + q;
                    let cur = sys.get(row, col) + v;
                    sys.set(row, col, cur);
                }
            }
        }
    }
    Ok(cols - sys.rank()?)
}

/// Predicted indices after an l-ification: every index shifted by `shift`.
pub fn predict_minimal_index_shift(indices: &[usize], shift: usize) -> Vec<usize> {
    indices.iter().map(|e| e + shift).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompanionMode {
    /// Every nonzero block is a scalar multiple of the identity or of a
    /// single coefficient.
    Companion,
    /// Nonzero blocks may be any polynomial in the coefficients.
    Generalized,
}

/// Decide the companion predicates from provenance labels.
pub fn companion_predicate(l: &BlockPolynomial, mode: CompanionMode) -> Result<bool> {
    let labels = l.labels().ok_or(Error::MissingProvenance)?;
    for i in 0..=l.grade() {
        for s in 1..=l.block_rows() {
            for t in 1..=l.block_cols() {
                let label = labels.get(i, s, t);
                let ok = match mode {
                    CompanionMode::Companion => label.is_companion(),
                    CompanionMode::Generalized => label.is_generalized_companion(),
                };
                if !ok {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Census of nonzero blocks with the relevant sparsity bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct CensusReport {
    pub nonzero_blocks: usize,
    /// `5d+1` for pencils, `6d+1` for higher degree.
    pub family_minimum: usize,
    /// `7d+1`: the floor for the (skew-)symmetric and alternating classes
    /// when the degree exceeds one.
    pub structured_floor: Option<usize>,
    pub meets_family_minimum: bool,
}

pub fn sparsity_census(l: &BlockPolynomial, d: usize, ell: usize, kind: Option<StructureKind>) -> CensusReport {
    let count = l.nonzero_block_count();
    let family_minimum = if ell == 1 { 5 * d + 1 } else { 6 * d + 1 };
    let structured_floor = match kind {
        Some(
            StructureKind::Symmetric
            | StructureKind::SkewSymmetric
            | StructureKind::Even
            | StructureKind::Odd,
        ) if ell > 1 => Some(7 * d + 1),
        _ => None,
    };
    CensusReport {
        nonzero_blocks: count,
        family_minimum,
        structured_floor,
        meets_family_minimum: count == family_minimum,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Backend;
    use crate::testkit::{self, Rng};

    fn backend() -> Backend {
        Backend::Rational
    }

    fn sc(v: i64) -> Scalar {
        Scalar::from_int(v, backend())
    }

    #[test]
    fn structure_checks_on_tags() {
        let mut rng = Rng::new(5);
        for kind in StructureKind::ALL {
            for flavor in [StarFlavor::Transpose, StarFlavor::ConjugateTranspose] {
                let tag = StructureTag::new(kind, flavor);
                let be = match flavor {
                    StarFlavor::Transpose => Backend::Rational,
                    StarFlavor::ConjugateTranspose => Backend::Gaussian,
                };
                let p = testkit::random_structured(&mut rng, tag, 2, 4, be);
                assert!(check_structure(&p, tag), "{tag}");
                // and the umbrella identity with the named matrix
                let a = MobiusMatrix::named(tag.mobius_name(), be);
                assert!(check_ma_structured(&p, &a, tag.sign(), flavor).unwrap(), "{tag}");
            }
        }
    }

    #[test]
    fn palindromic_scalar_quartic() {
        // p0 = p4^*, p1 = p3^*, p2 = p2^*
        let p = testkit::tagged_star_palindromic_poly(4);
        let tag = StructureTag::new(StructureKind::Palindromic, StarFlavor::ConjugateTranspose);
        assert!(check_structure(&p, tag));
    }

    #[test]
    fn right_index_of_row_vector() {
        // [x, -1] has null vector (1, x): one right index, equal to 1
        let mut p = MatrixPolynomial::zero(1, 2, 1, backend());
        p.coeff_mut(1).set(0, 0, sc(1));
        p.coeff_mut(0).set(0, 1, sc(-1));
        assert_eq!(measure_minimal_indices(&p, NullSide::Right).unwrap(), vec![1]);
        // substitution oracle: P(x) (1, x)^T = x - x = 0 at any sample
        let v0 = sc(1);
        let x = sc(7);
        let lhs = &(p.eval(&x).unwrap().get(0, 0) * &v0) + &(p.eval(&x).unwrap().get(0, 1) * &x);
        assert!(lhs.is_zero());
    }

    #[test]
    fn monomial_row_null_space_has_all_indices_one() {
        // the 1 x (d+1) row of descending monomials is dual to the
        // bidiagonal pencil, so its null indices are all 1
        for d in 1..=3usize {
            let row = crate::minbases::monomial_column(d, backend()).star(StarFlavor::Transpose);
            let idx = measure_minimal_indices(&row, NullSide::Right).unwrap();
            assert_eq!(idx, vec![1; d]);
        }
    }

    #[test]
    fn regular_polynomial_has_no_null_space() {
        let mut rng = Rng::new(3);
        let p = rng.matpoly(2, 2, 2, backend());
        assert!(p.det_poly().map(|d| !d.is_zero()).unwrap_or(false));
        assert!(matches!(
            measure_minimal_indices(&p, NullSide::Right),
            Err(Error::NotSingular("right"))
        ));
    }

    #[test]
    fn shift_prediction_is_elementwise() {
        assert_eq!(predict_minimal_index_shift(&[], 3), Vec::<usize>::new());
        assert_eq!(predict_minimal_index_shift(&[0, 1], 3), vec![3, 4]);
    }
}
