//! Minimal bases: the bidiagonal/monomial dual pair that generates every
//! construction in this crate, exact certification of the minimal-basis
//! property, and the closed forms of the transformed bidiagonal pencil for
//! the three named 2x2 matrices.

use crate::error::{Error, Result};
use crate::matpoly::MatrixPolynomial;
use crate::matrix::Matrix;
use crate::mobius::{mobius, MobiusMatrix};
use crate::poly::SPoly;
use crate::scalar::{Backend, Scalar};
use crate::structure::{NamedMobius, Sign};

/// Cap on the number of maximal minors the certifier will expand.
const MINOR_CAP: usize = 20_000;

/// The d x (d+1) bidiagonal pencil with -1 on the diagonal and the variable
/// on the superdiagonal. `d = 0` gives the empty 0 x 1 polynomial.
pub fn bidiagonal_pencil(d: usize, backend: Backend) -> MatrixPolynomial {
    let mut p = MatrixPolynomial::zero(d, d + 1, 1, backend);
    for i in 0..d {
        p.coeff_mut(0).set(i, i, -Scalar::one(backend));
        p.coeff_mut(1).set(i, i + 1, Scalar::one(backend));
    }
    p
}

/// The (d+1) x 1 column of descending monomials, grade d.
pub fn monomial_column(d: usize, backend: Backend) -> MatrixPolynomial {
    let mut p = MatrixPolynomial::zero(d + 1, 1, d, backend);
    for i in 0..=d {
        p.coeff_mut(d - i).set(i, 0, Scalar::one(backend));
    }
    p
}

/// `bidiagonal_pencil` with the variable replaced by its `ell`-th power,
/// declared at grade `ell`.
pub fn bidiagonal_pencil_pow(d: usize, ell: usize, backend: Backend) -> MatrixPolynomial {
    bidiagonal_pencil(d, backend).substitute_power(ell)
}

/// `monomial_column` with the variable replaced by its `ell`-th power,
/// declared at grade `d * ell`.
pub fn monomial_column_pow(d: usize, ell: usize, backend: Backend) -> MatrixPolynomial {
    monomial_column(d, backend).substitute_power(ell)
}

#[derive(Debug, Clone)]
pub struct MinimalBasisCertificate {
    pub row_degrees: Vec<usize>,
    pub highest_row_degree_coeff: Matrix,
    pub row_reduced: bool,
    pub full_row_rank_everywhere: bool,
    /// Monic gcd of all maximal minors; a nonzero constant exactly when the
    /// rank is full at every point of the algebraic closure.
    pub witness: SPoly,
}

impl MinimalBasisCertificate {
    pub fn is_minimal(&self) -> bool {
        self.row_reduced && self.full_row_rank_everywhere
    }
}

/// Exact certification: row-reducedness via the highest-row-degree
/// coefficient matrix, and everywhere-full row rank via the gcd of all
/// maximal minors (a nonzero constant iff no common root exists over the
/// algebraic closure).
pub fn certify_minimal_basis(p: &MatrixPolynomial) -> Result<MinimalBasisCertificate> {
    if !p.backend().is_exact() {
        return Err(Error::FloatBackendUnsupported);
    }
    let (m, n) = (p.rows(), p.cols());
    if m > n {
        return Err(Error::ShapeMismatch(format!(
            "minimal basis must have at most as many rows as columns ({m} > {n})"
        )));
    }
    let backend = p.backend();
    // row degrees; a zero row makes the basis degenerate
    let mut row_degrees = Vec::with_capacity(m);
    for i in 0..m {
        let deg = (0..n)
            .filter_map(|j| p.entry(i, j).degree())
            .max()
            .ok_or_else(|| Error::NotMinimalBasis(format!("row {i} is zero")))?;
        row_degrees.push(deg);
    }
    let highest = Matrix::from_fn(m, n, |i, j| p.entry(i, j).coeff(row_degrees[i]));
    let row_reduced = highest.rank()? == m;

    let combos = binomial(n, m);
    if combos > MINOR_CAP {
        return Err(Error::TooManyMinors(combos, MINOR_CAP));
    }
    let rows: Vec<usize> = (0..m).collect();
    let mut witness = SPoly::zero();
    for cols in combinations(n, m) {
        let minor = submatrix_poly(p, &rows, &cols).det_poly()?;
        if minor.is_zero() {
            continue;
        }
        witness = witness.gcd(&minor);
        if witness.is_nonzero_constant() {
            break;
        }
    }
    let full_row_rank_everywhere = witness.is_nonzero_constant();
    let _ = backend;
    Ok(MinimalBasisCertificate {
        row_degrees,
        highest_row_degree_coeff: highest,
        row_reduced,
        full_row_rank_everywhere,
        witness,
    })
}

fn submatrix_poly(p: &MatrixPolynomial, rows: &[usize], cols: &[usize]) -> MatrixPolynomial {
    let coeffs = p
        .coeffs()
        .iter()
        .map(|c| c.submatrix(rows, cols))
        .collect();
    MatrixPolynomial::new(rows.len(), cols.len(), p.grade(), coeffs).expect("consistent shapes")
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

#[derive(Debug, Clone)]
pub struct DualPairReport {
    pub dual: bool,
    pub first_minimal: bool,
    pub second_minimal: bool,
    pub sizes_complementary: bool,
    pub product_vanishes: bool,
}

/// Two minimal bases are dual when their row counts add up to the common
/// column count and `P Q^T = 0` identically.
pub fn certify_dual_pair(p: &MatrixPolynomial, q: &MatrixPolynomial) -> Result<DualPairReport> {
    let first = certify_minimal_basis(p)?;
    let second = certify_minimal_basis(q)?;
    let sizes = p.cols() == q.cols() && p.rows() + q.rows() == p.cols();
    let product = p.mul(&q.star(crate::matpoly::StarFlavor::Transpose))?;
    let vanishes = product.is_zero();
    Ok(DualPairReport {
        dual: first.is_minimal() && second.is_minimal() && sizes && vanishes,
        first_minimal: first.is_minimal(),
        second_minimal: second.is_minimal(),
        sizes_complementary: sizes,
        product_vanishes: vanishes,
    })
}

/// Closed form of the transformed bidiagonal pencil `M_A[±K](x^ell)` for the
/// named matrices, cross-checkable against the generic transform:
/// * A1: `±K(x^ell)`
/// * A2: `±K(x^ell)` for even `ell`, `±K(-x^ell)` for odd `ell`
/// * A3: `±rev K(x^ell)` (reversal at grade `ell`)
pub fn transformed_bidiagonal(
    which: NamedMobius,
    sign: Sign,
    d: usize,
    ell: usize,
    backend: Backend,
) -> MatrixPolynomial {
    let base = bidiagonal_pencil_pow(d, ell, backend);
    let out = match which {
        NamedMobius::A1 => base,
        NamedMobius::A2 => {
            if ell % 2 == 0 {
                base
            } else {
                negate_variable(&base)
            }
        }
        NamedMobius::A3 => base.rev(ell).expect("grade ell by construction"),
    };
    match sign {
        Sign::Plus => out,
        Sign::Minus => out.neg(),
    }
}

/// Closed form of the transformed monomial column `M_A[±N](x^ell)` at grade
/// `d * ell`, used by the recovery product.
pub fn transformed_monomial_column(
    which: NamedMobius,
    sign: Sign,
    d: usize,
    ell: usize,
    backend: Backend,
) -> MatrixPolynomial {
    let base = monomial_column_pow(d, ell, backend);
    let out = match which {
        NamedMobius::A1 => base,
        NamedMobius::A2 => {
            if ell % 2 == 0 {
                base
            } else {
                negate_variable(&base)
            }
        }
        NamedMobius::A3 => base.rev(d * ell).expect("grade d*ell by construction"),
    };
    match sign {
        Sign::Plus => out,
        Sign::Minus => out.neg(),
    }
}

/// Substitute `-x` for the variable: coefficient j picks up `(-1)^j`.
fn negate_variable(p: &MatrixPolynomial) -> MatrixPolynomial {
    let mut out = p.clone();
    for j in (1..=p.grade()).step_by(2) {
        *out.coeff_mut(j) = out.coeff(j).neg();
    }
    out
}

/// Generic-route version of [`transformed_bidiagonal`], for cross-checks.
pub fn transformed_bidiagonal_generic(
    which: NamedMobius,
    sign: Sign,
    d: usize,
    ell: usize,
    backend: Backend,
) -> Result<MatrixPolynomial> {
    let a = MobiusMatrix::named(which, backend);
    mobius(&a, &bidiagonal_pencil_pow(d, ell, backend), sign)
}

pub fn transformed_monomial_column_generic(
    which: NamedMobius,
    sign: Sign,
    d: usize,
    ell: usize,
    backend: Backend,
) -> Result<MatrixPolynomial> {
    let a = MobiusMatrix::named(which, backend);
    mobius(&a, &monomial_column_pow(d, ell, backend), sign)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn backend() -> Backend {
        Backend::Rational
    }

    #[test]
    fn bidiagonal_shapes() {
        let l1 = bidiagonal_pencil(1, backend());
        assert_eq!((l1.rows(), l1.cols()), (1, 2));
        assert_eq!(l1.entry(0, 0), SPoly::constant(Scalar::from_int(-1, backend())));
        assert_eq!(l1.entry(0, 1), SPoly::monomial(Scalar::one(backend()), 1));

        let l0 = bidiagonal_pencil(0, backend());
        assert_eq!((l0.rows(), l0.cols()), (0, 1));

        let l2 = bidiagonal_pencil(2, backend());
        assert_eq!((l2.rows(), l2.cols()), (2, 3));
        assert!(l2.entry(0, 2).is_zero());
        assert_eq!(l2.entry(1, 2), SPoly::monomial(Scalar::one(backend()), 1));
    }

    #[test]
    fn monomial_column_shapes() {
        let m0 = monomial_column(0, backend());
        assert_eq!((m0.rows(), m0.cols()), (1, 1));
        assert_eq!(m0.entry(0, 0), SPoly::one(backend()));

        let m2 = monomial_column(2, backend());
        assert_eq!(m2.entry(0, 0), SPoly::monomial(Scalar::one(backend()), 2));
        assert_eq!(m2.entry(1, 0), SPoly::monomial(Scalar::one(backend()), 1));
        assert_eq!(m2.entry(2, 0), SPoly::one(backend()));
    }

    #[test]
    fn pencil_annihilates_column() {
        for d in 0..=6usize {
            let l = bidiagonal_pencil(d, backend());
            let m = monomial_column(d, backend());
            let prod = l.mul(&m).unwrap();
            assert!(prod.is_zero(), "d = {d}");
        }
    }

    #[test]
    fn certified_dual_pairs() {
        for (d, ell, n) in [(1usize, 1usize, 1usize), (2, 2, 1), (2, 3, 2), (3, 2, 1)] {
            let k1 = bidiagonal_pencil_pow(d, ell, backend()).kron_identity(n);
            let n1 = monomial_column_pow(d, ell, backend())
                .star(crate::matpoly::StarFlavor::Transpose)
                .kron_identity(n);
            let report = certify_dual_pair(&k1, &n1).unwrap();
            assert!(report.dual, "(d, ell, n) = ({d}, {ell}, {n}): {report:?}");
        }
    }

    #[test]
    fn certificate_of_bidiagonal() {
        let cert = certify_minimal_basis(&bidiagonal_pencil(2, backend())).unwrap();
        assert!(cert.is_minimal());
        assert_eq!(cert.row_degrees, vec![1, 1]);
    }

    #[test]
    fn row_degrees_after_substitution() {
        let cert = certify_minimal_basis(&bidiagonal_pencil_pow(2, 3, backend())).unwrap();
        assert_eq!(cert.row_degrees, vec![3, 3]);
        let cert2 = certify_minimal_basis(
            &monomial_column_pow(2, 3, backend()).star(crate::matpoly::StarFlavor::Transpose),
        )
        .unwrap();
        assert_eq!(cert2.row_degrees, vec![6]);
    }

    #[test]
    fn common_root_is_detected() {
        // [x 0; 0 x] drops rank at zero
        let mut p = MatrixPolynomial::zero(2, 2, 1, backend());
        p.coeff_mut(1).set(0, 0, Scalar::one(backend()));
        p.coeff_mut(1).set(1, 1, Scalar::one(backend()));
        let cert = certify_minimal_basis(&p).unwrap();
        assert!(!cert.full_row_rank_everywhere);
        assert!(!cert.is_minimal());
    }

    #[test]
    fn reversal_of_constant_degree_basis_stays_minimal() {
        let l = bidiagonal_pencil_pow(2, 2, backend());
        let r = l.rev(2).unwrap();
        assert!(certify_minimal_basis(&r).unwrap().is_minimal());
    }

    #[test]
    fn duality_survives_reversal() {
        // constant row degrees ell and d*ell, reversed at their own grades
        for d in 1..=4usize {
            for ell in 1..=3usize {
                let k1 = bidiagonal_pencil_pow(d, ell, backend());
                let n1 = monomial_column_pow(d, ell, backend())
                    .star(crate::matpoly::StarFlavor::Transpose);
                let k1_rev = k1.rev(ell).unwrap();
                let n1_rev = n1.rev(d * ell).unwrap();
                let report = certify_dual_pair(&k1_rev, &n1_rev).unwrap();
                assert!(report.dual, "d={d} ell={ell}: {report:?}");
            }
        }
    }

    #[test]
    fn closed_forms_match_generic_route() {
        for which in [NamedMobius::A1, NamedMobius::A2, NamedMobius::A3] {
            for sign in [Sign::Plus, Sign::Minus] {
                for d in 0..=3usize {
                    for ell in 1..=3usize {
                        let closed = transformed_bidiagonal(which, sign, d, ell, backend());
                        let generic =
                            transformed_bidiagonal_generic(which, sign, d, ell, backend()).unwrap();
                        assert_eq!(closed, generic, "{which:?} {sign:?} d={d} ell={ell}");
                        let closed_n = transformed_monomial_column(which, sign, d, ell, backend());
                        let generic_n =
                            transformed_monomial_column_generic(which, sign, d, ell, backend())
                                .unwrap();
                        assert_eq!(closed_n, generic_n, "{which:?} {sign:?} d={d} ell={ell}");
                    }
                }
            }
        }
    }

    #[test]
    fn table_rows_for_a2_and_a3() {
        // odd power substitution flips the sign of the variable
        let odd = transformed_bidiagonal(NamedMobius::A2, Sign::Plus, 2, 1, backend());
        let l = bidiagonal_pencil(2, backend());
        assert_eq!(odd.coeff(0), l.coeff(0));
        assert_eq!(odd.coeff(1), &l.coeff(1).neg());
        // A3 with minus is the negated reversal
        let rev = transformed_bidiagonal(NamedMobius::A3, Sign::Minus, 2, 2, backend());
        let expect = bidiagonal_pencil_pow(2, 2, backend()).rev(2).unwrap().neg();
        assert_eq!(rev, expect);
    }
}
