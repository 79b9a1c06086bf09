//! Mobius transformations of matrix polynomials.
//!
//! For `A = [[a, b], [c, d]]` in GL(2) and a grade-k polynomial P, the
//! transform replaces the monomial basis by `(a x + b)^j (c x + d)^{k-j}`.
//! The expansion is exact: powers of the two linear factors are built once
//! and convolved per coefficient, so the cost is cubic in the grade with
//! small constants.

use crate::block::{BlockPolynomial, Labels};
use crate::error::{Error, Result};
use crate::matpoly::MatrixPolynomial;
use crate::poly::SPoly;
use crate::scalar::{Backend, Scalar};
use crate::structure::{NamedMobius, Sign};

#[derive(Debug, Clone, PartialEq)]
pub struct MobiusMatrix {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
}

impl MobiusMatrix {
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Result<Self> {
        let m = MobiusMatrix { a, b, c, d };
        if m.det().is_zero() {
            return Err(Error::SingularMobiusMatrix);
        }
        Ok(m)
    }

    pub fn named(which: NamedMobius, backend: Backend) -> Self {
        let o = Scalar::one(backend);
        let z = Scalar::zero(backend);
        let (a, b, c, d) = match which {
            NamedMobius::A1 => (o.clone(), z.clone(), z.clone(), o.clone()),
            NamedMobius::A2 => (-o.clone(), z.clone(), z.clone(), o.clone()),
            NamedMobius::A3 => (z.clone(), o.clone(), o.clone(), z.clone()),
        };
        MobiusMatrix { a, b, c, d }
    }

    /// The Cayley matrix sending the palindromic classes to the alternating
    /// ones: `(1 - x)^k P((1 + x)/(1 - x))`.
    pub fn cayley_plus(backend: Backend) -> Self {
        let o = Scalar::one(backend);
        MobiusMatrix {
            a: o.clone(),
            b: o.clone(),
            c: -o.clone(),
            d: o,
        }
    }

    /// The opposite Cayley matrix: `(x + 1)^k P((x - 1)/(x + 1))`.
    pub fn cayley_minus(backend: Backend) -> Self {
        let o = Scalar::one(backend);
        MobiusMatrix {
            a: o.clone(),
            b: -o.clone(),
            c: o.clone(),
            d: o,
        }
    }

    pub fn backend(&self) -> Backend {
        self.a.backend()
    }

    pub fn det(&self) -> Scalar {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn conj(&self) -> MobiusMatrix {
        MobiusMatrix {
            a: self.a.conj(),
            b: self.b.conj(),
            c: self.c.conj(),
            d: self.d.conj(),
        }
    }

    /// 2x2 matrix product.
    pub fn compose(&self, rhs: &MobiusMatrix) -> MobiusMatrix {
        MobiusMatrix {
            a: &(&self.a * &rhs.a) + &(&self.b * &rhs.c),
            b: &(&self.a * &rhs.b) + &(&self.b * &rhs.d),
            c: &(&self.c * &rhs.a) + &(&self.d * &rhs.c),
            d: &(&self.c * &rhs.b) + &(&self.d * &rhs.d),
        }
    }

    /// `A * conj(A) = I`.
    pub fn is_coninvolutory(&self) -> bool {
        let p = self.compose(&self.conj());
        p.a.is_one() && p.b.is_zero() && p.c.is_zero() && p.d.is_one()
    }

    pub fn promote(&self, backend: Backend) -> Result<MobiusMatrix> {
        Ok(MobiusMatrix {
            a: self.a.promote(backend)?,
            b: self.b.promote(backend)?,
            c: self.c.promote(backend)?,
            d: self.d.promote(backend)?,
        })
    }

    /// Weights of the transformed monomial basis: row j holds the scalar
    /// polynomial `(a x + b)^j (c x + d)^{k-j}`.
    fn basis_weights(&self, k: usize) -> Vec<SPoly> {
        let up = SPoly::from_coeffs(vec![self.b.clone(), self.a.clone()]);
        let dn = SPoly::from_coeffs(vec![self.d.clone(), self.c.clone()]);
        let backend = self.backend();
        let mut up_pows = Vec::with_capacity(k + 1);
        let mut dn_pows = Vec::with_capacity(k + 1);
        up_pows.push(SPoly::one(backend));
        dn_pows.push(SPoly::one(backend));
        for j in 1..=k {
            let last_up = up_pows[j - 1].mul(&up);
            let last_dn = dn_pows[j - 1].mul(&dn);
            up_pows.push(last_up);
            dn_pows.push(last_dn);
        }
        (0..=k).map(|j| up_pows[j].mul(&dn_pows[k - j])).collect()
    }
}

/// The Mobius transform of P, read at its declared grade. With
/// `sign = Minus` the polynomial is negated first, which simply negates the
/// output.
pub fn mobius(a: &MobiusMatrix, p: &MatrixPolynomial, sign: Sign) -> Result<MatrixPolynomial> {
    if a.det().is_zero() {
        return Err(Error::SingularMobiusMatrix);
    }
    let a = a.promote(p.backend())?;
    let k = p.grade();
    let weights = a.basis_weights(k);
    let backend = p.backend();
    let mut out = MatrixPolynomial::zero(p.rows(), p.cols(), k, backend);
    for (j, w) in weights.iter().enumerate() {
        let c = p.coeff(j);
        if c.is_zero() {
            continue;
        }
        for (t, wc) in w.coeffs().iter().enumerate() {
            if wc.is_zero() {
                continue;
            }
            let cur = out.coeff(t).add(&c.scale(wc));
            *out.coeff_mut(t) = cur;
        }
    }
    Ok(match sign {
        Sign::Plus => out,
        Sign::Minus => out.neg(),
    })
}

/// Mobius transform of a block polynomial. Numerically this is the
/// entry-wise transform; the labels mix power slots inside each block with
/// the same binomial weights.
pub fn mobius_block(a: &MobiusMatrix, p: &BlockPolynomial, sign: Sign) -> Result<BlockPolynomial> {
    let base = mobius(a, p.base(), sign)?;
    let labels = match p.labels() {
        None => None,
        Some(old) => {
            let am = a.promote(p.base().backend())?;
            let k = p.grade();
            let weights = am.basis_weights(k);
            let mut fresh = Labels::zeroed(k, p.block_rows(), p.block_cols());
            for s in 1..=p.block_rows() {
                for t in 1..=p.block_cols() {
                    for (j, w) in weights.iter().enumerate() {
                        let src = old.get(j, s, t);
                        if src.is_zero() {
                            continue;
                        }
                        for (pow, wc) in w.coeffs().iter().enumerate() {
                            if wc.is_zero() {
                                continue;
                            }
                            let scaled = match sign {
                                Sign::Plus => src.scale(wc),
                                Sign::Minus => src.scale(&-wc.clone()),
                            };
                            fresh.add_into(pow, s, t, &scaled);
                        }
                    }
                }
            }
            Some(fresh)
        }
    };
    BlockPolynomial::new(
        base,
        p.block_rows(),
        p.block_cols(),
        p.block_size(),
        labels,
    )
}

/// Which Cayley transform to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CayleySide {
    Plus,
    Minus,
}

pub fn cayley(p: &MatrixPolynomial, side: CayleySide) -> Result<MatrixPolynomial> {
    let a = match side {
        CayleySide::Plus => MobiusMatrix::cayley_plus(p.backend()),
        CayleySide::Minus => MobiusMatrix::cayley_minus(p.backend()),
    };
    mobius(&a, p, Sign::Plus)
}

pub fn cayley_block(p: &BlockPolynomial, side: CayleySide) -> Result<BlockPolynomial> {
    let a = match side {
        CayleySide::Plus => MobiusMatrix::cayley_plus(p.base().backend()),
        CayleySide::Minus => MobiusMatrix::cayley_minus(p.base().backend()),
    };
    mobius_block(&a, p, Sign::Plus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use crate::scalar::Backend;

    fn backend() -> Backend {
        Backend::Rational
    }

    fn sc(v: i64) -> Scalar {
        Scalar::from_int(v, backend())
    }

    fn lcg(state: &mut u64) -> i64 {
        *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((*state >> 33) % 9) as i64 - 4
    }

    fn random_poly(n: usize, grade: usize, state: &mut u64) -> MatrixPolynomial {
        let coeffs = (0..=grade)
            .map(|_| Matrix::from_fn(n, n, |_, _| sc(lcg(state))))
            .collect();
        MatrixPolynomial::new(n, n, grade, coeffs).unwrap()
    }

    #[test]
    fn constants_are_fixed_points() {
        let c = MatrixPolynomial::constant(Matrix::identity(2, backend()).scale(&sc(7)), 0);
        let a = MobiusMatrix::new(sc(2), sc(1), sc(1), sc(1)).unwrap();
        assert_eq!(mobius(&a, &c, Sign::Plus).unwrap(), c);
    }

    #[test]
    fn a3_is_reversal() {
        let mut state = 21u64;
        let p = random_poly(2, 3, &mut state);
        let a3 = MobiusMatrix::named(NamedMobius::A3, backend());
        assert_eq!(mobius(&a3, &p, Sign::Plus).unwrap(), p.rev(3).unwrap());
    }

    #[test]
    fn a2_alternates_signs() {
        // oracle: substitute -x and re-collect coefficient-wise
        let mut state = 33u64;
        let p = random_poly(2, 4, &mut state);
        let a2 = MobiusMatrix::named(NamedMobius::A2, backend());
        let got = mobius(&a2, &p, Sign::Plus).unwrap();
        for j in 0..=4usize {
            let expect = if j % 2 == 0 {
                p.coeff(j).clone()
            } else {
                p.coeff(j).neg()
            };
            assert_eq!(got.coeff(j), &expect);
        }
    }

    #[test]
    fn composition_law() {
        let mut state = 9u64;
        for _ in 0..10 {
            let p = random_poly(2, 3, &mut state);
            let a = MobiusMatrix::new(sc(1), sc(2), sc(0), sc(1)).unwrap();
            let b = MobiusMatrix::new(sc(1), sc(0), sc(lcg(&mut state) % 2), sc(1)).unwrap();
            let lhs = mobius(&b, &mobius(&a, &p, Sign::Plus).unwrap(), Sign::Plus).unwrap();
            let rhs = mobius(&a.compose(&b), &p, Sign::Plus).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn cayley_of_cubic_sums_coefficients() {
        let mut state = 2u64;
        let p = random_poly(2, 3, &mut state);
        let q = cayley(&p, CayleySide::Plus).unwrap();
        let sum = p
            .coeff(0)
            .add(p.coeff(1))
            .add(p.coeff(2))
            .add(p.coeff(3));
        assert_eq!(q.coeff(0), &sum);
        // and the degree-1 coefficient -3 P0 - P1 + P2 + 3 P3
        let c1 = p
            .coeff(0)
            .scale(&sc(-3))
            .add(&p.coeff(1).neg())
            .add(p.coeff(2))
            .add(&p.coeff(3).scale(&sc(3)));
        assert_eq!(q.coeff(1), &c1);
    }

    #[test]
    fn cayley_of_constant_is_constant() {
        let c = MatrixPolynomial::constant(Matrix::identity(2, backend()), 0);
        assert_eq!(cayley(&c, CayleySide::Plus).unwrap(), c);
    }

    #[test]
    fn named_matrices_are_coninvolutory() {
        for which in [NamedMobius::A1, NamedMobius::A2, NamedMobius::A3] {
            assert!(MobiusMatrix::named(which, backend()).is_coninvolutory());
            assert!(MobiusMatrix::named(which, Backend::Gaussian).is_coninvolutory());
        }
    }

    #[test]
    fn singular_matrix_is_rejected() {
        assert!(matches!(
            MobiusMatrix::new(sc(1), sc(2), sc(2), sc(4)),
            Err(Error::SingularMobiusMatrix)
        ));
    }
}
