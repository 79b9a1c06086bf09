//! Univariate scalar polynomials, the value domain of determinants, Smith
//! invariant factors, and minor-gcd witnesses.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Backend, Scalar};

/// A scalar polynomial with ascending coefficients and no trailing zeros;
/// the zero polynomial is the empty coefficient list.
#[derive(Debug, Clone, PartialEq)]
pub struct SPoly {
    coeffs: Vec<Scalar>,
}

impl SPoly {
    pub fn zero() -> Self {
        SPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        SPoly { coeffs }
    }

    pub fn constant(v: Scalar) -> Self {
        SPoly::from_coeffs(vec![v])
    }

    pub fn one(backend: Backend) -> Self {
        SPoly::constant(Scalar::one(backend))
    }

    /// The monomial `alpha * x^d`.
    pub fn monomial(alpha: Scalar, d: usize) -> Self {
        if alpha.is_zero() {
            return SPoly::zero();
        }
        let backend = alpha.backend();
        let mut coeffs = vec![Scalar::zero(backend); d + 1];
        coeffs[d] = alpha;
        SPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> Scalar {
        self.coeffs
            .get(d)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.backend()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_nonzero_constant(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn backend(&self) -> Backend {
        self.coeffs.first().map_or(Backend::Rational, Scalar::backend)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let backend = x.backend();
        let mut acc = Scalar::zero(backend);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn add(&self, rhs: &SPoly) -> SPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let backend = if self.is_zero() { rhs.backend() } else { self.backend() };
        let mut out = Vec::with_capacity(n);
        for d in 0..n {
            let a = self.coeffs.get(d).cloned().unwrap_or_else(|| Scalar::zero(backend));
            let b = rhs.coeffs.get(d).cloned().unwrap_or_else(|| Scalar::zero(backend));
            out.push(&a + &b);
        }
        SPoly::from_coeffs(out)
    }

    pub fn neg(&self) -> SPoly {
        SPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, rhs: &SPoly) -> SPoly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &SPoly) -> SPoly {
        if self.is_zero() || rhs.is_zero() {
            return SPoly::zero();
        }
        let backend = self.backend();
        let mut out = vec![Scalar::zero(backend); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        SPoly::from_coeffs(out)
    }

    pub fn scale(&self, alpha: &Scalar) -> SPoly {
        SPoly::from_coeffs(self.coeffs.iter().map(|c| c * alpha).collect())
    }

    /// Euclidean division, `self = q * rhs + r` with `deg r < deg rhs`.
    pub fn div_rem(&self, rhs: &SPoly) -> Result<(SPoly, SPoly)> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut rem = self.coeffs.clone();
        let dr = rhs.coeffs.len() - 1;
        let lead_inv = rhs.leading().expect("nonzero").inv()?;
        if rem.len() <= dr {
            return Ok((SPoly::zero(), self.clone()));
        }
        let backend = rhs.backend();
        let mut quot = vec![Scalar::zero(backend); rem.len() - dr];
        while rem.len() > dr && !rem.is_empty() {
            let top = rem.last().expect("nonempty").clone();
            if top.is_zero() {
                rem.pop();
                continue;
            }
            let shift = rem.len() - 1 - dr;
            let q = &top * &lead_inv;
            for (k, b) in rhs.coeffs.iter().enumerate() {
                let idx = shift + k;
                rem[idx] = &rem[idx] - &(&q * b);
            }
            quot[shift] = q;
            // top term cancels exactly
            debug_assert!(rem.last().expect("nonempty").is_zero());
            rem.pop();
        }
        Ok((SPoly::from_coeffs(quot), SPoly::from_coeffs(rem)))
    }

    pub fn divides(&self, other: &SPoly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(self).map(|(_, r)| r.is_zero()).unwrap_or(false)
    }

    /// Exact quotient; errors unless the division leaves no remainder.
    pub fn div_exact(&self, rhs: &SPoly) -> Result<SPoly> {
        let (q, r) = self.div_rem(rhs)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::DimensionMismatch("inexact polynomial division".into()))
        }
    }

    pub fn monic(&self) -> SPoly {
        match self.leading() {
            None => SPoly::zero(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => {
                let inv = l.inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Monic gcd by the Euclidean algorithm. Remainders are stripped to
    /// primitive integer content at every step; without that the reduced
    /// fractions grow exponentially along the chain.
    pub fn gcd(&self, rhs: &SPoly) -> SPoly {
        let mut a = self.primitive_part();
        let mut b = rhs.primitive_part();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("b nonzero");
            a = b;
            b = r.primitive_part();
        }
        a.monic()
    }

    /// The rational unit making the integer content of the coefficients
    /// one, or `None` for the zero polynomial or when already primitive.
    pub fn content_unit(&self) -> Option<BigRational> {
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        let mut saw = false;
        for c in &self.coeffs {
            let (re, im) = match c {
                Scalar::Rational(r) => (Some(r), None),
                Scalar::Gaussian(re, im) => (Some(re), Some(im)),
                Scalar::Float(_) => (None, None),
            };
            for part in [re, im].into_iter().flatten() {
                if part.is_zero() {
                    continue;
                }
                saw = true;
                den_lcm = den_lcm.lcm(part.denom());
                num_gcd = num_gcd.gcd(part.numer());
            }
        }
        if !saw || (num_gcd.is_one() && den_lcm.is_one()) {
            None
        } else {
            Some(BigRational::new(den_lcm, num_gcd))
        }
    }

    /// Scale by a rational unit, embedded into the coefficient backend.
    pub fn scale_rational(&self, unit: &BigRational) -> SPoly {
        let backend = self.backend();
        let factor = match backend {
            Backend::Gaussian => Scalar::Gaussian(unit.clone(), BigRational::zero()),
            _ => Scalar::Rational(unit.clone()),
        };
        self.scale(&factor)
    }

    /// The content-free multiple of `self` (up to a rational unit).
    pub fn primitive_part(&self) -> SPoly {
        match self.content_unit() {
            Some(unit) => self.scale_rational(&unit),
            None => self.clone(),
        }
    }

    /// Extended gcd: returns `(g, u, v)` with `u * self + v * rhs = g`.
    /// Each remainder is stripped to primitive content with the Bezout
    /// cofactors rescaled alongside, so the chain stays polynomial-sized.
    pub fn ext_gcd(&self, rhs: &SPoly) -> Result<(SPoly, SPoly, SPoly)> {
        let backend = if self.is_zero() { rhs.backend() } else { self.backend() };
        let mut r0 = self.clone();
        let mut r1 = rhs.clone();
        let mut s0 = SPoly::one(backend);
        let mut t0 = SPoly::zero();
        let mut s1 = SPoly::zero();
        let mut t1 = SPoly::one(backend);
        while !r1.is_zero() {
            let (q, mut r2) = r0.div_rem(&r1)?;
            let mut s2 = s0.sub(&q.mul(&s1));
            let mut t2 = t0.sub(&q.mul(&t1));
            if let Some(unit) = r2.content_unit() {
                r2 = r2.scale_rational(&unit);
                s2 = s2.scale_rational(&unit);
                t2 = t2.scale_rational(&unit);
            }
            (r0, r1) = (r1, r2);
            (s0, s1) = (s1, s2);
            (t0, t1) = (t1, t2);
        }
        Ok((r0, s0, t0))
    }

    /// Coefficients reversed onto grade `k` (requires `k >= deg`).
    pub fn rev(&self, k: usize) -> Result<SPoly> {
        if let Some(d) = self.degree() {
            if d > k {
                return Err(Error::GradeTooSmall { grade: k, degree: d });
            }
        }
        let backend = self.backend();
        let mut out = vec![Scalar::zero(backend); k + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            out[k - j] = c.clone();
        }
        Ok(SPoly::from_coeffs(out))
    }
}

impl fmt::Display for SPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match d {
                0 => write!(f, "{c}")?,
                1 if c.is_one() => f.write_str("x")?,
                1 => write!(f, "({c})*x")?,
                _ if c.is_one() => write!(f, "x^{d}")?,
                _ => write!(f, "({c})*x^{d}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[i64]) -> SPoly {
        SPoly::from_coeffs(
            coeffs
                .iter()
                .map(|&v| Scalar::from_int(v, Backend::Rational))
                .collect(),
        )
    }

    #[test]
    fn div_rem_roundtrip() {
        let a = p(&[1, 0, -3, 2, 5]);
        let b = p(&[2, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_is_monic_common_factor() {
        let g = p(&[1, 1]); // x + 1
        let a = g.mul(&p(&[3, 0, 1]));
        let b = g.mul(&p(&[-2, 1]));
        assert_eq!(a.gcd(&b), g);
    }

    #[test]
    fn ext_gcd_bezout_identity() {
        let a = p(&[6, 7, 1]).mul(&p(&[2, 3]));
        let b = p(&[6, 7, 1]).mul(&p(&[-1, 0, 5]));
        let (g, u, v) = a.ext_gcd(&b).unwrap();
        assert_eq!(u.mul(&a).add(&v.mul(&b)), g);
        assert_eq!(g.monic(), p(&[6, 7, 1]).monic());
        // coprime pair gives a constant combination
        let (g2, u2, v2) = p(&[1, 1]).ext_gcd(&p(&[2, 1])).unwrap();
        assert!(g2.is_nonzero_constant());
        assert_eq!(u2.mul(&p(&[1, 1])).add(&v2.mul(&p(&[2, 1]))), g2);
    }

    #[test]
    fn zero_degree_is_none() {
        assert_eq!(p(&[]).degree(), None);
        assert_eq!(p(&[0]).degree(), None);
        assert_eq!(p(&[7]).degree(), Some(0));
    }
}
