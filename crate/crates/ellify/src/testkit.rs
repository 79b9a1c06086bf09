//! Deterministic generators shared by the integration and acceptance
//! suites. Not part of the supported API.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::matpoly::{MatrixPolynomial, StarFlavor};
use crate::matrix::Matrix;
use crate::scalar::{Backend, Scalar};
use crate::structure::{StructureKind, StructureTag};

/// Tiny splitmix-style generator so suites stay reproducible without a rand
/// dependency. The seed is echoed by callers that report results.
#[derive(Debug, Clone)]
pub struct Rng(pub u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed.wrapping_add(0x9e3779b97f4a7c15))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `lo..=hi`.
    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        let span = (hi - lo + 1) as u64;
        lo + (self.next_u64() % span) as i64
    }

    pub fn scalar(&mut self, backend: Backend) -> Scalar {
        match backend {
            Backend::Rational => Scalar::from_int(self.int(-5, 5), backend),
            Backend::Gaussian => Scalar::Gaussian(
                BigRational::from_integer(BigInt::from(self.int(-4, 4))),
                BigRational::from_integer(BigInt::from(self.int(-4, 4))),
            ),
            Backend::Float => Scalar::Float(self.int(-5, 5) as f64),
        }
    }

    pub fn matrix(&mut self, rows: usize, cols: usize, backend: Backend) -> Matrix {
        Matrix::from_fn(rows, cols, |_, _| self.scalar(backend))
    }

    pub fn matpoly(
        &mut self,
        rows: usize,
        cols: usize,
        grade: usize,
        backend: Backend,
    ) -> MatrixPolynomial {
        let coeffs = (0..=grade).map(|_| self.matrix(rows, cols, backend)).collect();
        MatrixPolynomial::new(rows, cols, grade, coeffs).expect("consistent shapes")
    }
}

fn star_of(m: &Matrix, flavor: StarFlavor) -> Matrix {
    match flavor {
        StarFlavor::Transpose => m.transpose(),
        StarFlavor::ConjugateTranspose => m.transpose().conj(),
    }
}

/// Random square polynomial carrying the requested structure exactly, built
/// by projecting random coefficients onto the class.
pub fn random_structured(
    rng: &mut Rng,
    tag: StructureTag,
    n: usize,
    k: usize,
    backend: Backend,
) -> MatrixPolynomial {
    let half = Scalar::from_ratio(1, 2, backend);
    let mut coeffs: Vec<Matrix> = (0..=k).map(|_| rng.matrix(n, n, backend)).collect();
    match tag.kind {
        StructureKind::Symmetric => {
            for c in coeffs.iter_mut() {
                *c = c.add(&star_of(c, tag.flavor)).scale(&half);
            }
        }
        StructureKind::SkewSymmetric => {
            for c in coeffs.iter_mut() {
                *c = c.sub(&star_of(c, tag.flavor)).scale(&half);
            }
        }
        StructureKind::Even => {
            for (j, c) in coeffs.iter_mut().enumerate() {
                let s = star_of(c, tag.flavor);
                *c = if j % 2 == 0 {
                    c.add(&s).scale(&half)
                } else {
                    c.sub(&s).scale(&half)
                };
            }
        }
        StructureKind::Odd => {
            for (j, c) in coeffs.iter_mut().enumerate() {
                let s = star_of(c, tag.flavor);
                *c = if j % 2 == 0 {
                    c.sub(&s).scale(&half)
                } else {
                    c.add(&s).scale(&half)
                };
            }
        }
        StructureKind::Palindromic | StructureKind::AntiPalindromic => {
            let sign = if tag.kind == StructureKind::Palindromic {
                Scalar::one(backend)
            } else {
                -Scalar::one(backend)
            };
            for j in 0..=k / 2 {
                let partner = k - j;
                if partner == j {
                    let c = coeffs[j].clone();
                    let s = star_of(&c, tag.flavor).scale(&sign);
                    coeffs[j] = c.add(&s).scale(&half);
                } else {
                    let c = coeffs[j].clone();
                    coeffs[partner] = star_of(&c, tag.flavor).scale(&sign);
                }
            }
        }
    }
    MatrixPolynomial::new(n, n, k, coeffs).expect("consistent shapes")
}

/// Scalar (1x1) polynomial carrying the structure exactly, with every
/// coefficient nonzero; used where block censuses must not lose blocks to
/// accidental zeros. Degenerate scalar combinations (the transpose-flavored
/// skew and alternating classes) are rejected.
pub fn nonzero_structured_tags(tag: StructureTag, k: usize) -> MatrixPolynomial {
    let real = |v: i64| Scalar::gaussian_int(v, 0);
    let imag = |v: i64| Scalar::gaussian_int(0, v);
    let coeffs: Vec<Scalar> = match (tag.kind, tag.flavor) {
        (StructureKind::Symmetric, _) => (0..=k).map(|j| real(j as i64 + 2)).collect(),
        (StructureKind::SkewSymmetric, StarFlavor::ConjugateTranspose) => {
            (0..=k).map(|j| imag(j as i64 + 2)).collect()
        }
        (StructureKind::Even, StarFlavor::ConjugateTranspose) => (0..=k)
            .map(|j| if j % 2 == 0 { real(j as i64 + 2) } else { imag(j as i64 + 2) })
            .collect(),
        (StructureKind::Odd, StarFlavor::ConjugateTranspose) => (0..=k)
            .map(|j| if j % 2 == 0 { imag(j as i64 + 2) } else { real(j as i64 + 2) })
            .collect(),
        (StructureKind::Palindromic, StarFlavor::Transpose) => {
            (0..=k).map(|j| real(j.min(k - j) as i64 + 2)).collect()
        }
        (StructureKind::Palindromic, StarFlavor::ConjugateTranspose) => (0..=k)
            .map(|j| {
                let v = j.min(k - j) as i64 + 2;
                if 2 * j < k {
                    Scalar::gaussian_int(v, v + 1)
                } else if 2 * j == k {
                    real(v)
                } else {
                    Scalar::gaussian_int(v, -(v + 1))
                }
            })
            .collect(),
        (StructureKind::AntiPalindromic, StarFlavor::ConjugateTranspose) => (0..=k)
            .map(|j| {
                let v = j.min(k - j) as i64 + 2;
                if 2 * j < k {
                    Scalar::gaussian_int(v, v + 1)
                } else if 2 * j == k {
                    imag(v)
                } else {
                    Scalar::gaussian_int(-v, v + 1)
                }
            })
            .collect(),
        (kind, flavor) => panic!(
            "no nonzero scalar tags for {kind:?} under {flavor:?} (degenerate class)"
        ),
    };
    let coeffs = coeffs.into_iter().map(|c| Matrix::scalar_matrix(1, c)).collect();
    let p = MatrixPolynomial::new(1, 1, k, coeffs).expect("consistent shapes");
    debug_assert!(crate::verify::check_structure(&p, tag), "{tag} tags");
    p
}

/// Scalar (1x1) polynomial with distinct nonzero rational tags `j + 2`, for
/// block-for-block template comparisons.
pub fn tagged_scalar_poly(k: usize, backend: Backend) -> MatrixPolynomial {
    let coeffs = (0..=k)
        .map(|j| Matrix::scalar_matrix(1, Scalar::from_int(j as i64 + 2, backend)))
        .collect();
    MatrixPolynomial::new(1, 1, k, coeffs).expect("consistent shapes")
}

/// Distinct tags that make the scalar polynomial genuinely `*`-odd: even
/// coefficients purely imaginary, odd ones real.
pub fn tagged_star_odd_poly(k: usize) -> MatrixPolynomial {
    let coeffs = (0..=k)
        .map(|j| {
            let v = j as i64 + 2;
            let tag = if j % 2 == 0 {
                Scalar::gaussian_int(0, v)
            } else {
                Scalar::gaussian_int(v, 0)
            };
            Matrix::scalar_matrix(1, tag)
        })
        .collect();
    MatrixPolynomial::new(1, 1, k, coeffs).expect("consistent shapes")
}

/// Distinct tags that make the scalar polynomial genuinely `*`-palindromic:
/// conjugate pairs across the middle, real middle coefficient.
pub fn tagged_star_palindromic_poly(k: usize) -> MatrixPolynomial {
    let mut coeffs: Vec<Matrix> = vec![Matrix::zero(1, 1, Backend::Gaussian); k + 1];
    for j in 0..=k / 2 {
        let v = j as i64 + 2;
        if k - j == j {
            coeffs[j] = Matrix::scalar_matrix(1, Scalar::gaussian_int(v, 0));
        } else {
            coeffs[j] = Matrix::scalar_matrix(1, Scalar::gaussian_int(v, v + 1));
            coeffs[k - j] = Matrix::scalar_matrix(1, Scalar::gaussian_int(v, -(v + 1)));
        }
    }
    MatrixPolynomial::new(1, 1, k, coeffs).expect("consistent shapes")
}
