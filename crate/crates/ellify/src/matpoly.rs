//! Matrix polynomials in the monomial basis.
//!
//! The grade is explicit and is never silently shrunk to the degree: a
//! grade-k polynomial stores exactly `k + 1` coefficient matrices, some of
//! which (including the leading one) may be zero. The degree is computed on
//! demand and is `None` for the identically zero polynomial, so callers must
//! branch explicitly on that case.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::SPoly;
use crate::scalar::{Backend, Scalar};

/// Transpose flavor of the star operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StarFlavor {
    /// Plain transpose.
    Transpose,
    /// Conjugate transpose.
    ConjugateTranspose,
}

impl StarFlavor {
    pub fn short(self) -> &'static str {
        match self {
            StarFlavor::Transpose => "t",
            StarFlavor::ConjugateTranspose => "h",
        }
    }

    pub fn conj(self, v: &Scalar) -> Scalar {
        match self {
            StarFlavor::Transpose => v.clone(),
            StarFlavor::ConjugateTranspose => v.conj(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPolynomial {
    rows: usize,
    cols: usize,
    grade: usize,
    coeffs: Vec<Matrix>,
}

impl MatrixPolynomial {
    pub fn new(rows: usize, cols: usize, grade: usize, coeffs: Vec<Matrix>) -> Result<Self> {
        if coeffs.len() != grade + 1 {
            return Err(Error::DimensionMismatch(format!(
                "grade {} needs {} coefficients, got {}",
                grade,
                grade + 1,
                coeffs.len()
            )));
        }
        let backend = coeffs
            .first()
            .map(Matrix::backend)
            .unwrap_or(Backend::Rational);
        for c in &coeffs {
            if c.rows() != rows || c.cols() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "coefficient is {}x{}, expected {}x{}",
                    c.rows(),
                    c.cols(),
                    rows,
                    cols
                )));
            }
            if c.rows() * c.cols() > 0 && c.backend() != backend {
                return Err(Error::BackendMismatch(backend.name(), c.backend().name()));
            }
        }
        Ok(MatrixPolynomial { rows, cols, grade, coeffs })
    }

    pub fn zero(rows: usize, cols: usize, grade: usize, backend: Backend) -> Self {
        MatrixPolynomial {
            rows,
            cols,
            grade,
            coeffs: (0..=grade).map(|_| Matrix::zero(rows, cols, backend)).collect(),
        }
    }

    pub fn constant(m: Matrix, grade: usize) -> Self {
        let (rows, cols, backend) = (m.rows(), m.cols(), m.backend());
        let mut coeffs = vec![m];
        coeffs.extend((0..grade).map(|_| Matrix::zero(rows, cols, backend)));
        MatrixPolynomial { rows, cols, grade, coeffs }
    }

    /// 1x1 polynomial from a scalar polynomial, padded to `grade`.
    pub fn from_spoly(p: &SPoly, grade: usize, backend: Backend) -> Result<Self> {
        if let Some(d) = p.degree() {
            if d > grade {
                return Err(Error::GradeTooSmall { grade, degree: d });
            }
        }
        let coeffs = (0..=grade)
            .map(|j| {
                let mut m = Matrix::zero(1, 1, backend);
                m.set(0, 0, p.coeff(j));
                m
            })
            .collect();
        MatrixPolynomial::new(1, 1, grade, coeffs)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn backend(&self) -> Backend {
        self.coeffs
            .first()
            .map(Matrix::backend)
            .unwrap_or(Backend::Rational)
    }

    pub fn coeff(&self, j: usize) -> &Matrix {
        &self.coeffs[j]
    }

    pub fn coeff_mut(&mut self, j: usize) -> &mut Matrix {
        &mut self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[Matrix] {
        &self.coeffs
    }

    pub fn entry(&self, i: usize, j: usize) -> SPoly {
        SPoly::from_coeffs(self.coeffs.iter().map(|c| c.get(i, j).clone()).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Matrix::is_zero)
    }

    /// Largest j with a nonzero coefficient; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        (0..=self.grade).rev().find(|&j| !self.coeffs[j].is_zero())
    }

    /// Same coefficients re-declared at a larger grade.
    pub fn with_grade(&self, grade: usize) -> Result<Self> {
        let deg = self.degree().map_or(0, |d| d);
        if grade < deg {
            return Err(Error::GradeTooSmall { grade, degree: deg });
        }
        let backend = self.backend();
        let mut coeffs = self.coeffs[..=deg.min(grade)].to_vec();
        while coeffs.len() < grade + 1 {
            coeffs.push(Matrix::zero(self.rows, self.cols, backend));
        }
        MatrixPolynomial::new(self.rows, self.cols, grade, coeffs)
    }

    pub fn add(&self, rhs: &MatrixPolynomial) -> Result<MatrixPolynomial> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::DimensionMismatch("add of different shapes".into()));
        }
        let grade = self.grade.max(rhs.grade);
        let a = self.with_grade(grade)?;
        let b = rhs.with_grade(grade)?;
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| x.add(y))
            .collect();
        MatrixPolynomial::new(self.rows, self.cols, grade, coeffs)
    }

    pub fn sub(&self, rhs: &MatrixPolynomial) -> Result<MatrixPolynomial> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> MatrixPolynomial {
        MatrixPolynomial {
            rows: self.rows,
            cols: self.cols,
            grade: self.grade,
            coeffs: self.coeffs.iter().map(Matrix::neg).collect(),
        }
    }

    pub fn scale(&self, alpha: &Scalar) -> MatrixPolynomial {
        MatrixPolynomial {
            rows: self.rows,
            cols: self.cols,
            grade: self.grade,
            coeffs: self.coeffs.iter().map(|c| c.scale(alpha)).collect(),
        }
    }

    /// Evaluate at a point by direct power accumulation.
    pub fn eval(&self, x: &Scalar) -> Result<Matrix> {
        if x.backend() != self.backend() {
            return Err(Error::BackendMismatch(
                self.backend().name(),
                x.backend().name(),
            ));
        }
        let mut acc = Matrix::zero(self.rows, self.cols, self.backend());
        let mut power = Scalar::one(x.backend());
        for (j, c) in self.coeffs.iter().enumerate() {
            if j > 0 {
                power = &power * x;
            }
            if !c.is_zero() {
                acc = acc.add(&c.scale(&power));
            }
        }
        Ok(acc)
    }

    /// `rev_k`: coefficient j moves to position k - j.
    pub fn rev(&self, k: usize) -> Result<MatrixPolynomial> {
        if let Some(d) = self.degree() {
            if d > k {
                return Err(Error::GradeTooSmall { grade: k, degree: d });
            }
        }
        let backend = self.backend();
        let mut coeffs = vec![Matrix::zero(self.rows, self.cols, backend); k + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            if j <= k {
                coeffs[k - j] = c.clone();
            }
        }
        MatrixPolynomial::new(self.rows, self.cols, k, coeffs)
    }

    /// Coefficient-wise (conjugate) transpose; the variable is untouched.
    pub fn star(&self, flavor: StarFlavor) -> MatrixPolynomial {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| match flavor {
                StarFlavor::Transpose => c.transpose(),
                StarFlavor::ConjugateTranspose => c.transpose().conj(),
            })
            .collect();
        MatrixPolynomial {
            rows: self.cols,
            cols: self.rows,
            grade: self.grade,
            coeffs,
        }
    }

    pub fn conj(&self) -> MatrixPolynomial {
        MatrixPolynomial {
            rows: self.rows,
            cols: self.cols,
            grade: self.grade,
            coeffs: self.coeffs.iter().map(Matrix::conj).collect(),
        }
    }

    /// Product as a polynomial of grade `grade(P) + grade(Q)`.
    pub fn mul(&self, rhs: &MatrixPolynomial) -> Result<MatrixPolynomial> {
        self.mul_with_grade(rhs, self.grade + rhs.grade)
    }

    /// Coefficient convolution, padded to `result_grade`.
    pub fn mul_with_grade(
        &self,
        rhs: &MatrixPolynomial,
        result_grade: usize,
    ) -> Result<MatrixPolynomial> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "product of {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        if result_grade < self.grade + rhs.grade {
            return Err(Error::GradeTooSmall {
                grade: result_grade,
                degree: self.grade + rhs.grade,
            });
        }
        let backend = self.backend();
        let mut coeffs = vec![Matrix::zero(self.rows, rhs.cols, backend); result_grade + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.matmul(b));
            }
        }
        MatrixPolynomial::new(self.rows, rhs.cols, result_grade, coeffs)
    }

    /// Kronecker product with the identity, applied coefficient-wise.
    pub fn kron_identity(&self, n: usize) -> MatrixPolynomial {
        MatrixPolynomial {
            rows: self.rows * n,
            cols: self.cols * n,
            grade: self.grade,
            coeffs: self.coeffs.iter().map(|c| c.kron_identity(n)).collect(),
        }
    }

    /// Substitute the variable by its `ell`-th power: coefficient j moves to
    /// power `j * ell` and the grade becomes `grade * ell`.
    pub fn substitute_power(&self, ell: usize) -> MatrixPolynomial {
        assert!(ell >= 1, "substitution exponent must be positive");
        if ell == 1 {
            return self.clone();
        }
        let backend = self.backend();
        let grade = self.grade * ell;
        let mut coeffs = vec![Matrix::zero(self.rows, self.cols, backend); grade + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            coeffs[j * ell] = c.clone();
        }
        MatrixPolynomial {
            rows: self.rows,
            cols: self.cols,
            grade,
            coeffs,
        }
    }

    /// Exact determinant as a scalar polynomial, by evaluation at the
    /// integer points `0..=D` and Newton interpolation.
    pub fn det_poly(&self) -> Result<SPoly> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of non-square".into()));
        }
        if !self.backend().is_exact() {
            return Err(Error::FloatBackendUnsupported);
        }
        if self.rows == 0 {
            return Ok(SPoly::one(self.backend()));
        }
        let backend = self.backend();
        let bound = self.rows * self.grade;
        let points: Vec<Scalar> = (0..=bound as i64)
            .map(|t| Scalar::from_int(t, backend))
            .collect();
        let values: Vec<Scalar> = points
            .iter()
            .map(|t| self.eval(t)?.det())
            .collect::<Result<_>>()?;
        Ok(newton_interpolate(&points, &values))
    }

    /// Extract the n x n block at 1-based block position (s, t).
    pub fn block(&self, s: usize, t: usize, n: usize) -> MatrixPolynomial {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                Matrix::from_fn(n, n, |i, j| c.get((s - 1) * n + i, (t - 1) * n + j).clone())
            })
            .collect();
        MatrixPolynomial {
            rows: n,
            cols: n,
            grade: self.grade,
            coeffs,
        }
    }

    /// Overwrite the n x n block at 1-based block position (s, t).
    pub fn set_block(&mut self, s: usize, t: usize, n: usize, value: &MatrixPolynomial) {
        assert!(value.grade <= self.grade && value.rows == n && value.cols == n);
        for (i_pow, c) in value.coeffs.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    self.coeffs[i_pow].set((s - 1) * n + i, (t - 1) * n + j, c.get(i, j).clone());
                }
            }
        }
    }
}

/// Newton divided-difference interpolation through distinct points.
fn newton_interpolate(points: &[Scalar], values: &[Scalar]) -> SPoly {
    assert_eq!(points.len(), values.len());
    let n = points.len();
    let mut table: Vec<Scalar> = values.to_vec();
    // table[i] holds the divided difference f[x_{i-k}..x_i] after pass k
    let mut divided = Vec::with_capacity(n);
    divided.push(table[0].clone());
    for k in 1..n {
        for i in (k..n).rev() {
            let num = &table[i] - &table[i - 1];
            let den = &points[i] - &points[i - k];
            table[i] = &num / &den;
        }
        divided.push(table[k].clone());
    }
    // Horner on the Newton form
    let mut acc = SPoly::zero();
    for i in (0..n).rev() {
        let linear = SPoly::from_coeffs(vec![-points[i].clone(), Scalar::one(points[i].backend())]);
        acc = acc.mul(&linear).add(&SPoly::constant(divided[i].clone()));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn backend() -> Backend {
        Backend::Rational
    }

    fn sc(v: i64) -> Scalar {
        Scalar::from_int(v, backend())
    }

    fn mat(rows: Vec<Vec<i64>>) -> Matrix {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(sc).collect())
                .collect(),
        )
        .unwrap()
    }

    fn poly(coeffs: Vec<Matrix>) -> MatrixPolynomial {
        let g = coeffs.len() - 1;
        let (r, c) = (coeffs[0].rows(), coeffs[0].cols());
        MatrixPolynomial::new(r, c, g, coeffs).unwrap()
    }

    /// Independent Horner-scheme evaluation used as an oracle.
    fn horner_eval(p: &MatrixPolynomial, x: &Scalar) -> Matrix {
        let mut acc = Matrix::zero(p.rows(), p.cols(), p.backend());
        for c in p.coeffs().iter().rev() {
            acc = acc.scale(x).add(c);
        }
        acc
    }

    /// Schoolbook double-loop convolution oracle.
    fn schoolbook_mul(p: &MatrixPolynomial, q: &MatrixPolynomial) -> MatrixPolynomial {
        let g = p.grade() + q.grade();
        let mut out = MatrixPolynomial::zero(p.rows(), q.cols(), g, p.backend());
        for i in 0..=p.grade() {
            for j in 0..=q.grade() {
                let prod = p.coeff(i).matmul(q.coeff(j));
                let cur = out.coeff(i + j).add(&prod);
                *out.coeff_mut(i + j) = cur;
            }
        }
        out
    }

    fn lcg(state: &mut u64) -> i64 {
        *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((*state >> 33) % 11) as i64 - 5
    }

    fn random_poly(rows: usize, cols: usize, grade: usize, state: &mut u64) -> MatrixPolynomial {
        let coeffs = (0..=grade)
            .map(|_| Matrix::from_fn(rows, cols, |_, _| sc(lcg(state))))
            .collect();
        MatrixPolynomial::new(rows, cols, grade, coeffs).unwrap()
    }

    #[test]
    fn eval_constant_and_lambda_identity() {
        let p = poly(vec![mat(vec![vec![4, 1], vec![0, 2]])]);
        assert_eq!(p.eval(&sc(17)).unwrap(), mat(vec![vec![4, 1], vec![0, 2]]));

        let lambda_i2 = poly(vec![
            Matrix::zero(2, 2, backend()),
            Matrix::identity(2, backend()),
        ]);
        assert_eq!(
            lambda_i2.eval(&sc(3)).unwrap(),
            mat(vec![vec![3, 0], vec![0, 3]])
        );
    }

    #[test]
    fn eval_matches_horner_oracle() {
        let mut state = 7u64;
        for _ in 0..20 {
            let p = random_poly(2, 2, 3, &mut state);
            let x = sc(-1);
            assert_eq!(p.eval(&x).unwrap(), horner_eval(&p, &x));
        }
    }

    #[test]
    fn rev_swaps_pencil_coefficients() {
        let p = poly(vec![mat(vec![vec![1]]), mat(vec![vec![2]])]);
        let r = p.rev(1).unwrap();
        assert_eq!(r.coeff(0), &mat(vec![vec![2]]));
        assert_eq!(r.coeff(1), &mat(vec![vec![1]]));
        assert_eq!(r.rev(1).unwrap(), p);
    }

    #[test]
    fn rev_rejects_small_grade() {
        let p = poly(vec![mat(vec![vec![1]]), mat(vec![vec![2]]), mat(vec![vec![3]])]);
        assert!(matches!(p.rev(1), Err(Error::GradeTooSmall { .. })));
    }

    #[test]
    fn star_moves_entries_across_the_diagonal() {
        let p = poly(vec![
            Matrix::zero(2, 2, backend()),
            mat(vec![vec![0, 1], vec![0, 0]]),
        ]);
        let t = p.star(StarFlavor::Transpose);
        assert_eq!(t.coeff(1), &mat(vec![vec![0, 0], vec![1, 0]]));
    }

    #[test]
    fn double_star_is_identity() {
        let mut state = 99u64;
        for _ in 0..10 {
            let p = random_poly(3, 2, 2, &mut state);
            assert_eq!(p.star(StarFlavor::Transpose).star(StarFlavor::Transpose), p);
        }
    }

    #[test]
    fn mul_matches_schoolbook_oracle() {
        let mut state = 1234u64;
        for _ in 0..15 {
            let p = random_poly(2, 2, 2, &mut state);
            let q = random_poly(2, 2, 3, &mut state);
            assert_eq!(p.mul(&q).unwrap(), schoolbook_mul(&p, &q));
        }
    }

    #[test]
    fn lambda_i_squared() {
        let li = poly(vec![
            Matrix::zero(2, 2, backend()),
            Matrix::identity(2, backend()),
        ]);
        let sq = li.mul_with_grade(&li, 2).unwrap();
        assert!(sq.coeff(0).is_zero());
        assert!(sq.coeff(1).is_zero());
        assert!(sq.coeff(2).is_identity());
    }

    #[test]
    fn kron_distributes_over_products() {
        let mut state = 5u64;
        for _ in 0..10 {
            let a = random_poly(2, 2, 1, &mut state);
            let b = random_poly(2, 2, 2, &mut state);
            let lhs = a.kron_identity(2).mul(&b.kron_identity(2)).unwrap();
            let rhs = a.mul(&b).unwrap().kron_identity(2);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn substitute_power_commutes_with_eval() {
        let mut state = 42u64;
        for ell in 1..=3usize {
            let p = random_poly(2, 2, 2, &mut state);
            let q = p.substitute_power(ell);
            let x = sc(2);
            assert_eq!(q.eval(&x).unwrap(), p.eval(&x.pow(ell)).unwrap());
        }
    }

    #[test]
    fn substitute_power_identity_case() {
        let mut state = 3u64;
        let p = random_poly(2, 3, 2, &mut state);
        assert_eq!(p.substitute_power(1), p);
    }

    #[test]
    fn float_backend_evaluates_but_refuses_exact_ops() {
        let mut p = MatrixPolynomial::zero(2, 2, 1, Backend::Float);
        p.coeff_mut(0).set(0, 0, Scalar::Float(0.5));
        p.coeff_mut(1).set(1, 1, Scalar::Float(2.0));
        let v = p.eval(&Scalar::Float(3.0)).unwrap();
        assert_eq!(v.get(0, 0), &Scalar::Float(0.5));
        assert_eq!(v.get(1, 1), &Scalar::Float(6.0));
        assert!(matches!(p.det_poly(), Err(Error::FloatBackendUnsupported)));
    }

    #[test]
    fn det_of_lambda_identity() {
        let li = poly(vec![
            Matrix::zero(2, 2, backend()),
            Matrix::identity(2, backend()),
        ]);
        let d = li.det_poly().unwrap();
        assert_eq!(d, SPoly::monomial(sc(1), 2));
    }

    #[test]
    fn det_of_unimodular_is_constant() {
        // [[1, x], [0, 1]]
        let u = poly(vec![
            mat(vec![vec![1, 0], vec![0, 1]]),
            mat(vec![vec![0, 1], vec![0, 0]]),
        ]);
        assert_eq!(u.det_poly().unwrap(), SPoly::one(backend()));
    }

    #[test]
    fn det_is_multiplicative() {
        let mut state = 77u64;
        for _ in 0..6 {
            let p = random_poly(2, 2, 1, &mut state);
            let q = random_poly(2, 2, 2, &mut state);
            let dp = p.det_poly().unwrap();
            let dq = q.det_poly().unwrap();
            let dpq = p.mul(&q).unwrap().det_poly().unwrap();
            assert_eq!(dpq, dp.mul(&dq));
        }
    }

    #[test]
    fn rev_respects_products() {
        let mut state = 11u64;
        for _ in 0..8 {
            let p = random_poly(2, 2, 2, &mut state);
            let q = random_poly(2, 2, 1, &mut state);
            let lhs = p.mul(&q).unwrap().rev(3).unwrap();
            let rhs = p.rev(2).unwrap().mul(&q.rev(1).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn star_reverses_products() {
        let mut state = 13u64;
        for _ in 0..8 {
            let p = random_poly(2, 3, 2, &mut state);
            let q = random_poly(3, 2, 1, &mut state);
            let lhs = p.mul(&q).unwrap().star(StarFlavor::Transpose);
            let rhs = q
                .star(StarFlavor::Transpose)
                .mul(&p.star(StarFlavor::Transpose))
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
