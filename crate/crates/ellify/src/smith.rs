//! Smith normal form over the univariate polynomial ring of an exact
//! scalar field.
//!
//! Elementary row and column operations only, so the diagonal that comes
//! out is unimodularly equivalent to the input. Pivots are chosen as
//! minimal-degree nonzero entries (ties broken by lowest row, then column)
//! and made monic after every round, which keeps coefficient growth in
//! check at the sizes this crate works at.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matpoly::MatrixPolynomial;
use crate::poly::SPoly;
use crate::scalar::Scalar;

/// Hard cap on `rows + cols`; beyond this exact elimination is not a desk
/// computation any more.
const SIZE_CAP: usize = 96;

/// Working grid of scalar polynomials.
struct Grid {
    rows: usize,
    cols: usize,
    data: Vec<SPoly>,
}

impl Grid {
    fn from_poly(p: &MatrixPolynomial) -> Self {
        let (rows, cols) = (p.rows(), p.cols());
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(p.entry(i, j));
            }
        }
        Grid { rows, cols, data }
    }

    fn at(&self, i: usize, j: usize) -> &SPoly {
        &self.data[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, v: SPoly) {
        self.data[i * self.cols + j] = v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] -= q * row[source], from column `from`
    fn row_axpy(&mut self, target: usize, source: usize, q: &SPoly, from: usize) {
        if q.is_zero() {
            return;
        }
        for j in from..self.cols {
            let delta = q.mul(self.at(source, j));
            let v = self.at(target, j).sub(&delta);
            self.set(target, j, v);
        }
    }

    fn col_axpy(&mut self, target: usize, source: usize, q: &SPoly, from: usize) {
        if q.is_zero() {
            return;
        }
        for i in from..self.rows {
            let delta = q.mul(self.at(i, source));
            let v = self.at(i, target).sub(&delta);
            self.set(i, target, v);
        }
    }

    /// Unit factor making the integer content of a list of entries one, or
    /// `None` when the entries are all zero or already primitive. Plain
    /// division lets numerators and denominators grow multiplicatively, so
    /// the elimination strips content aggressively; scaling a whole row or
    /// column by a nonzero constant is an elementary operation.
    fn content_unit<'a>(entries: impl Iterator<Item = &'a SPoly>) -> Option<BigRational> {
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        let mut saw = false;
        for e in entries {
            for c in e.coeffs() {
                for part in scalar_parts(c) {
                    if part.is_zero() {
                        continue;
                    }
                    saw = true;
                    den_lcm = den_lcm.lcm(part.denom());
                    num_gcd = num_gcd.gcd(part.numer());
                }
            }
        }
        if !saw || (num_gcd.is_one() && den_lcm.is_one()) {
            None
        } else {
            Some(BigRational::new(den_lcm, num_gcd))
        }
    }

    fn strip_row(&mut self, i: usize, from: usize) {
        let unit = Self::content_unit((from..self.cols).map(|j| self.at(i, j)));
        if let Some(unit) = unit {
            for j in from..self.cols {
                let scaled = self
                    .at(i, j)
                    .scale(&rational_unit(&unit, self.backend_probe(i, j)));
                self.set(i, j, scaled);
            }
        }
    }

    fn strip_col(&mut self, j: usize, from: usize) {
        let unit = Self::content_unit((from..self.rows).map(|i| self.at(i, j)));
        if let Some(unit) = unit {
            for i in from..self.rows {
                let scaled = self
                    .at(i, j)
                    .scale(&rational_unit(&unit, self.backend_probe(i, j)));
                self.set(i, j, scaled);
            }
        }
    }

    fn strip_row_content(&mut self, from: usize) {
        for i in from..self.rows {
            self.strip_row(i, from);
        }
    }

    /// Unimodular 2x2 row transform sending the pair (pivot entry p, entry
    /// e below it) to (gcd, 0): row_pivot <- u row_pivot + v row_i and
    /// row_i <- pp row_i - ee row_pivot, where u p + v e = g, pp = p/g,
    /// ee = e/g. The determinant of the transform is (u p + v e)/g = 1.
    fn row_pair(&mut self, pivot: usize, i: usize, u: &SPoly, v: &SPoly, ee: &SPoly, pp: &SPoly) {
        for j in pivot..self.cols {
            let a = self.at(pivot, j).clone();
            let b = self.at(i, j).clone();
            self.set(pivot, j, u.mul(&a).add(&v.mul(&b)));
            self.set(i, j, pp.mul(&b).sub(&ee.mul(&a)));
        }
    }

    fn col_pair(&mut self, pivot: usize, j: usize, u: &SPoly, v: &SPoly, ee: &SPoly, pp: &SPoly) {
        for i in pivot..self.rows {
            let a = self.at(i, pivot).clone();
            let b = self.at(i, j).clone();
            self.set(i, pivot, u.mul(&a).add(&v.mul(&b)));
            self.set(i, j, pp.mul(&b).sub(&ee.mul(&a)));
        }
    }

    /// Clear the pivot row and column. Exact multiples are eliminated
    /// directly; everything else goes through one gcd pair transform, which
    /// strictly drops the pivot degree, so the sweep terminates.
    fn clear_cross(&mut self, pivot: usize) -> Result<()> {
        loop {
            let mut dirty = false;
            for i in pivot + 1..self.rows {
                if self.at(i, pivot).is_zero() {
                    continue;
                }
                let p = self.at(pivot, pivot).clone();
                let e = self.at(i, pivot).clone();
                let (q, r) = e.div_rem(&p)?;
                if r.is_zero() {
                    self.row_axpy(i, pivot, &q, pivot);
                    self.strip_row(i, pivot);
                } else {
                    let (g, u, v) = p.ext_gcd(&e)?;
                    let pp = p.div_exact(&g)?;
                    let ee = e.div_exact(&g)?;
                    self.row_pair(pivot, i, &u, &v, &ee, &pp);
                    self.strip_row(pivot, pivot);
                    self.strip_row(i, pivot);
                    dirty = true;
                }
            }
            for j in pivot + 1..self.cols {
                if self.at(pivot, j).is_zero() {
                    continue;
                }
                let p = self.at(pivot, pivot).clone();
                let e = self.at(pivot, j).clone();
                let (q, r) = e.div_rem(&p)?;
                if r.is_zero() {
                    self.col_axpy(j, pivot, &q, pivot);
                    self.strip_col(j, pivot);
                } else {
                    let (g, u, v) = p.ext_gcd(&e)?;
                    let pp = p.div_exact(&g)?;
                    let ee = e.div_exact(&g)?;
                    self.col_pair(pivot, j, &u, &v, &ee, &pp);
                    self.strip_col(pivot, pivot);
                    self.strip_col(j, pivot);
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        Ok(())
    }

    fn backend_probe(&self, i: usize, j: usize) -> crate::scalar::Backend {
        self.at(i, j)
            .coeffs()
            .first()
            .map(Scalar::backend)
            .unwrap_or(crate::scalar::Backend::Rational)
    }
}

/// Rational components of a scalar (one for rationals, two for Gaussians).
fn scalar_parts(s: &Scalar) -> Vec<&BigRational> {
    match s {
        Scalar::Rational(r) => vec![r],
        Scalar::Gaussian(re, im) => vec![re, im],
        Scalar::Float(_) => Vec::new(),
    }
}

fn rational_unit(q: &BigRational, backend: crate::scalar::Backend) -> Scalar {
    match backend {
        crate::scalar::Backend::Gaussian => Scalar::Gaussian(q.clone(), BigRational::zero()),
        _ => Scalar::Rational(q.clone()),
    }
}

/// Cooperative cancellation hook; return `false` to abort.
pub type ProgressFn<'a> = &'a mut dyn FnMut() -> bool;

/// Monic invariant factors `d_1 | d_2 | ...` of a matrix polynomial over an
/// exact backend. Zero factors (rank deficiency) come last. The length is
/// `min(rows, cols)`.
pub fn smith_form(p: &MatrixPolynomial) -> Result<Vec<SPoly>> {
    smith_form_with(p, &mut || true)
}

pub fn smith_form_with(p: &MatrixPolynomial, progress: ProgressFn<'_>) -> Result<Vec<SPoly>> {
    if !p.backend().is_exact() {
        return Err(Error::FloatBackendUnsupported);
    }
    if p.rows() + p.cols() > SIZE_CAP {
        return Err(Error::SizeCapExceeded(p.rows() + p.cols(), SIZE_CAP));
    }
    let mut g = Grid::from_poly(p);
    let steps = g.rows.min(g.cols);
    let mut factors: Vec<SPoly> = Vec::with_capacity(steps);
    g.strip_row_content(0);

    for pivot in 0..steps {
        if !progress() {
            return Err(Error::Cancelled);
        }
        // locate a minimal-degree nonzero entry in the trailing block
        let mut best: Option<(usize, usize, usize)> = None;
        for i in pivot..g.rows {
            for j in pivot..g.cols {
                if let Some(deg) = g.at(i, j).degree() {
                    let better = match best {
                        None => true,
                        Some((bd, _, _)) => deg < bd,
                    };
                    if better {
                        best = Some((deg, i, j));
                        if deg == 0 {
                            break;
                        }
                    }
                }
            }
            if matches!(best, Some((0, _, _))) {
                break;
            }
        }
        let Some((_, bi, bj)) = best else {
            // trailing block is identically zero
            for _ in pivot..steps {
                factors.push(SPoly::zero());
            }
            return Ok(factors);
        };
        g.swap_rows(pivot, bi);
        g.swap_cols(pivot, bj);

        g.clear_cross(pivot)?;

        // divisibility fix-up: fold any non-multiple into the pivot's row
        loop {
            let mut offender = None;
            'scan: for i in pivot + 1..g.rows {
                for j in pivot + 1..g.cols {
                    if !g.at(pivot, pivot).divides(g.at(i, j)) {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            let Some(i) = offender else { break };
            // add the offending row to the pivot row and re-clear
            for j in pivot..g.cols {
                let v = g.at(pivot, j).add(g.at(i, j));
                g.set(pivot, j, v);
            }
            g.clear_cross(pivot)?;
        }

        let monic = g.at(pivot, pivot).monic();
        g.set(pivot, pivot, monic.clone());
        factors.push(monic);
        g.strip_row_content(pivot + 1);
    }
    Ok(factors)
}

/// Split invariant factors into (number of unit factors, nonconstant
/// factors, number of zero factors).
pub fn classify_factors(factors: &[SPoly]) -> (usize, Vec<SPoly>, usize) {
    let units = factors.iter().filter(|f| f.is_nonzero_constant()).count();
    let zeros = factors.iter().filter(|f| f.is_zero()).count();
    let nonconstant: Vec<SPoly> = factors
        .iter()
        .filter(|f| !f.is_constant())
        .cloned()
        .collect();
    (units, nonconstant, zeros)
}
