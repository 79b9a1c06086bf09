//! Block-partitioned matrix polynomials with provenance labels.
//!
//! A label describes each block coefficient slot `(power i, block s, t)` as
//! a formal expression in the coefficients of the source polynomial. The
//! companion-form predicates are decided from these labels, so assembly
//! operations maintain them constructively rather than reconstructing them
//! symbolically afterwards.

use std::fmt;

use crate::error::{Error, Result};
use crate::matpoly::{MatrixPolynomial, StarFlavor};
use crate::scalar::Scalar;

/// A formal generator appearing in a linear slot label.
#[derive(Debug, Clone, PartialEq)]
pub enum Atom {
    /// The identity matrix.
    Identity,
    /// Coefficient `P_j` of the source polynomial.
    Coef(usize),
    /// `P_j` with the star applied. Not a polynomial in the coefficients,
    /// so a slot containing it is not generalized-companion material.
    StarCoef(usize),
}

/// Label of one block coefficient slot.
#[derive(Debug, Clone, PartialEq)]
pub enum SlotLabel {
    Zero,
    /// A linear combination `sum alpha * atom` with distinct atoms.
    Lin(Vec<(Scalar, Atom)>),
    /// Anything beyond a linear combination; `in_ring` certifies membership
    /// in the polynomial ring generated by the coefficients.
    Expression { in_ring: bool },
}

impl SlotLabel {
    pub fn coef(alpha: Scalar, j: usize) -> Self {
        SlotLabel::Lin(vec![(alpha, Atom::Coef(j))])
    }

    pub fn identity(alpha: Scalar) -> Self {
        SlotLabel::Lin(vec![(alpha, Atom::Identity)])
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, SlotLabel::Zero)
    }

    pub fn scale(&self, alpha: &Scalar) -> SlotLabel {
        if alpha.is_zero() {
            return SlotLabel::Zero;
        }
        match self {
            SlotLabel::Zero => SlotLabel::Zero,
            SlotLabel::Lin(terms) => SlotLabel::Lin(
                terms
                    .iter()
                    .map(|(c, a)| (c * alpha, a.clone()))
                    .collect(),
            ),
            SlotLabel::Expression { in_ring } => SlotLabel::Expression { in_ring: *in_ring },
        }
    }

    pub fn add(&self, rhs: &SlotLabel) -> SlotLabel {
        match (self, rhs) {
            (SlotLabel::Zero, x) | (x, SlotLabel::Zero) => x.clone(),
            (SlotLabel::Lin(a), SlotLabel::Lin(b)) => {
                let mut terms = a.clone();
                for (c, atom) in b {
                    if let Some(slot) = terms.iter_mut().find(|(_, x)| x == atom) {
                        slot.0 = &slot.0 + c;
                    } else {
                        terms.push((c.clone(), atom.clone()));
                    }
                }
                terms.retain(|(c, _)| !c.is_zero());
                if terms.is_empty() {
                    SlotLabel::Zero
                } else {
                    SlotLabel::Lin(terms)
                }
            }
            (SlotLabel::Expression { in_ring: a }, SlotLabel::Expression { in_ring: b }) => {
                SlotLabel::Expression { in_ring: *a && *b }
            }
            (SlotLabel::Expression { in_ring }, SlotLabel::Lin(t))
            | (SlotLabel::Lin(t), SlotLabel::Expression { in_ring }) => SlotLabel::Expression {
                in_ring: *in_ring && t.iter().all(|(_, a)| !matches!(a, Atom::StarCoef(_))),
            },
        }
    }

    /// Star applied to the slot value: `(alpha P_j)^* = conj(alpha) P_j^*`.
    pub fn star(&self, flavor: StarFlavor) -> SlotLabel {
        match self {
            SlotLabel::Zero => SlotLabel::Zero,
            SlotLabel::Expression { in_ring } => SlotLabel::Expression { in_ring: *in_ring },
            SlotLabel::Lin(terms) => SlotLabel::Lin(
                terms
                    .iter()
                    .map(|(c, a)| {
                        let atom = match a {
                            Atom::Identity => Atom::Identity,
                            Atom::Coef(j) => Atom::StarCoef(*j),
                            Atom::StarCoef(j) => Atom::Coef(*j),
                        };
                        (flavor.conj(c), atom)
                    })
                    .collect(),
            ),
        }
    }

    /// Rewrite starred coefficients using a structure relation
    /// `P_j^* = sign(j) * P_{partner(j)}`.
    pub fn substitute_star(
        &self,
        mut partner: impl FnMut(usize) -> (usize, i64),
    ) -> SlotLabel {
        match self {
            SlotLabel::Lin(terms) => {
                let mut acc = SlotLabel::Zero;
                for (c, a) in terms {
                    let term = match a {
                        Atom::StarCoef(j) => {
                            let (p, sign) = partner(*j);
                            let coeff = if sign < 0 { -c.clone() } else { c.clone() };
                            SlotLabel::Lin(vec![(coeff, Atom::Coef(p))])
                        }
                        other => SlotLabel::Lin(vec![(c.clone(), other.clone())]),
                    };
                    acc = acc.add(&term);
                }
                acc
            }
            other => other.clone(),
        }
    }

    /// Every nonzero slot of a companion form is a scalar multiple of the
    /// identity or of a single coefficient.
    pub fn is_companion(&self) -> bool {
        match self {
            SlotLabel::Zero => true,
            SlotLabel::Lin(terms) => {
                terms.len() == 1 && matches!(terms[0].1, Atom::Identity | Atom::Coef(_))
            }
            SlotLabel::Expression { .. } => false,
        }
    }

    /// Generalized companion forms allow any polynomial in the coefficients.
    pub fn is_generalized_companion(&self) -> bool {
        match self {
            SlotLabel::Zero => true,
            SlotLabel::Lin(terms) => terms.iter().all(|(_, a)| !matches!(a, Atom::StarCoef(_))),
            SlotLabel::Expression { in_ring } => *in_ring,
        }
    }
}

impl fmt::Display for SlotLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlotLabel::Zero => f.write_str("0"),
            SlotLabel::Expression { in_ring: true } => f.write_str("expr"),
            SlotLabel::Expression { in_ring: false } => f.write_str("expr*"),
            SlotLabel::Lin(terms) => {
                let mut first = true;
                for (c, a) in terms {
                    if !first {
                        f.write_str(" + ")?;
                    }
                    first = false;
                    let atom = match a {
                        Atom::Identity => "I".to_string(),
                        Atom::Coef(j) => format!("P_{j}"),
                        Atom::StarCoef(j) => format!("P_{j}^*"),
                    };
                    if c.is_one() {
                        f.write_str(&atom)?;
                    } else {
                        write!(f, "({c})·{atom}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

/// Per-slot labels for a block grid: indexed by `(power, s, t)`, 1-based
/// block coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Labels {
    grade: usize,
    block_rows: usize,
    block_cols: usize,
    slots: Vec<SlotLabel>,
}

impl Labels {
    pub fn zeroed(grade: usize, block_rows: usize, block_cols: usize) -> Self {
        Labels {
            grade,
            block_rows,
            block_cols,
            slots: vec![SlotLabel::Zero; (grade + 1) * block_rows * block_cols],
        }
    }

    fn idx(&self, i: usize, s: usize, t: usize) -> usize {
        debug_assert!(i <= self.grade && (1..=self.block_rows).contains(&s) && (1..=self.block_cols).contains(&t));
        (i * self.block_rows + (s - 1)) * self.block_cols + (t - 1)
    }

    pub fn get(&self, i: usize, s: usize, t: usize) -> &SlotLabel {
        &self.slots[self.idx(i, s, t)]
    }

    pub fn set(&mut self, i: usize, s: usize, t: usize, label: SlotLabel) {
        let idx = self.idx(i, s, t);
        self.slots[idx] = label;
    }

    pub fn add_into(&mut self, i: usize, s: usize, t: usize, label: &SlotLabel) {
        let idx = self.idx(i, s, t);
        self.slots[idx] = self.slots[idx].add(label);
    }
}

/// A matrix polynomial with a declared square block grid and optional
/// provenance labels.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockPolynomial {
    base: MatrixPolynomial,
    block_rows: usize,
    block_cols: usize,
    block_size: usize,
    labels: Option<Labels>,
}

impl BlockPolynomial {
    pub fn new(
        base: MatrixPolynomial,
        block_rows: usize,
        block_cols: usize,
        block_size: usize,
        labels: Option<Labels>,
    ) -> Result<Self> {
        if base.rows() != block_rows * block_size || base.cols() != block_cols * block_size {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} base does not tile into {}x{} blocks of size {}",
                base.rows(),
                base.cols(),
                block_rows,
                block_cols,
                block_size
            )));
        }
        if let Some(l) = &labels {
            if l.grade != base.grade() || l.block_rows != block_rows || l.block_cols != block_cols {
                return Err(Error::ShapeMismatch("label grid mismatch".into()));
            }
        }
        Ok(BlockPolynomial {
            base,
            block_rows,
            block_cols,
            block_size,
            labels,
        })
    }

    pub fn base(&self) -> &MatrixPolynomial {
        &self.base
    }

    pub fn into_base(self) -> MatrixPolynomial {
        self.base
    }

    pub fn block_rows(&self) -> usize {
        self.block_rows
    }

    pub fn block_cols(&self) -> usize {
        self.block_cols
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn grade(&self) -> usize {
        self.base.grade()
    }

    pub fn labels(&self) -> Option<&Labels> {
        self.labels.as_ref()
    }

    pub fn block(&self, s: usize, t: usize) -> MatrixPolynomial {
        self.base.block(s, t, self.block_size)
    }

    pub fn block_is_zero(&self, s: usize, t: usize) -> bool {
        self.block(s, t).is_zero()
    }

    /// Number of nonzero blocks in the grid.
    pub fn nonzero_block_count(&self) -> usize {
        let mut count = 0;
        for s in 1..=self.block_rows {
            for t in 1..=self.block_cols {
                if !self.block_is_zero(s, t) {
                    count += 1;
                }
            }
        }
        count
    }

    /// Block star: the base is starred and labels move across the diagonal
    /// with their coefficients conjugated.
    pub fn star(&self, flavor: StarFlavor) -> BlockPolynomial {
        let base = self.base.star(flavor);
        let labels = self.labels.as_ref().map(|old| {
            let mut fresh = Labels::zeroed(self.grade(), self.block_cols, self.block_rows);
            for i in 0..=self.grade() {
                for s in 1..=self.block_rows {
                    for t in 1..=self.block_cols {
                        fresh.set(i, t, s, old.get(i, s, t).star(flavor));
                    }
                }
            }
            fresh
        });
        BlockPolynomial {
            base,
            block_rows: self.block_cols,
            block_cols: self.block_rows,
            block_size: self.block_size,
            labels,
        }
    }

    pub fn add(&self, rhs: &BlockPolynomial) -> Result<BlockPolynomial> {
        if (self.block_rows, self.block_cols, self.block_size)
            != (rhs.block_rows, rhs.block_cols, rhs.block_size)
        {
            return Err(Error::ShapeMismatch("block grids differ".into()));
        }
        let base = self.base.add(rhs.base())?;
        let labels = match (&self.labels, &rhs.labels) {
            (Some(a), Some(b)) => {
                let grade = base.grade();
                let mut fresh = Labels::zeroed(grade, self.block_rows, self.block_cols);
                for i in 0..=grade {
                    for s in 1..=self.block_rows {
                        for t in 1..=self.block_cols {
                            let x = if i <= self.grade() { a.get(i, s, t).clone() } else { SlotLabel::Zero };
                            let y = if i <= rhs.grade() { b.get(i, s, t).clone() } else { SlotLabel::Zero };
                            fresh.set(i, s, t, x.add(&y));
                        }
                    }
                }
                Some(fresh)
            }
            _ => None,
        };
        BlockPolynomial::new(base, self.block_rows, self.block_cols, self.block_size, labels)
    }

    pub fn scale(&self, alpha: &Scalar) -> BlockPolynomial {
        let base = self.base.scale(alpha);
        let labels = self.labels.as_ref().map(|old| {
            let mut fresh = Labels::zeroed(self.grade(), self.block_rows, self.block_cols);
            for i in 0..=self.grade() {
                for s in 1..=self.block_rows {
                    for t in 1..=self.block_cols {
                        fresh.set(i, s, t, old.get(i, s, t).scale(alpha));
                    }
                }
            }
            fresh
        });
        BlockPolynomial {
            base,
            block_rows: self.block_rows,
            block_cols: self.block_cols,
            block_size: self.block_size,
            labels,
        }
    }

    /// Rewrite starred coefficient atoms through a structure relation.
    pub fn substitute_star_labels(
        &self,
        partner: impl Fn(usize) -> (usize, i64),
    ) -> BlockPolynomial {
        let labels = self.labels.as_ref().map(|old| {
            let mut fresh = Labels::zeroed(self.grade(), self.block_rows, self.block_cols);
            for i in 0..=self.grade() {
                for s in 1..=self.block_rows {
                    for t in 1..=self.block_cols {
                        fresh.set(i, s, t, old.get(i, s, t).substitute_star(&partner));
                    }
                }
            }
            fresh
        });
        BlockPolynomial {
            base: self.base.clone(),
            block_rows: self.block_rows,
            block_cols: self.block_cols,
            block_size: self.block_size,
            labels,
        }
    }

    /// Check every linear label against the numeric blocks, given the source
    /// polynomial the coefficient atoms refer to.
    pub fn validate_labels(&self, source: &MatrixPolynomial, flavor: StarFlavor) -> Result<bool> {
        let labels = self.labels.as_ref().ok_or(Error::MissingProvenance)?;
        let n = self.block_size;
        let backend = self.base.backend();
        for i in 0..=self.base.grade() {
            for s in 1..=self.block_rows {
                for t in 1..=self.block_cols {
                    let numeric = self.block(s, t).coeff(i).clone();
                    match labels.get(i, s, t) {
                        SlotLabel::Zero => {
                            if !numeric.is_zero() {
                                return Ok(false);
                            }
                        }
                        SlotLabel::Expression { .. } => {}
                        SlotLabel::Lin(terms) => {
                            let mut expect = crate::matrix::Matrix::zero(n, n, backend);
                            for (c, a) in terms {
                                let part = match a {
                                    Atom::Identity => crate::matrix::Matrix::scalar_matrix(n, c.clone()),
                                    Atom::Coef(j) => source.coeff(*j).scale(c),
                                    Atom::StarCoef(j) => {
                                        let m = source.coeff(*j);
                                        let st = match flavor {
                                            StarFlavor::Transpose => m.transpose(),
                                            StarFlavor::ConjugateTranspose => m.transpose().conj(),
                                        };
                                        st.scale(c)
                                    }
                                };
                                expect = expect.add(&part);
                            }
                            if expect != numeric {
                                return Ok(false);
                            }
                        }
                    }
                }
            }
        }
        Ok(true)
    }

    /// Render the block layout with labels (or numeric entries for 1x1
    /// blocks without labels).
    pub fn pretty(&self) -> String {
        let mut cells = vec![vec![String::new(); self.block_cols]; self.block_rows];
        for s in 1..=self.block_rows {
            for t in 1..=self.block_cols {
                cells[s - 1][t - 1] = self.pretty_block(s, t);
            }
        }
        let widths: Vec<usize> = (0..self.block_cols)
            .map(|t| cells.iter().map(|r| r[t].len()).max().unwrap_or(1))
            .collect();
        let mut out = String::new();
        for row in &cells {
            out.push('[');
            for (t, cell) in row.iter().enumerate() {
                if t > 0 {
                    out.push_str(" | ");
                }
                out.push_str(&format!("{:^width$}", cell, width = widths[t]));
            }
            out.push_str("]\n");
        }
        out
    }

    fn pretty_block(&self, s: usize, t: usize) -> String {
        let mut parts: Vec<String> = Vec::new();
        for i in 0..=self.grade() {
            let body = match &self.labels {
                Some(l) => {
                    let label = l.get(i, s, t);
                    if label.is_zero() {
                        continue;
                    }
                    label.to_string()
                }
                None => {
                    let blk = self.block(s, t);
                    let c = blk.coeff(i);
                    if c.is_zero() {
                        continue;
                    }
                    if self.block_size == 1 {
                        c.get(0, 0).to_string()
                    } else {
                        "·".to_string()
                    }
                }
            };
            let prefix = match i {
                0 => String::new(),
                1 => "λ ".to_string(),
                _ => format!("λ^{i} "),
            };
            parts.push(format!("{prefix}{body}"));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}
