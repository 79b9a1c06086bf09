//! Desk-scale exhaustive search showing that no structured companion
//! quadratification of a structured quartic exists over a finite scalar
//! grid.
//!
//! This is an empirical check, not a proof: the underlying statement
//! quantifies over all field elements, while the search runs over the
//! declared grid. The template identity `det L = alpha * p` is tested as an
//! exact polynomial identity in the free coefficient symbols of the
//! structured class, so a pass/fail verdict for a given template is exact;
//! only the slot scalars are restricted to the grid.
//!
//! Scalar quartic, quadratic 2x2 candidate: each of the twelve coefficient
//! slots is zero, a grid constant, or a grid multiple of one coefficient
//! symbol. Structure constraints derive the dependent slots. With the
//! product extension, the two middle diagonal slots may also carry a sum
//! `constant + coefficient + product of two coefficients`, which is the
//! shape of the known generalized witness.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matpoly::StarFlavor;
use crate::structure::StructureKind;

/// Small exact fraction. Grid entries and everything derived from them stay
/// tiny, so machine words with an i128 intermediate are plenty; overflow
/// panics rather than wrapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Frac {
    num: i64,
    den: i64,
}

impl Frac {
    pub const ZERO: Frac = Frac { num: 0, den: 1 };
    pub const ONE: Frac = Frac { num: 1, den: 1 };

    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd_u64(num.unsigned_abs(), den.unsigned_abs()) as i64;
        let sign = if den < 0 { -1 } else { 1 };
        Frac {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    pub fn int(v: i64) -> Self {
        Frac { num: v, den: 1 }
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    fn from_i128(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd_u128(num.unsigned_abs(), den.unsigned_abs()) as i128;
        let sign = if den < 0 { -1 } else { 1 };
        let (n, d) = (sign * num / g, sign * den / g);
        Frac {
            num: i64::try_from(n).expect("fraction overflow"),
            den: i64::try_from(d).expect("fraction overflow"),
        }
    }

    pub fn add(self, rhs: Frac) -> Frac {
        Frac::from_i128(
            self.num as i128 * rhs.den as i128 + rhs.num as i128 * self.den as i128,
            self.den as i128 * rhs.den as i128,
        )
    }

    pub fn sub(self, rhs: Frac) -> Frac {
        self.add(rhs.neg())
    }

    pub fn neg(self) -> Frac {
        Frac {
            num: -self.num,
            den: self.den,
        }
    }

    pub fn mul(self, rhs: Frac) -> Frac {
        Frac::from_i128(
            self.num as i128 * rhs.num as i128,
            self.den as i128 * rhs.den as i128,
        )
    }

    pub fn div(self, rhs: Frac) -> Frac {
        assert!(rhs.num != 0, "division by zero");
        Frac::from_i128(
            self.num as i128 * rhs.den as i128,
            self.den as i128 * rhs.num as i128,
        )
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Frac {
    type Err = Error;

    fn from_str(s: &str) -> Result<Frac> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad grid value `{s}`"));
        if let Some((n, d)) = s.split_once('/') {
            let num: i64 = n.trim().parse().map_err(|_| bad())?;
            let den: i64 = d.trim().parse().map_err(|_| bad())?;
            if den == 0 {
                return Err(Error::DivisionByZero);
            }
            Ok(Frac::new(num, den))
        } else {
            Ok(Frac::int(s.parse().map_err(|_| bad())?))
        }
    }
}

/// Exponent vector over the five coefficient symbols.
type Expo = [u8; 5];

/// Sparse multivariate polynomial over the rationals; terms sorted by
/// exponent vector.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FormalPoly {
    terms: Vec<(Expo, Frac)>,
}

impl FormalPoly {
    pub fn zero() -> Self {
        FormalPoly::default()
    }

    pub fn constant(c: Frac) -> Self {
        if c.is_zero() {
            return FormalPoly::zero();
        }
        FormalPoly {
            terms: vec![([0; 5], c)],
        }
    }

    pub fn symbol(j: usize) -> Self {
        let mut e = [0u8; 5];
        e[j] = 1;
        FormalPoly {
            terms: vec![(e, Frac::ONE)],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn push_term(acc: &mut Vec<(Expo, Frac)>, e: Expo, c: Frac) {
        if c.is_zero() {
            return;
        }
        match acc.binary_search_by(|(ae, _)| ae.cmp(&e)) {
            Ok(idx) => {
                acc[idx].1 = acc[idx].1.add(c);
                if acc[idx].1.is_zero() {
                    acc.remove(idx);
                }
            }
            Err(idx) => acc.insert(idx, (e, c)),
        }
    }

    pub fn add(&self, rhs: &FormalPoly) -> FormalPoly {
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            Self::push_term(&mut terms, *e, *c);
        }
        FormalPoly { terms }
    }

    pub fn sub(&self, rhs: &FormalPoly) -> FormalPoly {
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            Self::push_term(&mut terms, *e, c.neg());
        }
        FormalPoly { terms }
    }

    pub fn neg(&self) -> FormalPoly {
        FormalPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect(),
        }
    }

    pub fn scale(&self, s: Frac) -> FormalPoly {
        if s.is_zero() {
            return FormalPoly::zero();
        }
        FormalPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, c.mul(s))).collect(),
        }
    }

    pub fn mul(&self, rhs: &FormalPoly) -> FormalPoly {
        let mut terms: Vec<(Expo, Frac)> = Vec::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = *ea;
                for (x, y) in e.iter_mut().zip(eb.iter()) {
                    *x += y;
                }
                Self::push_term(&mut terms, e, ca.mul(*cb));
            }
        }
        FormalPoly { terms }
    }

    /// Exact division by a single-term polynomial; `None` if any term is
    /// not divisible.
    pub fn div_by_monomial(&self, mono: &FormalPoly) -> Option<FormalPoly> {
        if mono.terms.len() != 1 {
            return None;
        }
        let (me, mc) = &mono.terms[0];
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let mut out = [0u8; 5];
            for i in 0..5 {
                if e[i] < me[i] {
                    return None;
                }
                out[i] = e[i] - me[i];
            }
            terms.push((out, c.div(*mc)));
        }
        terms.sort_by(|(a, _), (b, _)| a.cmp(b));
        Some(FormalPoly { terms })
    }

    fn terms(&self) -> &[(Expo, Frac)] {
        &self.terms
    }
}

impl fmt::Display for FormalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (j, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => write!(f, "*p{j}")?,
                    _ => write!(f, "*p{j}^{x}")?,
                }
            }
        }
        Ok(())
    }
}

/// One coefficient slot of the candidate: an optional constant, an optional
/// coefficient multiple, and (with the extension) an optional product of
/// two coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slot {
    pub con: Option<Frac>,
    pub coef: Option<(Frac, usize)>,
    pub prod: Option<(Frac, usize, usize)>,
}

impl Slot {
    pub fn zero() -> Self {
        Slot {
            con: None,
            coef: None,
            prod: None,
        }
    }

    pub fn constant(beta: Frac) -> Self {
        Slot {
            con: Some(beta),
            coef: None,
            prod: None,
        }
    }

    pub fn coefficient(beta: Frac, j: usize) -> Self {
        Slot {
            con: None,
            coef: Some((beta, j)),
            prod: None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.con.is_none() && self.coef.is_none() && self.prod.is_none()
    }

    pub fn is_atomic(&self) -> bool {
        let parts = usize::from(self.con.is_some())
            + usize::from(self.coef.is_some())
            + usize::from(self.prod.is_some());
        parts <= 1 && self.prod.is_none()
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        if let Some(c) = &self.con {
            parts.push(format!("{c}"));
        }
        if let Some((b, j)) = &self.coef {
            parts.push(format!("({b})p{j}"));
        }
        if let Some((d, h, m)) = &self.prod {
            parts.push(format!("({d})p{h}p{m}"));
        }
        f.write_str(&parts.join(" + "))
    }
}

/// Images of the coefficient symbols and their stars inside the free
/// polynomial ring of the structured class.
pub struct Images {
    /// value of `p_j`
    plain: [FormalPoly; 5],
    /// value of `p_j^*`
    starred: [FormalPoly; 5],
}

fn images(kind: StructureKind, flavor: StarFlavor) -> Result<Images> {
    let free: [FormalPoly; 5] = std::array::from_fn(FormalPoly::symbol);
    let z = FormalPoly::zero;
    match flavor {
        StarFlavor::Transpose => {
            // the star is the identity on scalars, so the structure pins the
            // symbols themselves
            let plain: [FormalPoly; 5] = match kind {
                StructureKind::Symmetric => free.clone(),
                StructureKind::Palindromic => [
                    FormalPoly::symbol(0),
                    FormalPoly::symbol(1),
                    FormalPoly::symbol(2),
                    FormalPoly::symbol(1),
                    FormalPoly::symbol(0),
                ],
                StructureKind::AntiPalindromic => [
                    FormalPoly::symbol(0),
                    FormalPoly::symbol(1),
                    z(),
                    FormalPoly::symbol(1).neg(),
                    FormalPoly::symbol(0).neg(),
                ],
                StructureKind::SkewSymmetric | StructureKind::Even | StructureKind::Odd => {
                    return Err(Error::Parse(format!(
                        "the scalar {}-transpose class is degenerate; use the conjugate flavor",
                        kind.cli_name()
                    )));
                }
            };
            let starred = plain.clone();
            Ok(Images { plain, starred })
        }
        StarFlavor::ConjugateTranspose => {
            let starred: [FormalPoly; 5] = match kind {
                StructureKind::Symmetric => free.clone(),
                StructureKind::SkewSymmetric => std::array::from_fn(|j| free[j].neg()),
                StructureKind::Even => std::array::from_fn(|j| {
                    if j % 2 == 0 {
                        free[j].clone()
                    } else {
                        free[j].neg()
                    }
                }),
                StructureKind::Odd => std::array::from_fn(|j| {
                    if j % 2 == 0 {
                        free[j].neg()
                    } else {
                        free[j].clone()
                    }
                }),
                StructureKind::Palindromic => std::array::from_fn(|j| free[4 - j].clone()),
                StructureKind::AntiPalindromic => std::array::from_fn(|j| free[4 - j].neg()),
            };
            Ok(Images {
                plain: free,
                starred,
            })
        }
    }
}

impl Images {
    fn slot_value(&self, slot: &Slot, starred: bool) -> FormalPoly {
        let pick = |j: usize| -> &FormalPoly {
            if starred {
                &self.starred[j]
            } else {
                &self.plain[j]
            }
        };
        let mut acc = FormalPoly::zero();
        if let Some(c) = &slot.con {
            acc = acc.add(&FormalPoly::constant(*c));
        }
        if let Some((b, j)) = &slot.coef {
            acc = acc.add(&pick(*j).scale(*b));
        }
        if let Some((dd, h, m)) = &slot.prod {
            acc = acc.add(&pick(*h).mul(pick(*m)).scale(*dd));
        }
        acc
    }
}

/// How the dependent entries derive from the independent ones:
/// `l21[i] = factor(i) * star(u[src(i)])` and the analogous diagonal rule.
#[derive(Clone, Copy)]
struct Scheme {
    /// overall sign of the class (minus for skew/odd/anti-palindromic)
    eps: i64,
    /// sign twist per power (the alternating classes flip odd powers)
    pow_sign: [i64; 3],
    /// reversal pairing for the palindromic classes
    reversed: bool,
}

fn scheme(kind: StructureKind) -> Scheme {
    match kind {
        StructureKind::Symmetric => Scheme { eps: 1, pow_sign: [1, 1, 1], reversed: false },
        StructureKind::SkewSymmetric => Scheme { eps: -1, pow_sign: [1, 1, 1], reversed: false },
        StructureKind::Even => Scheme { eps: 1, pow_sign: [1, -1, 1], reversed: false },
        StructureKind::Odd => Scheme { eps: -1, pow_sign: [1, -1, 1], reversed: false },
        StructureKind::Palindromic => Scheme { eps: 1, pow_sign: [1, 1, 1], reversed: true },
        StructureKind::AntiPalindromic => Scheme { eps: -1, pow_sign: [1, 1, 1], reversed: true },
    }
}

impl Scheme {
    fn src(&self, i: usize) -> usize {
        if self.reversed {
            2 - i
        } else {
            i
        }
    }

    fn factor(&self, i: usize) -> i64 {
        self.eps * self.pow_sign[i]
    }
}

/// A complete candidate: independent slots as symbols; everything else is
/// derived through the scheme when values are computed.
#[derive(Debug, Clone)]
pub struct CompanionTemplate {
    pub kind: StructureKind,
    pub flavor: StarFlavor,
    /// diagonal (1,1) slots; for the palindromic classes index 2 is derived
    pub x: [Slot; 3],
    /// diagonal (2,2) slots; same convention
    pub y: [Slot; 3],
    /// off-diagonal (1,2) slots, always independent
    pub u: [Slot; 3],
}

impl CompanionTemplate {
    /// The twelve formal slot values (l11, l12, l21, l22 by power).
    fn values(&self, img: &Images) -> [[FormalPoly; 3]; 4] {
        let sch = scheme(self.kind);
        let sgn = |f: i64, v: FormalPoly| if f < 0 { v.neg() } else { v };
        let diag_val = |slots: &[Slot; 3], i: usize| -> FormalPoly {
            if sch.reversed && i == 2 {
                sgn(sch.factor(0), img.slot_value(&slots[0], true))
            } else {
                img.slot_value(&slots[i], false)
            }
        };
        let l11: [FormalPoly; 3] = std::array::from_fn(|i| diag_val(&self.x, i));
        let l22: [FormalPoly; 3] = std::array::from_fn(|i| diag_val(&self.y, i));
        let l12: [FormalPoly; 3] = std::array::from_fn(|i| img.slot_value(&self.u[i], false));
        let l21: [FormalPoly; 3] = std::array::from_fn(|i| {
            sgn(sch.factor(i), img.slot_value(&self.u[sch.src(i)], true))
        });
        [l11, l12, l21, l22]
    }

    pub fn render(&self) -> String {
        format!(
            "l11 = [{} | {} | {}], l12 = [{} | {} | {}], l22 = [{} | {} | {}]",
            self.x[0], self.x[1], self.x[2],
            self.u[0], self.u[1], self.u[2],
            self.y[0], self.y[1], self.y[2],
        )
    }
}

/// Candidate scale factors: the grid closed under pairwise products.
pub fn alpha_candidates(grid: &[Frac]) -> Vec<Frac> {
    let mut out: Vec<Frac> = Vec::new();
    for a in grid {
        for b in grid {
            let v = a.mul(*b);
            if !v.is_zero() && !out.contains(&v) {
                out.push(v);
            }
        }
    }
    out
}

/// Exact identity check: does `det L = alpha * p` hold formally for some
/// alpha in the candidate set? Returns the first such alpha.
pub fn check_template(t: &CompanionTemplate, alphas: &[Frac]) -> Result<Option<Frac>> {
    let img = images(t.kind, t.flavor)?;
    Ok(check_template_with(t, alphas, &img))
}

fn check_template_with(t: &CompanionTemplate, alphas: &[Frac], img: &Images) -> Option<Frac> {
    let [l11, l12, l21, l22] = t.values(img);
    let coeffs: [FormalPoly; 5] = std::array::from_fn(|m| {
        let mut acc = FormalPoly::zero();
        for i in 0..=2usize {
            if m < i || m - i > 2 {
                continue;
            }
            let j = m - i;
            acc = acc.add(&l11[i].mul(&l22[j])).sub(&l12[i].mul(&l21[j]));
        }
        acc
    });
    'alpha: for alpha in alphas {
        for m in 0..5 {
            if coeffs[m] != img.plain[m].scale(*alpha) {
                continue 'alpha;
            }
        }
        return Some(*alpha);
    }
    None
}

/// Per-slot symbol alphabets with precomputed plain and starred values; the
/// diagonal self-constraints of the class are already applied.
struct Alphabets {
    offdiag: [Vec<Slot>; 3],
    diag: [Vec<Slot>; 3],
    off_val: [Vec<FormalPoly>; 3],
    off_star: [Vec<FormalPoly>; 3],
    diag_val: [Vec<FormalPoly>; 3],
}

fn atomic_symbols(grid: &[Frac]) -> Vec<Slot> {
    let mut out = vec![Slot::zero()];
    for b in grid {
        out.push(Slot::constant(*b));
    }
    for j in 0..5 {
        for b in grid {
            out.push(Slot::coefficient(*b, j));
        }
    }
    out
}

fn composite_symbols(grid: &[Frac]) -> Vec<Slot> {
    let mut cons: Vec<Option<Frac>> = vec![None];
    cons.extend(grid.iter().copied().map(Some));
    let mut coefs: Vec<Option<(Frac, usize)>> = vec![None];
    for j in 0..5 {
        for b in grid {
            coefs.push(Some((*b, j)));
        }
    }
    let mut prods: Vec<Option<(Frac, usize, usize)>> = vec![None];
    for h in 0..5 {
        for m in h..5 {
            for b in grid {
                prods.push(Some((*b, h, m)));
            }
        }
    }
    let mut out = Vec::new();
    for c in &cons {
        for f in &coefs {
            for p in &prods {
                out.push(Slot {
                    con: *c,
                    coef: *f,
                    prod: *p,
                });
            }
        }
    }
    out
}

/// `star(slot value)` must equal `factor * value` for self-paired diagonal
/// powers.
fn diag_self_ok(slot: &Slot, img: &Images, factor: i64) -> bool {
    let lhs = img.slot_value(slot, true);
    let rhs = {
        let v = img.slot_value(slot, false);
        if factor < 0 {
            v.neg()
        } else {
            v
        }
    };
    lhs == rhs
}

fn build_alphabets(
    kind: StructureKind,
    grid: &[Frac],
    allow_products: bool,
    img: &Images,
) -> Alphabets {
    let sch = scheme(kind);
    let atoms = atomic_symbols(grid);
    let offdiag: [Vec<Slot>; 3] = std::array::from_fn(|_| atoms.clone());
    let diag: [Vec<Slot>; 3] = std::array::from_fn(|i| {
        let pool = if allow_products && i == 1 {
            composite_symbols(grid)
        } else {
            atoms.clone()
        };
        if sch.reversed {
            match i {
                1 => pool
                    .into_iter()
                    .filter(|s| diag_self_ok(s, img, sch.factor(1)))
                    .collect(),
                2 => Vec::new(), // derived from power zero
                _ => pool,
            }
        } else {
            pool.into_iter()
                .filter(|s| diag_self_ok(s, img, sch.factor(i)))
                .collect()
        }
    });
    let off_val =
        std::array::from_fn(|i| offdiag[i].iter().map(|s| img.slot_value(s, false)).collect());
    let off_star =
        std::array::from_fn(|i| offdiag[i].iter().map(|s| img.slot_value(s, true)).collect());
    let diag_val =
        std::array::from_fn(|i| diag[i].iter().map(|s| img.slot_value(s, false)).collect());
    Alphabets {
        offdiag,
        diag,
        off_val,
        off_star,
        diag_val,
    }
}

/// Options controlling a refutation run.
#[derive(Debug, Clone)]
pub struct RefuteOptions {
    pub kind: StructureKind,
    pub flavor: StarFlavor,
    pub grid: Vec<Frac>,
    pub allow_products: bool,
    /// Permutes the per-slot enumeration order; counts must not change.
    pub permute_seed: Option<u64>,
}

impl RefuteOptions {
    pub fn new(kind: StructureKind, flavor: StarFlavor, grid: Vec<Frac>) -> Self {
        RefuteOptions {
            kind,
            flavor,
            grid,
            allow_products: false,
            permute_seed: None,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RefuteReport {
    /// Size of the full template space the search is exhaustive over.
    pub templates_total: u128,
    /// Partial assignments examined by the staged search.
    pub nodes_explored: u64,
    /// Complete candidates run through the full identity check.
    pub full_checks: u64,
    pub satisfying_count: u64,
    /// Rendered satisfying templates (first few).
    pub witnesses: Vec<String>,
}

impl RefuteReport {
    fn absorb(&mut self, other: RefuteReport) {
        self.nodes_explored += other.nodes_explored;
        self.full_checks += other.full_checks;
        self.satisfying_count += other.satisfying_count;
        for w in other.witnesses {
            if self.witnesses.len() < 8 {
                self.witnesses.push(w);
            }
        }
    }
}

fn shuffle<T>(items: &mut [T], seed: u64) {
    let mut state = seed | 1;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for i in (1..items.len()).rev() {
        let j = (next() % (i as u64 + 1)) as usize;
        items.swap(i, j);
    }
}

/// Decompose a formal value into (constant, single linear term, single
/// quadratic term); `None` when it does not have slot shape.
fn split_value(v: &FormalPoly) -> Option<(Frac, Option<(Expo, Frac)>, Option<(Expo, Frac)>)> {
    let mut con = Frac::ZERO;
    let mut lin: Option<(Expo, Frac)> = None;
    let mut quad: Option<(Expo, Frac)> = None;
    for (e, c) in v.terms() {
        let deg: u8 = e.iter().sum();
        match deg {
            0 => con = *c,
            1 => {
                if lin.is_some() {
                    return None;
                }
                lin = Some((*e, *c));
            }
            2 => {
                if quad.is_some() {
                    return None;
                }
                quad = Some((*e, *c));
            }
            _ => return None,
        }
    }
    Some((con, lin, quad))
}

/// All alphabet symbols whose (possibly starred) value equals `v`.
fn preimages(
    v: &FormalPoly,
    starred: bool,
    img: &Images,
    grid: &[Frac],
    composite: bool,
) -> Vec<Slot> {
    if v.is_zero() {
        return vec![Slot::zero()];
    }
    let Some((con, lin, quad)) = split_value(v) else {
        return Vec::new();
    };
    if !composite {
        let parts =
            usize::from(!con.is_zero()) + usize::from(lin.is_some()) + usize::from(quad.is_some());
        if parts > 1 || quad.is_some() {
            return Vec::new();
        }
    }
    let in_grid = |b: &Frac| grid.contains(b);
    let con_part: Option<Frac> = if con.is_zero() {
        None
    } else if in_grid(&con) {
        Some(con)
    } else {
        return Vec::new();
    };
    let pick = |j: usize| -> &FormalPoly {
        if starred {
            &img.starred[j]
        } else {
            &img.plain[j]
        }
    };
    let coef_parts: Vec<Option<(Frac, usize)>> = match &lin {
        None => vec![None],
        Some((e, c)) => {
            let mut list = Vec::new();
            for j in 0..5usize {
                let im = pick(j);
                if im.terms().len() != 1 {
                    continue;
                }
                let (ie, ic) = &im.terms()[0];
                if ie == e {
                    let beta = c.div(*ic);
                    if in_grid(&beta) {
                        list.push(Some((beta, j)));
                    }
                }
            }
            if list.is_empty() {
                return Vec::new();
            }
            list
        }
    };
    let prod_parts: Vec<Option<(Frac, usize, usize)>> = match &quad {
        None => vec![None],
        Some((e, c)) => {
            let mut list = Vec::new();
            for h in 0..5usize {
                for m in h..5usize {
                    let im = pick(h).mul(pick(m));
                    if im.terms().len() != 1 {
                        continue;
                    }
                    let (ie, ic) = &im.terms()[0];
                    if ie == e {
                        let delta = c.div(*ic);
                        if in_grid(&delta) {
                            list.push(Some((delta, h, m)));
                        }
                    }
                }
            }
            if list.is_empty() {
                return Vec::new();
            }
            list
        }
    };
    let mut out = Vec::new();
    for cf in &coef_parts {
        for pr in &prod_parts {
            out.push(Slot {
                con: con_part,
                coef: *cf,
                prod: *pr,
            });
        }
    }
    out
}

/// Exhaustive refutation over the declared grid, staged on the determinant
/// equations. Stage results are pruned only by equations fully determined
/// at that stage, so the search covers the whole template space.
pub fn refute(opts: &RefuteOptions) -> Result<RefuteReport> {
    if opts.grid.is_empty() || opts.grid.iter().any(|g| g.is_zero()) {
        return Err(Error::EmptyGrid);
    }
    let img = images(opts.kind, opts.flavor)?;
    let mut ab = build_alphabets(opts.kind, &opts.grid, opts.allow_products, &img);
    if let Some(seed) = opts.permute_seed {
        for i in 0..3usize {
            let mut order: Vec<usize> = (0..ab.offdiag[i].len()).collect();
            shuffle(&mut order, seed.wrapping_add(i as u64 * 0x9e37));
            ab.offdiag[i] = order.iter().map(|&k| ab.offdiag[i][k]).collect();
            ab.off_val[i] = order.iter().map(|&k| ab.off_val[i][k].clone()).collect();
            ab.off_star[i] = order.iter().map(|&k| ab.off_star[i][k].clone()).collect();
            let mut order: Vec<usize> = (0..ab.diag[i].len()).collect();
            shuffle(&mut order, seed.wrapping_add(0x51 + i as u64 * 0x9e37));
            ab.diag[i] = order.iter().map(|&k| ab.diag[i][k]).collect();
            ab.diag_val[i] = order.iter().map(|&k| ab.diag_val[i][k].clone()).collect();
        }
    }
    let alphas = alpha_candidates(&opts.grid);
    let sch = scheme(opts.kind);

    // closed-form size of the template space (independent slots only)
    let mut templates_total: u128 = 1;
    for i in 0..3 {
        templates_total *= ab.offdiag[i].len() as u128;
        if !(sch.reversed && i == 2) {
            templates_total =
                templates_total * (ab.diag[i].len() as u128) * (ab.diag[i].len() as u128);
        }
    }

    let mut report = RefuteReport {
        templates_total,
        ..RefuteReport::default()
    };
    for alpha in &alphas {
        let partial = if sch.reversed {
            refute_reversed_for_alpha(*alpha, &img, &ab, opts, &alphas)
        } else {
            refute_straight_for_alpha(*alpha, &img, &ab, opts, &alphas)
        };
        report.absorb(partial);
    }
    Ok(report)
}

/// Solutions of one corner equation `x y - u * l21 = alpha_p` over the
/// stage's slot alphabets (powers 0 or 2), for the schemes where
/// `l21[i] = factor * star(u_i)`.
fn corner_solutions(
    alpha_p: &FormalPoly,
    ab: &Alphabets,
    stage: usize,
    factor: i64,
) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for (xi, xv) in ab.diag_val[stage].iter().enumerate() {
        for (yi, yv) in ab.diag_val[stage].iter().enumerate() {
            let xy = xv.mul(yv);
            for (ui, (uv, us)) in ab.off_val[stage]
                .iter()
                .zip(ab.off_star[stage].iter())
                .enumerate()
            {
                let mut prod = uv.mul(us);
                if factor < 0 {
                    prod = prod.neg();
                }
                if xy.sub(&prod) == *alpha_p {
                    out.push((xi, yi, ui));
                }
            }
        }
    }
    out
}

fn refute_straight_for_alpha(
    alpha: Frac,
    img: &Images,
    ab: &Alphabets,
    opts: &RefuteOptions,
    alphas: &[Frac],
) -> RefuteReport {
    let sch = scheme(opts.kind);
    let p_target: [FormalPoly; 5] = std::array::from_fn(|m| img.plain[m].scale(alpha));
    let s0 = corner_solutions(&p_target[0], ab, 0, sch.factor(0));
    let s4 = corner_solutions(&p_target[4], ab, 2, sch.factor(2));
    let mut report = RefuteReport::default();
    report.nodes_explored += (ab.diag[0].len() * ab.diag[0].len() * ab.offdiag[0].len()) as u64;
    report.nodes_explored += (ab.diag[2].len() * ab.diag[2].len() * ab.offdiag[2].len()) as u64;
    for &(x0, y0, u0) in &s0 {
        for &(x2, y2, u2) in &s4 {
            middle_sweep(
                x0, y0, u0, x2, y2, u2, img, ab, opts, &mut report, alphas, &p_target,
            );
        }
    }
    report
}

fn refute_reversed_for_alpha(
    alpha: Frac,
    img: &Images,
    ab: &Alphabets,
    opts: &RefuteOptions,
    alphas: &[Frac],
) -> RefuteReport {
    let sch = scheme(opts.kind);
    let p_target: [FormalPoly; 5] = std::array::from_fn(|m| img.plain[m].scale(alpha));
    let mut report = RefuteReport::default();
    // stage 0: (x0, y0, u0) with u2 solved from the constant equation
    // x0 y0 - u0 * (factor * star(u2)) = alpha p0
    let mut s0: Vec<(usize, usize, usize, Slot)> = Vec::new();
    for (x0, x0v) in ab.diag_val[0].iter().enumerate() {
        for (y0, y0v) in ab.diag_val[0].iter().enumerate() {
            let rhs_base = x0v.mul(y0v).sub(&p_target[0]);
            for (u0, u0v) in ab.off_val[0].iter().enumerate() {
                report.nodes_explored += 1;
                if u0v.is_zero() {
                    if rhs_base.is_zero() {
                        for u2 in &ab.offdiag[2] {
                            s0.push((x0, y0, u0, *u2));
                        }
                    }
                    continue;
                }
                let scaled = if sch.factor(0) < 0 {
                    rhs_base.neg()
                } else {
                    rhs_base.clone()
                };
                if let Some(starred_u2) = scaled.div_by_monomial(u0v) {
                    for u2 in preimages(&starred_u2, true, img, &opts.grid, false) {
                        s0.push((x0, y0, u0, u2));
                    }
                }
            }
        }
    }
    for &(x0, y0, u0, ref u2) in &s0 {
        stage_one_reversed(x0, y0, u0, u2, img, ab, opts, &mut report, alphas, &p_target);
    }
    report
}

/// Remaining stages for the palindromic-style classes: enumerate (u1, x1),
/// solve y1 from the linear equation, check the middle equation, then run
/// the full identity check.
#[allow(clippy::too_many_arguments)]
fn stage_one_reversed(
    x0: usize,
    y0: usize,
    u0: usize,
    u2: &Slot,
    img: &Images,
    ab: &Alphabets,
    opts: &RefuteOptions,
    out: &mut RefuteReport,
    alphas: &[Frac],
    p_target: &[FormalPoly; 5],
) {
    let sch = scheme(opts.kind);
    let sgn = |i: usize, v: FormalPoly| if sch.factor(i) < 0 { v.neg() } else { v };
    let x0v = &ab.diag_val[0][x0];
    let y0v = &ab.diag_val[0][y0];
    let u0v = &ab.off_val[0][u0];
    let u2v = img.slot_value(u2, false);
    let l21_0 = sgn(0, img.slot_value(u2, true));
    let l21_2 = sgn(2, ab.off_star[0][u0].clone());
    let x2v = sgn(0, img.slot_value(&ab.diag[0][x0], true));
    let y2v = sgn(0, img.slot_value(&ab.diag[0][y0], true));
    // power-two fragment of eq2 that does not involve the middle slots
    let eq2_fixed = x0v
        .mul(&y2v)
        .add(&x2v.mul(y0v))
        .sub(&u0v.mul(&l21_2))
        .sub(&u2v.mul(&l21_0))
        .sub(&p_target[2]);

    for (u1, u1v) in ab.off_val[1].iter().enumerate() {
        let l21_1 = sgn(1, ab.off_star[1][u1].clone());
        let u_terms = u0v.mul(&l21_1).add(&u1v.mul(&l21_0));
        let eq2_u1 = eq2_fixed.sub(&u1v.mul(&l21_1));
        for (x1, x1v) in ab.diag_val[1].iter().enumerate() {
            out.nodes_explored += 1;
            // eq1: x0 y1 + x1 y0 - u0 l21[1] - u1 l21[0] = alpha p1
            let rhs = p_target[1].sub(&x1v.mul(y0v).sub(&u_terms));
            let y1_candidates: Vec<Slot> = if x0v.is_zero() {
                if rhs.is_zero() {
                    ab.diag[1].clone()
                } else {
                    continue;
                }
            } else {
                match rhs.div_by_monomial(x0v) {
                    Some(y1v) => preimages(&y1v, false, img, &opts.grid, opts.allow_products)
                        .into_iter()
                        .filter(|s| {
                            (opts.allow_products || s.is_atomic())
                                && diag_self_ok(s, img, sch.factor(1))
                        })
                        .collect(),
                    None => continue,
                }
            };
            for y1 in &y1_candidates {
                let y1v = img.slot_value(y1, false);
                let eq2 = eq2_u1.add(&x1v.mul(&y1v));
                if !eq2.is_zero() {
                    continue;
                }
                let template = CompanionTemplate {
                    kind: opts.kind,
                    flavor: opts.flavor,
                    x: [ab.diag[0][x0], ab.diag[1][x1], Slot::zero()],
                    y: [ab.diag[0][y0], *y1, Slot::zero()],
                    u: [ab.offdiag[0][u0], ab.offdiag[1][u1], *u2],
                };
                out.full_checks += 1;
                if check_template_with(&template, alphas, img).is_some() {
                    out.satisfying_count += 1;
                    if out.witnesses.len() < 8 {
                        out.witnesses.push(template.render());
                    }
                }
            }
        }
    }
}

/// Middle sweep for the classes without reversal pairing, with both corner
/// stages already fixed: enumerate (u1, x1), solve y1, check the two
/// remaining equations, then run the full identity check.
#[allow(clippy::too_many_arguments)]
fn middle_sweep(
    x0: usize,
    y0: usize,
    u0: usize,
    x2: usize,
    y2: usize,
    u2: usize,
    img: &Images,
    ab: &Alphabets,
    opts: &RefuteOptions,
    out: &mut RefuteReport,
    alphas: &[Frac],
    p_target: &[FormalPoly; 5],
) {
    let sch = scheme(opts.kind);
    let sgn = |i: usize, v: FormalPoly| if sch.factor(i) < 0 { v.neg() } else { v };
    let x0v = &ab.diag_val[0][x0];
    let y0v = &ab.diag_val[0][y0];
    let u0v = &ab.off_val[0][u0];
    let x2v = &ab.diag_val[2][x2];
    let y2v = &ab.diag_val[2][y2];
    let u2v = &ab.off_val[2][u2];
    let l21_0 = sgn(0, ab.off_star[0][u0].clone());
    let l21_2 = sgn(2, ab.off_star[2][u2].clone());
    let eq2_fixed = x0v
        .mul(y2v)
        .add(&x2v.mul(y0v))
        .sub(&u0v.mul(&l21_2))
        .sub(&u2v.mul(&l21_0))
        .sub(&p_target[2]);

    for (u1, u1v) in ab.off_val[1].iter().enumerate() {
        let l21_1 = sgn(1, ab.off_star[1][u1].clone());
        let u_terms_eq1 = u0v.mul(&l21_1).add(&u1v.mul(&l21_0));
        let u_terms_eq3 = u1v.mul(&l21_2).add(&u2v.mul(&l21_1));
        let eq2_u1 = eq2_fixed.sub(&u1v.mul(&l21_1));
        for (x1, x1v) in ab.diag_val[1].iter().enumerate() {
            out.nodes_explored += 1;
            // eq1: x0 y1 + x1 y0 - u-terms = alpha p1
            let rhs = p_target[1].sub(&x1v.mul(y0v).sub(&u_terms_eq1));
            let y1_candidates: Vec<Slot> = if x0v.is_zero() {
                if rhs.is_zero() {
                    ab.diag[1].clone()
                } else {
                    continue;
                }
            } else {
                match rhs.div_by_monomial(x0v) {
                    Some(y1v) => preimages(&y1v, false, img, &opts.grid, opts.allow_products)
                        .into_iter()
                        .filter(|s| {
                            (opts.allow_products || s.is_atomic())
                                && diag_self_ok(s, img, sch.factor(1))
                        })
                        .collect(),
                    None => continue,
                }
            };
            for y1 in &y1_candidates {
                let y1v = img.slot_value(y1, false);
                // eq3: x1 y2 + x2 y1 - u-terms = alpha p3
                let eq3 = x1v
                    .mul(y2v)
                    .add(&x2v.mul(&y1v))
                    .sub(&u_terms_eq3)
                    .sub(&p_target[3]);
                if !eq3.is_zero() {
                    continue;
                }
                let eq2 = eq2_u1.add(&x1v.mul(&y1v));
                if !eq2.is_zero() {
                    continue;
                }
                let template = CompanionTemplate {
                    kind: opts.kind,
                    flavor: opts.flavor,
                    x: [ab.diag[0][x0], ab.diag[1][x1], ab.diag[2][x2]],
                    y: [ab.diag[0][y0], *y1, ab.diag[2][y2]],
                    u: [ab.offdiag[0][u0], ab.offdiag[1][u1], ab.offdiag[2][u2]],
                };
                out.full_checks += 1;
                if check_template_with(&template, alphas, img).is_some() {
                    out.satisfying_count += 1;
                    if out.witnesses.len() < 8 {
                        out.witnesses.push(template.render());
                    }
                }
            }
        }
    }
}

/// Lazy stream over the full template space; mainly a cross-check for the
/// staged search on tiny grids.
pub struct TemplateStream {
    kind: StructureKind,
    flavor: StarFlavor,
    lists: Vec<Vec<Slot>>,
    odometer: Vec<usize>,
    done: bool,
    reversed: bool,
}

pub fn enumerate_templates(
    kind: StructureKind,
    flavor: StarFlavor,
    grid: &[Frac],
    allow_products: bool,
) -> Result<TemplateStream> {
    if grid.is_empty() || grid.iter().any(|g| g.is_zero()) {
        return Err(Error::EmptyGrid);
    }
    let img = images(kind, flavor)?;
    let ab = build_alphabets(kind, grid, allow_products, &img);
    let reversed = scheme(kind).reversed;
    let mut lists = Vec::new();
    // order: x0 x1 (x2) y0 y1 (y2) u0 u1 u2
    lists.push(ab.diag[0].clone());
    lists.push(ab.diag[1].clone());
    if !reversed {
        lists.push(ab.diag[2].clone());
    }
    lists.push(ab.diag[0].clone());
    lists.push(ab.diag[1].clone());
    if !reversed {
        lists.push(ab.diag[2].clone());
    }
    for i in 0..3 {
        lists.push(ab.offdiag[i].clone());
    }
    let done = lists.iter().any(Vec::is_empty);
    let odometer = vec![0; lists.len()];
    Ok(TemplateStream {
        kind,
        flavor,
        lists,
        odometer,
        done,
        reversed,
    })
}

impl TemplateStream {
    pub fn total(&self) -> u128 {
        self.lists.iter().map(|l| l.len() as u128).product()
    }
}

impl Iterator for TemplateStream {
    type Item = CompanionTemplate;

    fn next(&mut self) -> Option<CompanionTemplate> {
        if self.done {
            return None;
        }
        let pick = |idx: usize| self.lists[idx][self.odometer[idx]];
        let t = if self.reversed {
            CompanionTemplate {
                kind: self.kind,
                flavor: self.flavor,
                x: [pick(0), pick(1), Slot::zero()],
                y: [pick(2), pick(3), Slot::zero()],
                u: [pick(4), pick(5), pick(6)],
            }
        } else {
            CompanionTemplate {
                kind: self.kind,
                flavor: self.flavor,
                x: [pick(0), pick(1), pick(2)],
                y: [pick(3), pick(4), pick(5)],
                u: [pick(6), pick(7), pick(8)],
            }
        };
        let mut idx = 0;
        loop {
            if idx == self.lists.len() {
                self.done = true;
                break;
            }
            self.odometer[idx] += 1;
            if self.odometer[idx] < self.lists[idx].len() {
                break;
            }
            self.odometer[idx] = 0;
            idx += 1;
        }
        Some(t)
    }
}

/// The generalized witness as a template: passes the identity only with the
/// product extension enabled.
pub fn generalized_witness(flavor: StarFlavor) -> CompanionTemplate {
    CompanionTemplate {
        kind: StructureKind::Palindromic,
        flavor,
        x: [
            Slot::coefficient(Frac::ONE, 1),
            Slot {
                con: Some(Frac::int(-1)),
                coef: Some((Frac::ONE, 2)),
                prod: Some((Frac::int(-1), 0, 4)),
            },
            Slot::zero(),
        ],
        y: [Slot::zero(), Slot::constant(Frac::int(-1)), Slot::zero()],
        u: [
            Slot::constant(Frac::ONE),
            Slot::zero(),
            Slot::coefficient(Frac::ONE, 4),
        ],
    }
}
