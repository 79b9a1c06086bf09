//! Self-verifying demonstration scenarios shared by the command line and
//! the acceptance suite: the three grade-10 quadratifications rebuilt
//! block-for-block against their reference layouts, the quartic
//! generalized-companion witness, and the Cayley-transformed companion
//! pencil that stops being companion.

use crate::block::BlockPolynomial;
use crate::error::Result;
use crate::json;
use crate::lification::{build_structured, palindromic_quartic_quadratification};
use crate::matpoly::{MatrixPolynomial, StarFlavor};
use crate::mobius::{cayley_block, mobius, CayleySide, MobiusMatrix};
use crate::plans::PlanRegistry;
use crate::scalar::{Backend, Scalar};
use crate::structure::{NamedMobius, Sign, StructureKind, StructureTag};
use crate::testkit::{self, Rng};
use crate::verify::{
    certify_lification, check_structure, companion_predicate, sparsity_census, CompanionMode,
};

#[derive(Debug, Clone)]
pub struct DemoOutcome {
    pub passed: bool,
    pub lines: Vec<String>,
    /// Rendered artifacts worth printing with `--pretty`.
    pub pretty: Vec<String>,
}

impl DemoOutcome {
    fn new() -> Self {
        DemoOutcome {
            passed: true,
            lines: Vec::new(),
            pretty: Vec::new(),
        }
    }

    fn check(&mut self, what: &str, ok: bool) {
        self.lines
            .push(format!("{} {}", if ok { "ok  " } else { "FAIL" }, what));
        self.passed &= ok;
    }
}

/// Entry table for a 5x5 quadratic: scalar coefficients per power.
type EntryTable = [[(i64, i64, i64); 5]; 5];

fn poly_from_table(
    table: &EntryTable,
    tags: &MatrixPolynomial,
    lambda2_cells: &[(usize, usize, i64)],
    halves: &[(usize, usize)],
) -> MatrixPolynomial {
    // table holds tag indices offset by one (0 = zero entry, j+1 = tag j,
    // negative = negated), per power; lambda2_cells add plain +-lambda^2
    // constants, halves mark cells scaled by one half afterwards
    let backend = tags.backend();
    let tag = |code: i64| -> Scalar {
        if code == 0 {
            return Scalar::zero(backend);
        }
        let idx = (code.abs() - 1) as usize;
        let v = tags.coeff(idx).get(0, 0).clone();
        if code < 0 {
            -v
        } else {
            v
        }
    };
    let mut p = MatrixPolynomial::zero(5, 5, 2, backend);
    for (r, row) in table.iter().enumerate() {
        for (c, &(c0, c1, c2)) in row.iter().enumerate() {
            p.coeff_mut(0).set(r, c, tag(c0));
            p.coeff_mut(1).set(r, c, tag(c1));
            p.coeff_mut(2).set(r, c, tag(c2));
        }
    }
    for &(r, c, sign) in lambda2_cells {
        p.coeff_mut(2).set(r, c, Scalar::from_int(sign, backend));
    }
    let half = Scalar::from_ratio(1, 2, backend);
    for &(r, c) in halves {
        for i in 0..=2 {
            let v = p.coeff(i).get(r, c) * &half;
            p.coeff_mut(i).set(r, c, v);
        }
    }
    p
}

/// Constant cells (ones of either sign) of the wing layout shared by all
/// three references.
fn place_constants(p: &mut MatrixPolynomial, cells: &[(usize, usize, i64, usize)]) {
    let backend = p.backend();
    for &(r, c, sign, pow) in cells {
        p.coeff_mut(pow).set(r, c, Scalar::from_int(sign, backend));
    }
}

fn expected_symmetric(tags: &MatrixPolynomial) -> MatrixPolynomial {
    // tag code = coefficient index + 1
    let table: EntryTable = [
        [(0, 10, 11), (7, 8, 9), (0, 0, 0), (0, 0, 0), (0, 0, 0)],
        [(7, 8, 9), (5, 6, 0), (3, 4, 0), (0, 0, 0), (0, 0, 0)],
        [(0, 0, 0), (3, 4, 0), (1, 2, 0), (0, 0, 0), (0, 0, 0)],
        [(0, 0, 0), (0, 0, 0), (0, 0, 0), (0, 0, 0), (0, 0, 0)],
        [(0, 0, 0), (0, 0, 0), (0, 0, 0), (0, 0, 0), (0, 0, 0)],
    ];
    let mut p = poly_from_table(
        &table,
        tags,
        &[(1, 3, 1), (2, 4, 1), (3, 1, 1), (4, 2, 1)],
        &[(0, 1), (1, 0), (1, 2), (2, 1)],
    );
    place_constants(
        &mut p,
        &[(0, 3, -1, 0), (1, 4, -1, 0), (3, 0, -1, 0), (4, 1, -1, 0)],
    );
    p
}

fn expected_odd(tags: &MatrixPolynomial) -> MatrixPolynomial {
    let table: EntryTable = [
        [(9, 10, 11), (7, 8, 0), (5, 0, 0), (0, 0, 0), (0, 0, 0)],
        [(7, 8, 0), (0, 6, 0), (0, 4, 0), (0, 0, 0), (0, 0, 0)],
        [(5, 0, 0), (0, 4, 0), (1, 2, 3), (0, 0, 0), (0, 0, 0)],
        [(0, 0, 0), (0, 0, 0), (0, 0, 0), (0, 0, 0), (0, 0, 0)],
        [(0, 0, 0), (0, 0, 0), (0, 0, 0), (0, 0, 0), (0, 0, 0)],
    ];
    let mut p = poly_from_table(
        &table,
        tags,
        &[(1, 3, -1), (2, 4, -1), (3, 1, 1), (4, 2, 1)],
        &[(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)],
    );
    place_constants(
        &mut p,
        &[(0, 3, 1, 0), (1, 4, 1, 0), (3, 0, -1, 0), (4, 1, -1, 0)],
    );
    p
}

fn expected_palindromic(tags: &MatrixPolynomial) -> MatrixPolynomial {
    let table: EntryTable = [
        [(5, 6, 7), (0, 4, 0), (1, 2, 3), (0, 0, 0), (0, 0, 0)],
        [(0, 8, 0), (0, 0, 0), (0, 4, 0), (0, 0, 0), (0, 0, 0)],
        [(9, 10, 11), (0, 8, 0), (0, 0, 0), (0, 0, 0), (0, 0, 0)],
        [(0, 0, 0), (0, 0, 0), (0, 0, 0), (0, 0, 0), (0, 0, 0)],
        [(0, 0, 0), (0, 0, 0), (0, 0, 0), (0, 0, 0), (0, 0, 0)],
    ];
    let mut p = poly_from_table(
        &table,
        tags,
        &[(0, 3, -1), (1, 4, -1), (3, 1, 1), (4, 2, 1)],
        &[(0, 1), (1, 0), (1, 2), (2, 1)],
    );
    place_constants(
        &mut p,
        &[(1, 3, 1, 0), (2, 4, 1, 0), (3, 0, -1, 0), (4, 1, -1, 0)],
    );
    p
}

/// Rebuild the three reference grade-10 quadratifications block for block,
/// including the halved off-diagonal blocks and the negated wing of the
/// odd one, then certify each as a strong quadratification.
pub fn demo_grade10(pretty: bool) -> Result<DemoOutcome> {
    let mut out = DemoOutcome::new();
    let registry = PlanRegistry::default();

    let cases: [(&str, StructureTag, MatrixPolynomial, &str); 3] = [
        (
            "symmetric",
            StructureTag::new(StructureKind::Symmetric, StarFlavor::Transpose),
            testkit::tagged_scalar_poly(10, Backend::Rational),
            "stacked",
        ),
        (
            "odd",
            StructureTag::new(StructureKind::Odd, StarFlavor::ConjugateTranspose),
            testkit::tagged_star_odd_poly(10),
            "reference",
        ),
        (
            "palindromic",
            StructureTag::new(StructureKind::Palindromic, StarFlavor::ConjugateTranspose),
            testkit::tagged_star_palindromic_poly(10),
            "stacked",
        ),
    ];

    for (name, tag, p, plan_name) in cases {
        let plan = registry.build(plan_name, tag, 2, 2)?;
        let built = build_structured(&p, tag, 2, &plan)?;
        let expected = match tag.kind {
            StructureKind::Symmetric => expected_symmetric(&p),
            StructureKind::Odd => expected_odd(&p),
            _ => expected_palindromic(&p),
        };
        out.check(
            &format!("{name}: rebuilt layout matches the reference block for block"),
            built.l.base() == &expected,
        );
        let report = certify_lification(built.l.base(), &p, 2, 10)?;
        out.check(&format!("{name}: certified strong quadratification"), report.is_strong);
        out.check(
            &format!("{name}: companion form"),
            companion_predicate(&built.l, CompanionMode::Companion)?,
        );
        let census = sparsity_census(&built.l, 2, 2, Some(tag.kind));
        out.check(
            &format!("{name}: dense plan exceeds the family minimum ({} > {})",
                census.nonzero_blocks, census.family_minimum),
            census.nonzero_blocks > census.family_minimum,
        );
        if pretty {
            out.pretty.push(format!("{name}:\n{}", built.l.pretty()));
        }
    }
    Ok(out)
}

/// The quartic generalized-companion witness on a random conjugate-flavored
/// palindromic quartic.
pub fn demo_quartic_witness(seed: u64, pretty: bool) -> Result<DemoOutcome> {
    let mut out = DemoOutcome::new();
    let mut rng = Rng::new(seed);
    let tag = StructureTag::new(StructureKind::Palindromic, StarFlavor::ConjugateTranspose);
    let p = testkit::random_structured(&mut rng, tag, 2, 4, Backend::Gaussian);
    out.lines.push(format!("seed {seed}"));
    let l = palindromic_quartic_quadratification(&p)?;
    out.check("target is conjugate-palindromic", check_structure(&p, tag));
    out.check("witness is conjugate-palindromic", check_structure(l.base(), tag));
    let report = certify_lification(l.base(), &p, 2, 4)?;
    out.check("witness is a strong quadratification", report.is_strong);
    out.check(
        "witness is generalized companion",
        companion_predicate(&l, CompanionMode::Generalized)?,
    );
    out.check(
        "witness is not companion",
        !companion_predicate(&l, CompanionMode::Companion)?,
    );
    if pretty {
        out.pretty.push(l.pretty());
    }
    Ok(out)
}

/// The reference transpose-palindromic companion pencil of a cubic.
pub fn palindromic_cubic_companion_pencil(p: &MatrixPolynomial) -> Result<BlockPolynomial> {
    use crate::block::{Labels, SlotLabel};
    if p.grade() != 3 || p.rows() != p.cols() {
        return Err(crate::error::Error::WrongGrade { expected: 3, got: p.grade() });
    }
    let n = p.rows();
    let backend = p.backend();
    let one = Scalar::one(backend);
    let mut base = MatrixPolynomial::zero(3 * n, 3 * n, 1, backend);
    let mut labels = Labels::zeroed(1, 3, 3);
    let put_coef = |i: usize, s: usize, t: usize, j: usize,
                        base: &mut MatrixPolynomial, labels: &mut Labels| {
        for r in 0..n {
            for c in 0..n {
                let v = p.coeff(j).get(r, c);
                if !v.is_zero() {
                    base.coeff_mut(i).set((s - 1) * n + r, (t - 1) * n + c, v.clone());
                }
            }
        }
        labels.set(i, s, t, SlotLabel::coef(one.clone(), j));
    };
    put_coef(0, 1, 2, 0, &mut base, &mut labels);
    put_coef(1, 1, 2, 1, &mut base, &mut labels);
    put_coef(0, 2, 1, 2, &mut base, &mut labels);
    put_coef(1, 2, 1, 3, &mut base, &mut labels);
    let ident_cells = [(1usize, 3usize, -1i64, 1usize), (2, 3, 1, 0), (3, 1, -1, 0), (3, 2, 1, 1)];
    for (s, t, sign, pow) in ident_cells {
        for e in 0..n {
            base.coeff_mut(pow).set(
                (s - 1) * n + e,
                (t - 1) * n + e,
                Scalar::from_int(sign, backend),
            );
        }
        labels.set(
            pow,
            s,
            t,
            SlotLabel::identity(Scalar::from_int(sign, backend)),
        );
    }
    BlockPolynomial::new(base, 3, 3, n, Some(labels))
}

/// Cayley image of a palindromic companion pencil: still a structured
/// strong linearization of the transformed cubic, but no longer companion.
pub fn demo_cayley_counterexample(seed: u64, pretty: bool) -> Result<DemoOutcome> {
    let mut out = DemoOutcome::new();
    let mut rng = Rng::new(seed);
    let palin = StructureTag::new(StructureKind::Palindromic, StarFlavor::Transpose);
    let even = StructureTag::new(StructureKind::Even, StarFlavor::Transpose);
    let p = testkit::random_structured(&mut rng, palin, 2, 3, Backend::Rational);
    out.lines.push(format!("seed {seed}"));
    let lp = palindromic_cubic_companion_pencil(&p)?;
    out.check("pencil is transpose-palindromic", check_structure(lp.base(), palin));
    out.check(
        "pencil is companion",
        companion_predicate(&lp, CompanionMode::Companion)?,
    );
    out.check(
        "pencil is a strong linearization",
        certify_lification(lp.base(), &p, 1, 3)?.is_strong,
    );
    let q = mobius(
        &MobiusMatrix::cayley_plus(p.backend()),
        &p,
        Sign::Plus,
    )?;
    let lq = cayley_block(&lp, CayleySide::Plus)?;
    out.check("transformed cubic is transpose-even", check_structure(&q, even));
    out.check("transformed pencil is transpose-even", check_structure(lq.base(), even));
    out.check(
        "transformed pencil is a strong linearization of the transformed cubic",
        certify_lification(lq.base(), &q, 1, 3)?.is_strong,
    );
    out.check(
        "transformed pencil is not companion",
        !companion_predicate(&lq, CompanionMode::Companion)?,
    );
    out.check(
        "transformed pencil is still generalized companion",
        companion_predicate(&lq, CompanionMode::Generalized)?,
    );
    // the named reversal matrix sends the pencil family the same way
    let _ = MobiusMatrix::named(NamedMobius::A3, p.backend());
    if pretty {
        out.pretty.push(lq.pretty());
        out.pretty.push(json::block_to_string(&lq));
    }
    Ok(out)
}
