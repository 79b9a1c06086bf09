//! Cross-module integration: the general block-minimal-bases path with
//! invertible wing matrices, symmetrization of an unstructured middle
//! block, Smith-form oracles, and JSON round trips of build artifacts.

use ellify::conditions::build_middle_block;
use ellify::json;
use ellify::lification::{
    assemble_general_bmb, build_structured, frobenius_pencil, recover_from_duals, symmetrize_for,
};
use ellify::matpoly::{MatrixPolynomial, StarFlavor};
use ellify::matrix::Matrix;
use ellify::minbases::{bidiagonal_pencil_pow, certify_dual_pair, monomial_column_pow};
use ellify::plans::{PlanRegistry, PlanStrategy, StackedPlan};
use ellify::poly::SPoly;
use ellify::scalar::{Backend, Scalar};
use ellify::smith::smith_form;
use ellify::structure::{StructureKind, StructureTag};
use ellify::testkit::{self, Rng};
use ellify::verify::{certify_lification, check_structure};

fn sc(v: i64) -> Scalar {
    Scalar::from_int(v, Backend::Rational)
}

/// Grade-21 cubification through the general template: the bottom wing
/// carries invertible matrices, its dual is still the monomial column, and
/// the result is a symmetric strong cubification.
#[test]
fn cubification_with_invertible_wing_matrices() {
    let backend = Backend::Rational;
    let mut rng = Rng::new(303);
    let tag = StructureTag::new(StructureKind::Symmetric, StarFlavor::Transpose);
    let (d, ell, n) = (3usize, 3usize, 2usize);
    let k = (2 * d + 1) * ell;
    let p = testkit::random_structured(&mut rng, tag, n, k, backend);

    // middle block from the staircase plan, then symmetrized
    let plan = StackedPlan.build(tag, d, ell).unwrap();
    let m = build_middle_block(&p, &plan, d, ell).unwrap();
    let m_tilde = symmetrize_for(&m, tag, k).unwrap();

    // wing with invertible X and Y in place of two identity blocks
    let x = Matrix::from_rows(vec![vec![sc(1), sc(1)], vec![sc(0), sc(1)]]).unwrap();
    let y = Matrix::from_rows(vec![vec![sc(2), sc(0)], vec![sc(1), sc(1)]]).unwrap();
    let mut wing = bidiagonal_pencil_pow(d, ell, backend).kron_identity(n);
    for (blk, mat) in [(0usize, &x), (1usize, &y)] {
        for r in 0..n {
            for c in 0..n {
                let v = mat.get(r, c);
                wing.coeff_mut(0).set(blk * n + r, blk * n + c, -v.clone());
                wing.coeff_mut(ell).set(blk * n + r, (blk + 1) * n + c, v.clone());
            }
        }
    }
    // dual pair still holds with the weights folded in
    let dual = monomial_column_pow(d, ell, backend)
        .star(StarFlavor::Transpose)
        .kron_identity(n);
    let pair = certify_dual_pair(&wing, &dual).unwrap();
    assert!(pair.dual, "{pair:?}");

    let general = assemble_general_bmb(m_tilde.base(), &wing, &wing).unwrap();
    assert!(check_structure(&general.l, tag));
    let report = certify_lification(&general.l, &p, ell, k).unwrap();
    assert!(report.is_strong);
    assert_eq!(report.padding, general.l.rows() - n);

    // recovery through the supplied dual
    let recovered = recover_from_duals(m_tilde.base(), &dual, &dual).unwrap();
    assert_eq!(recovered.with_grade(k).unwrap(), p);
}

/// Symmetrizing a middle block built from an unstructured polynomial yields
/// a structured strong quadratification of the symmetrized target, not of
/// the original.
#[test]
fn symmetrized_build_of_an_unstructured_target() {
    let backend = Backend::Rational;
    let mut rng = Rng::new(7001);
    let tag = StructureTag::new(StructureKind::Symmetric, StarFlavor::Transpose);
    let (d, ell) = (2usize, 2usize);
    let k = (2 * d + 1) * ell;
    let p = rng.matpoly(2, 2, k, backend);
    assert!(!check_structure(&p, tag));

    let plan = StackedPlan.build(tag, d, ell).unwrap();
    let m = build_middle_block(&p, &plan, d, ell).unwrap();
    let m_tilde = symmetrize_for(&m, tag, k).unwrap();
    let a = ellify::mobius::MobiusMatrix::named(tag.mobius_name(), backend);
    let l = ellify::lification::assemble_block_kronecker(&m_tilde, &a, tag.sign(), d, ell, 2)
        .unwrap();

    // the actual target is the symmetric part of p
    let half = Scalar::from_ratio(1, 2, backend);
    let target = p.add(&p.star(StarFlavor::Transpose)).unwrap().scale(&half);
    assert!(check_structure(&target, tag));
    let report = certify_lification(l.base(), &target, ell, k).unwrap();
    assert!(report.is_strong);
    // and it is generally not one of the original
    let against_p = certify_lification(l.base(), &p, ell, k).unwrap();
    assert!(!against_p.is_lification);
}

/// The reference sparse grade-14 middle block: one block per diagonal with
/// mirrored support, and the symmetrization splits two coefficients into
/// halves across mirrored slots.
#[test]
fn sparse_grade14_middle_block_matches_the_reference() {
    let tag = StructureTag::new(StructureKind::Palindromic, StarFlavor::ConjugateTranspose);
    let p = testkit::tagged_star_palindromic_poly(14);
    let plan = PlanRegistry::default().build("reference", tag, 3, 2).unwrap();
    let m = build_middle_block(&p, &plan, 3, 2).unwrap();
    let m_tilde = symmetrize_for(&m, tag, 14).unwrap();

    let backend = Backend::Gaussian;
    let half = Scalar::from_ratio(1, 2, backend);
    let tagv = |j: usize| p.coeff(j).get(0, 0).clone();
    let entry = |parts: &[(usize, usize, bool)]| -> ellify::poly::SPoly {
        // (coefficient index, power, halved)
        let mut coeffs = vec![Scalar::zero(backend); 3];
        for &(j, pow, halved) in parts {
            let mut v = tagv(j);
            if halved {
                v = &v * &half;
            }
            coeffs[pow] = v;
        }
        ellify::poly::SPoly::from_coeffs(coeffs)
    };
    let expected: Vec<((usize, usize), ellify::poly::SPoly)> = vec![
        ((1, 4), entry(&[(0, 0, false), (1, 1, false), (2, 2, true)])),
        ((2, 4), entry(&[(2, 0, true), (3, 1, false), (4, 2, false)])),
        ((1, 2), entry(&[(5, 1, false), (6, 2, false)])),
        ((3, 3), entry(&[(7, 1, false)])),
        ((2, 1), entry(&[(8, 0, false), (9, 1, false)])),
        ((4, 2), entry(&[(10, 0, false), (11, 1, false), (12, 2, true)])),
        ((4, 1), entry(&[(12, 0, true), (13, 1, false), (14, 2, false)])),
    ];
    let mut nonzero = 0;
    for s in 1..=4usize {
        for t in 1..=4usize {
            let blk = m_tilde.block(s, t);
            match expected.iter().find(|((es, et), _)| (*es, *et) == (s, t)) {
                Some((_, poly)) => {
                    assert_eq!(&blk.entry(0, 0), poly, "block ({s},{t})");
                    nonzero += 1;
                }
                None => assert!(blk.is_zero(), "block ({s},{t}) should be zero"),
            }
        }
    }
    assert_eq!(nonzero, 7); // 2d + 1 blocks, the sparse census for the grid
    // labels survive the symmetrization and re-validate against the source
    assert!(m_tilde
        .validate_labels(&p, StarFlavor::ConjugateTranspose)
        .unwrap());
}

/// Classical companion oracle: the invariant factors of the companion
/// pencil of a scalar polynomial are ones followed by the monic polynomial.
#[test]
fn smith_of_scalar_companion_matches_the_classical_form() {
    let mut rng = Rng::new(404);
    for _ in 0..5 {
        let mut p = rng.matpoly(1, 1, 4, Backend::Rational);
        // force a nonzero leading coefficient
        if p.coeff(4).is_zero() {
            p.coeff_mut(4).set(0, 0, sc(3));
        }
        let f1 = frobenius_pencil(&p, 1).unwrap();
        let factors = smith_form(f1.base()).unwrap();
        let lead = p.coeff(4).get(0, 0).inv().unwrap();
        let monic = SPoly::from_coeffs(
            (0..=4).map(|j| p.coeff(j).get(0, 0) * &lead).collect(),
        );
        let mut expected = vec![SPoly::one(Backend::Rational); 3];
        expected.push(monic);
        assert_eq!(factors, expected);
    }
}

/// Build, serialize, parse, and re-verify bit-identically.
#[test]
fn json_round_trip_of_a_build() {
    let mut rng = Rng::new(505);
    let registry = PlanRegistry::default();
    let tag = StructureTag::new(StructureKind::Palindromic, StarFlavor::ConjugateTranspose);
    let p = testkit::random_structured(&mut rng, tag, 2, 6, Backend::Gaussian);
    let plan = registry.build("sparse", tag, 1, 2).unwrap();
    let built = build_structured(&p, tag, 2, &plan).unwrap();

    let l_text = json::block_to_string(&built.l);
    let p_text = json::matpoly_to_string(&p);
    let l_back = json::block_from_str(&l_text).unwrap();
    let p_back = json::matpoly_from_str(&p_text).unwrap();
    assert_eq!(&l_back, &built.l);
    assert_eq!(p_back, p);
    let report = certify_lification(l_back.base(), &p_back, 2, 6).unwrap();
    assert!(report.is_strong);
}

/// The alternating classes switch conditions on the parity of the degree:
/// signed sums for pencils, plain sums for quadratics.
#[test]
fn alternating_condition_switch() {
    let mut rng = Rng::new(606);
    let registry = PlanRegistry::default();
    for flavor in [StarFlavor::Transpose, StarFlavor::ConjugateTranspose] {
        let backend = match flavor {
            StarFlavor::Transpose => Backend::Rational,
            StarFlavor::ConjugateTranspose => Backend::Gaussian,
        };
        for kind in [StructureKind::Even, StructureKind::Odd] {
            let tag = StructureTag::new(kind, flavor);
            for ell in [1usize, 2] {
                let d = 1;
                let k = (2 * d + 1) * ell;
                let p = testkit::random_structured(&mut rng, tag, 2, k, backend);
                let plan = registry.build("stacked", tag, d, ell).unwrap();
                assert_eq!(plan.kind, if ell % 2 == 0 { "AS" } else { "ASS" });
                let built = build_structured(&p, tag, ell, &plan).unwrap();
                let report = certify_lification(built.l.base(), &p, ell, k).unwrap();
                assert!(report.is_strong, "{tag} ell={ell}");
            }
        }
    }
}

/// Mobius transforms keep the strong-linearization relation: transforming
/// both the pencil and the polynomial preserves certification.
#[test]
fn mobius_preserves_the_strong_relation() {
    let mut rng = Rng::new(707);
    let p = {
        let mut p = rng.matpoly(2, 2, 3, Backend::Rational);
        if p.coeff(3).is_zero() {
            p.coeff_mut(3).set(0, 0, sc(1));
        }
        p
    };
    let f1 = frobenius_pencil(&p, 1).unwrap();
    assert!(certify_lification(f1.base(), &p, 1, 3).unwrap().is_strong);
    let a = ellify::mobius::MobiusMatrix::cayley_plus(Backend::Rational);
    let lq = ellify::mobius::mobius(&a, f1.base(), ellify::Sign::Plus).unwrap();
    let q = ellify::mobius::mobius(&a, &p, ellify::Sign::Plus).unwrap();
    assert!(certify_lification(&lq, &q, 1, 3).unwrap().is_strong);
}

/// A perturbed candidate stops being an l-ification and the determinant
/// ratio degrades to nonconstant.
#[test]
fn perturbation_breaks_certification() {
    let mut rng = Rng::new(808);
    let tag = StructureTag::new(StructureKind::Symmetric, StarFlavor::Transpose);
    let p = testkit::random_structured(&mut rng, tag, 1, 6, Backend::Rational);
    let registry = PlanRegistry::default();
    let plan = registry.build("stacked", tag, 1, 2).unwrap();
    let built = build_structured(&p, tag, 2, &plan).unwrap();
    let mut broken: MatrixPolynomial = built.l.base().clone();
    // zero out one wing block
    let n = built.n;
    for i in 0..=broken.grade() {
        for r in 0..n {
            for c in 0..n {
                broken.coeff_mut(i).set((built.l.block_rows() - 1) * n + r, c, sc(0));
            }
        }
    }
    let report = certify_lification(&broken, &p, 2, 6).unwrap();
    assert!(!report.is_lification);
    assert!(matches!(
        report.det_ratio,
        Some(ellify::verify::DetRatio::NonConstant) | None
    ));
}
