//! Cross-checks between independently implemented pipelines: the same
//! invariant computed through unrelated code paths must agree exactly.

use cuspalg::conjectures::{check_planar, reference_betti_row, Verdict};
use cuspalg::gradedquot::{betti_from_model, gr_m_filtration, GradedQuotient, VModel};
use cuspalg::jets::{artinian_dims, mrig_equations, Convention, ParamCurve};
use cuspalg::oracles::catalan_count;
use cuspalg::presentations::{build_io, build_toric_equations};
use cuspalg::Integer;

/// The jet-space local ring of the quasi-homogeneous curve (t^p, t^q) is the
/// moduli ring again: totals and m-adic rows must coincide.
#[test]
fn jet_rings_of_toric_curves_match_moduli_rings() {
    for (p, q) in [(2u32, 3u32), (2, 5), (3, 4)] {
        let model = mrig_equations(&ParamCurve::toric(p, q).unwrap(), Convention::Strict, None)
            .unwrap();
        let dims = artinian_dims(&model).unwrap();
        assert_eq!(
            Integer::from(dims.total),
            catalan_count(p, q).unwrap(),
            "jet total at ({p}, {q})"
        );
        let d = ((p as i64 - 1) * (q as i64 - 1)) / 2;
        let grm = gr_m_filtration(&build_io(p, q).unwrap(), 2 * d).unwrap();
        assert_eq!(dims.gr, grm, "jet gr vs moduli gr at ({p}, {q})");
    }
}

/// The deformation-parameter ring of the monomial curve and the moduli ring
/// presentation produce the same graded dimensions.
#[test]
fn toric_equations_match_moduli_hilbert() {
    for (p, q) in [(2u32, 3u32), (2, 5), (3, 4), (3, 5)] {
        let bound = 4 * ((p as i64 - 1) * (q as i64 - 1)) + 8;
        let a = GradedQuotient::new(&build_toric_equations(&[p, q], None).unwrap())
            .unwrap()
            .hilbert_until_vanishing(bound)
            .unwrap();
        let b = GradedQuotient::new(&build_io(p, q).unwrap())
            .unwrap()
            .hilbert_until_vanishing(bound)
            .unwrap();
        assert_eq!(a, b, "toric vs moduli Hilbert at ({p}, {q})");
    }
}

/// Once the second filtration index is past its top value, a filtration column
/// of the graded model contains the whole first-filtration stage, so the
/// column dimensions reproduce the partial sums of the Betti numbers.
#[test]
fn filtration_columns_exhaust_betti_partial_sums() {
    for (p, q) in [(2u32, 3u32), (3, 4)] {
        let vm = VModel::new(p, q, None).unwrap();
        let b = betti_from_model(p, q).unwrap();
        let top = 2 * vm.delta() + 2;
        let mut acc = 0u64;
        for (a, v) in b.iter().enumerate() {
            acc += v;
            let stage = vm.e_monomials(|ew, _| ew <= a as i64);
            assert_eq!(vm.span_dim(&stage), acc, "stage {a} at ({p}, {q})");
            let windowed = vm.e_monomials(|ew, sw| ew <= a as i64 && sw <= top);
            assert_eq!(windowed.len(), stage.len(), "window covers stage {a}");
        }
        assert_eq!(Integer::from(acc), catalan_count(p, q).unwrap());
    }
}

/// The graded model's total dimension counts all semigroup modules.
#[test]
fn model_dimension_counts_modules() {
    for (p, q) in [(2u32, 3u32), (2, 5), (3, 4), (3, 5), (4, 5)] {
        let vm = VModel::new(p, q, None).unwrap();
        assert_eq!(Integer::from(vm.dimension()), catalan_count(p, q).unwrap());
    }
}

/// The alternative rigidification convention also satisfies the dominance
/// bound; it needs the perturbation gap s - 2q to be at least 3.
#[test]
fn pinned_convention_keeps_translation_modulus() {
    // The pinned tie is tangent to the translation orbit, so the model keeps
    // F1 as a live modulus where the strict pins remove it, and the fattened
    // ring outgrows a precision window that is ample for the strict ring.
    let curve = ParamCurve::planar_4_2q_s(3, 9).unwrap();
    let model = mrig_equations(&curve, Convention::Pinned, Some(12)).unwrap();
    let names = model.context.names();
    assert!(names.iter().any(|n| n == "F1"), "live variables {names:?}");
    assert!(!names.iter().any(|n| n == "E1"), "live variables {names:?}");

    let reference = reference_betti_row(3, 9).unwrap();
    let rep = check_planar(3, 9, Convention::Pinned, Some(12), &reference).unwrap();
    assert_eq!(rep.verdict, Verdict::InconclusiveAtBound);
    assert_eq!(rep.parameters["convention"], serde_json::json!("pinned"));

    let strict = check_planar(3, 9, Convention::Strict, Some(12), &reference).unwrap();
    assert_eq!(strict.verdict, Verdict::Holds);
}
