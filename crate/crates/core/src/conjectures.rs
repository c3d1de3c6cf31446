//! Machine checks for the conjectural identities, packaged as structured
//! reports. Each check runs the relevant exact computation, embeds enough
//! evidence to re-derive its verdict, and returns a definite verdict only when
//! every stabilization certificate inside the computation passed: a window that
//! runs out before stabilizing yields an inconclusive verdict, never a failure.

use crate::exactalg::{Integer, Monomial, Rational};
use crate::gradedquot::{
    betti_from_model, filtration_table, flatness_probe, gr_m_filtration, m_adic_cumulative,
    GradedQuotient,
};
use crate::jets::{artinian_dims, mrig_equations, Convention, ParamCurve};
use crate::presentations::{build_io, build_parabolic_ideal, build_toric_equations};
use crate::semigroups::{enumerate_flag_tuples, enumerate_modules, FlagTuple, NumericalSemigroup};
use crate::{Error, Result};
use num::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::time::Instant;

/// Outcome of a single check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    InconclusiveAtBound,
}

/// A self-contained record of one check: what was claimed, for which
/// parameters, what the computation produced, and inside which windows.
#[derive(Debug, Clone, Serialize)]
pub struct ConjectureReport {
    pub id: String,
    pub parameters: Value,
    pub verdict: Verdict,
    pub statement: String,
    pub evidence: Value,
    pub bounds: Value,
    pub wall_ms: u64,
}

impl ConjectureReport {
    /// Copy with the wall-clock field zeroed, for byte-stable serialized output.
    pub fn without_walltime(mut self) -> Self {
        self.wall_ms = 0;
        self
    }
}

/// Process exit code for a batch of reports: any failure wins over any
/// inconclusive verdict, which wins over a clean pass.
pub fn exit_code(reports: &[ConjectureReport]) -> i32 {
    if reports.iter().any(|r| r.verdict == Verdict::Fails) {
        1
    } else if reports.iter().any(|r| r.verdict == Verdict::InconclusiveAtBound) {
        2
    } else {
        0
    }
}

/// Reference Betti rows shipped with the crate, ascending by cohomological
/// degree, keyed by the degrees (4, 2q) and the perturbation exponent s of the
/// curve t -> (t^4, t^{2q} + t^s).
pub fn reference_betti_row(q: u32, s: u32) -> Option<Vec<u64>> {
    #[derive(Deserialize)]
    struct DataFile {
        rows: std::collections::BTreeMap<String, Vec<u64>>,
    }
    static DATA: &str = include_str!("../data/reference_betti.json");
    let file: DataFile = serde_json::from_str(DATA).ok()?;
    file.rows.get(&format!("4,{},{}", 2 * q, s)).cloned()
}

fn report(
    id: &str,
    parameters: Value,
    verdict: Verdict,
    statement: &str,
    evidence: Value,
    bounds: Value,
    t0: Instant,
) -> ConjectureReport {
    ConjectureReport {
        id: id.into(),
        parameters,
        verdict,
        statement: statement.into(),
        evidence,
        bounds,
        wall_ms: t0.elapsed().as_millis() as u64,
    }
}

/// Separate window exhaustion (inconclusive, with the message kept as
/// evidence) from genuine errors (propagated).
fn window_soft<T>(r: Result<T>) -> Result<std::result::Result<T, String>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(e @ Error::WindowExhausted { .. }) | Err(e @ Error::WindowBoundary(_)) => {
            Ok(Err(e.to_string()))
        }
        Err(e) => Err(e),
    }
}

macro_rules! certified {
    ($expr:expr, $id:expr, $params:expr, $statement:expr, $bounds:expr, $t0:expr) => {
        match window_soft($expr)? {
            Ok(v) => v,
            Err(msg) => {
                return Ok(report(
                    $id,
                    $params,
                    Verdict::InconclusiveAtBound,
                    $statement,
                    json!({ "reason": msg }),
                    $bounds,
                    $t0,
                ))
            }
        }
    };
}

const GRM_ID: &str = "grm-betti";
const GRM_STATEMENT: &str = "reading the m-adic associated graded of the Artinian moduli ring \
    from the top down gives the even Betti numbers of the compactified Jacobian, and the \
    double-filtration table refines both sides: its row sums are the Betti numbers, its column \
    sums are the Hilbert function of the moduli ring, and its columns dominate the m-adic \
    filtration degree by degree";

/// Compare the m-adic associated graded of the moduli ring with the Betti
/// numbers computed from the graded model, then audit the double-filtration
/// table against both gradings.
pub fn check_grm(p: u32, q: u32) -> Result<ConjectureReport> {
    let t0 = Instant::now();
    let params = json!({ "p": p, "q": q });
    let gamma = NumericalSemigroup::from_pair(p, q)?;
    let delta = gamma.delta() as i64;
    let bounds = json!({ "degree_window": 2 * delta, "hilbert_hard_bound": 4 * delta + 8 });

    let betti = certified!(
        betti_from_model(p, q),
        GRM_ID,
        params,
        GRM_STATEMENT,
        bounds,
        t0
    );
    let table = certified!(
        filtration_table(p, q, None),
        GRM_ID,
        params,
        GRM_STATEMENT,
        bounds,
        t0
    );
    let pres = build_io(p, q)?;
    let quot = GradedQuotient::new(&pres)?;
    let hilbert = certified!(
        quot.hilbert_until_vanishing(4 * delta + 8),
        GRM_ID,
        params,
        GRM_STATEMENT,
        bounds,
        t0
    );
    let grm = gr_m_filtration(&pres, 2 * delta)?;
    let cum = m_adic_cumulative(&pres, 2 * delta)?;

    let grm_reversed: Vec<u64> = grm.iter().rev().copied().collect();
    let main_match = grm_reversed == betti;

    // the certified Hilbert vector must fit inside the table's column range
    let mut hilbert_padded = hilbert.clone();
    let fits = hilbert_padded.len() <= 2 * delta as usize + 1;
    hilbert_padded.resize(2 * delta as usize + 1, 0);
    let rows_match = table.row_sums() == betti;
    let cols_match = fits && table.col_sums() == hilbert_padded;

    // containment audit: the first filtration on each column of the table must
    // dominate the m-adic filtration of the moduli ring in the same degree
    let mut violations: Vec<Value> = Vec::new();
    for j in 0..=2 * delta {
        for i in 0..=j.min(delta) {
            let lhs: u64 = (0..=i).map(|ii| table.get(ii, j)).sum();
            let rhs = cum.get(&(j, j - i)).copied().unwrap_or(0);
            if lhs < rhs {
                violations.push(json!({ "i": i, "j": j, "column": lhs, "m_adic": rhs }));
            }
        }
    }

    let ok = main_match && rows_match && cols_match && violations.is_empty();
    let evidence = json!({
        "betti": betti,
        "grm": grm,
        "grm_reversed": grm_reversed,
        "hilbert": hilbert,
        "row_sums": table.row_sums(),
        "col_sums": table.col_sums(),
        "filtration": serde_json::to_value(&table)?,
        "audits": {
            "grm_reversed_matches_betti": main_match,
            "row_sums_match_betti": rows_match,
            "col_sums_match_hilbert": cols_match,
            "m_adic_containment": violations.is_empty(),
        },
        "containment_violations": violations,
    });
    let verdict = if ok { Verdict::Holds } else { Verdict::Fails };
    Ok(report(GRM_ID, params, verdict, GRM_STATEMENT, evidence, bounds, t0))
}

const TORIC_ID: &str = "toric-count";
const TORIC_STATEMENT: &str = "the toric fixed-point equations cut out a zero-dimensional \
    scheme whose coordinate ring has dimension equal to the number of semigroup modules";

/// Compare the dimension of the quotient by the toric fixed-point equations
/// with the count of semigroup modules. The stabilization certificate is that
/// re-deriving the ideal with the equation degree bound raised by one leaves
/// the trimmed Hilbert vector unchanged.
pub fn check_toric(generators: &[u32], degree_bound: Option<u32>) -> Result<ConjectureReport> {
    let t0 = Instant::now();
    let params = json!({ "generators": generators, "degree_bound": degree_bound });
    let gamma = NumericalSemigroup::new(generators)?;
    let gmax = *gamma.generators().iter().max().unwrap();
    let bound = degree_bound.unwrap_or(2 * gmax + gamma.conductor().max(0) as u32);
    let hard = 4 * bound as i64 + 8;
    let bounds = json!({ "equation_degree_bound": bound, "hilbert_hard_bound": hard });

    let module_count = enumerate_modules(&gamma).len() as u64;

    let mut hilberts = Vec::new();
    for b in [bound, bound + 1] {
        let pres = build_toric_equations(generators, Some(b))?;
        let quot = GradedQuotient::new(&pres)?;
        let h = certified!(
            quot.hilbert_until_vanishing(hard),
            TORIC_ID,
            params,
            TORIC_STATEMENT,
            bounds,
            t0
        );
        hilberts.push(h);
    }
    let stable = hilberts[0] == hilberts[1];
    let total: u64 = hilberts[0].iter().sum();

    let evidence = json!({
        "module_count": module_count,
        "quotient_dimension": total,
        "hilbert": hilberts[0],
        "hilbert_next_bound": hilberts[1],
        "stable": stable,
    });
    let verdict = if !stable {
        Verdict::InconclusiveAtBound
    } else if total == module_count {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    Ok(report(TORIC_ID, params, verdict, TORIC_STATEMENT, evidence, bounds, t0))
}

const PLANAR_ID: &str = "planar-dominance";
const PLANAR_STATEMENT: &str = "the ascending m-adic row of the jet-space local ring is \
    dominated entry by entry by the reference Betti row of the compactified Jacobian";

/// Compare the m-adic associated graded row of the jet-space local model,
/// padded with zeros on the right, against a reference Betti row. Records at
/// which positions the domination is strict.
pub fn check_planar(
    q: u32,
    s: u32,
    convention: Convention,
    ceiling: Option<i64>,
    reference: &[u64],
) -> Result<ConjectureReport> {
    let t0 = Instant::now();
    let params = json!({ "q": q, "s": s, "convention": convention });
    let curve = ParamCurve::planar_4_2q_s(q, s)?;
    let model = mrig_equations(&curve, convention, ceiling)?;
    let bounds = json!({ "precision": model.precision });
    let dims = certified!(
        artinian_dims(&model),
        PLANAR_ID,
        params,
        PLANAR_STATEMENT,
        bounds,
        t0
    );

    let mut row = dims.gr.clone();
    while row.last() == Some(&0) {
        row.pop();
    }
    if row.len() > reference.len() {
        return Err(Error::BadParameter(format!(
            "jet-model row has {} entries but the reference row only {}",
            row.len(),
            reference.len()
        )));
    }
    row.resize(reference.len(), 0);
    let dominated = row.iter().zip(reference).all(|(a, b)| a <= b);
    let strict: Vec<usize> = row
        .iter()
        .zip(reference)
        .enumerate()
        .filter_map(|(j, (a, b))| (a < b).then_some(j))
        .collect();

    let evidence = json!({
        "row": row,
        "reference": reference,
        "total": dims.total,
        "gr": dims.gr,
        "strict_positions": strict,
        "dominated": dominated,
    });
    let bounds = json!({ "precision": dims.precision, "stabilized_at": dims.stabilized_at });
    let verdict = if dominated { Verdict::Holds } else { Verdict::Fails };
    Ok(report(PLANAR_ID, params, verdict, PLANAR_STATEMENT, evidence, bounds, t0))
}

const FLAT_ID: &str = "flatness-window";
const FLAT_STATEMENT: &str = "over the inspected bidegree window every saturated fiber \
    dimension of the two-parameter family equals the corresponding double-filtration \
    intersection on the graded model";

/// Probe flatness of the two-parameter family slot by slot over a bidegree
/// window. Any strictly smaller saturated slot refutes the claim; a clean
/// window is consistency up to that window, reported as a pass.
pub fn check_flatness(p: u32, q: u32, window: Option<(i64, i64)>) -> Result<ConjectureReport> {
    let t0 = Instant::now();
    let params = json!({ "p": p, "q": q, "window": window });
    let probe = certified!(
        flatness_probe(p, q, window),
        FLAT_ID,
        params,
        FLAT_STATEMENT,
        json!({ "window": window }),
        t0
    );
    let bounds = json!({ "window": probe.window });
    let ok = probe.strict.is_empty();
    let evidence = json!({
        "strict_slots": probe.strict,
        "slots_checked": probe.slots.len(),
        "probe": serde_json::to_value(&probe)?,
    });
    let verdict = if ok { Verdict::Holds } else { Verdict::Fails };
    Ok(report(FLAT_ID, params, verdict, FLAT_STATEMENT, evidence, bounds, t0))
}

const SP_ID: &str = "parabolic-points";
const SP_STATEMENT: &str = "the parabolic fixed-point equations vanish at every flag tuple, \
    and an exhaustive integer search over the enumeration box finds no other zeros";

/// Verify that the parabolic equations vanish exactly on the flag tuples: every
/// enumerated tuple is a zero, and a search over the integer box used by the
/// enumeration recovers no further zeros. A zero on the box boundary makes the
/// search inconclusive rather than silently truncated.
pub fn check_sp_points(p: u32, q: u32) -> Result<ConjectureReport> {
    let t0 = Instant::now();
    let params = json!({ "p": p, "q": q });
    let gamma = NumericalSemigroup::from_pair(p, q)?;
    let pi = p as i64;
    let qi = q as i64;
    let lo = -pi * qi;
    let hi = pi * qi + gamma.conductor();
    let bounds = json!({ "box_lo": lo, "box_hi": hi });

    let mut expected = certified!(
        enumerate_flag_tuples(p, q),
        SP_ID,
        params,
        SP_STATEMENT,
        bounds,
        t0
    );
    expected.sort();
    let pres = build_parabolic_ideal(p, q)?;
    let nv = pres.context().len();

    // evaluate cheap generators first so non-zeros are rejected early
    let mut order: Vec<usize> = (0..pres.generators().len()).collect();
    let degree = |g: usize| {
        pres.generators()[g]
            .terms()
            .keys()
            .map(Monomial::total)
            .max()
            .unwrap_or(0)
    };
    order.sort_by_key(|&g| (degree(g), g));
    let vanishes_at = |entries: &[i64]| {
        let vals: Vec<Rational> = entries
            .iter()
            .map(|&e| Rational::from_integer(Integer::from(e)))
            .collect();
        order.iter().all(|&g| pres.generators()[g].eval(&vals).is_zero())
    };

    let all_vanish = expected.iter().all(|t| vanishes_at(&t.entries));

    // a generator of the form c*(x_1 + .. + x_n) + d pins the coordinate sum,
    // collapsing one dimension of the search box
    let mut sum_target: Option<i64> = None;
    for g in pres.generators() {
        if !g.terms().keys().all(|m| m.total() <= 1) {
            continue;
        }
        let coefs: Vec<Rational> = (0..nv)
            .map(|v| {
                g.terms()
                    .get(&Monomial::variable(nv, v))
                    .cloned()
                    .unwrap_or_else(Rational::zero)
            })
            .collect();
        let c = coefs[0].clone();
        if c.is_zero() || coefs.iter().any(|x| *x != c) {
            continue;
        }
        let t = -g.constant_term() / c;
        if t.is_integer() {
            sum_target = Some(i64::try_from(&t.to_integer()).expect("sum target fits i64"));
        }
        break;
    }

    let mut found: Vec<FlagTuple> = Vec::new();
    let mut acc = vec![0i64; nv];
    fn rec(
        i: usize,
        nv: usize,
        lo: i64,
        hi: i64,
        sum_target: Option<i64>,
        acc: &mut Vec<i64>,
        vanishes: &dyn Fn(&[i64]) -> bool,
        out: &mut Vec<FlagTuple>,
    ) {
        if i == nv - 1 {
            let candidates: Vec<i64> = match sum_target {
                Some(t) => {
                    let last = t - acc[..i].iter().sum::<i64>();
                    if (lo..=hi).contains(&last) {
                        vec![last]
                    } else {
                        vec![]
                    }
                }
                None => (lo..=hi).collect(),
            };
            for last in candidates {
                acc[i] = last;
                if vanishes(acc) {
                    out.push(FlagTuple { entries: acc.clone() });
                }
            }
            return;
        }
        for v in lo..=hi {
            acc[i] = v;
            rec(i + 1, nv, lo, hi, sum_target, acc, vanishes, out);
        }
    }
    rec(0, nv, lo, hi, sum_target, &mut acc, &vanishes_at, &mut found);

    if found
        .iter()
        .any(|t| t.entries.iter().any(|&e| e == lo || e == hi))
    {
        return Ok(report(
            SP_ID,
            params,
            Verdict::InconclusiveAtBound,
            SP_STATEMENT,
            json!({ "reason": "a zero of the equations lies on the search box boundary" }),
            bounds,
            t0,
        ));
    }

    let sets_match = found == expected;
    let evidence = json!({
        "tuple_count": expected.len(),
        "all_vanish": all_vanish,
        "box_zero_count": found.len(),
        "sets_match": sets_match,
        "tuples": expected.iter().map(|t| t.entries.clone()).collect::<Vec<_>>(),
        "sum_pinned_to": sum_target,
    });
    let ok = all_vanish && sets_match;
    let verdict = if ok { Verdict::Holds } else { Verdict::Fails };
    Ok(report(SP_ID, params, verdict, SP_STATEMENT, evidence, bounds, t0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_serialization() {
        assert_eq!(serde_json::to_string(&Verdict::Holds).unwrap(), "\"holds\"");
        assert_eq!(serde_json::to_string(&Verdict::Fails).unwrap(), "\"fails\"");
        assert_eq!(
            serde_json::to_string(&Verdict::InconclusiveAtBound).unwrap(),
            "\"inconclusive_at_bound\""
        );
    }

    #[test]
    fn exit_code_precedence() {
        let mk = |v| ConjectureReport {
            id: "x".into(),
            parameters: json!({}),
            verdict: v,
            statement: String::new(),
            evidence: json!({}),
            bounds: json!({}),
            wall_ms: 7,
        };
        assert_eq!(exit_code(&[]), 0);
        assert_eq!(exit_code(&[mk(Verdict::Holds)]), 0);
        assert_eq!(exit_code(&[mk(Verdict::Holds), mk(Verdict::InconclusiveAtBound)]), 2);
        assert_eq!(
            exit_code(&[mk(Verdict::Fails), mk(Verdict::InconclusiveAtBound)]),
            1
        );
        assert_eq!(mk(Verdict::Holds).without_walltime().wall_ms, 0);
    }

    #[test]
    fn reference_rows_load() {
        assert_eq!(
            reference_betti_row(3, 7).unwrap(),
            vec![1, 3, 4, 4, 4, 3, 2, 1, 1]
        );
        assert_eq!(
            reference_betti_row(3, 9).unwrap(),
            vec![1, 3, 4, 4, 4, 4, 3, 2, 1, 1]
        );
        assert!(reference_betti_row(5, 11).is_none());
    }

    #[test]
    fn grm_verdicts_small() {
        let r23 = check_grm(2, 3).unwrap();
        assert_eq!(r23.verdict, Verdict::Holds);
        let r34 = check_grm(3, 4).unwrap();
        assert_eq!(r34.verdict, Verdict::Holds);
        assert_eq!(r34.evidence["grm"], json!([1, 2, 1, 1]));
        assert_eq!(r34.evidence["grm_reversed"], json!([1, 1, 2, 1]));
        assert_eq!(r34.evidence["col_sums"], json!([1, 0, 1, 1, 1, 0, 1]));
    }

    #[test]
    fn toric_pair_verdict() {
        let r = check_toric(&[2, 3], None).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.evidence["module_count"], json!(2));
        assert_eq!(r.evidence["quotient_dimension"], json!(2));
    }

    #[test]
    fn planar_verdict_truncated() {
        let reference = reference_betti_row(3, 7).unwrap();
        let r = check_planar(3, 7, Convention::Strict, Some(12), &reference).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.evidence["strict_positions"], json!([5, 6, 7, 8]));
        assert_eq!(r.evidence["total"], json!(19));
    }

    #[test]
    fn flatness_verdict_small() {
        let r = check_flatness(2, 3, Some((4, 4))).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.evidence["strict_slots"], json!([]));
    }

    #[test]
    fn sp_points_verdict_small() {
        let r = check_sp_points(2, 3).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.evidence["tuple_count"], json!(3));
        assert_eq!(r.evidence["box_zero_count"], json!(3));
        assert_eq!(r.evidence["sum_pinned_to"], json!(3));
    }
}
