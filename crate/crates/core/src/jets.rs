//! Local models of rigidified arc spaces for monomial and near-monomial plane
//! curves: exact implicitization of the parametrization, recentring of the
//! coefficient unknowns at the unique support point allowed by the chosen
//! rigidification, triangular elimination of the solvable coefficients in the
//! local ring, and dimensions of the resulting Artinian quotient together with
//! its associated graded pieces.

use crate::exactalg::{rat, Echelon, ExactMatrix, Monomial, Rational, SparsePoly, VariableContext};
use crate::semigroups::NumericalSemigroup;
use crate::{Error, Result};
use num::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

/// How the two scaling/translation degrees of freedom of the parametrized curve
/// are fixed before counting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// Pin the coefficient of the lower-order y-term to 1 and tie the two
    /// subleading coefficients by dx * f1 = dy * e1. The tie is tangent to the
    /// translation orbit (both sides shift by dx * dy under t -> t + b), so
    /// this cuts translation only to order b^(s - 2q) on the planar family:
    /// the ring keeps a nilpotent translation modulus and stabilizes later
    /// than under the strict pins. At s = 2q + 1 the slice misses the curve
    /// entirely and model construction reports a conflicting rigidification.
    Pinned,
    /// Pin e1 = 0 and give f1 its value on the curve itself. Both conditions
    /// are transverse to translation; this is the convention behind all
    /// reference comparisons.
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Toric { p: u32, q: u32 },
    Planar { q: u32, s: u32 },
}

/// A monic parametrized plane curve t -> (x(t), y(t)) with deg x < deg y.
#[derive(Debug, Clone)]
pub struct ParamCurve {
    x_terms: Vec<(u32, Rational)>,
    y_terms: Vec<(u32, Rational)>,
    dx: u32,
    dy: u32,
    kind: Kind,
}

impl ParamCurve {
    /// The monomial curve t -> (t^p, t^q) for coprime 2 <= p < q.
    pub fn toric(p: u32, q: u32) -> Result<Self> {
        if p < 2 || q <= p {
            return Err(Error::BadParameter(format!(
                "need 2 <= p < q, got ({p}, {q})"
            )));
        }
        if num::integer::gcd(p, q) != 1 {
            return Err(Error::NotCoprime { p, q });
        }
        Ok(ParamCurve {
            x_terms: vec![(p, Rational::one())],
            y_terms: vec![(q, Rational::one())],
            dx: p,
            dy: q,
            kind: Kind::Toric { p, q },
        })
    }

    /// The family member t -> (t^4, t^{2q} + t^s) with q, s odd and s > 2q > 4.
    pub fn planar_4_2q_s(q: u32, s: u32) -> Result<Self> {
        if !(s > 2 * q && 2 * q > 4 && q % 2 == 1 && s % 2 == 1) {
            return Err(Error::BadParameter(format!(
                "need odd q, s with s > 2q > 4, got (q, s) = ({q}, {s})"
            )));
        }
        Ok(ParamCurve {
            x_terms: vec![(4, Rational::one())],
            y_terms: vec![(2 * q, Rational::one()), (s, Rational::one())],
            dx: 4,
            dy: s,
            kind: Kind::Planar { q, s },
        })
    }

    pub fn x_degree(&self) -> u32 {
        self.dx
    }

    pub fn y_degree(&self) -> u32 {
        self.dy
    }

    /// Coefficient of t^d in x(t).
    fn x_coeff(&self, d: u32) -> Rational {
        self.x_terms
            .iter()
            .find(|(e, _)| *e == d)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Coefficient of t^d in y(t).
    fn y_coeff(&self, d: u32) -> Rational {
        self.y_terms
            .iter()
            .find(|(e, _)| *e == d)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Dense t-expansion of x^a y^b up to degree maxd inclusive.
    fn t_expansion(&self, a: u32, b: u32, maxd: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); maxd + 1];
        out[0] = Rational::one();
        let mul_by = |acc: &[Rational], terms: &[(u32, Rational)]| {
            let mut next = vec![Rational::zero(); maxd + 1];
            for (d, c) in acc.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (e, v) in terms {
                    let dd = d + *e as usize;
                    if dd <= maxd {
                        next[dd] += c * v;
                    }
                }
            }
            next
        };
        for _ in 0..a {
            out = mul_by(&out, &self.x_terms);
        }
        for _ in 0..b {
            out = mul_by(&out, &self.y_terms);
        }
        out
    }
}

/// Minimal polynomial F(x, y), monic in y^dx, with F(x(t), y(t)) = 0: solved as
/// the one-dimensional kernel of the t-expansion matrix over the candidate
/// monomials {x^a y^b : dx a + dy b <= dx dy, b < dx} plus y^dx. The residual
/// is verified to vanish exactly.
pub fn implicitize(curve: &ParamCurve) -> Result<SparsePoly> {
    let (dx, dy) = (curve.dx, curve.dy);
    let maxd = (dx as usize) * (dy as usize);
    let mut cands: Vec<(u32, u32)> = Vec::new();
    for b in 0..dx {
        let mut a = 0u32;
        while (dx as u64) * (a as u64) + (dy as u64) * (b as u64) <= (dx as u64) * (dy as u64) {
            cands.push((a, b));
            a += 1;
        }
    }
    cands.push((0, dx));
    let cols: Vec<Vec<Rational>> = cands
        .iter()
        .map(|&(a, b)| curve.t_expansion(a, b, maxd))
        .collect();
    let mut rows = Vec::with_capacity(maxd + 1);
    for d in 0..=maxd {
        rows.push(cols.iter().map(|c| c[d].clone()).collect::<Vec<_>>());
    }
    let matrix = ExactMatrix::from_rows(rows);
    let kernel = matrix.kernel_basis();
    if kernel.is_empty() {
        return Err(Error::KernelEmpty { bound: cands.len() });
    }
    if kernel.len() > 1 {
        return Err(Error::BadParameter(format!(
            "implicit equation not unique: kernel has dimension {}",
            kernel.len()
        )));
    }
    let v = &kernel[0];
    let top = cands.len() - 1;
    if v[top].is_zero() {
        return Err(Error::BadParameter(
            "implicit kernel misses the monic y-power".into(),
        ));
    }
    let scale = Rational::one() / v[top].clone();
    let ctx = VariableContext::new(&[("x", 1), ("y", 1)]);
    let mut terms = Vec::new();
    let mut residual = vec![Rational::zero(); maxd + 1];
    for (k, &(a, b)) in cands.iter().enumerate() {
        let c = &v[k] * &scale;
        if c.is_zero() {
            continue;
        }
        for (d, t) in cols[k].iter().enumerate() {
            residual[d] += &c * t;
        }
        terms.push((Monomial::from_exps(vec![a, b]), c));
    }
    assert!(
        residual.iter().all(|r| r.is_zero()),
        "implicitization residual must vanish exactly"
    );
    Ok(SparsePoly::from_terms(&ctx, terms))
}

/// Remaining equations of the rigidified local model after recentring at the
/// support point and eliminating every solvable coefficient: a finite local
/// scheme presentation in the surviving variables, exact modulo the (precision)
/// power of the maximal ideal.
#[derive(Debug, Clone)]
pub struct LocalModel {
    pub context: Arc<VariableContext>,
    pub equations: Vec<SparsePoly>,
    pub precision: i64,
    pub convention: Convention,
}

/// Build the local model of the rigidified space for the curve under the given
/// convention. `ceiling` overrides the working precision (default: twice the
/// genus of the exponent semigroup plus four).
pub fn mrig_equations(
    curve: &ParamCurve,
    convention: Convention,
    ceiling: Option<i64>,
) -> Result<LocalModel> {
    let (dx, dy) = (curve.dx, curve.dy);
    let nv = (dx + dy) as usize;
    let mut names: Vec<String> = (1..=dx).map(|i| format!("E{i}")).collect();
    names.extend((1..=dy).map(|j| format!("F{j}")));
    let named: Vec<(&str, i64)> = names.iter().map(|n| (n.as_str(), 1)).collect();
    let ctx = VariableContext::new(&named);
    let e_var = |i: u32| (i - 1) as usize;
    let f_var = |j: u32| (dx + j - 1) as usize;

    // Coordinates of the support point: on the translation family t -> t + b the
    // pin equations are monomials in b with 0 as their only rational root, so the
    // support point is the curve's own coefficient vector.
    let mut pt = vec![Rational::zero(); nv];
    for i in 1..=dx {
        pt[e_var(i)] = curve.x_coeff(dx - i);
    }
    for j in 1..=dy {
        pt[f_var(j)] = curve.y_coeff(dy - j);
    }

    let mut pinned: BTreeMap<usize, Rational> = BTreeMap::new();
    let mut substitute_e1_by_f1 = false;
    match (curve.kind, convention) {
        (Kind::Toric { .. }, Convention::Strict) => {
            pinned.insert(e_var(1), Rational::zero());
            pinned.insert(f_var(1), Rational::zero());
        }
        (Kind::Toric { .. }, Convention::Pinned) => {
            return Err(Error::BadParameter(
                "the pinned convention applies to the planar family only".into(),
            ));
        }
        (Kind::Planar { .. }, Convention::Strict) => {
            pinned.insert(e_var(1), Rational::zero());
            pinned.insert(f_var(1), pt[f_var(1)].clone());
        }
        (Kind::Planar { q, s }, Convention::Pinned) => {
            // the two pins must hold simultaneously at the support point
            let lhs = pt[f_var(1)].clone() * rat(dx as i64);
            let rhs = pt[e_var(1)].clone() * rat(dy as i64);
            if lhs != rhs {
                return Err(Error::ConflictingRigidification(format!(
                    "no support point: {dx} f1 = {lhs} but {dy} e1 = {rhs} on the curve"
                )));
            }
            pinned.insert(f_var(s - 2 * q), Rational::one());
            if s - 2 * q == 1 {
                pinned.insert(e_var(1), Rational::new((dx as i64).into(), (dy as i64).into()));
            } else {
                substitute_e1_by_f1 = true;
            }
        }
    }
    for (&v, val) in &pinned {
        if &pt[v] != val {
            return Err(Error::ConflictingRigidification(format!(
                "support point has {} = {} but the pin requires {}",
                ctx.name(v),
                pt[v],
                val
            )));
        }
    }

    let precision = match ceiling {
        Some(n) => {
            if n < 3 {
                return Err(Error::BadParameter("precision ceiling must be at least 3".into()));
            }
            n
        }
        None => {
            let gens: Vec<u32> = match curve.kind {
                Kind::Toric { p, q } => vec![p, q],
                Kind::Planar { q, s } => vec![4, 2 * q, s],
            };
            let gamma = NumericalSemigroup::new(&gens)?;
            2 * gamma.gaps().len() as i64 + 4
        }
    };
    let bound = precision - 1;

    // recentred coefficient entries: pinned -> constant, else point + variable
    let coeff_poly = |v: usize| -> SparsePoly {
        if let Some(c) = pinned.get(&v) {
            SparsePoly::constant(&ctx, c.clone())
        } else {
            SparsePoly::constant(&ctx, pt[v].clone())
                .add(&SparsePoly::variable(&ctx, v))
                .expect("same context")
        }
    };
    let mut xc: BTreeMap<usize, SparsePoly> = BTreeMap::new();
    xc.insert(dx as usize, SparsePoly::constant(&ctx, Rational::one()));
    for i in 1..=dx {
        xc.insert((dx - i) as usize, coeff_poly(e_var(i)));
    }
    if substitute_e1_by_f1 {
        let factor = Rational::new((dx as i64).into(), (dy as i64).into());
        xc.insert((dx - 1) as usize, coeff_poly(f_var(1)).scale(&factor));
    }
    let mut yc: BTreeMap<usize, SparsePoly> = BTreeMap::new();
    yc.insert(dy as usize, SparsePoly::constant(&ctx, Rational::one()));
    for j in 1..=dy {
        yc.insert((dy - j) as usize, coeff_poly(f_var(j)));
    }

    let maxd = (dx as usize) * (dy as usize);
    let poly_t_mul = |a: &BTreeMap<usize, SparsePoly>,
                      b: &BTreeMap<usize, SparsePoly>|
     -> Result<BTreeMap<usize, SparsePoly>> {
        let mut out: BTreeMap<usize, SparsePoly> = BTreeMap::new();
        for (da, ca) in a {
            for (db, cb) in b {
                let d = da + db;
                if d > maxd {
                    continue;
                }
                let prod = ca.mul(cb)?;
                match out.remove(&d) {
                    Some(acc) => {
                        out.insert(d, acc.add(&prod)?);
                    }
                    None => {
                        out.insert(d, prod);
                    }
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    };

    let implicit = implicitize(curve)?;
    let max_a = implicit.terms().keys().map(|m| m.exp(0)).max().unwrap_or(0);
    let max_b = implicit.terms().keys().map(|m| m.exp(1)).max().unwrap_or(0);
    let mut xp: Vec<BTreeMap<usize, SparsePoly>> = vec![BTreeMap::from([(
        0usize,
        SparsePoly::constant(&ctx, Rational::one()),
    )])];
    for _ in 0..max_a {
        let next = poly_t_mul(xp.last().unwrap(), &xc)?;
        xp.push(next);
    }
    let mut yp: Vec<BTreeMap<usize, SparsePoly>> = vec![BTreeMap::from([(
        0usize,
        SparsePoly::constant(&ctx, Rational::one()),
    )])];
    for _ in 0..max_b {
        let next = poly_t_mul(yp.last().unwrap(), &yc)?;
        yp.push(next);
    }

    let mut eqs: BTreeMap<usize, SparsePoly> = BTreeMap::new();
    for (m, c) in implicit.terms() {
        let term = poly_t_mul(&xp[m.exp(0) as usize], &yp[m.exp(1) as usize])?;
        for (d, poly) in term {
            let scaled = poly.scale(c);
            match eqs.remove(&d) {
                Some(acc) => {
                    eqs.insert(d, acc.add(&scaled)?);
                }
                None => {
                    eqs.insert(d, scaled);
                }
            }
        }
    }
    eqs.retain(|_, v| !v.is_zero());
    for (d, eq) in &eqs {
        let c0 = eq.constant_term();
        if !c0.is_zero() {
            return Err(Error::SupportNotSinglePoint(format!(
                "equation at t^{d} has constant term {c0} after recentring"
            )));
        }
    }

    // triangular elimination of the solvable F-coefficients in the local ring
    let mut elim: BTreeMap<usize, SparsePoly> = BTreeMap::new();
    let subst_all = |poly: &SparsePoly, elim: &BTreeMap<usize, SparsePoly>| -> Result<SparsePoly> {
        let mut out = poly.truncate_at(bound);
        loop {
            let mut changed = false;
            for (&vi, expr) in elim {
                if out.max_exp(vi) > 0 {
                    out = out.substitute_truncated(vi, expr, bound)?;
                    changed = true;
                }
            }
            if !changed {
                return Ok(out);
            }
        }
    };

    // F1 stands in for the tied-off E1 when the pin couples them, so it is a
    // surviving modulus, not an eliminable coefficient.
    let unknown_f: Vec<u32> = (1..=dy)
        .filter(|j| !pinned.contains_key(&f_var(*j)))
        .filter(|j| !(substitute_e1_by_f1 && *j == 1))
        .collect();
    for j in unknown_f {
        let vi = f_var(j);
        let preferred = maxd - j as usize;
        let mut cand_ds: Vec<usize> = vec![preferred];
        let mut others: Vec<usize> = eqs.keys().copied().filter(|&d| d != preferred).collect();
        others.sort_unstable_by(|a, b| b.cmp(a));
        cand_ds.extend(others);
        let mut chosen: Option<(usize, SparsePoly, Rational)> = None;
        for d in cand_ds {
            let Some(eq) = eqs.get(&d) else { continue };
            let etry = subst_all(eq, &elim)?;
            let c = etry
                .terms()
                .get(&Monomial::variable(nv, vi))
                .cloned()
                .unwrap_or_else(Rational::zero);
            if !c.is_zero() {
                chosen = Some((d, etry, c));
                break;
            }
        }
        let Some((d, e, c)) = chosen else {
            return Err(Error::BadParameter(format!(
                "coefficient F{j} is not eliminable from any equation"
            )));
        };
        eqs.remove(&d);
        // fixed-point iteration v <- v - E(v)/c gains one order of accuracy per
        // round, so precision + 1 rounds always suffice
        let inv_c = Rational::one() / c;
        let mut v = SparsePoly::zero(&ctx);
        for _ in 0..=precision {
            let ev = e.substitute_truncated(vi, &v, bound)?;
            if ev.is_zero() {
                break;
            }
            v = v.sub(&ev.scale(&inv_c))?.truncate_at(bound);
        }
        let residue = e.substitute_truncated(vi, &v, bound)?;
        assert!(residue.is_zero(), "elimination of F{j} did not converge");
        assert_eq!(v.max_exp(vi), 0, "solved expression must not mention F{j}");
        elim.insert(vi, v);
    }

    let mut remaining = Vec::new();
    let mut live = vec![false; nv];
    let mut ds: Vec<usize> = eqs.keys().copied().collect();
    ds.sort_unstable_by(|a, b| b.cmp(a));
    for d in ds {
        let e = subst_all(&eqs[&d], &elim)?;
        if e.is_zero() {
            continue;
        }
        for m in e.terms().keys() {
            for (k, &ex) in m.exps().iter().enumerate() {
                if ex > 0 {
                    live[k] = true;
                }
            }
        }
        remaining.push(e);
    }
    let kept: Vec<usize> = (0..nv).filter(|&k| live[k]).collect();
    let live_named: Vec<(&str, i64)> = kept.iter().map(|&k| (ctx.name(k), 1)).collect();
    let live_ctx = VariableContext::new(&live_named);
    let mut mapping: Vec<Option<usize>> = vec![None; nv];
    for (new_i, &k) in kept.iter().enumerate() {
        mapping[k] = Some(new_i);
    }
    let equations = remaining
        .into_iter()
        .map(|e| e.reindex(&live_ctx, &mapping))
        .collect::<Result<Vec<_>>>()?;
    Ok(LocalModel {
        context: live_ctx,
        equations,
        precision,
        convention,
    })
}

/// Total dimension and associated graded dimensions of the Artinian local ring
/// cut out by a local model.
#[derive(Debug, Clone, Serialize)]
pub struct ArtinianDims {
    pub total: u64,
    pub gr: Vec<u64>,
    pub stabilized_at: i64,
    pub precision: i64,
}

fn monomials_total_below(nvars: usize, k: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    if k <= 0 {
        return out;
    }
    let mut acc = vec![0u32; nvars];
    fn rec(i: usize, rem: i64, acc: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == acc.len() {
            out.push(Monomial::from_exps(acc.clone()));
            return;
        }
        for e in 0..=rem {
            acc[i] = e as u32;
            rec(i + 1, rem - e, acc, out);
        }
        acc[i] = 0;
    }
    rec(0, k - 1, &mut acc, &mut out);
    out.sort();
    out
}

/// Compute the quotient dimensions of the model. The ideal image modulo the k-th
/// power of the maximal ideal is spanned by monomial multiples of the equations
/// with all degree >= k terms dropped, so precision-(precision - 1) agreement
/// certifies (by Nakayama) that the quotient is exactly the Artinian ring and
/// the total can no longer move. Graded pieces come from rank jumps when the
/// monomials of each total degree join the ideal echelon, from the top down.
pub fn artinian_dims(model: &LocalModel) -> Result<ArtinianDims> {
    let n = model.precision;
    let nvars = model.context.len();
    let monos = monomials_total_below(nvars, n);
    let index: BTreeMap<Monomial, u32> = monos
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i as u32))
        .collect();

    let build = |k: i64| -> (Echelon, usize) {
        let mut ech = Echelon::new();
        let mut count = 0usize;
        for m in &monos {
            if (m.total() as i64) < k {
                count += 1;
            }
        }
        for g in &model.equations {
            for u in &monos {
                if (u.total() as i64) >= k {
                    continue;
                }
                let mut row: Vec<(u32, Rational)> = Vec::new();
                for (m, c) in g.terms() {
                    let mm = m.mul(u);
                    if (mm.total() as i64) < k {
                        row.push((index[&mm], c.clone()));
                    }
                }
                if row.is_empty() {
                    continue;
                }
                row.sort_unstable_by_key(|e| e.0);
                ech.add_rational_row(&row);
            }
        }
        (ech, count)
    };

    let (ech_lo, count_lo) = build(n - 1);
    let total_lo = (count_lo - ech_lo.rank()) as u64;
    let (ech_hi, count_hi) = build(n);
    let total = (count_hi - ech_hi.rank()) as u64;
    if total_lo != total {
        return Err(Error::WindowExhausted {
            what: format!(
                "local ring dimension still moving between precisions {} and {n}",
                n - 1
            ),
            bound: n as usize,
        });
    }

    let base = ech_hi.rank();
    let mut ech = ech_hi.clone();
    let mut dims_cum = vec![0u64; n as usize + 1];
    for i in (0..n).rev() {
        for m in &monos {
            if m.total() as i64 == i {
                ech.add_rational_row(&[(index[m], Rational::one())]);
            }
        }
        dims_cum[i as usize] = (ech.rank() - base) as u64;
    }
    assert_eq!(dims_cum[0], total, "order-zero cumulative piece is the whole ring");
    let mut gr: Vec<u64> = (0..n as usize)
        .map(|i| dims_cum[i] - dims_cum[i + 1])
        .collect();
    while gr.last() == Some(&0) {
        gr.pop();
    }
    Ok(ArtinianDims {
        total,
        gr,
        stabilized_at: n - 1,
        precision: n,
    })
}
