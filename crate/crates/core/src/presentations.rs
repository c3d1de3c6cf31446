//! Builders for every ideal presentation the toolkit computes with: the conserved
//! coefficient relations of the Artinian ring of the cusp x^q = y^p, the fractional
//! power-series relations in the e-variables alone, the two-parameter bigraded
//! family over Q[eps, s], its equivariant (s = 1) specialization, monomial-curve
//! equation systems for general semigroups, and the parabolic substitution ideals
//! whose zero locus is the flag-tuple set.
//!
//! A presentation is a variable context, a generator list, and a declared
//! homogeneity level that is audited at construction. Content hashes over a
//! canonical serialization key the on-disk caches.

use crate::exactalg::{
    rat, rational_power_series, series_mul, Monomial, Rational, SparsePoly, VariableContext,
};
use crate::semigroups::NumericalSemigroup;
use crate::{Error, Result};
use num::{One, Zero};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

/// Declared homogeneity level of a presentation, audited at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Homogeneity {
    None,
    Graded,
    Bigraded,
}

/// Ambient variables plus homogeneous generators of an ideal.
#[derive(Debug, Clone)]
pub struct IdealPresentation {
    context: Arc<VariableContext>,
    generators: Vec<SparsePoly>,
    homogeneity: Homogeneity,
}

impl IdealPresentation {
    /// Audit and wrap a generator list. Zero generators are dropped; every
    /// surviving generator must be homogeneous at the declared level.
    pub fn new(
        context: Arc<VariableContext>,
        generators: Vec<SparsePoly>,
        homogeneity: Homogeneity,
    ) -> Result<Self> {
        let generators: Vec<SparsePoly> = generators.into_iter().filter(|g| !g.is_zero()).collect();
        for (k, g) in generators.iter().enumerate() {
            if g.context() != &context {
                return Err(Error::ContextMismatch(format!("generator {k}")));
            }
            match homogeneity {
                Homogeneity::None => {}
                Homogeneity::Graded => {
                    g.homogeneous_degree1()
                        .map_err(|e| Error::NonHomogeneous(format!("generator {k}: {e}")))?;
                }
                Homogeneity::Bigraded => {
                    g.homogeneous_degree1()
                        .map_err(|e| Error::NonHomogeneous(format!("generator {k}: {e}")))?;
                    g.homogeneous_degree2()
                        .map_err(|e| Error::NonHomogeneous(format!("generator {k}: {e}")))?;
                }
            }
        }
        Ok(IdealPresentation {
            context,
            generators,
            homogeneity,
        })
    }

    pub fn context(&self) -> &Arc<VariableContext> {
        &self.context
    }

    pub fn generators(&self) -> &[SparsePoly] {
        &self.generators
    }

    pub fn homogeneity(&self) -> Homogeneity {
        self.homogeneity
    }

    /// Deterministic serialization: variables with weights, then generators as
    /// sorted (exponents, coefficient) lists.
    pub fn canonical_json(&self) -> String {
        #[derive(Serialize)]
        struct Shape<'a> {
            variables: Vec<(&'a str, i64, Option<i64>)>,
            homogeneity: Homogeneity,
            generators: Vec<Vec<(Vec<u32>, String)>>,
        }
        let ctx = &self.context;
        let variables = (0..ctx.len())
            .map(|i| {
                (
                    ctx.name(i),
                    ctx.weights1()[i],
                    ctx.weights2().map(|w| w[i]),
                )
            })
            .collect();
        let generators = self
            .generators
            .iter()
            .map(|g| {
                g.terms()
                    .iter()
                    .map(|(m, c)| (m.exps().to_vec(), c.to_string()))
                    .collect()
            })
            .collect();
        serde_json::to_string(&Shape {
            variables,
            homogeneity: self.homogeneity,
            generators,
        })
        .expect("serialization cannot fail")
    }

    /// Hex digest of the canonical serialization; cache key component.
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.canonical_json().as_bytes());
        let out = h.finalize();
        out.iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn require_coprime(p: u32, q: u32) -> Result<()> {
    if p == 0 || q == 0 || num::integer::gcd(p, q) != 1 {
        Err(Error::NotCoprime { p, q })
    } else {
        Ok(())
    }
}

fn big_binomial(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let mut acc = Rational::one();
    for i in 1..=k {
        acc = acc * Rational::from_integer((n - k + i).into())
            / Rational::from_integer(i.into());
    }
    acc
}

/// Relations of the Artinian cusp ring in both coefficient sets: the w^1..w^{p+q-2}
/// coefficients of q e'(w) f(w) - p e(w) f'(w) with e(w) = 1 + e2 w^2 + .. + ep w^p
/// and f(w) = 1 + f2 w^2 + .. + fq w^q. The w^{p+q-1} coefficient vanishes
/// identically; the builder asserts this.
pub fn build_io(p: u32, q: u32) -> Result<IdealPresentation> {
    require_coprime(p, q)?;
    if p < 2 || q < 2 {
        return Err(Error::BadParameter(format!(
            "need p, q >= 2, got ({p}, {q})"
        )));
    }
    let mut vars: Vec<(String, i64)> = Vec::new();
    for i in 2..=p {
        vars.push((format!("e{i}"), i as i64));
    }
    for j in 2..=q {
        vars.push((format!("f{j}"), j as i64));
    }
    let named: Vec<(&str, i64)> = vars.iter().map(|(n, w)| (n.as_str(), *w)).collect();
    let ctx = VariableContext::new(&named);
    let var_by_name = |n: &str| SparsePoly::variable(&ctx, ctx.index_of(n).unwrap());

    let mut e = vec![SparsePoly::zero(&ctx); p as usize + 1];
    e[0] = SparsePoly::constant(&ctx, rat(1));
    for i in 2..=p {
        e[i as usize] = var_by_name(&format!("e{i}"));
    }
    let mut f = vec![SparsePoly::zero(&ctx); q as usize + 1];
    f[0] = SparsePoly::constant(&ctx, rat(1));
    for j in 2..=q {
        f[j as usize] = var_by_name(&format!("f{j}"));
    }
    let de: Vec<SparsePoly> = (0..p as usize)
        .map(|i| e[i + 1].scale(&rat(i as i64 + 1)))
        .collect();
    let df: Vec<SparsePoly> = (0..q as usize)
        .map(|j| f[j + 1].scale(&rat(j as i64 + 1)))
        .collect();
    let keep = (p + q) as usize;
    let t1 = series_mul(&de, &f, keep)?;
    let t2 = series_mul(&e, &df, keep)?;
    let mut diff = Vec::with_capacity(keep);
    for k in 0..keep {
        let a = t1.get(k).cloned().unwrap_or_else(|| SparsePoly::zero(&ctx));
        let b = t2.get(k).cloned().unwrap_or_else(|| SparsePoly::zero(&ctx));
        diff.push(a.scale(&rat(q as i64)).sub(&b.scale(&rat(p as i64)))?);
    }
    assert!(
        diff[keep - 1].is_zero(),
        "top conserved coefficient must vanish"
    );
    let gens: Vec<SparsePoly> = diff[1..keep - 1].to_vec();
    for (k, g) in gens.iter().enumerate() {
        assert!(!g.is_zero(), "missing relation at index {k}");
        assert_eq!(g.homogeneous_degree1()?, k as i64 + 2);
    }
    IdealPresentation::new(ctx, gens, Homogeneity::Graded)
}

/// Relations in the e-variables alone: the w^{q+1}..w^{q+p-1} coefficients of the
/// binomial expansion of e(w)^{q/p}.
pub fn build_g_ideal(p: u32, q: u32) -> Result<IdealPresentation> {
    require_coprime(p, q)?;
    if p < 2 {
        return Err(Error::BadParameter("need p >= 2".into()));
    }
    // temporary context with w adjoined for the series expansion
    let mut tmp: Vec<(String, i64)> = vec![("w".into(), 1)];
    for i in 2..=p {
        tmp.push((format!("e{i}"), i as i64));
    }
    let named: Vec<(&str, i64)> = tmp.iter().map(|(n, w)| (n.as_str(), *w)).collect();
    let ctx_w = VariableContext::new(&named);
    let w_idx = 0usize;
    let mut e = SparsePoly::constant(&ctx_w, rat(1));
    for i in 2..=p {
        let vi = ctx_w.index_of(&format!("e{i}")).unwrap();
        let mut exps = vec![0u32; ctx_w.len()];
        exps[w_idx] = i;
        exps[vi] = 1;
        e = e.add(&SparsePoly::from_terms(
            &ctx_w,
            [(Monomial::from_exps(exps), rat(1))],
        ))?;
    }
    let exponent = Rational::new((q as i64).into(), (p as i64).into());
    let series = rational_power_series(&e, &exponent, w_idx, q + p - 1)?;

    let vars: Vec<(String, i64)> = (2..=p).map(|i| (format!("e{i}"), i as i64)).collect();
    let named: Vec<(&str, i64)> = vars.iter().map(|(n, w)| (n.as_str(), *w)).collect();
    let ctx = VariableContext::new(&named);
    let mapping: Vec<Option<usize>> = (0..ctx_w.len())
        .map(|k| if k == w_idx { None } else { Some(k - 1) })
        .collect();
    let mut gens = Vec::new();
    for i in 1..p {
        let g = series.coeff_of(w_idx, q + i).reindex(&ctx, &mapping)?;
        assert!(!g.is_zero(), "missing series coefficient at w^{}", q + i);
        gens.push(g);
    }
    IdealPresentation::new(ctx, gens, Homogeneity::Graded)
}

/// Options for the two-parameter family builder.
#[derive(Debug, Clone, Default)]
pub struct FamilyOptions {
    /// Replace the default constant q(p-1)/2 in e1 = const * s.
    pub e1_coefficient: Option<Rational>,
    /// Keep f1 as a fresh variable instead of pinning f1 = p(q-1)/2 * s.
    pub f1_variable: bool,
}

/// The full indexed family of z-coefficients F_0..F_pq (F_pq is identically zero).
#[derive(Debug, Clone)]
pub struct FFamily {
    pub context: Arc<VariableContext>,
    pub coeffs: Vec<SparsePoly>,
    p: u32,
    q: u32,
}

impl FFamily {
    pub fn eps_index(&self) -> usize {
        0
    }

    pub fn s_index(&self) -> usize {
        1
    }

    pub fn e_index(&self, i: u32) -> usize {
        debug_assert!((2..=self.p).contains(&i));
        i as usize
    }

    pub fn f_index(&self, j: u32) -> usize {
        debug_assert!((2..=self.q).contains(&j));
        (self.p + j - 1) as usize
    }

    pub fn f1_index(&self) -> Option<usize> {
        let n = (self.p + self.q) as usize;
        (self.context.len() > n).then_some(n)
    }

    /// The nonzero coefficients as an audited bigraded presentation.
    pub fn presentation(&self) -> Result<IdealPresentation> {
        IdealPresentation::new(
            Arc::clone(&self.context),
            self.coeffs.clone(),
            Homogeneity::Bigraded,
        )
    }
}

/// Bigraded family over Q[eps, s]: F_d is the z^d coefficient of
/// prod_{j<q} A(z + j p s eps) - prod_{i<p} B(z + i q s eps) with
/// A(z) = z^p + sum_i p eps e_i z^{p-i}, B(z) = z^q + sum_j q eps f_j z^{q-j},
/// e1 = q(p-1)/2 s and f1 = p(q-1)/2 s unless overridden. Weights:
/// eps = (1,0), s = (0,1), e_i = f_i = (i-1, i).
pub fn build_f_family(p: u32, q: u32, opts: &FamilyOptions) -> Result<FFamily> {
    require_coprime(p, q)?;
    if p < 2 || q < 2 {
        return Err(Error::BadParameter(format!(
            "need p, q >= 2, got ({p}, {q})"
        )));
    }
    let mut vars: Vec<(String, i64, i64)> = vec![("eps".into(), 1, 0), ("s".into(), 0, 1)];
    for i in 2..=p {
        vars.push((format!("e{i}"), i as i64 - 1, i as i64));
    }
    for j in 2..=q {
        vars.push((format!("f{j}"), j as i64 - 1, j as i64));
    }
    if opts.f1_variable {
        vars.push(("f1".into(), 0, 1));
    }
    let named: Vec<(&str, i64, i64)> = vars.iter().map(|(n, a, b)| (n.as_str(), *a, *b)).collect();
    let ctx = VariableContext::new_bigraded(&named);
    let var = |n: &str| SparsePoly::variable(&ctx, ctx.index_of(n).unwrap());
    let eps = var("eps");
    let sv = var("s");

    let e1c = opts
        .e1_coefficient
        .clone()
        .unwrap_or_else(|| Rational::new((q as i64 * (p as i64 - 1)).into(), 2.into()));
    let e1 = sv.scale(&e1c);
    let f1 = if opts.f1_variable {
        var("f1")
    } else {
        sv.scale(&Rational::new((p as i64 * (q as i64 - 1)).into(), 2.into()))
    };

    // dense series in z, ascending index = z-power
    let mut a_ser = vec![SparsePoly::zero(&ctx); p as usize + 1];
    a_ser[p as usize] = SparsePoly::constant(&ctx, rat(1));
    a_ser[p as usize - 1] = eps.scale(&rat(p as i64)).mul(&e1)?;
    for i in 2..=p {
        a_ser[(p - i) as usize] = eps.scale(&rat(p as i64)).mul(&var(&format!("e{i}")))?;
    }
    let mut b_ser = vec![SparsePoly::zero(&ctx); q as usize + 1];
    b_ser[q as usize] = SparsePoly::constant(&ctx, rat(1));
    b_ser[q as usize - 1] = eps.scale(&rat(q as i64)).mul(&f1)?;
    for j in 2..=q {
        b_ser[(q - j) as usize] = eps.scale(&rat(q as i64)).mul(&var(&format!("f{j}")))?;
    }

    // S(z) -> S(z + c) for a z-free shift c
    let shift_series = |s: &[SparsePoly], c: &SparsePoly| -> Result<Vec<SparsePoly>> {
        let n = s.len();
        let mut cpow = vec![SparsePoly::constant(&ctx, rat(1))];
        for _ in 1..n {
            let next = cpow.last().unwrap().mul(c)?;
            cpow.push(next);
        }
        let mut out = vec![SparsePoly::zero(&ctx); n];
        for (m, coeff) in s.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for k in 0..=m {
                let t = coeff.mul(&cpow[m - k])?.scale(&big_binomial(m as u32, k as u32));
                out[k] = out[k].add(&t)?;
            }
        }
        Ok(out)
    };

    let base_p = sv.scale(&rat(p as i64)).mul(&eps)?;
    let base_q = sv.scale(&rat(q as i64)).mul(&eps)?;
    let n = (p * q) as usize + 1;
    let mut prod_a = vec![SparsePoly::constant(&ctx, rat(1))];
    for j in 0..q {
        let shifted = shift_series(&a_ser, &base_p.scale(&rat(j as i64)))?;
        prod_a = series_mul(&prod_a, &shifted, n)?;
    }
    let mut prod_b = vec![SparsePoly::constant(&ctx, rat(1))];
    for i in 0..p {
        let shifted = shift_series(&b_ser, &base_q.scale(&rat(i as i64)))?;
        prod_b = series_mul(&prod_b, &shifted, n)?;
    }
    prod_a.resize(n, SparsePoly::zero(&ctx));
    prod_b.resize(n, SparsePoly::zero(&ctx));
    let mut coeffs = Vec::with_capacity(n);
    for d in 0..n {
        coeffs.push(prod_a[d].sub(&prod_b[d])?);
    }
    assert!(
        coeffs[n - 1].is_zero(),
        "leading coefficient must cancel between the two products"
    );
    Ok(FFamily {
        context: ctx,
        coeffs,
        p,
        q,
    })
}

/// The s = 1 specialization of the family: generators in Q[eps, e2..ep, f2..fq],
/// graded by the first weight (eps = 1, e_i = f_i = i - 1).
pub fn build_equivariant_family(p: u32, q: u32) -> Result<IdealPresentation> {
    let fam = build_f_family(p, q, &FamilyOptions::default())?;
    let one = SparsePoly::constant(&fam.context, rat(1));
    let mut vars: Vec<(String, i64)> = vec![("eps".into(), 1)];
    for i in 2..=p {
        vars.push((format!("e{i}"), i as i64 - 1));
    }
    for j in 2..=q {
        vars.push((format!("f{j}"), j as i64 - 1));
    }
    let named: Vec<(&str, i64)> = vars.iter().map(|(n, w)| (n.as_str(), *w)).collect();
    let ctx = VariableContext::new(&named);
    let s_idx = fam.s_index();
    let mapping: Vec<Option<usize>> = (0..fam.context.len())
        .map(|k| match k {
            0 => Some(0),
            k if k == s_idx => None,
            k => Some(k - 1),
        })
        .collect();
    let mut gens = Vec::new();
    for fd in &fam.coeffs {
        let at1 = fd.substitute(s_idx, &one)?;
        if !at1.is_zero() {
            gens.push(at1.reindex(&ctx, &mapping)?);
        }
    }
    IdealPresentation::new(ctx, gens, Homogeneity::Graded)
}

/// Specialize the family to eps = 1 and eliminate every f-variable triangularly:
/// F_{pq-j} is linear in f_j with constant coefficient of absolute value pq, so the
/// f's solve uniquely degree by degree. Returns the remaining relations in
/// Q[s, e2..ep] graded by s-weight (s = 1, e_i = i).
pub fn eps1_e_only(p: u32, q: u32, e1_coefficient: Option<Rational>) -> Result<IdealPresentation> {
    let f1_variable = e1_coefficient.is_some();
    let opts = FamilyOptions {
        e1_coefficient,
        f1_variable,
    };
    let fam = build_f_family(p, q, &opts)?;
    let ctx = &fam.context;
    let one = SparsePoly::constant(ctx, rat(1));
    let eps_idx = fam.eps_index();
    let at_eps1: Vec<SparsePoly> = fam
        .coeffs
        .iter()
        .map(|fd| fd.substitute(eps_idx, &one))
        .collect::<Result<_>>()?;

    let pq = (p * q) as usize;
    let mut elim_js: Vec<u32> = if f1_variable { vec![1] } else { vec![] };
    elim_js.extend(2..=q);
    elim_js.sort_unstable();
    let f_idx = |j: u32| -> usize {
        if j == 1 {
            fam.f1_index().expect("f1 must be a variable here")
        } else {
            fam.f_index(j)
        }
    };
    // Solve for f_j in ascending j; every stored expression is already free of
    // f-variables because F_{pq-j} only involves f_k with k <= j.
    let mut fexpr: BTreeMap<u32, SparsePoly> = BTreeMap::new();
    let pq_rat = rat(pq as i64);
    for &j in &elim_js {
        let mut rel = at_eps1[pq - j as usize].clone();
        for (&k, expr) in &fexpr {
            rel = rel.substitute(f_idx(k), expr)?;
        }
        let vj = f_idx(j);
        assert!(rel.max_exp(vj) <= 1, "solved variable must appear linearly");
        let lin = rel.coeff_of(vj, 1);
        let c = lin.constant_term();
        assert!(
            lin.num_terms() == 1 && (c == pq_rat || c == -pq_rat.clone()),
            "linear coefficient must be the constant +-pq exactly"
        );
        let rest = rel.coeff_of(vj, 0);
        fexpr.insert(j, rest.scale(&(-(Rational::one() / c))));
    }

    let used: Vec<usize> = elim_js.iter().map(|&j| pq - j as usize).collect();
    let mut remaining = Vec::new();
    for (d, fd) in at_eps1.iter().enumerate().take(pq) {
        if used.contains(&d) {
            continue;
        }
        let mut rel = fd.clone();
        for (&k, expr) in &fexpr {
            rel = rel.substitute(f_idx(k), expr)?;
        }
        if rel.is_zero() {
            assert!(
                d == pq - 1 || fd.is_zero(),
                "unexpected identically vanishing relation at index {d}"
            );
            continue;
        }
        remaining.push(rel);
    }

    let mut vars: Vec<(String, i64)> = vec![("s".into(), 1)];
    for i in 2..=p {
        vars.push((format!("e{i}"), i as i64));
    }
    let named: Vec<(&str, i64)> = vars.iter().map(|(n, w)| (n.as_str(), *w)).collect();
    let ctx_e = VariableContext::new(&named);
    let mut mapping: Vec<Option<usize>> = vec![None; ctx.len()];
    mapping[fam.s_index()] = Some(0);
    for i in 2..=p {
        mapping[fam.e_index(i)] = Some(i as usize - 1);
    }
    let gens = remaining
        .into_iter()
        .map(|g| g.reindex(&ctx_e, &mapping))
        .collect::<Result<Vec<_>>>()?;
    IdealPresentation::new(ctx_e, gens, Homogeneity::Graded)
}

/// Equations for a monomial curve deformed by lower-order terms: one unknown
/// c_{g,i} per generator g and order drop i in 2..=g, with phi_g = t^g +
/// sum_i c_{g,i} t^{g-i}. For every pair of exponent vectors of equal weighted
/// degree at most `degree_bound`, all t-coefficients of the difference of the
/// corresponding phi-products become generators. The generator list must be
/// minimal; the default bound is 2 * max generator + conductor.
pub fn build_toric_equations(
    generators: &[u32],
    degree_bound: Option<u32>,
) -> Result<IdealPresentation> {
    let gamma = NumericalSemigroup::new(generators)?;
    let redundant = gamma.redundant_generators();
    if !redundant.is_empty() {
        return Err(Error::NonMinimalGenerators(redundant));
    }
    let gens_list = gamma.generators().to_vec();
    let gmax = *gens_list.iter().max().unwrap();
    let bound = degree_bound.unwrap_or(2 * gmax + gamma.conductor().max(0) as u32);

    let mut vars: Vec<(String, i64)> = Vec::new();
    for &g in &gens_list {
        for i in 2..=g {
            vars.push((format!("c{g}_{i}"), i as i64));
        }
    }
    let named: Vec<(&str, i64)> = vars.iter().map(|(n, w)| (n.as_str(), *w)).collect();
    let ctx = VariableContext::new(&named);

    // phi_g as a dense t-coefficient list, ascending
    let mut phis: Vec<Vec<SparsePoly>> = Vec::new();
    for &g in &gens_list {
        let mut phi = vec![SparsePoly::zero(&ctx); g as usize + 1];
        phi[g as usize] = SparsePoly::constant(&ctx, rat(1));
        for i in 2..=g {
            let v = ctx.index_of(&format!("c{g}_{i}")).unwrap();
            phi[(g - i) as usize] = SparsePoly::variable(&ctx, v);
        }
        phis.push(phi);
    }

    // exponent vectors grouped by weighted degree
    let mut by_degree: BTreeMap<u32, Vec<Vec<u32>>> = BTreeMap::new();
    fn walk(
        gens: &[u32],
        pos: usize,
        acc: &mut Vec<u32>,
        deg: u32,
        bound: u32,
        out: &mut BTreeMap<u32, Vec<Vec<u32>>>,
    ) {
        if pos == gens.len() {
            out.entry(deg).or_default().push(acc.clone());
            return;
        }
        let mut k = 0u32;
        loop {
            let d = deg + k * gens[pos];
            if d > bound {
                break;
            }
            acc.push(k);
            walk(gens, pos + 1, acc, d, bound, out);
            acc.pop();
            k += 1;
        }
    }
    walk(&gens_list, 0, &mut Vec::new(), 0, bound, &mut by_degree);

    let mut product_cache: HashMap<Vec<u32>, Vec<SparsePoly>> = HashMap::new();
    let mut product = |exps: &[u32]| -> Result<Vec<SparsePoly>> {
        if let Some(p) = product_cache.get(exps) {
            return Ok(p.clone());
        }
        let mut acc = vec![SparsePoly::constant(&ctx, rat(1))];
        for (gi, &k) in exps.iter().enumerate() {
            for _ in 0..k {
                acc = series_mul(&acc, &phis[gi], usize::MAX)?;
            }
        }
        product_cache.insert(exps.to_vec(), acc.clone());
        Ok(acc)
    };

    // anchoring every class at its first vector generates the same ideal as
    // all pairwise differences, with linearly many generators per class
    let mut out_gens: Vec<SparsePoly> = Vec::new();
    for vectors in by_degree.values() {
        if vectors.len() < 2 {
            continue;
        }
        let pa = product(&vectors[0])?;
        for other in &vectors[1..] {
            let pb = product(other)?;
            let n = pa.len().max(pb.len());
            for k in 0..n {
                let za = pa.get(k).cloned().unwrap_or_else(|| SparsePoly::zero(&ctx));
                let zb = pb.get(k).cloned().unwrap_or_else(|| SparsePoly::zero(&ctx));
                let d = za.sub(&zb)?;
                if !d.is_zero() {
                    out_gens.push(d);
                }
            }
        }
    }
    IdealPresentation::new(ctx, out_gens, Homogeneity::Graded)
}

/// Elementary symmetric polynomials of the given arguments via the product
/// prod_k (T + a_k), returned as c_1..c_n (c_j = coefficient of T^{n-j}).
fn elementary_symmetric(ctx: &Arc<VariableContext>, args: &[SparsePoly]) -> Result<Vec<SparsePoly>> {
    let n = args.len();
    // dense in T, ascending power of T
    let mut prod = vec![SparsePoly::constant(ctx, rat(1))];
    for a in args {
        let mut next = vec![SparsePoly::zero(ctx); prod.len() + 1];
        for (i, c) in prod.iter().enumerate() {
            next[i] = next[i].add(&c.mul(a)?)?;
            next[i + 1] = next[i + 1].add(c)?;
        }
        prod = next;
    }
    Ok((1..=n).map(|j| prod[n - j].clone()).collect())
}

/// One substitution piece of the parabolic ideal, in the common xi-context: the
/// e-only relations for the shifted constant (p-1)q/2 + (p-i) with every e_j
/// replaced by (1/p) times the j-th elementary symmetric function of
/// xi_i, .., xi_1, xi_p + p, .., xi_{i+1} + p, plus the linear consistency
/// relation for e_1 itself.
pub fn build_parabolic_piece(
    ctx_xi: &Arc<VariableContext>,
    p: u32,
    q: u32,
    i: u32,
) -> Result<Vec<SparsePoly>> {
    assert!((1..=p).contains(&i), "piece index out of range");
    let e1c = Rational::new(((p as i64 - 1) * q as i64).into(), 2.into())
        + rat(p as i64 - i as i64);
    let eonly = eps1_e_only(p, q, Some(e1c.clone()))?;

    let xi = |k: u32| SparsePoly::variable(ctx_xi, (k - 1) as usize);
    let shift = SparsePoly::constant(ctx_xi, rat(p as i64));
    let mut args: Vec<SparsePoly> = Vec::with_capacity(p as usize);
    for k in (1..=i).rev() {
        args.push(xi(k));
    }
    for k in ((i + 1)..=p).rev() {
        args.push(xi(k).add(&shift)?);
    }
    let esym = elementary_symmetric(ctx_xi, &args)?;
    let inv_p = Rational::new(1.into(), (p as i64).into());
    let esub: Vec<SparsePoly> = esym.iter().map(|c| c.scale(&inv_p)).collect();

    let mut out = Vec::new();
    // linear consistency: (1/p) sum xi_k (+ shifts) must equal the pinned e_1
    out.push(esub[0].sub(&SparsePoly::constant(ctx_xi, e1c))?);

    // substitute s = 1 and e_j -> esub[j - 1] term by term
    let ectx = eonly.context();
    for g in eonly.generators() {
        let mut acc = SparsePoly::zero(ctx_xi);
        for (m, c) in g.terms() {
            let mut t = SparsePoly::constant(ctx_xi, c.clone());
            for j in 2..=p {
                let e = m.exp(ectx.index_of(&format!("e{j}")).unwrap());
                for _ in 0..e {
                    t = t.mul(&esub[j as usize - 1])?;
                }
            }
            acc = acc.add(&t)?;
        }
        if !acc.is_zero() {
            out.push(acc);
        }
    }
    Ok(out)
}

/// The full parabolic ideal over Q[xi_1..xi_p]: the union of all p pieces. Not
/// homogeneous; its zero locus is finite and matches the flag-tuple set.
pub fn build_parabolic_ideal(p: u32, q: u32) -> Result<IdealPresentation> {
    require_coprime(p, q)?;
    if p < 2 {
        return Err(Error::BadParameter("need p >= 2".into()));
    }
    let vars: Vec<(String, i64)> = (1..=p).map(|k| (format!("xi{k}"), 1)).collect();
    let named: Vec<(&str, i64)> = vars.iter().map(|(n, w)| (n.as_str(), *w)).collect();
    let ctx_xi = VariableContext::new(&named);
    let mut gens = Vec::new();
    for i in 1..=p {
        gens.extend(build_parabolic_piece(&ctx_xi, p, q, i)?);
    }
    IdealPresentation::new(ctx_xi, gens, Homogeneity::None)
}

/// Eliminate variables that appear as the unique linear term of some generator.
/// Whenever a generator has the form c * v + h with c a nonzero constant and v a
/// variable absent from h and from no other term of that generator, substituting
/// v = -h / c is a graded ring isomorphism onto a smaller presentation, so all
/// graded dimensions are preserved. Deterministic choice: lowest-degree eligible
/// generator first (ties by generator index), then the candidate variable of
/// largest weight (ties by largest variable index).
pub fn triangular_reduce(pres: &IdealPresentation) -> Result<IdealPresentation> {
    if pres.homogeneity() != Homogeneity::Graded {
        return Err(Error::BadParameter(
            "triangular reduction requires a graded presentation".into(),
        ));
    }
    let ctx = Arc::clone(pres.context());
    let n = ctx.len();
    let mut gens: Vec<SparsePoly> = pres.generators().to_vec();
    let mut alive = vec![true; n];

    loop {
        let mut best: Option<(usize, i64, usize)> = None; // (gen index, degree, var)
        for (gi, g) in gens.iter().enumerate() {
            let deg = g.homogeneous_degree1()?;
            if let Some((_, bd, _)) = best {
                if deg >= bd {
                    continue;
                }
            }
            let mut cand: Option<usize> = None;
            for m in g.terms().keys() {
                if m.total() != 1 {
                    continue;
                }
                let v = m.exps().iter().position(|&e| e == 1).unwrap();
                let solo = g.terms().keys().filter(|mm| mm.exp(v) > 0).count() == 1;
                if !solo {
                    continue;
                }
                cand = Some(match cand {
                    None => v,
                    Some(u) => {
                        if (ctx.weights1()[v], v) > (ctx.weights1()[u], u) {
                            v
                        } else {
                            u
                        }
                    }
                });
            }
            if let Some(v) = cand {
                best = Some((gi, deg, v));
            }
        }
        let Some((gi, _, v)) = best else { break };
        let g = gens[gi].clone();
        let c = g
            .terms()
            .get(&Monomial::variable(n, v))
            .expect("chosen variable must appear as a bare linear term")
            .clone();
        let repl = g
            .coeff_of(v, 0)
            .scale(&(-(Rational::one() / c)));
        let mut next = Vec::with_capacity(gens.len());
        for (k, g2) in gens.iter().enumerate() {
            if k == gi {
                continue;
            }
            let s = if g2.max_exp(v) > 0 {
                g2.substitute(v, &repl)?
            } else {
                g2.clone()
            };
            if !s.is_zero() {
                next.push(s);
            }
        }
        gens = next;
        alive[v] = false;
    }

    let kept: Vec<usize> = (0..n).filter(|&k| alive[k]).collect();
    let vars: Vec<(&str, i64)> = kept
        .iter()
        .map(|&k| (ctx.name(k), ctx.weights1()[k]))
        .collect();
    let new_ctx = VariableContext::new(&vars);
    let mut mapping: Vec<Option<usize>> = vec![None; n];
    for (new_i, &k) in kept.iter().enumerate() {
        mapping[k] = Some(new_i);
    }
    let new_gens = gens
        .into_iter()
        .map(|g| g.reindex(&new_ctx, &mapping))
        .collect::<Result<Vec<_>>>()?;
    IdealPresentation::new(new_ctx, new_gens, Homogeneity::Graded)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::ratio;

    fn term(ctx: &Arc<VariableContext>, exps: Vec<u32>, c: Rational) -> SparsePoly {
        SparsePoly::from_terms(ctx, [(Monomial::from_exps(exps), c)])
    }

    #[test]
    fn io_relations_2_3() {
        let pres = build_io(2, 3).unwrap();
        let ctx = pres.context();
        assert_eq!(ctx.names(), &["e2", "f2", "f3"]);
        // coefficients of q e' f - p e f' at w^1, w^2, w^3
        let g1 = term(ctx, vec![1, 0, 0], rat(6)).sub(&term(ctx, vec![0, 1, 0], rat(4))).unwrap();
        let g2 = term(ctx, vec![0, 0, 1], rat(-6));
        let g3 = term(ctx, vec![1, 1, 0], rat(2));
        assert_eq!(pres.generators().len(), 3);
        assert!(pres.generators()[0].sub(&g1).unwrap().is_zero());
        assert!(pres.generators()[1].sub(&g2).unwrap().is_zero());
        assert!(pres.generators()[2].sub(&g3).unwrap().is_zero());
    }

    #[test]
    fn io_relations_3_4_degrees() {
        let pres = build_io(3, 4).unwrap();
        assert_eq!(pres.generators().len(), 5);
        for (k, g) in pres.generators().iter().enumerate() {
            assert_eq!(g.homogeneous_degree1().unwrap(), k as i64 + 2);
        }
    }

    #[test]
    fn g_ideal_2_3() {
        let pres = build_g_ideal(2, 3).unwrap();
        assert_eq!(pres.context().names(), &["e2"]);
        assert_eq!(pres.generators().len(), 1);
        let expect = term(pres.context(), vec![2], ratio(3, 8));
        assert!(pres.generators()[0].sub(&expect).unwrap().is_zero());
    }

    #[test]
    fn family_bidegrees_and_vanishing() {
        for (p, q) in [(2u32, 3u32), (3, 4)] {
            let fam = build_f_family(p, q, &FamilyOptions::default()).unwrap();
            let pq = (p * q) as i64;
            assert!(fam.coeffs[pq as usize].is_zero());
            assert!(fam.coeffs[pq as usize - 1].is_zero());
            for (d, fd) in fam.coeffs.iter().enumerate() {
                if fd.is_zero() {
                    continue;
                }
                assert_eq!(fd.homogeneous_degree1().unwrap(), pq - d as i64);
                assert_eq!(fd.homogeneous_degree2().unwrap(), pq - d as i64);
            }
        }
    }

    #[test]
    fn equivariant_family_is_graded() {
        let pres = build_equivariant_family(2, 3).unwrap();
        assert!(!pres.generators().is_empty());
        for g in pres.generators() {
            g.homogeneous_degree1().unwrap();
        }
    }

    #[test]
    fn e_only_2_3_shape() {
        let pres = eps1_e_only(2, 3, None).unwrap();
        assert_eq!(pres.context().names(), &["s", "e2"]);
        assert!(!pres.generators().is_empty());
        for g in pres.generators() {
            g.homogeneous_degree1().unwrap();
        }
    }

    #[test]
    fn toric_rejects_redundant_generators() {
        let err = build_toric_equations(&[2, 3, 5], None).unwrap_err();
        match err {
            Error::NonMinimalGenerators(v) => assert_eq!(v, vec![5]),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn toric_pair_equations_graded() {
        let pres = build_toric_equations(&[2, 3], None).unwrap();
        assert!(!pres.generators().is_empty());
        for g in pres.generators() {
            g.homogeneous_degree1().unwrap();
        }
    }

    #[test]
    fn triangular_reduce_2_3() {
        let pres = build_io(2, 3).unwrap();
        let red = triangular_reduce(&pres).unwrap();
        assert_eq!(red.context().names(), &["e2"]);
        assert_eq!(red.generators().len(), 1);
        let g = &red.generators()[0];
        assert_eq!(g.homogeneous_degree1().unwrap(), 4);
        assert_eq!(g.max_exp(0), 2);
    }

    #[test]
    fn parabolic_vanishes_on_flag_tuples_2_3() {
        let pres = build_parabolic_ideal(2, 3).unwrap();
        let tuples = crate::semigroups::enumerate_flag_tuples(2, 3).unwrap();
        assert_eq!(tuples.len(), 3);
        for t in &tuples {
            let values: Vec<Rational> = t.entries.iter().map(|&x| rat(x)).collect();
            for g in pres.generators() {
                assert!(g.eval(&values).is_zero(), "nonvanishing at {:?}", t.entries);
            }
        }
    }

    #[test]
    fn content_hash_deterministic() {
        let a = build_io(3, 4).unwrap();
        let b = build_io(3, 4).unwrap();
        assert_eq!(a.content_hash(), b.content_hash());
        let r = triangular_reduce(&a).unwrap();
        assert_ne!(a.content_hash(), r.content_hash());
    }
}
