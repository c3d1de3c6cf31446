//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Representation invariants: the term map stores no zero coefficient; every monomial
//! has exactly one exponent per context variable; the term order is graded
//! lexicographic on raw exponent vectors (total exponent sum first, then left-to-right
//! lexicographic), fixed independently of variable weights so that iteration order,
//! and therefore every downstream basis enumeration, is reproducible.

use super::{Integer, Rational, VariableContext};
use crate::{Error, Result};
use num::{One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Exponent vector of a monomial; one entry per context variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    /// Monomial with all exponents zero (the constant monomial 1).
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars].into_boxed_slice())
    }

    /// The single variable `i` to the first power.
    pub fn variable(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e.into_boxed_slice())
    }

    /// Monomial from an explicit exponent vector.
    pub fn from_exps(exps: Vec<u32>) -> Self {
        Monomial(exps.into_boxed_slice())
    }

    /// Exponents slice.
    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    /// Exponent of variable `i`.
    pub fn exp(&self, i: usize) -> u32 {
        self.0[i]
    }

    /// Sum of raw exponents (unweighted total degree).
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Product of two monomials (exponentwise sum).
    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert!(self.0.len() == other.0.len(), "monomial arity mismatch");
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Copy with the exponent of variable `i` replaced by `e`.
    pub fn with_exp(&self, i: usize, e: u32) -> Monomial {
        let mut v = self.0.to_vec();
        v[i] = e;
        Monomial(v.into_boxed_slice())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial over a shared variable context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    ctx: Arc<VariableContext>,
    terms: BTreeMap<Monomial, Rational>,
}

impl SparsePoly {
    /// The zero polynomial.
    pub fn zero(ctx: &Arc<VariableContext>) -> Self {
        SparsePoly {
            ctx: Arc::clone(ctx),
            terms: BTreeMap::new(),
        }
    }

    /// A constant polynomial.
    pub fn constant(ctx: &Arc<VariableContext>, c: Rational) -> Self {
        let mut p = Self::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ctx.len()), c);
        }
        p
    }

    /// The variable with index `i`.
    pub fn variable(ctx: &Arc<VariableContext>, i: usize) -> Self {
        let mut p = Self::zero(ctx);
        p.terms
            .insert(Monomial::variable(ctx.len(), i), Rational::one());
        p
    }

    /// Polynomial from explicit terms; zero coefficients are dropped, duplicate
    /// monomials are summed.
    pub fn from_terms<I>(ctx: &Arc<VariableContext>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Self::zero(ctx);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// The shared context.
    pub fn context(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    /// Term map, ordered graded-lexicographically.
    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    /// True when the polynomial is zero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored terms.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn check_ctx(&self, other: &SparsePoly, op: &str) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch(format!(
                "{op}: {:?} vs {:?}",
                self.ctx.names(),
                other.ctx.names()
            )))
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Exact sum.
    pub fn add(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_ctx(other, "add")?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Exact difference.
    pub fn sub(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_ctx(other, "sub")?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    /// Exact product.
    pub fn mul(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_ctx(other, "mul")?;
        let mut out = Self::zero(&self.ctx);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    /// Product truncated to primary degree at most `bound` (used by local jet
    /// computations, where every variable has weight 1).
    pub fn mul_truncated(&self, other: &SparsePoly, bound: i64) -> Result<SparsePoly> {
        self.check_ctx(other, "mul_truncated")?;
        let mut out = Self::zero(&self.ctx);
        for (ma, ca) in &self.terms {
            let da = self.ctx.degree1(ma.exps());
            if da > bound {
                continue;
            }
            for (mb, cb) in &other.terms {
                if da + self.ctx.degree1(mb.exps()) > bound {
                    continue;
                }
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &Rational) -> SparsePoly {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        let mut out = Self::zero(&self.ctx);
        for (m, v) in &self.terms {
            out.terms.insert(m.clone(), v * c);
        }
        out
    }

    /// Negation.
    pub fn neg(&self) -> SparsePoly {
        self.scale(&-Rational::one())
    }

    /// Coefficient of `var^k` as a polynomial in the remaining variables (same
    /// context, exponent of `var` zeroed). Returns zero when absent.
    pub fn coeff_of(&self, var: usize, k: u32) -> SparsePoly {
        assert!(var < self.ctx.len(), "variable index out of range");
        let mut out = Self::zero(&self.ctx);
        for (m, c) in &self.terms {
            if m.exp(var) == k {
                out.terms.insert(m.with_exp(var, 0), c.clone());
            }
        }
        out
    }

    /// Largest exponent of `var` across terms.
    pub fn max_exp(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(var)).max().unwrap_or(0)
    }

    /// Substitute `replacement` for the variable `var`.
    pub fn substitute(&self, var: usize, replacement: &SparsePoly) -> Result<SparsePoly> {
        self.check_ctx(replacement, "substitute")?;
        let maxe = self.max_exp(var);
        let mut powers: Vec<SparsePoly> = vec![Self::constant(&self.ctx, Rational::one())];
        for _ in 0..maxe {
            let next = powers.last().unwrap().mul(replacement)?;
            powers.push(next);
        }
        let mut out = Self::zero(&self.ctx);
        for (m, c) in &self.terms {
            let e = m.exp(var) as usize;
            let base = SparsePoly::from_terms(&self.ctx, [(m.with_exp(var, 0), c.clone())]);
            out = out.add(&base.mul(&powers[e])?)?;
        }
        Ok(out)
    }

    /// Substitute truncating every intermediate product to primary degree `bound`.
    pub fn substitute_truncated(
        &self,
        var: usize,
        replacement: &SparsePoly,
        bound: i64,
    ) -> Result<SparsePoly> {
        self.check_ctx(replacement, "substitute_truncated")?;
        let maxe = self.max_exp(var);
        let mut powers: Vec<SparsePoly> = vec![Self::constant(&self.ctx, Rational::one())];
        for _ in 0..maxe {
            let next = powers.last().unwrap().mul_truncated(replacement, bound)?;
            powers.push(next);
        }
        let mut out = Self::zero(&self.ctx);
        for (m, c) in &self.terms {
            let e = m.exp(var) as usize;
            let base = SparsePoly::from_terms(&self.ctx, [(m.with_exp(var, 0), c.clone())]);
            out = out.add(&base.mul_truncated(&powers[e], bound)?)?;
        }
        Ok(out.truncate_at(bound))
    }

    /// Keep only terms of primary degree at most `bound`.
    pub fn truncate_at(&self, bound: i64) -> SparsePoly {
        let mut out = Self::zero(&self.ctx);
        for (m, c) in &self.terms {
            if self.ctx.degree1(m.exps()) <= bound {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Exact evaluation at rational values (one per variable).
    pub fn eval(&self, values: &[Rational]) -> Rational {
        assert!(values.len() == self.ctx.len(), "value count mismatch");
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    t *= &values[i];
                }
            }
            total += t;
        }
        total
    }

    /// Primary degree when every term agrees; error otherwise. Zero polynomial
    /// reports degree 0.
    pub fn homogeneous_degree1(&self) -> Result<i64> {
        let mut deg = None;
        for m in self.terms.keys() {
            let d = self.ctx.degree1(m.exps());
            match deg {
                None => deg = Some(d),
                Some(prev) if prev != d => {
                    return Err(Error::NonHomogeneous(format!(
                        "terms of primary degree {prev} and {d}"
                    )))
                }
                _ => {}
            }
        }
        Ok(deg.unwrap_or(0))
    }

    /// Second degree when every term agrees; error otherwise (requires bigraded
    /// context). Zero polynomial reports degree 0.
    pub fn homogeneous_degree2(&self) -> Result<i64> {
        let mut deg = None;
        for m in self.terms.keys() {
            let d = self
                .ctx
                .degree2(m.exps())
                .ok_or_else(|| Error::NonHomogeneous("context is not bigraded".into()))?;
            match deg {
                None => deg = Some(d),
                Some(prev) if prev != d => {
                    return Err(Error::NonHomogeneous(format!(
                        "terms of second degree {prev} and {d}"
                    )))
                }
                _ => {}
            }
        }
        Ok(deg.unwrap_or(0))
    }

    /// Re-embed into another context. `mapping[i]` gives the target index of source
    /// variable `i`; `None` requires that variable to be absent from every term.
    pub fn reindex(
        &self,
        target: &Arc<VariableContext>,
        mapping: &[Option<usize>],
    ) -> Result<SparsePoly> {
        assert!(mapping.len() == self.ctx.len(), "mapping length mismatch");
        let mut out = SparsePoly::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; target.len()];
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match mapping[i] {
                    Some(j) => exps[j] += e,
                    None => {
                        return Err(Error::ContextMismatch(format!(
                            "variable {} occurs but has no target",
                            self.ctx.name(i)
                        )))
                    }
                }
            }
            out.add_term(Monomial::from_exps(exps), c.clone());
        }
        Ok(out)
    }

    /// Constant term (coefficient of the all-zero monomial).
    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one(self.ctx.len()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*{}", self.ctx.name(i))?,
                    _ => write!(f, "*{}^{e}", self.ctx.name(i))?,
                }
            }
        }
        Ok(())
    }
}

/// Generalized binomial coefficient C(a, k) = a (a-1) ... (a-k+1) / k!.
pub fn rational_binomial(a: &Rational, k: u32) -> Rational {
    let mut num = Rational::one();
    let mut fact = Integer::one();
    for i in 0..k {
        num *= a - Rational::from_integer(i.into());
        fact *= Integer::from(i + 1);
    }
    num / Rational::from_integer(fact)
}

/// Binomial-series expansion of `base^exponent` truncated at `var^truncation`
/// (inclusive). Requires the `var`-free part of `base` to be the constant 1.
pub fn rational_power_series(
    base: &SparsePoly,
    exponent: &Rational,
    var: usize,
    truncation: u32,
) -> Result<SparsePoly> {
    let ctx = base.context();
    let var_free = base.coeff_of(var, 0);
    if var_free != SparsePoly::constant(ctx, Rational::one()) {
        return Err(Error::ConstantTermNotOne);
    }
    // h = base - 1 has only terms with positive var exponent, so h^k contributes
    // nothing below var^k and the series terminates at k = truncation.
    let h = base.sub(&SparsePoly::constant(ctx, Rational::one()))?;
    let mut out = SparsePoly::constant(ctx, Rational::one());
    let mut hpow = SparsePoly::constant(ctx, Rational::one());
    for k in 1..=truncation {
        hpow = hpow.mul(&h)?;
        hpow = truncate_var(&hpow, var, truncation);
        if hpow.is_zero() {
            break;
        }
        let coef = rational_binomial(exponent, k);
        out = out.add(&hpow.scale(&coef))?;
    }
    Ok(truncate_var(&out, var, truncation))
}

fn truncate_var(p: &SparsePoly, var: usize, bound: u32) -> SparsePoly {
    SparsePoly::from_terms(
        p.context(),
        p.terms()
            .iter()
            .filter(|(m, _)| m.exp(var) <= bound)
            .map(|(m, c)| (m.clone(), c.clone())),
    )
}

/// Product of two dense univariate series with polynomial coefficients, truncated to
/// `keep` coefficients (indices 0..keep).
pub fn series_mul(a: &[SparsePoly], b: &[SparsePoly], keep: usize) -> Result<Vec<SparsePoly>> {
    assert!(!a.is_empty() && !b.is_empty(), "empty series factor");
    let ctx = a[0].context();
    let n = keep.min(a.len() + b.len() - 1);
    let mut out = vec![SparsePoly::zero(ctx); n];
    for (i, pa) in a.iter().enumerate() {
        if pa.is_zero() || i >= n {
            continue;
        }
        for (j, pb) in b.iter().enumerate() {
            if i + j >= n {
                break;
            }
            if pb.is_zero() {
                continue;
            }
            out[i + j] = out[i + j].add(&pa.mul(pb)?)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, ratio};

    fn ctx2() -> Arc<VariableContext> {
        VariableContext::new(&[("e2", 2), ("w", 1)])
    }

    #[test]
    fn product_of_binomials() {
        // (1 + e2 w^2)^2 = 1 + 2 e2 w^2 + e2^2 w^4
        let ctx = ctx2();
        let one = SparsePoly::constant(&ctx, rat(1));
        let e2w2 = SparsePoly::from_terms(&ctx, [(Monomial::from_exps(vec![1, 2]), rat(1))]);
        let e = one.add(&e2w2).unwrap();
        let sq = e.mul(&e).unwrap();
        let expected = SparsePoly::from_terms(
            &ctx,
            [
                (Monomial::from_exps(vec![0, 0]), rat(1)),
                (Monomial::from_exps(vec![1, 2]), rat(2)),
                (Monomial::from_exps(vec![2, 4]), rat(1)),
            ],
        );
        assert_eq!(sq, expected);
    }

    #[test]
    fn identity_times_one() {
        let ctx = ctx2();
        let one = SparsePoly::constant(&ctx, rat(1));
        let e2w2 = SparsePoly::from_terms(&ctx, [(Monomial::from_exps(vec![1, 2]), rat(1))]);
        let e = one.add(&e2w2).unwrap();
        assert_eq!(e.mul(&one).unwrap(), e);
    }

    #[test]
    fn coeff_extraction() {
        let ctx = ctx2();
        let p = SparsePoly::from_terms(
            &ctx,
            [
                (Monomial::from_exps(vec![1, 2]), rat(3)),
                (Monomial::from_exps(vec![2, 2]), rat(5)),
                (Monomial::from_exps(vec![0, 1]), rat(7)),
            ],
        );
        let c2 = p.coeff_of(1, 2);
        let expected = SparsePoly::from_terms(
            &ctx,
            [
                (Monomial::from_exps(vec![1, 0]), rat(3)),
                (Monomial::from_exps(vec![2, 0]), rat(5)),
            ],
        );
        assert_eq!(c2, expected);
        assert!(p.coeff_of(1, 5).is_zero());
    }

    #[test]
    fn binomial_three_halves() {
        // C(3/2, 2) = (3/2)(1/2)/2 = 3/8
        assert_eq!(rational_binomial(&ratio(3, 2), 2), ratio(3, 8));
    }

    #[test]
    fn power_series_three_halves() {
        // (1 + e2 w^2)^(3/2) mod w^5 = 1 + (3/2) e2 w^2 + (3/8) e2^2 w^4
        let ctx = ctx2();
        let one = SparsePoly::constant(&ctx, rat(1));
        let e2w2 = SparsePoly::from_terms(&ctx, [(Monomial::from_exps(vec![1, 2]), rat(1))]);
        let base = one.add(&e2w2).unwrap();
        let s = rational_power_series(&base, &ratio(3, 2), 1, 4).unwrap();
        let expected = SparsePoly::from_terms(
            &ctx,
            [
                (Monomial::from_exps(vec![0, 0]), rat(1)),
                (Monomial::from_exps(vec![1, 2]), ratio(3, 2)),
                (Monomial::from_exps(vec![2, 4]), ratio(3, 8)),
            ],
        );
        assert_eq!(s, expected);
    }

    #[test]
    fn power_series_integer_exponents() {
        let ctx = ctx2();
        let one = SparsePoly::constant(&ctx, rat(1));
        let e2w2 = SparsePoly::from_terms(&ctx, [(Monomial::from_exps(vec![1, 2]), rat(1))]);
        let base = one.add(&e2w2).unwrap();
        assert_eq!(
            rational_power_series(&base, &rat(1), 1, 6).unwrap(),
            base.clone()
        );
        assert_eq!(
            rational_power_series(&base, &rat(0), 1, 6).unwrap(),
            SparsePoly::constant(&ctx, rat(1))
        );
        // multiplicativity up to truncation: p^(1/2) * p^(1/2) = p
        let half = rational_power_series(&base, &ratio(1, 2), 1, 6).unwrap();
        let prod = half.mul(&half).unwrap();
        let trunc = SparsePoly::from_terms(
            &ctx,
            prod.terms()
                .iter()
                .filter(|(m, _)| m.exp(1) <= 6)
                .map(|(m, c)| (m.clone(), c.clone())),
        );
        assert_eq!(trunc, base);
    }

    #[test]
    fn rejects_bad_constant_term() {
        let ctx = ctx2();
        let two = SparsePoly::constant(&ctx, rat(2));
        assert!(matches!(
            rational_power_series(&two, &ratio(1, 2), 1, 3),
            Err(Error::ConstantTermNotOne)
        ));
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = SparsePoly::constant(&ctx2(), rat(1));
        let other = VariableContext::new(&[("x", 1)]);
        let b = SparsePoly::constant(&other, rat(1));
        assert!(matches!(a.mul(&b), Err(Error::ContextMismatch(_))));
    }

    #[test]
    fn homogeneity_check() {
        let ctx = ctx2();
        // e2 w^2 has degree 2*1 + 1*2 = 4; w^4 has degree 4: homogeneous together
        let p = SparsePoly::from_terms(
            &ctx,
            [
                (Monomial::from_exps(vec![1, 2]), rat(1)),
                (Monomial::from_exps(vec![0, 4]), rat(2)),
            ],
        );
        assert_eq!(p.homogeneous_degree1().unwrap(), 4);
        let q = SparsePoly::from_terms(
            &ctx,
            [
                (Monomial::from_exps(vec![1, 2]), rat(1)),
                (Monomial::from_exps(vec![0, 1]), rat(2)),
            ],
        );
        assert!(q.homogeneous_degree1().is_err());
    }

    #[test]
    fn substitution_and_eval() {
        let ctx = ctx2();
        // p = e2^2 + w; substitute w -> e2 gives e2^2 + e2
        let p = SparsePoly::from_terms(
            &ctx,
            [
                (Monomial::from_exps(vec![2, 0]), rat(1)),
                (Monomial::from_exps(vec![0, 1]), rat(1)),
            ],
        );
        let e2 = SparsePoly::variable(&ctx, 0);
        let q = p.substitute(1, &e2).unwrap();
        assert_eq!(q.eval(&[rat(3), rat(0)]), rat(12));
    }

    #[test]
    fn monomial_order_is_graded_lex() {
        let a = Monomial::from_exps(vec![0, 2]);
        let b = Monomial::from_exps(vec![1, 0]);
        // total degrees 2 vs 1: b comes first
        assert!(b < a);
        let c = Monomial::from_exps(vec![1, 1]);
        let d = Monomial::from_exps(vec![0, 2]);
        // equal totals: lexicographic on exponents
        assert!(d < c);
    }
}
