//! Dimensions of graded and bigraded quotients by exact linear algebra, one
//! degree (or bidegree) at a time: Hilbert functions with an Artinian cutoff
//! certificate, the associated graded series for the maximal ideal, a finite
//! graded model of the deformed ring at eps = 1 carrying two monomial
//! filtrations, and slotwise saturated dimensions for the bigraded family.

use crate::exactalg::{Echelon, Monomial, Rational, SparsePoly, VariableContext};
use crate::presentations::{
    build_f_family, eps1_e_only, triangular_reduce, FFamily, FamilyOptions, IdealPresentation,
};
use crate::semigroups::NumericalSemigroup;
use crate::{Error, Result};
use num::One;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

/// All monomials of weighted degree exactly `d`. Requires every variable weight
/// to be at least 1 so the list is finite degree by degree.
pub fn monomials_of_weight(ctx: &Arc<VariableContext>, d: i64) -> Vec<Monomial> {
    let w = ctx.weights1();
    assert!(
        w.iter().all(|&x| x >= 1),
        "positive weights required for degreewise enumeration"
    );
    let mut out = Vec::new();
    if d < 0 {
        return out;
    }
    let mut acc = vec![0u32; ctx.len()];
    fn rec(w: &[i64], i: usize, rem: i64, acc: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == w.len() {
            if rem == 0 {
                out.push(Monomial::from_exps(acc.clone()));
            }
            return;
        }
        let mut e = 0i64;
        while e * w[i] <= rem {
            acc[i] = e as u32;
            rec(w, i + 1, rem - e * w[i], acc, out);
            e += 1;
        }
        acc[i] = 0;
    }
    rec(w, 0, d, &mut acc, &mut out);
    out
}

/// Echelon of the degree-`d` piece of the ideal inside the monomial basis of the
/// ambient ring, together with the basis index and its size.
fn graded_piece_echelon(
    pres: &IdealPresentation,
    d: i64,
) -> Result<(Echelon, BTreeMap<Monomial, u32>, usize)> {
    let ctx = pres.context();
    let monos = monomials_of_weight(ctx, d);
    let index: BTreeMap<Monomial, u32> = monos
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i as u32))
        .collect();
    let mut ech = Echelon::new();
    for g in pres.generators() {
        let gd = g.homogeneous_degree1()?;
        if gd > d {
            continue;
        }
        for u in monomials_of_weight(ctx, d - gd) {
            let mut row: Vec<(u32, Rational)> = g
                .terms()
                .iter()
                .map(|(m, c)| (index[&m.mul(&u)], c.clone()))
                .collect();
            row.sort_unstable_by_key(|e| e.0);
            ech.add_rational_row(&row);
        }
    }
    Ok((ech, index, monos.len()))
}

/// Drop every generator already contained, in its own degree, in the ideal
/// generated by the generators kept so far (ascending by degree). Membership
/// of a homogeneous element is decided exactly by one degree-piece echelon, so
/// this is a sound one-time pass that shrinks the row sets of every subsequent
/// degreewise walk.
fn prune_redundant(pres: &IdealPresentation) -> Result<IdealPresentation> {
    let ctx = pres.context();
    let mut order: Vec<(i64, usize)> = Vec::new();
    for (i, g) in pres.generators().iter().enumerate() {
        order.push((g.homogeneous_degree1()?, i));
    }
    order.sort_unstable();
    let mut kept: Vec<SparsePoly> = Vec::new();
    for (d, i) in order {
        let g = &pres.generators()[i];
        if kept.is_empty() {
            kept.push(g.clone());
            continue;
        }
        let partial = IdealPresentation::new(Arc::clone(ctx), kept.clone(), pres.homogeneity())?;
        let (mut ech, index, _) = graded_piece_echelon(&partial, d)?;
        let before = ech.rank();
        let mut row: Vec<(u32, Rational)> = g
            .terms()
            .iter()
            .map(|(m, c)| (index[m], c.clone()))
            .collect();
        row.sort_unstable_by_key(|e| e.0);
        ech.add_rational_row(&row);
        if ech.rank() > before {
            kept.push(g.clone());
        }
    }
    IdealPresentation::new(Arc::clone(ctx), kept, pres.homogeneity())
}

/// A graded quotient with positive weights, reduced through the triangular
/// variable elimination and a redundancy prune before any linear algebra runs.
/// Per-degree dimensions can be cached on disk keyed by the reduced
/// presentation's content hash.
pub struct GradedQuotient {
    reduced: IdealPresentation,
    hash: String,
    cache_dir: Option<PathBuf>,
}

impl GradedQuotient {
    pub fn new(pres: &IdealPresentation) -> Result<Self> {
        let reduced = prune_redundant(&triangular_reduce(pres)?)?;
        let hash = reduced.content_hash();
        Ok(GradedQuotient {
            reduced,
            hash,
            cache_dir: None,
        })
    }

    /// Same as `new` but memoizing per-degree dimensions under `dir`.
    pub fn with_cache(pres: &IdealPresentation, dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        let mut q = Self::new(pres)?;
        q.cache_dir = Some(dir.to_path_buf());
        Ok(q)
    }

    pub fn reduced(&self) -> &IdealPresentation {
        &self.reduced
    }

    fn cache_path(&self, d: i64) -> Option<PathBuf> {
        self.cache_dir
            .as_ref()
            .map(|dir| dir.join(format!("{}.{}.json", self.hash, d)))
    }

    pub fn dimension_at(&self, d: i64) -> Result<u64> {
        if let Some(path) = self.cache_path(d) {
            if let Ok(text) = fs::read_to_string(&path) {
                if let Ok(v) = text.trim().parse::<u64>() {
                    return Ok(v);
                }
            }
        }
        let (ech, _, count) = graded_piece_echelon(&self.reduced, d)?;
        let v = (count - ech.rank()) as u64;
        if let Some(path) = self.cache_path(d) {
            // best-effort write; a failed cache write must not fail the query
            let tmp = path.with_extension(format!("tmp{}", std::process::id()));
            if fs::write(&tmp, v.to_string()).is_ok() {
                let _ = fs::rename(&tmp, &path);
            }
        }
        Ok(v)
    }

    /// Dimensions in degrees 0..=maxdeg, computed degree by degree in parallel.
    pub fn hilbert_function(&self, maxdeg: i64) -> Result<Vec<u64>> {
        (0..=maxdeg)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|d| self.dimension_at(d))
            .collect()
    }

    /// Total dimension of an Artinian quotient. A run of consecutive zero
    /// dimensions as long as the largest variable weight certifies that all
    /// higher degrees vanish too (every later monomial is a variable times a
    /// monomial landing in the zero run). Errors if no such run appears at or
    /// below `bound`.
    pub fn total_dimension(&self, bound: i64) -> Result<u64> {
        let maxw = self
            .reduced
            .context()
            .weights1()
            .iter()
            .copied()
            .max()
            .unwrap_or(1)
            .max(1);
        let mut total = 0u64;
        let mut zeros = 0i64;
        let mut d = 0i64;
        while zeros < maxw {
            if d > bound {
                return Err(Error::WindowExhausted {
                    what: "Artinian cutoff for graded total dimension".into(),
                    bound: bound as usize,
                });
            }
            let h = self.dimension_at(d)?;
            total += h;
            zeros = if h == 0 { zeros + 1 } else { 0 };
            d += 1;
        }
        Ok(total)
    }

    /// Hilbert function of an Artinian quotient with trailing zeros trimmed,
    /// under the same zero-run vanishing certificate as [`total_dimension`].
    ///
    /// [`total_dimension`]: GradedQuotient::total_dimension
    pub fn hilbert_until_vanishing(&self, bound: i64) -> Result<Vec<u64>> {
        let maxw = self
            .reduced
            .context()
            .weights1()
            .iter()
            .copied()
            .max()
            .unwrap_or(1)
            .max(1);
        let mut dims = Vec::new();
        let mut zeros = 0i64;
        let mut d = 0i64;
        while zeros < maxw {
            if d > bound {
                return Err(Error::WindowExhausted {
                    what: "Artinian cutoff for graded Hilbert function".into(),
                    bound: bound as usize,
                });
            }
            let h = self.dimension_at(d)?;
            dims.push(h);
            zeros = if h == 0 { zeros + 1 } else { 0 };
            d += 1;
        }
        while dims.last() == Some(&0) {
            dims.pop();
        }
        Ok(dims)
    }
}

/// Dimensions of the graded pieces of Gr_m(A) for the Artinian quotient A of the
/// presentation, m its maximal graded ideal: in each ambient degree the rank jump
/// from adjoining the monomials of total exponent >= i descending in i splits the
/// degree-d piece by m-adic order. Trailing zeros are trimmed.
pub fn gr_m_filtration(pres: &IdealPresentation, maxdeg: i64) -> Result<Vec<u64>> {
    let ctx = pres.context();
    let mut out: BTreeMap<i64, u64> = BTreeMap::new();
    for d in 0..=maxdeg {
        let (ech_ideal, index, _) = graded_piece_echelon(pres, d)?;
        let monos = monomials_of_weight(ctx, d);
        let maxorder = d + 1;
        // dims[i] = rank(I_d + span of monomials with at least i variable factors)
        let mut dims = vec![0usize; maxorder as usize + 2];
        let mut ech = ech_ideal.clone();
        dims[maxorder as usize + 1] = ech.rank();
        for i in (0..=maxorder).rev() {
            for m in &monos {
                if m.total() as i64 == i {
                    ech.add_rational_row(&[(index[m], Rational::one())]);
                }
            }
            dims[i as usize] = ech.rank();
        }
        for i in 0..=maxorder {
            let v = dims[i as usize] - dims[i as usize + 1];
            if v > 0 {
                *out.entry(i).or_insert(0) += v as u64;
            }
        }
    }
    let top = out.keys().max().copied().unwrap_or(-1);
    Ok((0..=top).map(|i| out.get(&i).copied().unwrap_or(0)).collect())
}

/// Per-degree cumulative m-adic dimensions of an Artinian graded quotient:
/// entry ((j, k)) is the dimension of the image of the k-th power of the
/// maximal ideal inside the degree-j piece, for 0 <= k <= j + 1.
pub fn m_adic_cumulative(
    pres: &IdealPresentation,
    maxdeg: i64,
) -> Result<BTreeMap<(i64, i64), u64>> {
    let ctx = pres.context();
    let mut out = BTreeMap::new();
    for j in 0..=maxdeg {
        let (ech_ideal, index, _) = graded_piece_echelon(pres, j)?;
        let base = ech_ideal.rank();
        let monos = monomials_of_weight(ctx, j);
        let maxorder = j + 1;
        let mut ech = ech_ideal.clone();
        for k in (0..=maxorder).rev() {
            for m in &monos {
                if m.total() as i64 == k {
                    ech.add_rational_row(&[(index[m], Rational::one())]);
                }
            }
            out.insert((j, k), (ech.rank() - base) as u64);
        }
    }
    Ok(out)
}

/// Graded model of the deformed ring at eps = 1: the degree-B piece of
/// Q[s, e2..ep] / I with s of weight 1 and e_i of weight i. Multiplication by
/// s identifies all high enough pieces, so one piece carries the ring at
/// s = 1; construction certifies dim at B and B + 1 agree.
pub struct VModel {
    p: u32,
    q: u32,
    delta: i64,
    b_degree: i64,
    ctx: Arc<VariableContext>,
    index: BTreeMap<Monomial, u32>,
    ech_ideal: Echelon,
    dimension: u64,
}

impl VModel {
    pub fn new(p: u32, q: u32, b_degree: Option<i64>) -> Result<VModel> {
        let gamma = NumericalSemigroup::from_pair(p, q)?;
        let delta = gamma.gaps().len() as i64;
        let b = b_degree.unwrap_or(2 * delta + 2);
        let full = eps1_e_only(p, q, None)?;
        // Generators above the model window contribute no multiples to the two
        // pieces inspected, and pruning keeps the ideal identical; together
        // they leave only the few low-degree generators, whose rows are far
        // smaller than those of the high-degree ones.
        let mut low = Vec::new();
        for g in full.generators() {
            if g.homogeneous_degree1()? <= b + 1 {
                low.push(g.clone());
            }
        }
        let filtered =
            IdealPresentation::new(Arc::clone(full.context()), low, full.homogeneity())?;
        let pres = prune_redundant(&filtered)?;
        let (ech, index, count) = graded_piece_echelon(&pres, b)?;
        let dimension = (count - ech.rank()) as u64;
        let (ech1, _, count1) = graded_piece_echelon(&pres, b + 1)?;
        let dim1 = (count1 - ech1.rank()) as u64;
        if dimension != dim1 {
            return Err(Error::WindowExhausted {
                what: format!("graded model dimension still moving between degrees {b} and {}", b + 1),
                bound: b as usize,
            });
        }
        Ok(VModel {
            p,
            q,
            delta,
            b_degree: b,
            ctx: Arc::clone(pres.context()),
            index,
            ech_ideal: ech,
            dimension,
        })
    }

    pub fn dimension(&self) -> u64 {
        self.dimension
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    pub fn b_degree(&self) -> i64 {
        self.b_degree
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Weight of a monomial under s -> 0, e_i -> i - 1.
    pub fn epsilon_weight(&self, m: &Monomial) -> i64 {
        m.exps()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &e)| e as i64 * (self.ctx.weights1()[k] - 1))
            .sum()
    }

    /// Row for the class of s^(B - deg m) * m.
    fn fill_row(&self, m: &Monomial) -> Vec<(u32, Rational)> {
        let sw = self.ctx.degree1(m.exps());
        assert!(sw <= self.b_degree, "monomial degree exceeds the model degree");
        let mm = m.with_exp(0, m.exp(0) + (self.b_degree - sw) as u32);
        vec![(self.index[&mm], Rational::one())]
    }

    /// Dimension of the span of the classes of the given monomials in the model.
    pub fn span_dim(&self, monos: &[Monomial]) -> u64 {
        let mut ech = self.ech_ideal.clone();
        let base = ech.rank();
        for m in monos {
            ech.add_rational_row(&self.fill_row(m));
        }
        (ech.rank() - base) as u64
    }

    /// Span dimensions along an ascending chain: entry k is the dimension of
    /// the span of the union of batches 0..=k. One growing echelon serves the
    /// whole chain, so this is far cheaper than one span_dim call per level.
    pub fn span_dims_cumulative(&self, batches: &[Vec<Monomial>]) -> Vec<u64> {
        let mut ech = self.ech_ideal.clone();
        let base = ech.rank();
        let mut out = Vec::with_capacity(batches.len());
        for batch in batches {
            for m in batch {
                ech.add_rational_row(&self.fill_row(m));
            }
            out.push((ech.rank() - base) as u64);
        }
        out
    }

    /// All s-free monomials of degree at most B whose (epsilon weight, degree)
    /// pair satisfies the predicate.
    pub fn e_monomials(&self, pred: impl Fn(i64, i64) -> bool) -> Vec<Monomial> {
        let mut out = Vec::new();
        for d in 0..=self.b_degree {
            for m in monomials_of_weight(&self.ctx, d) {
                if m.exp(0) != 0 {
                    continue;
                }
                if pred(self.epsilon_weight(&m), d) {
                    out.push(m);
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FiltrationEntry {
    pub i: i64,
    pub j: i64,
    pub dim: u64,
}

/// Joint associated-graded dimensions of the two filtrations on the model: the
/// epsilon-weight filtration and the degree filtration by s-free monomials.
#[derive(Debug, Clone, Serialize)]
pub struct FiltrationTable {
    pub p: u32,
    pub q: u32,
    pub delta: i64,
    pub entries: Vec<FiltrationEntry>,
}

impl FiltrationTable {
    pub fn get(&self, i: i64, j: i64) -> u64 {
        self.entries
            .iter()
            .find(|e| e.i == i && e.j == j)
            .map(|e| e.dim)
            .unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|e| e.dim).sum()
    }

    /// Sums over j for each i = 0..=delta.
    pub fn row_sums(&self) -> Vec<u64> {
        (0..=self.delta)
            .map(|i| self.entries.iter().filter(|e| e.i == i).map(|e| e.dim).sum())
            .collect()
    }

    /// Sums over i for each j = 0..=2 delta.
    pub fn col_sums(&self) -> Vec<u64> {
        (0..=2 * self.delta)
            .map(|j| self.entries.iter().filter(|e| e.j == j).map(|e| e.dim).sum())
            .collect()
    }

    /// Every nonzero entry satisfies i <= j <= 2i.
    pub fn support_ok(&self) -> bool {
        self.entries.iter().all(|e| e.i <= e.j && e.j <= 2 * e.i)
    }

    /// dims(i, j) == dims(delta - j + i, 2 delta - j) for every entry.
    pub fn hard_lefschetz_ok(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.dim == self.get(self.delta - e.j + e.i, 2 * self.delta - e.j))
    }
}

/// Compute the joint filtration table on the degree-B model. Intersections are
/// genuine subspace intersections, dim(U cap W) = dim U + dim W - dim(U + W),
/// then a fourfold difference extracts each (i, j) piece.
pub fn filtration_table(p: u32, q: u32, b_degree: Option<i64>) -> Result<FiltrationTable> {
    let vm = VModel::new(p, q, b_degree)?;
    let delta = vm.delta();
    let imax = delta;
    let jmax = 2 * delta;
    let u_batches: Vec<Vec<Monomial>> = (0..=imax)
        .map(|i| vm.e_monomials(|ew, _| ew == i))
        .collect();
    let w_batches: Vec<Vec<Monomial>> = (0..=jmax)
        .map(|j| vm.e_monomials(|_, sw| sw == j))
        .collect();
    let mut dim_u: BTreeMap<i64, u64> = BTreeMap::new();
    let mut dim_w: BTreeMap<i64, u64> = BTreeMap::new();
    dim_u.insert(-1, 0);
    dim_w.insert(-1, 0);
    for (i, d) in vm.span_dims_cumulative(&u_batches).into_iter().enumerate() {
        dim_u.insert(i as i64, d);
    }
    for (j, d) in vm.span_dims_cumulative(&w_batches).into_iter().enumerate() {
        dim_w.insert(j as i64, d);
    }
    // inter(i, j) = dim(U_i cap W_j) via dim U + dim W - dim(U + W); for each
    // fixed i the sums over ascending j form one chain, so one sweep per i.
    let mut inter: BTreeMap<(i64, i64), i64> = BTreeMap::new();
    for j in -1..=jmax {
        inter.insert((-1, j), 0);
    }
    for i in 0..=imax {
        inter.insert((i, -1), 0);
        let mut chain: Vec<Vec<Monomial>> =
            vec![vm.e_monomials(|ew, _| ew <= i)];
        chain.extend(w_batches.iter().cloned());
        let sums = vm.span_dims_cumulative(&chain);
        for j in 0..=jmax {
            let d_sum = sums[j as usize + 1];
            inter.insert(
                (i, j),
                dim_u[&i] as i64 + dim_w[&j] as i64 - d_sum as i64,
            );
        }
    }
    let mut entries = Vec::new();
    for i in 0..=imax {
        for j in 0..=jmax {
            let v = inter[&(i, j)] - inter[&(i - 1, j)] - inter[&(i, j - 1)]
                + inter[&(i - 1, j - 1)];
            assert!(v >= 0, "filtration piece ({i}, {j}) has negative dimension");
            if v > 0 {
                entries.push(FiltrationEntry {
                    i,
                    j,
                    dim: v as u64,
                });
            }
        }
    }
    Ok(FiltrationTable {
        p,
        q,
        delta,
        entries,
    })
}

/// Perverse-degree dimensions from the epsilon-weight filtration on the model:
/// entry a is dim F_{<=a} - dim F_{<=a-1} for a = 0..=delta.
pub fn betti_from_model(p: u32, q: u32) -> Result<Vec<u64>> {
    let vm = VModel::new(p, q, None)?;
    let delta = vm.delta();
    let batches: Vec<Vec<Monomial>> = (0..=delta)
        .map(|a| vm.e_monomials(|ew, _| ew == a))
        .collect();
    let dims = vm.span_dims_cumulative(&batches);
    let mut b = vec![dims[0]];
    for a in 1..=delta as usize {
        b.push(dims[a] - dims[a - 1]);
    }
    Ok(b)
}

struct SlotData {
    ech: Echelon,
    index: BTreeMap<Monomial, u32>,
    count: usize,
}

/// Bidegree slots of the two-parameter family: monomial bases, per-slot ideal
/// echelons, and saturated fiber dimensions certified by two agreeing
/// saturation exponents.
pub struct BigradedSlots {
    family: FFamily,
    gens: Vec<SparsePoly>,
    mono_cache: BTreeMap<(i64, i64), Vec<Monomial>>,
    slot_cache: BTreeMap<(i64, i64), SlotData>,
}

impl BigradedSlots {
    pub fn new(p: u32, q: u32) -> Result<Self> {
        let family = build_f_family(p, q, &FamilyOptions::default())?;
        let gens: Vec<SparsePoly> = family
            .coeffs
            .iter()
            .filter(|g| !g.is_zero())
            .cloned()
            .collect();
        Ok(BigradedSlots {
            family,
            gens,
            mono_cache: BTreeMap::new(),
            slot_cache: BTreeMap::new(),
        })
    }

    /// All monomials of bidegree (a, b): bounded exponents on the coefficient
    /// variables, then a unique eps^ra s^rb fill.
    fn monos(&mut self, a: i64, b: i64) -> Vec<Monomial> {
        if a < 0 || b < 0 {
            return Vec::new();
        }
        if let Some(v) = self.mono_cache.get(&(a, b)) {
            return v.clone();
        }
        let ctx = &self.family.context;
        let n = ctx.len();
        let w1 = ctx.weights1();
        let w2 = ctx.weights2().expect("family context is bigraded");
        let mut out = Vec::new();
        let mut acc = vec![0u32; n];
        fn rec(
            w1: &[i64],
            w2: &[i64],
            i: usize,
            ra: i64,
            rb: i64,
            acc: &mut Vec<u32>,
            out: &mut Vec<Monomial>,
        ) {
            if i == w1.len() {
                acc[0] = ra as u32;
                acc[1] = rb as u32;
                out.push(Monomial::from_exps(acc.clone()));
                return;
            }
            let mut e = 0i64;
            while e * w1[i] <= ra && e * w2[i] <= rb {
                acc[i] = e as u32;
                rec(w1, w2, i + 1, ra - e * w1[i], rb - e * w2[i], acc, out);
                e += 1;
            }
            acc[i] = 0;
        }
        rec(w1, w2, 2, a, b, &mut acc, &mut out);
        self.mono_cache.insert((a, b), out.clone());
        out
    }

    fn ensure_slot(&mut self, a: i64, b: i64) -> Result<()> {
        if self.slot_cache.contains_key(&(a, b)) {
            return Ok(());
        }
        let monos = self.monos(a, b);
        let index: BTreeMap<Monomial, u32> = monos
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i as u32))
            .collect();
        let mut ech = Echelon::new();
        let gens = self.gens.clone();
        for g in &gens {
            let ga = g.homogeneous_degree1()?;
            let gb = g.homogeneous_degree2()?;
            if ga > a || gb > b {
                continue;
            }
            for u in self.monos(a - ga, b - gb) {
                let mut row: Vec<(u32, Rational)> = g
                    .terms()
                    .iter()
                    .map(|(m, c)| (index[&m.mul(&u)], c.clone()))
                    .collect();
                row.sort_unstable_by_key(|e| e.0);
                ech.add_rational_row(&row);
            }
        }
        self.slot_cache.insert(
            (a, b),
            SlotData {
                ech,
                index,
                count: monos.len(),
            },
        );
        Ok(())
    }

    /// Fiber dimension of the unsaturated family at slot (a, b).
    pub fn dim_unsaturated(&mut self, a: i64, b: i64) -> Result<u64> {
        self.ensure_slot(a, b)?;
        let slot = &self.slot_cache[&(a, b)];
        Ok((slot.count - slot.ech.rank()) as u64)
    }

    /// Saturated fiber dimension at slot (a, b): the rank jump from adjoining
    /// eps^K times the slot basis to the ideal piece at (a + K, b), with
    /// K = max(b - a, 0) + 1. Certified by K and K + 1 agreeing; disagreement
    /// means the saturation window is too small.
    pub fn dim_saturated(&mut self, a: i64, b: i64) -> Result<u64> {
        let k0 = (b - a).max(0) + 1;
        let mut vals = Vec::new();
        for k in [k0, k0 + 1] {
            self.ensure_slot(a + k, b)?;
            let monos = self.monos(a, b);
            let slot = &self.slot_cache[&(a + k, b)];
            let base = slot.ech.rank();
            let mut ech = slot.ech.clone();
            for m in &monos {
                let mm = m.with_exp(0, m.exp(0) + k as u32);
                ech.add_rational_row(&[(slot.index[&mm], Rational::one())]);
            }
            vals.push((ech.rank() - base) as u64);
        }
        if vals[0] != vals[1] {
            return Err(Error::WindowExhausted {
                what: format!("saturation exponent at slot ({a}, {b}) not yet stable"),
                bound: k0 as usize,
            });
        }
        Ok(vals[0])
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SlotComparison {
    pub a: i64,
    pub b: i64,
    pub saturated: u64,
    pub filtered: u64,
}

/// Slotwise comparison of the saturated family fibers against the joint
/// filtration intersections on the graded model over a rectangular window.
#[derive(Debug, Clone, Serialize)]
pub struct FlatnessReport {
    pub p: u32,
    pub q: u32,
    pub window: (i64, i64),
    pub slots: Vec<SlotComparison>,
    pub strict: Vec<(i64, i64)>,
}

/// Compare dim of the saturated slot (a, b) with the dimension of the
/// intersection of the two monomial filtrations at levels (a, b) on the model,
/// over 0..=window. The saturated side can never exceed the filtered side; any
/// strictly smaller slot is recorded.
pub fn flatness_probe(p: u32, q: u32, window: Option<(i64, i64)>) -> Result<FlatnessReport> {
    let gamma = NumericalSemigroup::from_pair(p, q)?;
    let delta = gamma.gaps().len() as i64;
    let window = window.unwrap_or((2 * delta + 2, 2 * delta + 2));
    let mut bs = BigradedSlots::new(p, q)?;
    let vm = VModel::new(p, q, None)?;
    let mut slots = Vec::new();
    let mut strict = Vec::new();
    for a in 0..=window.0 {
        let ua = vm.e_monomials(|ew, _| ew <= a);
        let du = vm.span_dim(&ua);
        for b in 0..=window.1 {
            let wb = vm.e_monomials(|_, sw| sw <= b);
            let dw = vm.span_dim(&wb);
            let mut both = ua.clone();
            both.extend(wb.iter().cloned());
            let dsum = vm.span_dim(&both);
            let filtered = du + dw - dsum;
            let saturated = bs.dim_saturated(a, b)?;
            assert!(
                saturated <= filtered,
                "saturated slot ({a}, {b}) exceeds the filtration intersection"
            );
            if saturated < filtered {
                strict.push((a, b));
            }
            slots.push(SlotComparison {
                a,
                b,
                saturated,
                filtered,
            });
        }
    }
    Ok(FlatnessReport {
        p,
        q,
        window,
        slots,
        strict,
    })
}
