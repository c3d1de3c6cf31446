//! Numerical semigroups, their modules, balancing shifts, and the flag-tuple
//! combinatorics indexing torus fixed points.
//!
//! Modules are stored 0-normalized (minimum element 0) as the set of adjoined gaps;
//! the balancing shift is carried separately, which makes equality testing trivial.
//! All enumerations run inside explicit windows and fail loudly if a result touches
//! a window boundary, so a too-small window can never produce a silently wrong set.

use crate::{Error, Result};
use num::integer::gcd;
use std::collections::BTreeSet;

/// Cofinite additive sub-monoid of the non-negative integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericalSemigroup {
    generators: Vec<u32>,
    member: Vec<bool>,
    gaps: Vec<u32>,
    conductor: i64,
}

impl NumericalSemigroup {
    /// Build from any gcd-1 generating set by sieving; the sieve bound is certified
    /// by finding a run of `min(generators)` consecutive members.
    pub fn new(generators: &[u32]) -> Result<Self> {
        let mut gens: Vec<u32> = generators.to_vec();
        gens.sort_unstable();
        gens.dedup();
        if gens.is_empty() || gens[0] == 0 {
            return Err(Error::BadParameter(format!(
                "invalid generators {generators:?}"
            )));
        }
        let g = gens.iter().fold(0u32, |a, &b| gcd(a, b));
        if g != 1 {
            return Err(Error::BadParameter(format!(
                "generators {gens:?} have gcd {g}"
            )));
        }
        let gmin = gens[0] as usize;
        let gmax = *gens.last().unwrap() as usize;
        let mut bound = gmin * gmax + gmax + 1;
        loop {
            let mut member = vec![false; bound + 1];
            member[0] = true;
            for n in 1..=bound {
                member[n] = gens
                    .iter()
                    .any(|&gi| n >= gi as usize && member[n - gi as usize]);
            }
            // a run of gmin consecutive members certifies the conductor
            if member[bound + 1 - gmin..=bound].iter().all(|&m| m) {
                let gaps: Vec<u32> = (1..=bound as u32)
                    .filter(|&n| !member[n as usize])
                    .collect();
                let conductor = gaps.last().map_or(0, |&g| g as i64 + 1);
                return Ok(NumericalSemigroup {
                    generators: gens,
                    member,
                    gaps,
                    conductor,
                });
            }
            bound *= 2;
        }
    }

    /// Coprime-pair constructor with the pair-specific error.
    pub fn from_pair(p: u32, q: u32) -> Result<Self> {
        if p == 0 || q == 0 || gcd(p, q) != 1 {
            return Err(Error::NotCoprime { p, q });
        }
        Self::new(&[p, q])
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn gaps(&self) -> &[u32] {
        &self.gaps
    }

    /// Smallest c with [c, infinity) contained in the semigroup.
    pub fn conductor(&self) -> i64 {
        self.conductor
    }

    /// Number of gaps.
    pub fn delta(&self) -> usize {
        self.gaps.len()
    }

    pub fn contains(&self, n: i64) -> bool {
        if n < 0 {
            return false;
        }
        if n >= self.conductor {
            return true;
        }
        self.member[n as usize]
    }

    /// True when no generator lies in the monoid generated by the others.
    pub fn is_minimal_generating_set(&self) -> bool {
        self.redundant_generators().is_empty()
    }

    /// Generators representable by the remaining ones.
    pub fn redundant_generators(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for (k, &g) in self.generators.iter().enumerate() {
            let others: Vec<u32> = self
                .generators
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != k)
                .map(|(_, &x)| x)
                .collect();
            let t = g as usize;
            let mut reach = vec![false; t + 1];
            reach[0] = true;
            for n in 1..=t {
                reach[n] = others
                    .iter()
                    .any(|&o| n >= o as usize && reach[n - o as usize]);
            }
            if reach[t] {
                out.push(g);
            }
        }
        out
    }
}

/// 0-normalized module over a semigroup, identified by its adjoined gap set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GammaModule {
    adjoined: Vec<u32>,
}

impl GammaModule {
    pub fn new(adjoined: Vec<u32>) -> Self {
        let mut a = adjoined;
        a.sort_unstable();
        a.dedup();
        GammaModule { adjoined: a }
    }

    pub fn adjoined_gaps(&self) -> &[u32] {
        &self.adjoined
    }

    pub fn contains(&self, gamma: &NumericalSemigroup, n: i64) -> bool {
        gamma.contains(n) || (n >= 0 && self.adjoined.binary_search(&(n as u32)).is_ok())
    }
}

/// All 0-normalized modules: subsets D with Gamma in D in Z_{>=0}, 0 in D, and
/// D + Gamma in D. Depth-first over gap subsets (ascending) with closure pruning;
/// output is sorted canonically by adjoined set.
pub fn enumerate_modules(gamma: &NumericalSemigroup) -> Vec<GammaModule> {
    let gaps = gamma.gaps();
    let gap_set: BTreeSet<u32> = gaps.iter().copied().collect();
    let mut out = Vec::new();
    let mut chosen: Vec<u32> = Vec::new();

    fn closed(gamma: &NumericalSemigroup, gap_set: &BTreeSet<u32>, chosen: &[u32]) -> bool {
        chosen.iter().all(|&s| {
            gamma.generators().iter().all(|&g| {
                let t = s + g;
                !gap_set.contains(&t) || chosen.binary_search(&t).is_ok()
            })
        })
    }

    fn rec(
        gamma: &NumericalSemigroup,
        gaps: &[u32],
        gap_set: &BTreeSet<u32>,
        idx: usize,
        chosen: &mut Vec<u32>,
        out: &mut Vec<GammaModule>,
    ) {
        if idx == gaps.len() {
            if closed(gamma, gap_set, chosen) {
                out.push(GammaModule::new(chosen.clone()));
            }
            return;
        }
        let g = gaps[idx];
        // excluding g is dead if a chosen element forces it
        let forced = chosen.iter().any(|&s| {
            gamma.generators().iter().any(|&gi| s + gi == g)
        });
        if !forced {
            rec(gamma, gaps, gap_set, idx + 1, chosen, out);
        }
        chosen.push(g);
        rec(gamma, gaps, gap_set, idx + 1, chosen, out);
        chosen.pop();
    }

    rec(gamma, gaps, &gap_set, 0, &mut chosen, &mut out);
    out.sort();
    out
}

/// Module together with the shift placing it at a prescribed balance defect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancedModule {
    pub module: GammaModule,
    pub shift: i64,
}

/// #(sigma minus Gamma) - #(Gamma minus sigma) for sigma = (Gamma + adjoined) - shift,
/// counted over a window containing every element where the two sets differ.
pub fn defect(gamma: &NumericalSemigroup, module: &GammaModule, shift: i64) -> i64 {
    let lo = (-shift).min(0) - 1;
    let hi = gamma.conductor().max(gamma.conductor() - shift) + 1;
    let in_sigma = |n: i64| module.contains(gamma, n + shift);
    let mut a = 0i64;
    let mut b = 0i64;
    for n in lo..=hi {
        let s = in_sigma(n);
        let g = gamma.contains(n);
        if s && !g {
            a += 1;
        }
        if g && !s {
            b += 1;
        }
    }
    a - b
}

/// The unique shift with defect 0. Each unit shift changes the defect by exactly
/// one, so the balancing shift is -#adjoined; this is asserted against the direct
/// set count.
pub fn balance(gamma: &NumericalSemigroup, module: &GammaModule) -> BalancedModule {
    let shift = -(module.adjoined_gaps().len() as i64);
    assert_eq!(defect(gamma, module, shift), 0, "balance shift incorrect");
    BalancedModule {
        module: module.clone(),
        shift,
    }
}

/// All modules shifted to a prescribed defect; one representative per module.
pub fn enumerate_shifted_modules(gamma: &NumericalSemigroup, target_defect: i64) -> Vec<BalancedModule> {
    enumerate_modules(gamma)
        .into_iter()
        .map(|m| {
            let shift = target_defect - m.adjoined_gaps().len() as i64;
            assert_eq!(defect(gamma, &m, shift), target_defect, "defect shift incorrect");
            BalancedModule { module: m, shift }
        })
        .collect()
}

/// Minimal element of sigma = module - shift in each residue class mod `p`,
/// indexed by residue (entry r is congruent to r mod p).
pub fn p_basis(gamma: &NumericalSemigroup, bm: &BalancedModule, p: u32) -> Vec<i64> {
    let start = -bm.shift.min(0) - 1;
    let stop = gamma.conductor() - bm.shift + p as i64 + 1;
    let mut basis: Vec<Option<i64>> = vec![None; p as usize];
    let mut found = 0usize;
    for x in (start - p as i64)..=stop {
        if !bm.module.contains(gamma, x + bm.shift) {
            continue;
        }
        let r = x.rem_euclid(p as i64) as usize;
        if basis[r].is_none() {
            basis[r] = Some(x);
            found += 1;
            if found == p as usize {
                break;
            }
        }
    }
    basis
        .into_iter()
        .map(|v| v.expect("residue class missed; window bug"))
        .collect()
}

/// Tuple (d_1..d_p) indexing a full flag of modules.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FlagTuple {
    pub entries: Vec<i64>,
}

impl FlagTuple {
    /// Minimal generators mod p of the i-th flag step: d_1..d_i together with
    /// d_{i+1}+p..d_p+p, sorted.
    pub fn sigma_basis(&self, i: usize, p: u32) -> Vec<i64> {
        let mut b: Vec<i64> = self.entries[..i].to_vec();
        b.extend(self.entries[i..].iter().map(|&d| d + p as i64));
        b.sort_unstable();
        b
    }
}

fn pmodule_contains(gens: &[i64], x: i64, p: i64) -> bool {
    gens.iter().any(|&g| x >= g && (x - g) % p == 0)
}

/// All flag tuples for the pair (p, q): entries in distinct residue classes mod p,
/// each d_i + q in the p-step module generated by d_{i-1},..,d_1, d_p+p,..,d_i+p,
/// normalized to total sum pq(p-1)/2 (the degree normalization that pins one tuple
/// per translation class). Search window is [-pq, pq + conductor]; a result on the
/// boundary is an error rather than a silently truncated answer.
pub fn enumerate_flag_tuples(p: u32, q: u32) -> Result<Vec<FlagTuple>> {
    let gamma = NumericalSemigroup::from_pair(p, q)?;
    let pi = p as i64;
    let qi = q as i64;
    let lo = -pi * qi;
    let hi = pi * qi + gamma.conductor();
    let target = pi * qi * (pi - 1) / 2;
    let mut results: Vec<FlagTuple> = Vec::new();
    let mut prefix: Vec<i64> = Vec::new();

    fn admissible(d: &[i64], p: i64, q: i64) -> bool {
        let n = d.len();
        for j in 1..=n {
            let mut gens: Vec<i64> = d[..j - 1].to_vec();
            gens.extend(d[j - 1..].iter().map(|&x| x + p));
            if !pmodule_contains(&gens, d[j - 1] + q, p) {
                return false;
            }
        }
        true
    }

    fn rec(
        prefix: &mut Vec<i64>,
        p: i64,
        q: i64,
        lo: i64,
        hi: i64,
        target: i64,
        out: &mut Vec<FlagTuple>,
    ) {
        let i = prefix.len() as i64;
        if i == p {
            if prefix.iter().sum::<i64>() == target && admissible(prefix, p, q) {
                out.push(FlagTuple {
                    entries: prefix.clone(),
                });
            }
            return;
        }
        let rem = p - i;
        let partial: i64 = prefix.iter().sum();
        if partial + lo * rem > target || partial + hi * rem < target {
            return;
        }
        for x in lo..=hi {
            if prefix.iter().any(|&y| (x - y) % p == 0) {
                continue;
            }
            prefix.push(x);
            rec(prefix, p, q, lo, hi, target, out);
            prefix.pop();
        }
    }

    rec(&mut prefix, pi, qi, lo, hi, target, &mut results);
    for t in &results {
        if t.entries.iter().any(|&x| x <= lo || x >= hi) {
            return Err(Error::WindowBoundary(format!(
                "flag tuple {:?} touches the search window [{lo}, {hi}]",
                t.entries
            )));
        }
    }
    results.sort();
    Ok(results)
}

/// Check the flag-of-modules invariants of a tuple: each step's basis sums to
/// pq(p-1)/2 + p(p-i), the generated modules form a chain with one-element jumps,
/// and every step is closed under adding q.
pub fn verify_flag_chain(t: &FlagTuple, p: u32, q: u32) -> Result<()> {
    let gamma = NumericalSemigroup::from_pair(p, q)?;
    let pi = p as i64;
    let qi = q as i64;
    let cap = 3 * (pi * qi + gamma.conductor()) + 4 * pi;
    let module_of = |basis: &[i64]| -> BTreeSet<i64> {
        let mut s = BTreeSet::new();
        for &b in basis {
            let mut x = b;
            while x < cap {
                s.insert(x);
                x += pi;
            }
        }
        s
    };
    let mut prev: Option<BTreeSet<i64>> = None;
    for i in 1..=p as usize {
        let basis = t.sigma_basis(i, p);
        let expect = pi * qi * (pi - 1) / 2 + pi * (pi - i as i64);
        let got: i64 = basis.iter().sum();
        if got != expect {
            return Err(Error::BadParameter(format!(
                "basis sum {got} != {expect} at step {i} of {:?}",
                t.entries
            )));
        }
        let m = module_of(&basis);
        for &b in &basis {
            if b + qi < cap && !m.contains(&(b + qi)) {
                return Err(Error::BadParameter(format!(
                    "step {i} of {:?} not closed under +q at {b}",
                    t.entries
                )));
            }
        }
        if let Some(ref pm) = prev {
            if !pm.is_subset(&m) || m.difference(pm).count() != 1 {
                return Err(Error::BadParameter(format!(
                    "steps {} -> {i} of {:?} are not a unit-jump chain",
                    i - 1,
                    t.entries
                )));
            }
        }
        prev = Some(m);
    }
    Ok(())
}
