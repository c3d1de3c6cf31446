//! Independent combinatorial cross-checks used to validate the linear-algebra
//! pipeline: the two-parameter Catalan count, the staircase-partition generating
//! polynomial, and the closed-form Hilbert series as a product of cyclotomic-style
//! factors. These are computed by direct enumeration or exact series division,
//! sharing no code with the quotient-ring machinery they certify.

use crate::exactalg::Integer;
use crate::{Error, Result};
use num::integer::gcd;
use num::{One, Signed, Zero};

fn require_coprime(p: u32, q: u32) -> Result<()> {
    if p == 0 || q == 0 || gcd(p, q) != 1 {
        Err(Error::NotCoprime { p, q })
    } else {
        Ok(())
    }
}

/// Exact binomial coefficient C(n, k).
fn binomial(n: u32, k: u32) -> Integer {
    if k > n {
        return Integer::zero();
    }
    let mut acc = Integer::one();
    for i in 1..=k.min(n - k) {
        acc = acc * Integer::from(n - k + i) / Integer::from(i);
    }
    acc
}

/// The count C(p+q, p) / (p+q); integrality is asserted.
pub fn catalan_count(p: u32, q: u32) -> Result<Integer> {
    require_coprime(p, q)?;
    let b = binomial(p + q, p);
    let n = Integer::from(p + q);
    let (quot, rem) = num::Integer::div_rem(&b, &n);
    assert!(rem.is_zero(), "C(p+q,p) not divisible by p+q");
    Ok(quot)
}

/// Size-generating polynomial of partitions fitting strictly under the staircase:
/// coefficient k counts partitions (l_1 >= ... >= l_{p-1} >= 0) of size k with
/// l_r <= floor(q (p - r) / p), i.e. diagrams whose cells (x, y) all satisfy
/// p x + q y < p q in 0-indexed coordinates.
pub fn dyck_poly(p: u32, q: u32) -> Result<Vec<u64>> {
    require_coprime(p, q)?;
    let bounds: Vec<u64> = (1..p).map(|r| (q as u64 * (p - r) as u64) / p as u64).collect();
    let mut counts: Vec<u64> = vec![0];

    fn rec(bounds: &[u64], row: usize, prev: u64, size: u64, counts: &mut Vec<u64>) {
        if row == bounds.len() {
            let k = size as usize;
            if counts.len() <= k {
                counts.resize(k + 1, 0);
            }
            counts[k] += 1;
            return;
        }
        let hi = prev.min(bounds[row]);
        for lam in 0..=hi {
            rec(bounds, row + 1, lam, size + lam, counts);
        }
    }

    rec(&bounds, 0, u64::MAX, 0, &mut counts);
    Ok(counts)
}

/// Power-series expansion of prod_{i=1}^{p-1} (1 - T^{q+i}) / (1 - T^{i+1}) up to
/// degree `up_to` inclusive. The quotient is a polynomial with non-negative integer
/// coefficients; both facts are asserted.
pub fn closed_hilbert_series(p: u32, q: u32, up_to: usize) -> Result<Vec<u64>> {
    require_coprime(p, q)?;
    let n = up_to + 1;
    let mul = |a: &[Integer], b: &[Integer]| -> Vec<Integer> {
        let mut out = vec![Integer::zero(); n.min(a.len() + b.len() - 1)];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if i + j < n {
                    out[i + j] += x * y;
                }
            }
        }
        out
    };
    let mut num = vec![Integer::one()];
    let mut den = vec![Integer::one()];
    for i in 1..p as usize {
        let mut t = vec![Integer::zero(); q as usize + i + 1];
        t[0] = Integer::one();
        t[q as usize + i] = -Integer::one();
        num = mul(&num, &t);
        let mut t = vec![Integer::zero(); i + 2];
        t[0] = Integer::one();
        t[i + 1] = -Integer::one();
        den = mul(&den, &t);
    }
    num.resize(n, Integer::zero());
    den.resize(n, Integer::zero());
    // den has constant term 1, so the series quotient stays integral step by step
    let mut out: Vec<Integer> = Vec::with_capacity(n);
    for d in 0..n {
        let mut acc = num[d].clone();
        for k in 1..=d {
            acc -= &den[k] * &out[d - k];
        }
        out.push(acc);
    }
    out.iter()
        .map(|x| {
            assert!(!x.is_negative(), "negative Hilbert coefficient");
            Ok(u64::try_from(x).expect("coefficient exceeds u64"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coprime_pairs(max_sum: u32) -> Vec<(u32, u32)> {
        let mut v = Vec::new();
        for p in 2..max_sum {
            for q in (p + 1)..=(max_sum - p) {
                if gcd(p, q) == 1 {
                    v.push((p, q));
                }
            }
        }
        v
    }

    #[test]
    fn catalan_values() {
        assert_eq!(catalan_count(2, 3).unwrap(), Integer::from(2));
        assert_eq!(catalan_count(3, 4).unwrap(), Integer::from(5));
        assert_eq!(catalan_count(4, 7).unwrap(), Integer::from(30));
    }

    #[test]
    fn rejects_non_coprime() {
        assert!(matches!(
            catalan_count(2, 4),
            Err(Error::NotCoprime { p: 2, q: 4 })
        ));
        assert!(dyck_poly(3, 6).is_err());
        assert!(closed_hilbert_series(4, 6, 5).is_err());
    }

    #[test]
    fn dyck_values() {
        assert_eq!(dyck_poly(2, 3).unwrap(), vec![1, 1]);
        assert_eq!(dyck_poly(3, 4).unwrap(), vec![1, 1, 2, 1]);
    }

    #[test]
    fn dyck_total_is_catalan() {
        for (p, q) in coprime_pairs(13) {
            let total: u64 = dyck_poly(p, q).unwrap().iter().sum();
            assert_eq!(Integer::from(total), catalan_count(p, q).unwrap(), "({p},{q})");
        }
    }

    #[test]
    fn closed_series_values() {
        assert_eq!(closed_hilbert_series(2, 3, 4).unwrap(), vec![1, 0, 1, 0, 0]);
        assert_eq!(
            closed_hilbert_series(3, 4, 8).unwrap(),
            vec![1, 0, 1, 1, 1, 0, 1, 0, 0]
        );
    }

    #[test]
    fn closed_series_sums_and_symmetry() {
        for (p, q) in coprime_pairs(13) {
            let delta = ((p - 1) * (q - 1) / 2) as usize;
            let h = closed_hilbert_series(p, q, 2 * delta + 3).unwrap();
            let total: u64 = h.iter().sum();
            assert_eq!(Integer::from(total), catalan_count(p, q).unwrap());
            for j in 0..=2 * delta {
                assert_eq!(h[j], h[2 * delta - j], "symmetry ({p},{q}) at {j}");
            }
            assert!(h[2 * delta + 1] == 0 && h[2 * delta + 2] == 0);
        }
    }
}
