//! Integer arithmetic functions used throughout the crate: the index
//! function `psi` (the number of cocyclic lattices of a given index), the
//! additive function `G` governing the size lower bound, factorization and
//! divisors, and the finite solution sets of the weight equation.
//!
//! All weight arithmetic is exact; see [`Rational`].

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational number used for weights. Always kept in lowest terms.
pub type Rational = Ratio<i128>;

/// Prime factorization of a positive integer, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Factorization {
    entries: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn entries(&self) -> &[(u64, u32)] {
        &self.entries
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.iter().map(|&(p, _)| p)
    }

    /// The integer this factorization represents.
    pub fn value(&self) -> u64 {
        self.entries.iter().map(|&(p, e)| p.pow(e)).product()
    }

    pub fn is_prime_power(&self) -> bool {
        self.entries.len() == 1
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn factor(mut n: u64) -> Factorization {
    debug_assert!(n >= 1);
    let mut entries = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            entries.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        entries.push((n, 1));
    }
    Factorization { entries }
}

/// Factorizes `n` by trial division.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Zero);
    }
    Ok(factor(n))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let f = factor(n);
    f.entries == [(n, 1)]
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    let f = factorize(n)?;
    let mut divs = vec![1u64];
    for &(p, e) in f.entries() {
        let current = divs.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..current {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    Ok(divs)
}

/// The p-adic valuation of `n` (`n >= 1`).
pub fn ord(mut n: u64, p: u64) -> u32 {
    debug_assert!(n >= 1 && p >= 2);
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

pub(crate) fn psi_of(n: u64) -> u64 {
    factor(n)
        .entries
        .iter()
        .map(|&(p, e)| p.pow(e - 1) * (p + 1))
        .product()
}

pub(crate) fn g_of(n: u64) -> u64 {
    factor(n)
        .entries
        .iter()
        .map(|&(p, e)| u64::from(e) * (p - 1) + 1)
        .sum()
}

/// `psi(N) = N * prod_{p | N} (1 + 1/p)`, the size of P1(Z/N).
pub fn psi(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Zero);
    }
    Ok(psi_of(n))
}

/// The additive function with `G(p^e) = e(p - 1) + 1`.
pub fn big_g(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Zero);
    }
    Ok(g_of(n))
}

/// Totally additive function with `F(p) = p - 1`.
pub fn big_f(n: u64) -> Result<u64> {
    let f = factorize(n)?;
    Ok(f.entries().iter().map(|&(p, e)| u64::from(e) * (p - 1)).sum())
}

/// Number of distinct prime factors.
pub fn omega(n: u64) -> Result<u64> {
    Ok(factorize(n)?.entries().len() as u64)
}

/// Checks `G(m) + G(n) == G(lcm) + G(gcd)`. Always true; kept as a test hook.
pub fn g_lcm_gcd_identity_check(m: u64, n: u64) -> bool {
    if m == 0 || n == 0 {
        return false;
    }
    g_of(m) + g_of(n) == g_of(m.lcm(&n)) + g_of(m.gcd(&n))
}

/// All `N` with `psi(N) == m`, ascending.
///
/// A prime `p` can divide such an `N` only if `p + 1 | m`, and `p^e | N`
/// forces `p^(e-1) | m`, so the search below is finite.
pub fn psi_preimages(m: u64) -> Vec<u64> {
    if m == 0 {
        return Vec::new();
    }
    let candidates: Vec<u64> = divisors(m)
        .expect("m >= 1")
        .into_iter()
        .filter(|&d| d >= 3 && is_prime(d - 1))
        .map(|d| d - 1)
        .collect();

    fn rec(primes: &[u64], remaining: u64, acc: u64, out: &mut Vec<u64>) {
        if remaining == 1 {
            out.push(acc);
        }
        for (i, &p) in primes.iter().enumerate() {
            if remaining % (p + 1) != 0 {
                continue;
            }
            let mut rest = remaining / (p + 1);
            let mut pk = p;
            loop {
                rec(&primes[i + 1..], rest, acc * pk, out);
                if rest % p != 0 {
                    break;
                }
                rest /= p;
                pk *= p;
            }
        }
    }

    let mut out = Vec::new();
    rec(&candidates, m, 1, &mut out);
    out.sort_unstable();
    out
}

fn unit_fraction_search(
    n: usize,
    target: Rational,
    accept: &dyn Fn(u64) -> bool,
) -> Vec<Vec<u64>> {
    fn rec(
        remaining: usize,
        target: Rational,
        min: u64,
        acc: &mut Vec<u64>,
        out: &mut Vec<Vec<u64>>,
        accept: &dyn Fn(u64) -> bool,
    ) {
        let (num, den) = (*target.numer(), *target.denom());
        if remaining == 1 {
            if num == 1 && den >= min as i128 && accept(den as u64) {
                acc.push(den as u64);
                out.push(acc.clone());
                acc.pop();
            }
            return;
        }
        // 1/T < min(M_i) <= remaining/T
        let lo = ((den / num) + 1).max(min as i128);
        let hi = (remaining as i128 * den) / num;
        let mut m = lo;
        while m <= hi {
            let mu = m as u64;
            if accept(mu) {
                acc.push(mu);
                let rest = target - Rational::new(1, m);
                rec(remaining - 1, rest, mu, acc, out, accept);
                acc.pop();
            }
            m += 1;
        }
    }

    let mut out = Vec::new();
    if n == 0 || target <= Rational::zero() {
        return out;
    }
    rec(n, target, 1, &mut Vec::with_capacity(n), &mut out, accept);
    out
}

/// All multisets `{M_1, ..., M_n}` of positive integers with
/// `sum 1/M_i == target`, each sorted ascending; the list is sorted
/// lexicographically.
pub fn unit_fraction_solutions(n: usize, target: Rational) -> Vec<Vec<u64>> {
    unit_fraction_search(n, target, &|_| true)
}

/// All index multisets `{N_1, ..., N_n}` with `sum 1/psi(N_i) == 1`.
///
/// With `nontrivial` every index must be at least 2.
pub fn solve_weight_equation(n: usize, nontrivial: bool) -> Vec<Vec<u64>> {
    let in_image = |m: u64| {
        if nontrivial && m < 3 {
            return false;
        }
        !psi_preimages(m).is_empty()
    };
    let mut out = Vec::new();
    for psi_values in unit_fraction_search(n, Rational::one(), &in_image) {
        let fibers: Vec<Vec<u64>> = psi_values.iter().map(|&m| psi_preimages(m)).collect();
        let mut choice = vec![0usize; n];
        loop {
            let mut indices: Vec<u64> = (0..n).map(|i| fibers[i][choice[i]]).collect();
            indices.sort_unstable();
            if !nontrivial || indices.iter().all(|&x| x >= 2) {
                out.push(indices);
            }
            let mut k = 0;
            while k < n {
                choice[k] += 1;
                if choice[k] < fibers[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Whether some two entries are coprime. Pairwise separated lattices never
/// have coprime indices, so such index lists admit no strongly minimal
/// covering.
pub fn has_coprime_pair(indices: &[u64]) -> bool {
    indices
        .iter()
        .enumerate()
        .any(|(i, &a)| indices[i + 1..].iter().any(|&b| a.gcd(&b) == 1))
}

/// Exact weight `1/psi(N)` of a lattice of index `n`.
pub fn index_weight(n: u64) -> Rational {
    Rational::new(1, psi_of(n) as i128)
}
