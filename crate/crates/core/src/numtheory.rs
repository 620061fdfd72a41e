//! Modular arithmetic for Fermat quotients modulo `p^2`.
//!
//! Residues modulo `p^2` are held in `u64` with `u128` products, so primes
//! are capped at `MAX_PRIME` (`p^4` must fit in `u128`).

use std::collections::BTreeSet;

use crate::error::{invariant, param, Error, Result};

/// Largest prime accepted by the arithmetic routines.
pub const MAX_PRIME: u64 = (1 << 32) - 1;

/// Largest prime for which [`build_context`] will materialize the full
/// `p^2`-entry coset table.
pub const MAX_CONTEXT_PRIME: u64 = 4096;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Deterministic trial division; adequate for the word-sized inputs here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime divisors of `n`, ascending. Empty for `n <= 1`.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    prime_factors(n)
        .into_iter()
        .fold(n, |acc, q| acc / q * (q - 1))
}

pub fn mod_mul(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub fn mod_pow(base: u64, mut exp: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut base = base % n;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, n);
        }
        base = mod_mul(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `n`, if it exists.
pub fn mod_inv(a: u64, n: u64) -> Option<u64> {
    let (mut r0, mut r1) = (n as i128, (a % n) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(n as i128) as u64)
}

/// Rejects anything that is not an odd prime within [`MAX_PRIME`].
pub fn check_odd_prime(p: u64) -> Result<()> {
    if p > MAX_PRIME {
        return Err(Error::Capacity {
            what: "prime",
            value: p,
            cap: MAX_PRIME,
        });
    }
    if p == 2 || !is_prime(p) {
        return Err(param(format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// The Fermat quotient `q_p(u)`, with `q_p(u) = 0` when `p | u`.
pub fn fermat_quotient(p: u64, u: u64) -> Result<u64> {
    check_odd_prime(p)?;
    Ok(fermat_quotient_unchecked(p, u))
}

fn fermat_quotient_unchecked(p: u64, u: u64) -> u64 {
    if u % p == 0 {
        return 0;
    }
    let n = p * p;
    let r = mod_pow(u % n, p - 1, n);
    // r ≡ 1 (mod p), and r < p^2 gives a quotient already below p.
    (r - 1) / p
}

/// Least `t >= 1` with `a^t ≡ 1 (mod n)`.
pub fn multiplicative_order(a: u64, n: u64) -> Result<u64> {
    if n < 2 {
        return Err(param(format!("modulus {n} must be at least 2")));
    }
    if gcd(a % n, n) != 1 {
        return Err(param(format!("{a} is not invertible modulo {n}")));
    }
    let mut t = euler_phi(n);
    for q in prime_factors(t) {
        while t % q == 0 && mod_pow(a, t / q, n) == 1 {
            t /= q;
        }
    }
    Ok(t)
}

/// Smallest `g >= 2` whose order modulo `p^2` is `p(p-1)`.
pub fn find_primitive_root_mod_p2(p: u64) -> Result<u64> {
    check_odd_prime(p)?;
    let n = p * p;
    let full = p * (p - 1);
    (2..n)
        .filter(|g| g % p != 0)
        .find(|&g| multiplicative_order(g, n).is_ok_and(|t| t == full))
        .ok_or_else(|| invariant(format!("no primitive root modulo {p}^2")))
}

/// Whether `2^(p-1) ≡ 1 (mod p^2)`.
pub fn is_wieferich(p: u64) -> Result<bool> {
    check_odd_prime(p)?;
    Ok(mod_pow(2, p - 1, p * p) == 1)
}

/// Legendre symbol via Euler's criterion.
pub fn legendre_symbol(a: i64, p: u64) -> Result<i8> {
    check_odd_prime(p)?;
    let a = a.rem_euclid(p as i64) as u64;
    Ok(match mod_pow(a, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    })
}

/// Fixed data for one prime: the primitive root, its Fermat quotient, the
/// coset partition `D_0, ..., D_{p-1}` of the units modulo `p^2`, and the
/// quadratic residue classes modulo `p`.
///
/// Immutable once built.
#[derive(Clone, Debug)]
pub struct FermatContext {
    p: u64,
    g: u64,
    delta: u64,
    // Coset index per residue; `MULTIPLE_OF_P` for u in P.
    coset_of: Vec<u16>,
    cosets: Vec<Vec<u64>>,
    residues: Vec<u64>,
    non_residues: Vec<u64>,
}

const MULTIPLE_OF_P: u16 = u16::MAX;

impl FermatContext {
    pub fn p(&self) -> u64 {
        self.p
    }

    /// The period `p^2`.
    pub fn period(&self) -> u64 {
        self.p * self.p
    }

    /// The primitive root modulo `p^2`.
    pub fn g(&self) -> u64 {
        self.g
    }

    /// `q_p(g)`.
    pub fn delta(&self) -> u64 {
        self.delta
    }

    /// Index `l` with `u mod p^2 ∈ D_l`, or `None` when `p | u`.
    pub fn coset_of(&self, u: u64) -> Option<usize> {
        match self.coset_of[(u % self.period()) as usize] {
            MULTIPLE_OF_P => None,
            l => Some(l as usize),
        }
    }

    /// Members of `D_l` in ascending order. `l` is reduced modulo `p`.
    pub fn coset(&self, l: u64) -> &[u64] {
        &self.cosets[(l % self.p) as usize]
    }

    /// The multiples of `p` in `[0, p^2)`.
    pub fn multiples_of_p(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.p).map(move |k| k * self.p)
    }

    /// Quadratic residues modulo `p`, ascending.
    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    /// Quadratic non-residues modulo `p`, ascending.
    pub fn non_residues(&self) -> &[u64] {
        &self.non_residues
    }

    pub fn is_non_residue(&self, l: u64) -> bool {
        self.non_residues.binary_search(&(l % self.p)).is_ok()
    }

    /// `g^e mod p^2`.
    pub fn g_pow(&self, e: u64) -> u64 {
        mod_pow(self.g, e, self.period())
    }
}

/// Builds the context for `p` by evaluating `q_p(u)` over a full period and
/// cross-checking the partition against the powers of `g`.
pub fn build_context(p: u64) -> Result<FermatContext> {
    check_odd_prime(p)?;
    if p > MAX_CONTEXT_PRIME {
        return Err(Error::Capacity {
            what: "prime for a full coset table",
            value: p,
            cap: MAX_CONTEXT_PRIME,
        });
    }
    let n = p * p;
    let g = find_primitive_root_mod_p2(p)?;
    if multiplicative_order(g, n)? != p * (p - 1) {
        return Err(invariant(format!("{g} is not a primitive root modulo {n}")));
    }
    let delta = fermat_quotient_unchecked(p, g);
    if delta == 0 {
        return Err(invariant(format!(
            "primitive root {g} has zero Fermat quotient modulo {p}"
        )));
    }

    let mut coset_of = vec![MULTIPLE_OF_P; n as usize];
    let mut cosets = vec![Vec::with_capacity(p as usize - 1); p as usize];
    for u in 0..n {
        if u % p != 0 {
            let l = fermat_quotient_unchecked(p, u);
            coset_of[u as usize] = l as u16;
            cosets[l as usize].push(u);
        }
    }
    for (l, d) in cosets.iter().enumerate() {
        if d.len() as u64 != p - 1 {
            return Err(invariant(format!(
                "|D_{l}| = {} but expected {}",
                d.len(),
                p - 1
            )));
        }
    }

    // D_{jδ} = g^j D_0 = { g^(kp+j) : 0 <= k < p }.
    let gp = mod_pow(g, p, n);
    let mut gj = 1u64;
    for j in 0..p {
        let mut members = BTreeSet::new();
        let mut x = gj;
        for _ in 0..p {
            members.insert(x);
            x = mod_mul(x, gp, n);
        }
        let l = (j * delta % p) as usize;
        if !members.iter().copied().eq(cosets[l].iter().copied()) {
            return Err(invariant(format!(
                "D_{l} differs from g^{j} D_0 for g = {g}"
            )));
        }
        gj = mod_mul(gj, g, n);
    }

    let mut residues = BTreeSet::new();
    for a in 1..p {
        residues.insert(a * a % p);
    }
    let non_residues: Vec<u64> = (1..p).filter(|a| !residues.contains(a)).collect();
    let residues: Vec<u64> = residues.into_iter().collect();
    if residues.len() != non_residues.len() {
        return Err(invariant("quadratic residue classes are unbalanced"));
    }

    Ok(FermatContext {
        p,
        g,
        delta,
        coset_of,
        cosets,
        residues,
        non_residues,
    })
}
