//! Arithmetic in GF(2^m) = GF(2)[x]/(f) for an explicit irreducible `f`.
//!
//! One ambient field hosts every quantity attached to a prime `p`: the
//! degree `m` is the order of 2 modulo `p^2`, so a primitive `p^2`-th root
//! of unity lives in it. Subfields are recognized by the Frobenius
//! fixed-point test `x^(2^n) = x` rather than built separately.

use std::fmt;
use std::ops::{Add, AddAssign};

use crate::error::{invariant, param, Error, Result};
use crate::gf2x::{find_irreducible, is_irreducible, poly_powmod, Exponent, Gf2Poly};
use crate::numtheory::{check_odd_prime, is_wieferich, multiplicative_order, prime_factors};

pub const DEFAULT_DEGREE_CAP: usize = 512;

/// How the extension degree relates to `λ = ord_p(2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// `m = λp`; the order of 2 modulo `p^2` when `p` is not Wieferich.
    LambdaP,
    /// `m = λ`; Wieferich primes.
    Lambda,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::LambdaP => "lambda*p",
            Provenance::Lambda => "lambda",
        })
    }
}

/// An element of GF(2^m), stored as its residue polynomial of degree `< m`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FieldElem(Gf2Poly);

impl FieldElem {
    pub fn zero() -> Self {
        FieldElem(Gf2Poly::zero())
    }

    pub fn one() -> Self {
        FieldElem(Gf2Poly::one())
    }

    pub fn residue(&self) -> &Gf2Poly {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElem({})", self.0.to_hex())
    }
}

impl Add<&FieldElem> for &FieldElem {
    type Output = FieldElem;

    fn add(self, rhs: &FieldElem) -> FieldElem {
        FieldElem(&self.0 + &rhs.0)
    }
}

impl AddAssign<&FieldElem> for FieldElem {
    fn add_assign(&mut self, rhs: &FieldElem) {
        self.0 += &rhs.0;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldCtx {
    m: usize,
    modulus: Gf2Poly,
    p: u64,
    provenance: Provenance,
}

/// The field attached to `p`, with the default degree cap.
pub fn make_field(p: u64) -> Result<FieldCtx> {
    make_field_with_cap(p, DEFAULT_DEGREE_CAP)
}

pub fn make_field_with_cap(p: u64, degree_cap: usize) -> Result<FieldCtx> {
    let (m, _) = field_degree(p)?;
    if m > degree_cap {
        return Err(Error::Capacity {
            what: "extension degree",
            value: m as u64,
            cap: degree_cap as u64,
        });
    }
    FieldCtx::with_modulus(p, find_irreducible(m)?)
}

/// `ord_{p^2}(2)` and which case of `λ` vs `λp` it is.
pub fn field_degree(p: u64) -> Result<(usize, Provenance)> {
    check_odd_prime(p)?;
    let lambda = multiplicative_order(2, p)?;
    let m = multiplicative_order(2, p * p)?;
    let (expected, provenance) = if is_wieferich(p)? {
        (lambda, Provenance::Lambda)
    } else {
        (lambda * p, Provenance::LambdaP)
    };
    if m != expected {
        return Err(invariant(format!(
            "ord(2 mod {p}^2) = {m}, expected {expected} ({provenance})"
        )));
    }
    Ok((m as usize, provenance))
}

impl FieldCtx {
    /// Builds the field for `p` over a caller-supplied modulus, validating
    /// that it is irreducible of the required degree.
    pub fn with_modulus(p: u64, modulus: Gf2Poly) -> Result<FieldCtx> {
        let (m, provenance) = field_degree(p)?;
        if modulus.degree() != Some(m) {
            return Err(param(format!(
                "modulus {modulus} has degree {:?}, field for p = {p} needs degree {m}",
                modulus.degree()
            )));
        }
        if !is_irreducible(&modulus) {
            return Err(param(format!("modulus {modulus} is reducible")));
        }
        Ok(FieldCtx {
            m,
            modulus,
            p,
            provenance,
        })
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> &Gf2Poly {
        &self.modulus
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Reduces an arbitrary polynomial into the field.
    pub fn elem(&self, poly: &Gf2Poly) -> FieldElem {
        FieldElem(poly.rem(&self.modulus).expect("modulus is nonzero"))
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.elem(&(&a.0 * &b.0))
    }

    pub fn square(&self, a: &FieldElem) -> FieldElem {
        self.elem(&a.0.square())
    }

    /// `a^(2^k)`.
    pub fn frobenius(&self, a: &FieldElem, k: usize) -> FieldElem {
        let mut r = a.clone();
        for _ in 0..k {
            r = self.square(&r);
        }
        r
    }

    pub fn pow(&self, a: &FieldElem, e: &Exponent) -> FieldElem {
        FieldElem(poly_powmod(&a.0, e, &self.modulus).expect("modulus has degree >= 1"))
    }

    pub fn pow_u64(&self, a: &FieldElem, e: u64) -> FieldElem {
        self.pow(a, &Exponent::from_u64(e))
    }

    /// Inverse as `a^(2^m - 2)`.
    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(param("zero has no inverse"));
        }
        let mut e = Exponent::all_ones(self.m);
        e.set_bit(0, false);
        Ok(self.pow(a, &e))
    }

    /// Whether `a` lies in the subfield GF(2^n), i.e. `a^(2^n) = a`.
    pub fn in_subfield(&self, a: &FieldElem, n: usize) -> bool {
        self.frobenius(a, n) == *a
    }

    /// Whether `a` has multiplicative order exactly `t`.
    pub fn has_order(&self, a: &FieldElem, t: u64) -> bool {
        if a.is_zero() || t == 0 || !self.pow_u64(a, t).is_one() {
            return false;
        }
        prime_factors(t)
            .into_iter()
            .all(|r| !self.pow_u64(a, t / r).is_one())
    }
}

/// The powers `β^0, ..., β^(t-1)` of an element of order exactly `t`.
#[derive(Clone, Debug)]
pub struct PowerTable {
    powers: Vec<FieldElem>,
}

impl PowerTable {
    pub fn new(ctx: &FieldCtx, beta: &FieldElem, t: u64) -> Result<PowerTable> {
        if !ctx.has_order(beta, t) {
            return Err(param(format!("element {beta:?} does not have order {t}")));
        }
        let mut powers = Vec::with_capacity(t as usize);
        let mut x = FieldElem::one();
        for _ in 0..t {
            powers.push(x.clone());
            x = ctx.mul(&x, beta);
        }
        Ok(PowerTable { powers })
    }

    pub fn order(&self) -> u64 {
        self.powers.len() as u64
    }

    pub fn beta(&self) -> &FieldElem {
        &self.powers[1 % self.powers.len()]
    }

    /// `β^e`, reducing `e` modulo the order.
    pub fn get(&self, e: u64) -> &FieldElem {
        &self.powers[(e % self.order()) as usize]
    }

    /// `β^(-e)`.
    pub fn get_inv(&self, e: u64) -> &FieldElem {
        let t = self.order();
        &self.powers[((t - e % t) % t) as usize]
    }
}

/// `(2^m - 1) / d` by short division of the `m`-bit all-ones string.
pub fn exact_div_mersenne(m: usize, d: u64) -> Result<Exponent> {
    if d == 0 {
        return Err(param("division by zero"));
    }
    let d = d as u128;
    let mut q = Exponent::default();
    let mut rem = 0u128;
    for i in (0..m).rev() {
        rem = rem * 2 + 1;
        if rem >= d {
            rem -= d;
            q.set_bit(i, true);
        }
    }
    if rem != 0 {
        return Err(param(format!("{d} does not divide 2^{m} - 1")));
    }
    Ok(q)
}

/// Deterministic primitive `t`-th root of unity: the first candidate residue
/// in the order x, x+1, x^2, ... whose `(2^m - 1)/t`-th power has order `t`.
pub fn root_of_unity(ctx: &FieldCtx, t: u64) -> Result<FieldElem> {
    if t == 0 {
        return Err(param("root of unity of order 0"));
    }
    if t == 1 {
        return Ok(FieldElem::one());
    }
    if t % 2 == 0 || ctx.m as u64 % multiplicative_order(2, t)? != 0 {
        return Err(param(format!(
            "{t} does not divide 2^{} - 1",
            ctx.m
        )));
    }
    let e = exact_div_mersenne(ctx.m, t)?;
    let limit = if ctx.m >= 64 { u64::MAX } else { 1u64 << ctx.m };
    (2..limit)
        .map(|c| ctx.pow(&FieldElem(Gf2Poly::from_u64(c)), &e))
        .find(|y| ctx.has_order(y, t))
        .ok_or_else(|| invariant(format!("no element of order {t} in GF(2^{})", ctx.m)))
}

/// The relative trace `Tr^n_k(x) = x + x^(2^k) + ... + x^(2^((n/k - 1)k))`.
pub fn trace(ctx: &FieldCtx, n: usize, k: usize, x: &FieldElem) -> Result<FieldElem> {
    if k == 0 || n % k != 0 || ctx.m % n != 0 {
        return Err(param(format!(
            "Tr^{n}_{k} needs k | n and n | {}",
            ctx.m
        )));
    }
    if !ctx.in_subfield(x, n) {
        return Err(param(format!("{x:?} is not in GF(2^{n})")));
    }
    let mut acc = x.clone();
    let mut term = x.clone();
    for _ in 1..n / k {
        term = ctx.frobenius(&term, k);
        acc += &term;
    }
    if !ctx.in_subfield(&acc, k) {
        return Err(invariant(format!("Tr^{n}_{k} landed outside GF(2^{k})")));
    }
    Ok(acc)
}
