//! Dense polynomials over the two-element field.
//!
//! Coefficients are packed into `u64` words, bit `i` of the vector being the
//! coefficient of `x^i`. Values are kept canonical: the last stored word is
//! never zero, so the zero polynomial has no words at all.

use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use crate::error::{param, Error, Result};
use crate::numtheory::prime_factors;

const HEX_PREFIX: &str = "gf2x:";

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gf2Poly {
    words: Vec<u64>,
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Gf2Poly { words: Vec::new() }
    }

    pub fn one() -> Self {
        Gf2Poly { words: vec![1] }
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Gf2Poly { words: vec![2] }
    }

    /// The monomial `x^n`.
    pub fn monomial(n: usize) -> Self {
        let mut p = Gf2Poly::zero();
        p.set_coeff(n, true);
        p
    }

    /// Builds a polynomial from the low 64 coefficients packed in `bits`.
    pub fn from_u64(bits: u64) -> Self {
        let mut p = Gf2Poly { words: vec![bits] };
        p.normalize();
        p
    }

    /// Builds `s_0 + s_1 x + ...` from a slice of 0/1 values.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut words = vec![0u64; bits.len().div_ceil(64)];
        for (i, &b) in bits.iter().enumerate() {
            if b & 1 == 1 {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        let mut p = Gf2Poly { words };
        p.normalize();
        p
    }

    /// Sum of `x^e` over the given exponents (repeated exponents cancel).
    pub fn from_exponents<I: IntoIterator<Item = usize>>(exps: I) -> Self {
        let mut p = Gf2Poly::zero();
        for e in exps {
            p.flip(e);
        }
        p
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words.len() == 1 && self.words[0] == 1
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - last.leading_zeros() as usize)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    pub fn set_coeff(&mut self, i: usize, value: bool) {
        if value {
            if self.words.len() <= i / 64 {
                self.words.resize(i / 64 + 1, 0);
            }
            self.words[i / 64] |= 1 << (i % 64);
        } else if i / 64 < self.words.len() {
            self.words[i / 64] &= !(1 << (i % 64));
            self.normalize();
        }
    }

    pub fn flip(&mut self, i: usize) {
        let v = self.coeff(i);
        self.set_coeff(i, !v);
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Coefficients `0..len` as 0/1 bytes.
    pub fn to_bits(&self, len: usize) -> Vec<u8> {
        (0..len).map(|i| self.coeff(i) as u8).collect()
    }

    fn xor_shifted(&mut self, other: &[u64], shift: usize) {
        if other.is_empty() {
            return;
        }
        let ws = shift / 64;
        let bs = shift % 64;
        let need = ws + other.len() + 1;
        if self.words.len() < need {
            self.words.resize(need, 0);
        }
        for (k, &w) in other.iter().enumerate() {
            self.words[ws + k] ^= w << bs;
            if bs != 0 {
                self.words[ws + k + 1] ^= w >> (64 - bs);
            }
        }
        self.normalize();
    }

    /// `self * x^n`.
    pub fn shl(&self, n: usize) -> Gf2Poly {
        let mut r = Gf2Poly::zero();
        r.xor_shifted(&self.words, n);
        r
    }

    pub fn square(&self) -> Gf2Poly {
        let mut words = Vec::with_capacity(self.words.len() * 2);
        for &w in &self.words {
            words.push(spread32(w as u32));
            words.push(spread32((w >> 32) as u32));
        }
        let mut p = Gf2Poly { words };
        p.normalize();
        p
    }

    /// Quotient and remainder of `self / divisor`.
    pub fn div_rem(&self, divisor: &Gf2Poly) -> Result<(Gf2Poly, Gf2Poly)> {
        let dd = divisor
            .degree()
            .ok_or_else(|| param("division by the zero polynomial"))?;
        let mut rem = self.clone();
        let mut quot = Gf2Poly::zero();
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            quot.set_coeff(dr - dd, true);
            rem.xor_shifted(&divisor.words, dr - dd);
        }
        Ok((quot, rem))
    }

    /// Remainder of `self` modulo a nonzero polynomial.
    pub fn rem(&self, modulus: &Gf2Poly) -> Result<Gf2Poly> {
        let dd = modulus
            .degree()
            .ok_or_else(|| param("reduction modulo the zero polynomial"))?;
        let mut rem = self.clone();
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            rem.xor_shifted(&modulus.words, dr - dd);
        }
        Ok(rem)
    }

    /// Canonical text form: `gf2x:` followed by hex nibbles, lowest-order
    /// nibble first; bit `j` of nibble `k` is the coefficient of `x^(4k+j)`.
    pub fn to_hex(&self) -> String {
        format!("{HEX_PREFIX}{}", self.hex_digits())
    }

    /// The nibble string of [`Gf2Poly::to_hex`] without the prefix.
    pub fn hex_digits(&self) -> String {
        let Some(d) = self.degree() else {
            return "0".to_string();
        };
        (0..=d / 4)
            .map(|k| {
                let nib = (self.words[k / 16] >> ((k % 16) * 4)) & 0xf;
                char::from_digit(nib as u32, 16).unwrap()
            })
            .collect()
    }

    pub fn from_hex(s: &str) -> Result<Gf2Poly> {
        let digits = s
            .strip_prefix(HEX_PREFIX)
            .ok_or_else(|| Error::Parse(format!("missing '{HEX_PREFIX}' prefix in {s:?}")))?;
        Gf2Poly::from_hex_digits(digits)
    }

    pub fn from_hex_digits(digits: &str) -> Result<Gf2Poly> {
        if digits.is_empty() {
            return Err(Error::Parse("empty polynomial hex string".into()));
        }
        let mut words = vec![0u64; digits.len().div_ceil(16)];
        for (k, c) in digits.chars().enumerate() {
            let nib = c
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("bad hex digit {c:?} in {digits:?}")))?;
            words[k / 16] |= (nib as u64) << ((k % 16) * 4);
        }
        let mut p = Gf2Poly { words };
        p.normalize();
        Ok(p)
    }
}

fn spread32(mut v: u32) -> u64 {
    let mut r = 0u64;
    let mut i = 0;
    while v != 0 {
        if v & 1 == 1 {
            r |= 1 << (2 * i);
        }
        v >>= 1;
        i += 1;
    }
    r
}

fn clmul(a: u64, b: u64) -> u128 {
    let b = b as u128;
    let mut r = 0u128;
    let mut a = a;
    while a != 0 {
        let i = a.trailing_zeros();
        r ^= b << i;
        a &= a - 1;
    }
    r
}

impl Add<&Gf2Poly> for &Gf2Poly {
    type Output = Gf2Poly;

    fn add(self, rhs: &Gf2Poly) -> Gf2Poly {
        let mut r = self.clone();
        r += rhs;
        r
    }
}

impl AddAssign<&Gf2Poly> for Gf2Poly {
    fn add_assign(&mut self, rhs: &Gf2Poly) {
        if self.words.len() < rhs.words.len() {
            self.words.resize(rhs.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
        self.normalize();
    }
}

impl Mul<&Gf2Poly> for &Gf2Poly {
    type Output = Gf2Poly;

    fn mul(self, rhs: &Gf2Poly) -> Gf2Poly {
        if self.is_zero() || rhs.is_zero() {
            return Gf2Poly::zero();
        }
        let mut words = vec![0u64; self.words.len() + rhs.words.len()];
        for (i, &a) in self.words.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.words.iter().enumerate() {
                let prod = clmul(a, b);
                words[i + j] ^= prod as u64;
                words[i + j + 1] ^= (prod >> 64) as u64;
            }
        }
        let mut p = Gf2Poly { words };
        p.normalize();
        p
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Poly({self})")
    }
}

impl fmt::Display for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(d) = self.degree() else {
            return f.write_str("0");
        };
        let mut first = true;
        for i in (0..=d).rev().filter(|&i| self.coeff(i)) {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => f.write_str("1")?,
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// A nonnegative integer exponent of arbitrary size, stored as
/// little-endian `u64` limbs. Used for square-and-multiply with exponents
/// such as `(2^m - 1) / T` that do not fit a machine word.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Exponent {
    limbs: Vec<u64>,
}

impl Exponent {
    pub fn from_u64(e: u64) -> Self {
        let mut x = Exponent { limbs: vec![e] };
        x.normalize();
        x
    }

    pub fn from_u128(e: u128) -> Self {
        let mut x = Exponent {
            limbs: vec![e as u64, (e >> 64) as u64],
        };
        x.normalize();
        x
    }

    /// `2^n - 1`.
    pub fn all_ones(n: usize) -> Self {
        let mut x = Exponent::default();
        for i in 0..n {
            x.set_bit(i, true);
        }
        x
    }

    fn normalize(&mut self) {
        while self.limbs.last() == Some(&0) {
            self.limbs.pop();
        }
    }

    pub fn set_bit(&mut self, i: usize, value: bool) {
        if self.limbs.len() <= i / 64 {
            self.limbs.resize(i / 64 + 1, 0);
        }
        if value {
            self.limbs[i / 64] |= 1 << (i % 64);
        } else {
            self.limbs[i / 64] &= !(1 << (i % 64));
        }
        self.normalize();
    }

    pub fn bit(&self, i: usize) -> bool {
        self.limbs
            .get(i / 64)
            .is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    /// Number of significant bits.
    pub fn bit_len(&self) -> usize {
        match self.limbs.last() {
            None => 0,
            Some(w) => self.limbs.len() * 64 - w.leading_zeros() as usize,
        }
    }

    /// Bits from most significant to least significant.
    pub fn bits_msb_first(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.bit_len()).rev().map(|i| self.bit(i))
    }

    pub fn to_u128(&self) -> Option<u128> {
        match self.limbs.len() {
            0 => Some(0),
            1 => Some(self.limbs[0] as u128),
            2 => Some(self.limbs[0] as u128 | (self.limbs[1] as u128) << 64),
            _ => None,
        }
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_u128() {
            Some(v) => write!(f, "Exponent({v})"),
            None => write!(f, "Exponent({} bits)", self.bit_len()),
        }
    }
}

/// Greatest common divisor by the Euclidean algorithm. Over the binary field
/// every nonzero polynomial is monic, so the result is the monic gcd.
pub fn poly_gcd(a: &Gf2Poly, b: &Gf2Poly) -> Result<Gf2Poly> {
    if a.is_zero() && b.is_zero() {
        return Err(param("gcd of two zero polynomials"));
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = a.rem(&b)?;
        a = b;
        b = r;
    }
    Ok(a)
}

fn require_modulus(m: &Gf2Poly) -> Result<()> {
    match m.degree() {
        Some(d) if d >= 1 => Ok(()),
        _ => Err(param(format!("modulus {m} must have degree at least 1"))),
    }
}

pub fn poly_mulmod(a: &Gf2Poly, b: &Gf2Poly, m: &Gf2Poly) -> Result<Gf2Poly> {
    require_modulus(m)?;
    (a * b).rem(m)
}

/// `base^exp mod m` by most-significant-first square-and-multiply.
pub fn poly_powmod(base: &Gf2Poly, exp: &Exponent, m: &Gf2Poly) -> Result<Gf2Poly> {
    require_modulus(m)?;
    let base = base.rem(m)?;
    let mut acc = Gf2Poly::one().rem(m)?;
    for bit in exp.bits_msb_first() {
        acc = acc.square().rem(m)?;
        if bit {
            acc = (&acc * &base).rem(m)?;
        }
    }
    Ok(acc)
}

/// `x^(2^k) mod f`, by `k` successive squarings.
fn x_pow_two_pow(k: usize, f: &Gf2Poly) -> Result<Gf2Poly> {
    let mut r = Gf2Poly::x().rem(f)?;
    for _ in 0..k {
        r = r.square().rem(f)?;
    }
    Ok(r)
}

/// Rabin's irreducibility test.
pub fn is_irreducible(f: &Gf2Poly) -> bool {
    let m = match f.degree() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(m) => m,
    };
    if !f.coeff(0) {
        return false;
    }
    let x = Gf2Poly::x();
    // Unwraps below cannot fail: f has degree >= 2.
    if x_pow_two_pow(m, f).unwrap() != x {
        return false;
    }
    prime_factors(m as u64).into_iter().all(|r| {
        let h = &x_pow_two_pow(m / r as usize, f).unwrap() + &x;
        poly_gcd(&h, f).unwrap().is_one()
    })
}

/// The smallest irreducible `x^m + c(x)`, scanning `c` as an integer.
pub fn find_irreducible(m: usize) -> Result<Gf2Poly> {
    if m == 0 {
        return Err(param("irreducible polynomials have degree at least 1"));
    }
    if m == 1 {
        return Ok(Gf2Poly::x());
    }
    let limit = if m >= 64 { u64::MAX } else { 1u64 << m };
    let top = Gf2Poly::monomial(m);
    // A zero constant term means divisibility by x, so only odd c qualify.
    let mut c = 1u64;
    while c < limit {
        let f = &top + &Gf2Poly::from_u64(c);
        if is_irreducible(&f) {
            return Ok(f);
        }
        c += 2;
    }
    Err(param(format!("no irreducible polynomial of degree {m} found")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(exps: &[usize]) -> Gf2Poly {
        Gf2Poly::from_exponents(exps.iter().copied())
    }

    #[test]
    fn degree_and_canonical_form() {
        assert_eq!(Gf2Poly::zero().degree(), None);
        assert_eq!(Gf2Poly::one().degree(), Some(0));
        assert_eq!(p(&[130, 2]).degree(), Some(130));
        let mut f = p(&[130, 2]);
        f.set_coeff(130, false);
        assert_eq!(f, p(&[2]));
        assert_eq!(f.words().len(), 1);
        assert!((&f + &f).is_zero());
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(poly_gcd(&p(&[9, 0]), &p(&[5, 4])).unwrap(), p(&[1, 0]));
        let f = p(&[7, 3, 1]);
        assert_eq!(poly_gcd(&f, &Gf2Poly::zero()).unwrap(), f);
        assert_eq!(poly_gcd(&p(&[2, 1, 0]), &p(&[3, 0])).unwrap(), p(&[2, 1, 0]));
        assert!(matches!(
            poly_gcd(&Gf2Poly::zero(), &Gf2Poly::zero()),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn mulmod_examples() {
        let m = p(&[2, 1, 0]);
        assert_eq!(poly_mulmod(&Gf2Poly::x(), &Gf2Poly::x(), &m).unwrap(), p(&[1, 0]));
        assert_eq!(poly_mulmod(&p(&[1, 0]), &p(&[1, 0]), &m).unwrap(), Gf2Poly::x());
        let a = p(&[5, 3]);
        assert_eq!(
            poly_mulmod(&a, &Gf2Poly::one(), &m).unwrap(),
            a.rem(&m).unwrap()
        );
        assert!(poly_mulmod(&a, &a, &Gf2Poly::one()).is_err());
    }

    #[test]
    fn irreducibility_examples() {
        assert!(is_irreducible(&p(&[2, 1, 0])));
        assert!(!is_irreducible(&p(&[2, 0])));
        assert!(is_irreducible(&p(&[6, 1, 0])));
        assert!(!is_irreducible(&Gf2Poly::one()));
        assert_eq!(find_irreducible(1).unwrap(), Gf2Poly::x());
        assert_eq!(find_irreducible(2).unwrap(), p(&[2, 1, 0]));
        assert_eq!(find_irreducible(6).unwrap(), p(&[6, 1, 0]));
    }

    #[test]
    fn hex_form() {
        assert_eq!(p(&[2, 1, 0]).to_hex(), "gf2x:7");
        assert_eq!(p(&[6, 1, 0]).to_hex(), "gf2x:34");
        assert_eq!(Gf2Poly::zero().to_hex(), "gf2x:0");
        assert_eq!(Gf2Poly::from_hex("gf2x:340").unwrap(), p(&[6, 1, 0]));
        assert!(Gf2Poly::from_hex("34").is_err());
        assert!(Gf2Poly::from_hex("gf2x:3g").is_err());
        let big = p(&[0, 63, 64, 155]);
        assert_eq!(Gf2Poly::from_hex(&big.to_hex()).unwrap(), big);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[6, 1, 0]).to_string(), "x^6 + x + 1");
        assert_eq!(Gf2Poly::zero().to_string(), "0");
    }

    #[test]
    fn powmod_matches_repeated_multiplication() {
        let m = p(&[6, 1, 0]);
        let b = p(&[4, 2, 1]);
        let mut acc = Gf2Poly::one();
        for e in 0..70u64 {
            assert_eq!(poly_powmod(&b, &Exponent::from_u64(e), &m).unwrap(), acc);
            acc = poly_mulmod(&acc, &b, &m).unwrap();
        }
    }

    #[test]
    fn exponent_bits() {
        let e = Exponent::from_u128(0b1011 | 1 << 100);
        assert_eq!(e.bit_len(), 101);
        let lo: Vec<bool> = e.bits_msb_first().skip(97).collect();
        assert_eq!(lo, vec![true, false, true, true]);
        assert_eq!(Exponent::all_ones(70).to_u128(), Some((1u128 << 70) - 1));
        assert!(Exponent::from_u64(0).is_zero());
    }
}
