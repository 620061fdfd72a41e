//! Linear complexity of periodic binary sequences, three ways:
//! Berlekamp-Massey, `T - deg gcd(x^T - 1, S(x))`, and the Hamming weight
//! of the discrete Fourier transform over GF(2^m).

use std::fmt::Write as _;

use crate::error::{invariant, param, Result};
use crate::field::{FieldCtx, FieldElem, PowerTable};
use crate::gf2x::{poly_gcd, Gf2Poly};
use crate::sequences::BinarySequence;

/// Shortest LFSR for a sequence: `s_u = c_1 s_{u-1} + ... + c_L s_{u-L}`,
/// with connection polynomial `1 + c_1 x + ... + c_L x^L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LfsrProfile {
    pub linear_complexity: usize,
    pub connection_poly: Gf2Poly,
}

impl LfsrProfile {
    /// Runs the register from `seed` (its first `L` bits) for `len` outputs.
    pub fn generate(&self, seed: &[u8], len: usize) -> Vec<u8> {
        let l = self.linear_complexity;
        let mut out: Vec<u8> = seed.iter().take(l).copied().collect();
        while out.len() < len {
            let n = out.len();
            let next = (1..=l)
                .filter(|&i| self.connection_poly.coeff(i))
                .fold(0u8, |acc, i| acc ^ out[n - i]);
            out.push(next);
        }
        out.truncate(len);
        out
    }
}

/// Berlekamp-Massey over GF(2) on a finite bit string.
pub fn berlekamp_massey_bits(s: &[u8]) -> LfsrProfile {
    let mut c = Gf2Poly::one();
    let mut b = Gf2Poly::one();
    let mut l = 0usize;
    let mut shift = 1usize;
    for n in 0..s.len() {
        let d = (1..=l)
            .filter(|&i| c.coeff(i))
            .fold(s[n] & 1, |acc, i| acc ^ (s[n - i] & 1));
        if d == 0 {
            shift += 1;
        } else if 2 * l <= n {
            let prev = c.clone();
            c += &b.shl(shift);
            l = n + 1 - l;
            b = prev;
            shift = 1;
        } else {
            c += &b.shl(shift);
            shift += 1;
        }
    }
    LfsrProfile {
        linear_complexity: l,
        connection_poly: c,
    }
}

/// Linear complexity of the periodic sequence. One period alone can
/// understate it (an impulse looks like the zero sequence after one bit),
/// so the run covers two periods and the result must regenerate a third.
pub fn berlekamp_massey(seq: &BinarySequence) -> Result<LfsrProfile> {
    periodic_berlekamp_massey(seq.bits())
}

pub fn periodic_berlekamp_massey(period: &[u8]) -> Result<LfsrProfile> {
    if period.is_empty() {
        return Err(param("empty sequence"));
    }
    let t = period.len();
    let two: Vec<u8> = period.iter().chain(period).copied().collect();
    let profile = berlekamp_massey_bits(&two);
    if profile.linear_complexity > t {
        return Err(invariant(format!(
            "linear complexity {} exceeds period {t}",
            profile.linear_complexity
        )));
    }
    let three: Vec<u8> = two.iter().chain(period).copied().collect();
    if profile.generate(&three, three.len()) != three {
        return Err(invariant("LFSR does not regenerate the period"));
    }
    Ok(profile)
}

/// `T - deg gcd(x^T - 1, S(x))`; zero for the zero sequence.
pub fn lc_gcd(seq: &BinarySequence) -> usize {
    lc_gcd_bits(seq.bits())
}

pub fn lc_gcd_bits(period: &[u8]) -> usize {
    let t = period.len();
    let s = Gf2Poly::from_bits(period);
    if s.is_zero() {
        return 0;
    }
    let xt1 = Gf2Poly::from_exponents([t, 0]);
    let g = poly_gcd(&xt1, &s).expect("x^T - 1 is nonzero");
    t - g.degree().expect("gcd is nonzero")
}

/// `ρ_0, ..., ρ_{T-1}` with `ρ_i = Σ_u s_u β^{-iu}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DftSpectrum {
    pub beta: FieldElem,
    pub rho: Vec<FieldElem>,
}

impl DftSpectrum {
    /// `Σ_i ρ_i β^{iu}`.
    pub fn evaluate(&self, field: &FieldCtx, powers: &PowerTable, u: u64) -> FieldElem {
        let mut acc = FieldElem::zero();
        for (i, r) in self.rho.iter().enumerate() {
            if !r.is_zero() {
                acc += &field.mul(r, powers.get(i as u64 * u));
            }
        }
        acc
    }

    /// Inverse transform over the full period.
    pub fn invert(&self, field: &FieldCtx, powers: &PowerTable) -> Vec<FieldElem> {
        (0..self.rho.len() as u64)
            .map(|u| self.evaluate(field, powers, u))
            .collect()
    }

    pub fn nonzero_count(&self) -> usize {
        self.rho.iter().filter(|r| !r.is_zero()).count()
    }

    /// Sparse text dump: `T=<T> nonzero=<count>`, then `i <hex>` for each
    /// nonzero coefficient.
    pub fn to_dump_string(&self) -> String {
        let mut s = format!("T={} nonzero={}\n", self.rho.len(), self.nonzero_count());
        for (i, r) in self.rho.iter().enumerate().filter(|(_, r)| !r.is_zero()) {
            writeln!(s, "{i} {}", r.residue().hex_digits()).unwrap();
        }
        s
    }
}

/// Naive transform over a table of the powers of `β`. The spectrum is
/// spot-checked by inverting it at a spread of positions.
pub fn dft(seq: &BinarySequence, field: &FieldCtx, powers: &PowerTable) -> Result<DftSpectrum> {
    dft_bits(seq.bits(), field, powers)
}

pub fn dft_bits(period: &[u8], field: &FieldCtx, powers: &PowerTable) -> Result<DftSpectrum> {
    let t = period.len() as u64;
    if powers.order() != t {
        return Err(param(format!(
            "root of order {} cannot transform a period of {t}",
            powers.order()
        )));
    }
    let support: Vec<u64> = (0..t).filter(|&u| period[u as usize] == 1).collect();
    let rho: Vec<FieldElem> = (0..t)
        .map(|i| {
            let mut acc = FieldElem::zero();
            for &u in &support {
                acc += powers.get_inv(i * u % t);
            }
            acc
        })
        .collect();
    let spectrum = DftSpectrum {
        beta: powers.beta().clone(),
        rho,
    };
    let step = (t / 8).max(1);
    for u in (0..t).step_by(step as usize).chain([t - 1]) {
        let v = spectrum.evaluate(field, powers, u);
        let expected = if period[u as usize] == 1 {
            FieldElem::one()
        } else {
            FieldElem::zero()
        };
        if v != expected {
            return Err(invariant(format!("inverse transform disagrees at u = {u}")));
        }
    }
    Ok(spectrum)
}

/// Number of nonzero spectral coefficients.
pub fn lc_blahut(spectrum: &DftSpectrum) -> usize {
    spectrum.nonzero_count()
}
