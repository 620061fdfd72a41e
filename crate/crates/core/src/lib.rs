//! Binary sequences derived from Fermat quotients modulo an odd prime `p`.
//!
//! The crate builds one period (`p^2` bits) of the threshold sequence, the
//! Legendre-Fermat sequence, the coset characteristic sequences and the
//! balanced variants; constructs their defining pairs over GF(2^m) and their
//! trace representations; and measures linear complexity three independent
//! ways (Berlekamp-Massey, a polynomial gcd, and DFT weight).
//!
//! ```
//! use fermatseq::{numtheory, sequences, lincomp};
//!
//! let ctx = numtheory::build_context(7).unwrap();
//! let e = sequences::gen_threshold(&ctx).unwrap();
//! assert_eq!(lincomp::berlekamp_massey(&e).unwrap().linear_complexity, 48);
//! assert_eq!(lincomp::lc_gcd(&e), 48);
//! ```

pub mod cache;
pub mod error;
pub mod field;
pub mod gf2x;
pub mod lincomp;
pub mod numtheory;
pub mod sequences;
pub mod tracerep;

pub use error::{Error, Result};

/// The linear complexity predicted for the threshold and Legendre-Fermat
/// sequences when `2^(p-1) ≢ 1 (mod p^2)`: `p^2 - p` for `p ≡ 1 (mod 4)`,
/// `p^2 - 1` for `p ≡ 3 (mod 4)`. `None` for Wieferich primes.
pub fn expected_linear_complexity(p: u64) -> Result<Option<u64>> {
    if numtheory::is_wieferich(p)? {
        return Ok(None);
    }
    Ok(Some(if p % 4 == 1 { p * p - p } else { p * p - 1 }))
}
