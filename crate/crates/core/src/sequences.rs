//! One period of each binary sequence family derived from Fermat quotients.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{invariant, param, Error, Result};
use crate::numtheory::{fermat_quotient, legendre_symbol, FermatContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SequenceKind {
    /// `e_u = 1` iff `q_p(u) >= p/2`.
    Threshold,
    /// `f_u = 1` iff `q_p(u)` is a quadratic non-residue.
    LegendreFermat,
    /// Indicator of the coset `D_l`.
    Characteristic(u64),
    /// `Threshold` with every multiple of `p` set to 1.
    BalancedThreshold,
    /// `LegendreFermat` with every multiple of `p` set to 1.
    BalancedLegendre,
}

impl SequenceKind {
    /// The kinds that have a closed-form linear complexity and a trace
    /// representation.
    pub const MAIN: [SequenceKind; 2] = [SequenceKind::Threshold, SequenceKind::LegendreFermat];

    pub fn is_balanced(self) -> bool {
        matches!(
            self,
            SequenceKind::BalancedThreshold | SequenceKind::BalancedLegendre
        )
    }
}

impl fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceKind::Threshold => f.write_str("threshold"),
            SequenceKind::LegendreFermat => f.write_str("legendre-fermat"),
            SequenceKind::Characteristic(l) => write!(f, "characteristic-{l}"),
            SequenceKind::BalancedThreshold => f.write_str("balanced-threshold"),
            SequenceKind::BalancedLegendre => f.write_str("balanced-legendre"),
        }
    }
}

impl FromStr for SequenceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "threshold" => SequenceKind::Threshold,
            "legendre-fermat" => SequenceKind::LegendreFermat,
            "balanced-threshold" => SequenceKind::BalancedThreshold,
            "balanced-legendre" => SequenceKind::BalancedLegendre,
            _ => {
                let l = s
                    .strip_prefix("characteristic-")
                    .and_then(|l| l.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown sequence kind {s:?}")))?;
                SequenceKind::Characteristic(l)
            }
        })
    }
}

/// One period (`p^2` bits) of a sequence, with its generator parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinarySequence {
    p: u64,
    kind: SequenceKind,
    g: u64,
    delta: u64,
    bits: Vec<u8>,
}

impl BinarySequence {
    fn new(ctx: &FermatContext, kind: SequenceKind, bits: Vec<u8>) -> Self {
        debug_assert_eq!(bits.len() as u64, ctx.period());
        BinarySequence {
            p: ctx.p(),
            kind,
            g: ctx.g(),
            delta: ctx.delta(),
            bits,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    pub fn g(&self) -> u64 {
        self.g
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn period(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// `s_u` for any `u >= 0`, reading the period cyclically.
    pub fn bit(&self, u: u64) -> u8 {
        self.bits[(u % self.bits.len() as u64) as usize]
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    /// Text form: a `p=.. kind=.. g=.. delta=..` header line, then the bits
    /// as an ASCII 0/1 string.
    pub fn to_file_string(&self) -> String {
        let mut s = format!(
            "p={} kind={} g={} delta={}\n",
            self.p, self.kind, self.g, self.delta
        );
        s.extend(self.bits.iter().map(|&b| if b == 1 { '1' } else { '0' }));
        s.push('\n');
        s
    }

    pub fn parse_file(text: &str) -> Result<BinarySequence> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty sequence file".into()))?;
        let (mut p, mut kind, mut g, mut delta) = (None, None, None, None);
        for field in header.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad header field {field:?}")))?;
            let num = || {
                value
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad value for {key}: {value:?}")))
            };
            match key {
                "p" => p = Some(num()?),
                "kind" => kind = Some(value.parse::<SequenceKind>()?),
                "g" => g = Some(num()?),
                "delta" => delta = Some(num()?),
                _ => return Err(Error::Parse(format!("unknown header key {key:?}"))),
            }
        }
        let missing = |k: &str| Error::Parse(format!("header is missing {k}"));
        let p = p.ok_or_else(|| missing("p"))?;
        let kind = kind.ok_or_else(|| missing("kind"))?;
        let g = g.ok_or_else(|| missing("g"))?;
        let delta = delta.ok_or_else(|| missing("delta"))?;
        let body = lines
            .next()
            .ok_or_else(|| Error::Parse("missing bit line".into()))?;
        let bits = body
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse(format!("bad bit character {c:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        if bits.len() as u128 != p as u128 * p as u128 {
            return Err(Error::Parse(format!(
                "expected {} bits for p = {p}, found {}",
                p as u128 * p as u128,
                bits.len()
            )));
        }
        Ok(BinarySequence {
            p,
            kind,
            g,
            delta,
            bits,
        })
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_file_string()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn read_from(path: &Path) -> Result<BinarySequence> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        BinarySequence::parse_file(&text)
    }
}

/// Evaluates the analytic rule and the coset rule at every position and
/// fails if they ever disagree.
fn generate_checked(
    ctx: &FermatContext,
    kind: SequenceKind,
    analytic: impl Fn(u64) -> Result<u8>,
    by_coset: impl Fn(Option<usize>) -> u8,
) -> Result<BinarySequence> {
    let bits = (0..ctx.period())
        .map(|u| {
            let a = analytic(u)?;
            let c = by_coset(ctx.coset_of(u));
            if a != c {
                return Err(invariant(format!(
                    "{kind} rule disagrees with coset rule at u = {u} (p = {})",
                    ctx.p()
                )));
            }
            Ok(a)
        })
        .collect::<Result<Vec<u8>>>()?;
    Ok(BinarySequence::new(ctx, kind, bits))
}

pub fn gen_threshold(ctx: &FermatContext) -> Result<BinarySequence> {
    let p = ctx.p();
    generate_checked(
        ctx,
        SequenceKind::Threshold,
        |u| Ok((2 * fermat_quotient(p, u)? >= p) as u8),
        |l| l.is_some_and(|l| l as u64 >= (p + 1) / 2) as u8,
    )
}

pub fn gen_legendre_fermat(ctx: &FermatContext) -> Result<BinarySequence> {
    let p = ctx.p();
    generate_checked(
        ctx,
        SequenceKind::LegendreFermat,
        |u| Ok((legendre_symbol(fermat_quotient(p, u)? as i64, p)? == -1) as u8),
        |l| l.is_some_and(|l| ctx.is_non_residue(l as u64)) as u8,
    )
}

pub fn gen_characteristic(ctx: &FermatContext, l: u64) -> Result<BinarySequence> {
    let p = ctx.p();
    if l >= p {
        return Err(param(format!("coset index {l} out of range for p = {p}")));
    }
    generate_checked(
        ctx,
        SequenceKind::Characteristic(l),
        |u| Ok((u % p != 0 && fermat_quotient(p, u)? == l) as u8),
        |c| (c == Some(l as usize)) as u8,
    )
}

fn balance(ctx: &FermatContext, base: BinarySequence, kind: SequenceKind) -> BinarySequence {
    let mut bits = base.bits;
    for u in ctx.multiples_of_p() {
        bits[u as usize] = 1;
    }
    BinarySequence::new(ctx, kind, bits)
}

pub fn gen_balanced_threshold(ctx: &FermatContext) -> Result<BinarySequence> {
    Ok(balance(
        ctx,
        gen_threshold(ctx)?,
        SequenceKind::BalancedThreshold,
    ))
}

pub fn gen_balanced_legendre(ctx: &FermatContext) -> Result<BinarySequence> {
    Ok(balance(
        ctx,
        gen_legendre_fermat(ctx)?,
        SequenceKind::BalancedLegendre,
    ))
}

pub fn generate(ctx: &FermatContext, kind: SequenceKind) -> Result<BinarySequence> {
    match kind {
        SequenceKind::Threshold => gen_threshold(ctx),
        SequenceKind::LegendreFermat => gen_legendre_fermat(ctx),
        SequenceKind::Characteristic(l) => gen_characteristic(ctx, l),
        SequenceKind::BalancedThreshold => gen_balanced_threshold(ctx),
        SequenceKind::BalancedLegendre => gen_balanced_legendre(ctx),
    }
}
