//! Defining pairs and trace representations.
//!
//! With `δ = q_p(g)` and cosets reindexed as `D_{jδ} = g^j D_0`, the
//! characteristic sequence of `D_{iδ}` has defining polynomial
//!
//! ```text
//! G_{iδ}(x) = Σ_{j=1}^{p-1} x^{jp} + Σ_{j=0}^{p-1} D_{(i+j)δ}(β) D_{jδ}(x)
//! ```
//!
//! where `D_l(x) = Σ_{u∈D_l} x^u`. Sums of these give the defining
//! polynomials of the threshold and Legendre-Fermat sequences and their
//! balanced variants. Grouping the exponents of each `D_{jδ}(x)` into
//! Frobenius orbits turns the polynomial into a sum of relative traces.
//! All subscripts of `D` are taken modulo `p`.

use std::fmt::Write as _;

use crate::error::{invariant, param, Result};
use crate::field::{trace, FieldCtx, FieldElem, PowerTable};
use crate::numtheory::{mod_inv, mod_mul, mod_pow, multiplicative_order, FermatContext};
use crate::sequences::{generate, BinarySequence, SequenceKind};

/// `D_l(β^n) = Σ_{u∈D_l} β^{nu}`.
pub fn coset_value(ctx: &FermatContext, powers: &PowerTable, l: u64, n: u64) -> FieldElem {
    let t = ctx.period();
    let mut acc = FieldElem::zero();
    for &u in ctx.coset(l) {
        acc += powers.get(mod_mul(n % t, u, t));
    }
    acc
}

/// `D_l(β)` for `l = 0..p`.
pub fn coset_values(ctx: &FermatContext, powers: &PowerTable) -> Vec<FieldElem> {
    (0..ctx.p())
        .map(|l| coset_value(ctx, powers, l, 1))
        .collect()
}

/// `C_i · C_j` with `C_i = (D_{iδ}(β), D_{(i+1)δ}(β), ..., D_{(i+p-1)δ}(β))`.
pub fn coset_inner_product(
    ctx: &FermatContext,
    field: &FieldCtx,
    values: &[FieldElem],
    i: u64,
    j: u64,
) -> FieldElem {
    let (p, d) = (ctx.p(), ctx.delta());
    let mut acc = FieldElem::zero();
    for k in 0..p {
        let a = &values[((i + k) % p * d % p) as usize];
        let b = &values[((j + k) % p * d % p) as usize];
        acc += &field.mul(a, b);
    }
    acc
}

/// A root `β` of order `p^2` with the coefficients of `g(x) mod x^{p^2} - 1`,
/// such that `s_u = g(β^u)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefiningPair {
    pub beta: FieldElem,
    pub coeffs: Vec<FieldElem>,
    pub kind: SequenceKind,
}

impl DefiningPair {
    /// `g(β^u)`.
    pub fn evaluate(&self, field: &FieldCtx, powers: &PowerTable, u: u64) -> FieldElem {
        let mut acc = FieldElem::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_one() {
                acc += powers.get(i as u64 * u);
            } else if !c.is_zero() {
                acc += &field.mul(c, powers.get(i as u64 * u));
            }
        }
        acc
    }

    /// Number of nonzero coefficients; equals the linear complexity.
    pub fn weight(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Checks `g(β^u) = s_u` at every position in one period.
    pub fn verify(&self, field: &FieldCtx, powers: &PowerTable, seq: &BinarySequence) -> Result<()> {
        for u in 0..seq.period() as u64 {
            let v = self.evaluate(field, powers, u);
            let ok = match seq.bit(u) {
                1 => v.is_one(),
                _ => v.is_zero(),
            };
            if !ok {
                return Err(invariant(format!(
                    "defining pair of {} fails at u = {u} (p = {})",
                    self.kind,
                    seq.p()
                )));
            }
        }
        Ok(())
    }
}

/// Coefficients of `G_{iδ}(x)` without verification.
fn characteristic_coeffs(ctx: &FermatContext, values: &[FieldElem], i: u64) -> Vec<FieldElem> {
    let (p, d) = (ctx.p(), ctx.delta());
    let mut coeffs = vec![FieldElem::zero(); ctx.period() as usize];
    for j in 1..p {
        coeffs[(j * p) as usize] = FieldElem::one();
    }
    for j in 0..p {
        let c = &values[((i + j) % p * d % p) as usize];
        for &u in ctx.coset(j * d % p) {
            coeffs[u as usize] = c.clone();
        }
    }
    coeffs
}

fn check_powers(ctx: &FermatContext, powers: &PowerTable) -> Result<()> {
    if powers.order() != ctx.period() {
        return Err(param(format!(
            "root of order {} given, p^2 = {} required",
            powers.order(),
            ctx.period()
        )));
    }
    Ok(())
}

/// Defining pair `(G_{iδ}(x), β)` of the characteristic sequence of `D_{iδ}`,
/// verified against the generated sequence.
pub fn characteristic_defining_pair(
    ctx: &FermatContext,
    field: &FieldCtx,
    powers: &PowerTable,
    i: u64,
) -> Result<DefiningPair> {
    check_powers(ctx, powers)?;
    let p = ctx.p();
    if i >= p {
        return Err(param(format!("index {i} out of range for p = {p}")));
    }
    let values = coset_values(ctx, powers);
    let l = i * ctx.delta() % p;
    let pair = DefiningPair {
        beta: powers.beta().clone(),
        coeffs: characteristic_coeffs(ctx, &values, i),
        kind: SequenceKind::Characteristic(l),
    };
    pair.verify(field, powers, &generate(ctx, pair.kind)?)?;
    Ok(pair)
}

/// The cosets whose union is the support (outside `P`) of `kind`.
fn support_cosets(ctx: &FermatContext, kind: SequenceKind) -> Vec<u64> {
    let p = ctx.p();
    match kind {
        SequenceKind::Threshold | SequenceKind::BalancedThreshold => ((p + 1) / 2..p).collect(),
        SequenceKind::LegendreFermat | SequenceKind::BalancedLegendre => ctx.non_residues().to_vec(),
        SequenceKind::Characteristic(l) => vec![l],
    }
}

/// Sums the characteristic defining polynomials of the relevant cosets (and
/// for balanced kinds adds `Σ_{j=0}^{p-1} x^{jp}`), then verifies the result
/// against the generated sequence at every position.
pub fn assemble_defining_pair(
    ctx: &FermatContext,
    field: &FieldCtx,
    powers: &PowerTable,
    kind: SequenceKind,
) -> Result<DefiningPair> {
    check_powers(ctx, powers)?;
    let p = ctx.p();
    if let SequenceKind::Characteristic(l) = kind {
        if l >= p {
            return Err(param(format!("coset index {l} out of range for p = {p}")));
        }
    }
    let values = coset_values(ctx, powers);
    let delta_inv = mod_inv(ctx.delta(), p).expect("δ is a unit modulo p");
    let mut coeffs = vec![FieldElem::zero(); ctx.period() as usize];
    for l in support_cosets(ctx, kind) {
        let i = l * delta_inv % p;
        for (acc, c) in coeffs.iter_mut().zip(characteristic_coeffs(ctx, &values, i)) {
            *acc += &c;
        }
    }
    if kind.is_balanced() {
        for j in 0..p {
            coeffs[(j * p) as usize] += &FieldElem::one();
        }
    }
    let pair = DefiningPair {
        beta: powers.beta().clone(),
        coeffs,
        kind,
    };
    pair.verify(field, powers, &generate(ctx, kind)?)?;
    Ok(pair)
}

fn require_main_kind(kind: SequenceKind) -> Result<()> {
    match kind {
        SequenceKind::Threshold | SequenceKind::LegendreFermat => Ok(()),
        _ => Err(param(format!(
            "{kind} has no trace representation; use threshold or legendre-fermat"
        ))),
    }
}

/// `η_j = Σ_{l∈L} D_{l+jδ}(β)` for `j = 0..p`, with `L` the cosets
/// `(p+1)/2..p-1` (threshold) or the non-residues (Legendre-Fermat).
pub fn eta_coefficients(
    ctx: &FermatContext,
    powers: &PowerTable,
    kind: SequenceKind,
) -> Result<Vec<FieldElem>> {
    check_powers(ctx, powers)?;
    require_main_kind(kind)?;
    let values = coset_values(ctx, powers);
    Ok(etas_from_values(ctx, &values, kind))
}

fn etas_from_values(ctx: &FermatContext, values: &[FieldElem], kind: SequenceKind) -> Vec<FieldElem> {
    let (p, d) = (ctx.p(), ctx.delta());
    let support = support_cosets(ctx, kind);
    (0..p)
        .map(|j| {
            let mut acc = FieldElem::zero();
            for &l in &support {
                acc += &values[((l + j * d) % p) as usize];
            }
            acc
        })
        .collect()
}

/// Empirical structure of the `η_j`. Not asserted anywhere: reported only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaDiagnostics {
    pub distinct: bool,
    pub nonzero: bool,
    /// For each `j`, some `r < p` with `η_j = η_0^(2^r)`, if one exists.
    pub frobenius_exponents: Vec<Option<usize>>,
}

impl EtaDiagnostics {
    pub fn all_in_orbit(&self) -> bool {
        self.frobenius_exponents.iter().all(Option::is_some)
    }
}

pub fn eta_diagnostics(field: &FieldCtx, etas: &[FieldElem]) -> EtaDiagnostics {
    let p = etas.len();
    let mut orbit = Vec::with_capacity(p);
    let mut x = etas.first().cloned().unwrap_or_default();
    for _ in 0..p {
        orbit.push(x.clone());
        x = field.square(&x);
    }
    let distinct = etas
        .iter()
        .enumerate()
        .all(|(i, a)| etas[..i].iter().all(|b| a != b));
    EtaDiagnostics {
        distinct,
        nonzero: etas.iter().all(|e| !e.is_zero()),
        frobenius_exponents: etas
            .iter()
            .map(|e| orbit.iter().position(|o| o == e))
            .collect(),
    }
}

/// `Tr^n_k(β^{u·multiplier})` as a function of `u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceTerm {
    pub outer: usize,
    pub inner: usize,
    pub multiplier: u64,
}

/// Which trace terms make up the representation, independent of `β`.
///
/// `Σ_{j=1}^{p-1} x^{jp}` becomes `Σ_k Tr^λ_1(x^{p g^k})` and `D_{jδ}(x)`
/// becomes `Σ_k Tr^{λp}_p(x^{g^{kp+j}})`, or `Σ_k Tr^λ_1(x^{g^{kp+j}})` for
/// Wieferich primes, with `k` over `0..(p-1)/λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceLayout {
    pub p: u64,
    pub lambda: u64,
    pub wieferich: bool,
    pub p_terms: Vec<TraceTerm>,
    /// `coset_terms[j]` represents `D_{jδ}(x)`.
    pub coset_terms: Vec<Vec<TraceTerm>>,
}

impl TraceLayout {
    pub fn new(ctx: &FermatContext) -> Result<TraceLayout> {
        let p = ctx.p();
        let n = ctx.period();
        let lambda = multiplicative_order(2, p)?;
        let wieferich = mod_pow(2, p - 1, n) == 1;
        let reps = (p - 1) / lambda;
        let lam = lambda as usize;
        let p_terms = (0..reps)
            .map(|k| TraceTerm {
                outer: lam,
                inner: 1,
                multiplier: mod_mul(p, ctx.g_pow(k), n),
            })
            .collect();
        let (outer, inner) = if wieferich {
            (lam, 1)
        } else {
            (lam * p as usize, p as usize)
        };
        let coset_terms = (0..p)
            .map(|j| {
                (0..reps)
                    .map(|k| TraceTerm {
                        outer,
                        inner,
                        multiplier: ctx.g_pow(k * p + j),
                    })
                    .collect()
            })
            .collect();
        Ok(TraceLayout {
            p,
            lambda,
            wieferich,
            p_terms,
            coset_terms,
        })
    }

    /// Exponents `multiplier · 2^{ik} mod p^2`, `i < n/k`, which the term
    /// contributes when expanded as a polynomial in `x = β^u`.
    pub fn orbit(&self, term: &TraceTerm) -> Vec<u64> {
        let n = self.p * self.p;
        let step = mod_pow(2, term.inner as u64, n);
        let mut e = term.multiplier % n;
        (0..term.outer / term.inner)
            .map(|_| {
                let cur = e;
                e = mod_mul(e, step, n);
                cur
            })
            .collect()
    }

    /// Checks that the `P` terms expand to exactly `{p, 2p, ..., (p-1)p}` and
    /// the terms for `j` expand to exactly `D_{jδ}`, each exponent once.
    pub fn check_coverage(&self, ctx: &FermatContext) -> Result<()> {
        let expand = |terms: &[TraceTerm]| {
            let mut v: Vec<u64> = terms.iter().flat_map(|t| self.orbit(t)).collect();
            v.sort_unstable();
            v
        };
        let want: Vec<u64> = ctx.multiples_of_p().skip(1).collect();
        if expand(&self.p_terms) != want {
            return Err(invariant(format!(
                "trace terms for P do not cover the nonzero multiples of {}",
                self.p
            )));
        }
        for (j, terms) in self.coset_terms.iter().enumerate() {
            let l = j as u64 * ctx.delta() % self.p;
            if expand(terms) != ctx.coset(l) {
                return Err(invariant(format!(
                    "trace terms for j = {j} do not cover D_{l}"
                )));
            }
        }
        Ok(())
    }
}

/// Executable trace representation of the threshold or Legendre-Fermat
/// sequence:
///
/// ```text
/// s_u = ((p-1)/2) Σ_k Tr^λ_1(β^{u p g^k}) + Σ_j η_j Σ_k Tr(β^{u g^{kp+j}})
/// ```
#[derive(Clone, Debug)]
pub struct TraceRepresentation {
    pub kind: SequenceKind,
    pub g: u64,
    pub delta: u64,
    pub layout: TraceLayout,
    /// `(p-1)/2` as an integer; only its parity enters the arithmetic.
    pub p_coefficient: u64,
    pub eta: Vec<FieldElem>,
    field: FieldCtx,
    beta: FieldElem,
}

pub fn build_trace_representation(
    ctx: &FermatContext,
    field: &FieldCtx,
    powers: &PowerTable,
    kind: SequenceKind,
) -> Result<TraceRepresentation> {
    let eta = eta_coefficients(ctx, powers, kind)?;
    let layout = TraceLayout::new(ctx)?;
    layout.check_coverage(ctx)?;
    Ok(TraceRepresentation {
        kind,
        g: ctx.g(),
        delta: ctx.delta(),
        layout,
        p_coefficient: (ctx.p() - 1) / 2,
        eta,
        field: field.clone(),
        beta: powers.beta().clone(),
    })
}

impl TraceRepresentation {
    pub fn p(&self) -> u64 {
        self.layout.p
    }

    pub fn lambda(&self) -> u64 {
        self.layout.lambda
    }

    pub fn wieferich_branch(&self) -> bool {
        self.layout.wieferich
    }

    /// `(p-1)/2` reduced modulo 2.
    pub fn p_coefficient_bit(&self) -> u8 {
        (self.p_coefficient % 2) as u8
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    fn eval_term(&self, term: &TraceTerm, u: u64) -> Result<FieldElem> {
        let n = self.p() * self.p();
        let x = self
            .field
            .pow_u64(&self.beta, mod_mul(u % n, term.multiplier, n));
        trace(&self.field, term.outer, term.inner, &x)
    }

    /// Evaluates every trace term at `u` inside GF(2^m) and returns the bit.
    pub fn evaluate(&self, u: u64) -> Result<u8> {
        let mut total = FieldElem::zero();
        if self.p_coefficient_bit() == 1 {
            for term in &self.layout.p_terms {
                total += &self.eval_term(term, u)?;
            }
        }
        for (eta, terms) in self.eta.iter().zip(&self.layout.coset_terms) {
            if eta.is_zero() {
                continue;
            }
            let mut inner = FieldElem::zero();
            for term in terms {
                inner += &self.eval_term(term, u)?;
            }
            total += &self.field.mul(eta, &inner);
        }
        if total.is_zero() {
            Ok(0)
        } else if total.is_one() {
            Ok(1)
        } else {
            Err(invariant(format!(
                "trace representation of {} at u = {u} is not in GF(2)",
                self.kind
            )))
        }
    }

    /// Whether evaluation reproduces `seq` at all positions of one period.
    pub fn verify_against(&self, seq: &BinarySequence) -> Result<bool> {
        for u in 0..seq.period() as u64 {
            if self.evaluate(u)? != seq.bit(u) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Plain-text report: header, `η` table, verification line.
    pub fn to_report_string(&self, verified: bool) -> String {
        let branch = if self.wieferich_branch() {
            "wieferich"
        } else {
            "non-wieferich"
        };
        let mut s = format!(
            "p={} lambda={} branch={branch} g={} delta={} kind={}\n",
            self.p(),
            self.lambda(),
            self.g,
            self.delta,
            self.kind
        );
        writeln!(
            s,
            "p_coefficient={} reduced={}",
            self.p_coefficient,
            self.p_coefficient_bit()
        )
        .unwrap();
        for (j, e) in self.eta.iter().enumerate() {
            writeln!(s, "eta {j} {}", e.residue().hex_digits()).unwrap();
        }
        writeln!(s, "verified={verified} period={}", self.p() * self.p()).unwrap();
        s
    }
}

/// Free-function form of [`TraceRepresentation::evaluate`].
pub fn evaluate_trace_representation(rep: &TraceRepresentation, u: u64) -> Result<u8> {
    rep.evaluate(u)
}
