use fermatseq::field::{make_field, root_of_unity, trace, FieldCtx, FieldElem, PowerTable};
use fermatseq::gf2x::{find_irreducible, is_irreducible, poly_gcd, poly_mulmod, Gf2Poly};
use fermatseq::lincomp::{berlekamp_massey_bits, dft, dft_bits, periodic_berlekamp_massey};
use fermatseq::numtheory::build_context;
use fermatseq::sequences::{generate, BinarySequence, SequenceKind};
use proptest::prelude::*;

fn poly(max_words: usize) -> impl Strategy<Value = Gf2Poly> {
    prop::collection::vec(any::<u64>(), 0..=max_words).prop_map(|w| {
        Gf2Poly::from_exponents(
            w.iter()
                .enumerate()
                .flat_map(|(k, &x)| (0..64).filter(move |b| (x >> b) & 1 == 1).map(move |b| 64 * k + b)),
        )
    })
}

fn elem(field: &FieldCtx, seed: &[u64]) -> FieldElem {
    let p = Gf2Poly::from_exponents(
        seed.iter()
            .enumerate()
            .flat_map(|(k, &x)| (0..64).filter(move |b| (x >> b) & 1 == 1).map(move |b| 64 * k + b)),
    );
    field.elem(&p)
}

proptest! {
    #[test]
    fn gcd_divides_both(a in poly(3), b in poly(3), c in poly(1)) {
        prop_assume!(!(a.is_zero() && b.is_zero()) && !c.is_zero());
        // Multiply in a common factor so the gcd is usually nontrivial.
        let (a, b) = (&a * &c, &b * &c);
        prop_assume!(!(a.is_zero() && b.is_zero()));
        let g = poly_gcd(&a, &b).unwrap();
        prop_assert!(a.rem(&g).unwrap().is_zero());
        prop_assert!(b.rem(&g).unwrap().is_zero());
        prop_assert!(g.rem(&c).unwrap().is_zero());
    }

    #[test]
    fn div_rem_reconstructs(a in poly(4), b in poly(2)) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.div_rem(&b).unwrap();
        prop_assert_eq!(&(&q * &b) + &r, a);
        prop_assert!(r.degree() < b.degree());
    }

    #[test]
    fn squaring_spreads_bits(bits in any::<u64>(), m in poly(1)) {
        prop_assume!(m.degree().is_some_and(|d| d >= 1));
        let f = Gf2Poly::from_u64(bits);
        let spread = Gf2Poly::from_exponents((0..64).filter(|i| (bits >> i) & 1 == 1).map(|i| 2 * i));
        prop_assert_eq!(poly_mulmod(&f, &f, &m).unwrap(), spread.rem(&m).unwrap());
        let g = Gf2Poly::from_u64(bits.rotate_left(7));
        let s = &f + &g;
        prop_assert_eq!(s.square(), &f.square() + &g.square());
    }

    #[test]
    fn hex_round_trip(a in poly(4)) {
        prop_assert_eq!(Gf2Poly::from_hex(&a.to_hex()).unwrap(), a);
    }

    #[test]
    fn bm_regenerates_random_strings(bits in prop::collection::vec(0u8..2, 1..120)) {
        let prof = berlekamp_massey_bits(&bits);
        prop_assert!(prof.linear_complexity <= bits.len());
        prop_assert_eq!(prof.generate(&bits, bits.len()), bits.clone());
        let periodic = periodic_berlekamp_massey(&bits).unwrap();
        prop_assert!(periodic.linear_complexity <= bits.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn trace_is_linear_and_transitive(x in prop::collection::vec(any::<u64>(), 3), y in prop::collection::vec(any::<u64>(), 3), a in any::<u64>(), b in any::<u64>()) {
        // GF(2^156) contains GF(2^k) for every k | 156.
        let field = make_field(13).unwrap();
        let (x, y) = (elem(&field, &x), elem(&field, &y));
        for (n, k) in [(156usize, 13usize), (156, 12), (156, 4), (12, 4), (26, 2)] {
            let down = |e: &FieldElem, d: usize| trace(&field, field.degree(), d, e).unwrap();
            // Project random elements into GF(2^n) and GF(2^k).
            let (xn, yn) = (down(&x, n), down(&y, n));
            let (ak, bk) = (down(&elem(&field, &[a]), k), down(&elem(&field, &[b]), k));
            let lhs = trace(&field, n, k, &(&field.mul(&ak, &xn) + &field.mul(&bk, &yn))).unwrap();
            let rhs = &field.mul(&ak, &trace(&field, n, k, &xn).unwrap())
                + &field.mul(&bk, &trace(&field, n, k, &yn).unwrap());
            prop_assert_eq!(lhs, rhs);
            let direct = trace(&field, n, 1, &xn).unwrap();
            let stepped = trace(&field, k, 1, &trace(&field, n, k, &xn).unwrap()).unwrap();
            prop_assert_eq!(direct, stepped);
        }
    }

    #[test]
    fn spectrum_is_frobenius_stable(bits in prop::collection::vec(0u8..2, 49)) {
        let field = make_field(7).unwrap();
        let beta = root_of_unity(&field, 49).unwrap();
        let powers = PowerTable::new(&field, &beta, 49).unwrap();
        let spec = dft_bits(&bits, &field, &powers).unwrap();
        for i in 0..49 {
            prop_assert_eq!(&spec.rho[2 * i % 49], &field.square(&spec.rho[i]));
        }
    }
}

#[test]
fn irreducible_search_up_to_160() {
    for m in 1..=160 {
        let f = find_irreducible(m).unwrap();
        assert_eq!(f.degree(), Some(m));
        assert!(is_irreducible(&f), "m={m}");
    }
}

#[test]
fn field_construction_is_deterministic() {
    for p in [3u64, 7, 13] {
        let (a, b) = (make_field(p).unwrap(), make_field(p).unwrap());
        assert_eq!(a, b);
        let (ra, rb) = (root_of_unity(&a, p * p).unwrap(), root_of_unity(&b, p * p).unwrap());
        assert_eq!(ra, rb);
        assert!(a.pow_u64(&ra, p * p).is_one());
        assert!(!a.pow_u64(&ra, p).is_one());
    }
}

#[test]
fn full_inverse_dft_for_small_primes() {
    for p in [3u64, 5, 7] {
        let ctx = build_context(p).unwrap();
        let field = make_field(p).unwrap();
        let beta = root_of_unity(&field, p * p).unwrap();
        let powers = PowerTable::new(&field, &beta, p * p).unwrap();
        for kind in [SequenceKind::Threshold, SequenceKind::BalancedLegendre, SequenceKind::Characteristic(1)] {
            let seq = generate(&ctx, kind).unwrap();
            let back = dft(&seq, &field, &powers).unwrap().invert(&field, &powers);
            for (u, v) in back.iter().enumerate() {
                let want = if seq.bits()[u] == 1 { FieldElem::one() } else { FieldElem::zero() };
                assert_eq!(v, &want, "p={p} {kind} u={u}");
            }
        }
    }
}

#[test]
fn sequences_are_periodic_under_the_raw_rule() {
    use fermatseq::numtheory::{fermat_quotient, legendre_symbol};
    for p in [3u64, 5, 7, 11, 13] {
        let ctx = build_context(p).unwrap();
        let e = generate(&ctx, SequenceKind::Threshold).unwrap();
        let f = generate(&ctx, SequenceKind::LegendreFermat).unwrap();
        let n = p * p;
        for u in 0..n {
            for shift in [n, 5 * n] {
                let q = fermat_quotient(p, u + shift).unwrap();
                assert_eq!(e.bit(u), (2 * q >= p) as u8);
                assert_eq!(f.bit(u), (legendre_symbol(q as i64, p).unwrap() == -1) as u8);
            }
        }
    }
}

#[test]
fn sequence_weights() {
    for p in [3u64, 5, 7, 11, 13] {
        let ctx = build_context(p).unwrap();
        let half = ((p - 1) * (p - 1) / 2) as usize;
        assert_eq!(generate(&ctx, SequenceKind::Threshold).unwrap().weight(), half);
        assert_eq!(generate(&ctx, SequenceKind::LegendreFermat).unwrap().weight(), half);
        let balanced = ((p * p + 1) / 2) as usize;
        assert_eq!(generate(&ctx, SequenceKind::BalancedThreshold).unwrap().weight(), balanced);
        assert_eq!(generate(&ctx, SequenceKind::BalancedLegendre).unwrap().weight(), balanced);
        let mut cover = vec![0u8; (p * p) as usize];
        for l in 0..p {
            let s = generate(&ctx, SequenceKind::Characteristic(l)).unwrap();
            assert_eq!(s.weight(), (p - 1) as usize);
            for (c, b) in cover.iter_mut().zip(s.bits()) {
                *c += b;
            }
        }
        for u in ctx.multiples_of_p() {
            cover[u as usize] += 1;
        }
        assert!(cover.iter().all(|&c| c == 1));
    }
}

#[test]
fn sequence_file_round_trip() {
    let ctx = build_context(11).unwrap();
    for kind in [SequenceKind::LegendreFermat, SequenceKind::Characteristic(4)] {
        let s = generate(&ctx, kind).unwrap();
        assert_eq!(BinarySequence::parse_file(&s.to_file_string()).unwrap(), s);
    }
}
