use std::io::Write;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use fermatseq::cache::{CacheStatus, FieldParams, ParamCache};
use fermatseq::field::field_degree;
use fermatseq::lincomp::{berlekamp_massey, dft, lc_blahut, lc_gcd, DftSpectrum};
use fermatseq::numtheory::{
    build_context, check_odd_prime, is_prime, is_wieferich, multiplicative_order, FermatContext,
};
use fermatseq::sequences::{generate, BinarySequence, SequenceKind};
use fermatseq::tracerep::{assemble_defining_pair, build_trace_representation, TraceRepresentation};

use crate::report::{RunReport, SweepRow};
use crate::{
    resolve_kind, Caps, Cli, CliError, Command, GenArgs, LcArgs, Method, Outcome, ParamsArgs,
    SweepArgs, VerifyArgs,
};

/// Executes one parsed command line, writing its primary output to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let timings = !cli.no_timings;
    match cli.command {
        Command::Gen(args) => cmd_gen(args, out),
        Command::Lc(args) => cmd_lc(args, timings, out),
        Command::Verify(args) => cmd_verify(args, timings, out),
        Command::Sweep(args) => cmd_sweep(args, timings, out),
        Command::Params(args) => cmd_params(args, out),
        Command::ClearCache => {
            let cache = ParamCache::from_env();
            let n = cache.clear()?;
            emit(out, &format!("removed {n} cache files from {}\n", cache.dir().display()))?;
            Ok(Outcome::AllMatch)
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
        path: "<stdout>".into(),
        source,
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn outcome(ok: bool) -> Outcome {
    if ok {
        Outcome::AllMatch
    } else {
        Outcome::Mismatch
    }
}

fn timed<T>(times: &mut Vec<(&'static str, Duration)>, stage: &'static str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let v = f();
    times.push((stage, start.elapsed()));
    v
}

/// Validates `p` against the analysis caps and builds its context.
fn analysis_context(p: u64, caps: &Caps, refuse_wieferich: bool) -> Result<FermatContext, CliError> {
    check_odd_prime(p)?;
    if refuse_wieferich && is_wieferich(p)? {
        return Err(CliError::Unsupported(format!(
            "p = {p} is a Wieferich prime; its trace representation cannot be verified \
             at this scale (period {} against the analysis cap --max-p {})",
            p * p,
            caps.max_p
        )));
    }
    if p > caps.max_p {
        return Err(CliError::Unsupported(format!(
            "p = {p} exceeds the analysis cap --max-p {} (period {})",
            caps.max_p,
            p * p
        )));
    }
    Ok(build_context(p)?)
}

fn field_params(p: u64, caps: &Caps) -> Result<FieldParams, CliError> {
    let cache = ParamCache::from_env();
    let (params, status) = cache.get_or_compute(p, caps.degree_cap)?;
    let what = match status {
        CacheStatus::Hit => "hit",
        CacheStatus::Miss => "miss, stored",
        CacheStatus::Replaced => "invalid entry replaced",
    };
    eprintln!("cache: {} ({what})", cache.path_for(p).display());
    Ok(params)
}

fn base_report(ctx: &FermatContext, kind: SequenceKind) -> Result<RunReport, CliError> {
    let p = ctx.p();
    let wieferich = is_wieferich(p)?;
    let theorem_expected = match kind {
        SequenceKind::Threshold | SequenceKind::LegendreFermat => {
            fermatseq::expected_linear_complexity(p)?
        }
        _ => None,
    };
    Ok(RunReport {
        p,
        g: ctx.g(),
        delta: ctx.delta(),
        kind,
        lambda: multiplicative_order(2, p)?,
        m: field_degree(p)?.0 as u64,
        wieferich,
        l_bm: None,
        l_gcd: None,
        l_blahut: None,
        theorem_expected,
        pair_verified: None,
        trace_verified: None,
        times: Vec::new(),
    })
}

fn print_report(out: &mut dyn Write, report: &RunReport, timings: bool) -> Result<(), CliError> {
    emit(out, &report.to_key_values(timings))?;
    emit(out, "\n")?;
    emit(out, &report.summary())
}

fn cmd_gen(args: GenArgs, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let kind = args.kind.resolve()?;
    let ctx = build_context(args.kind.p)?;
    let seq = generate(&ctx, kind)?;
    match &args.out {
        Some(path) => {
            seq.write_to(path)?;
            emit(out, &format!("wrote {} bits to {}\n", seq.period(), path.display()))?;
        }
        None => emit(out, &seq.to_file_string())?,
    }
    Ok(Outcome::AllMatch)
}

fn cmd_lc(args: LcArgs, timings: bool, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let kind = args.kind.resolve()?;
    let ctx = analysis_context(args.kind.p, &args.caps, false)?;
    let mut report = base_report(&ctx, kind)?;
    let seq = timed(&mut report.times, "generate", || generate(&ctx, kind))?;
    if args.methods.contains(&Method::Bm) {
        let prof = timed(&mut report.times, "bm", || berlekamp_massey(&seq))?;
        report.l_bm = Some(prof.linear_complexity);
    }
    if args.methods.contains(&Method::Gcd) {
        report.l_gcd = Some(timed(&mut report.times, "gcd", || lc_gcd(&seq)));
    }
    if args.methods.contains(&Method::Blahut) {
        let params = timed(&mut report.times, "field", || field_params(ctx.p(), &args.caps))?;
        let powers = params.power_table();
        let spec = timed(&mut report.times, "dft", || dft(&seq, &params.field, &powers))?;
        report.l_blahut = Some(lc_blahut(&spec));
    }
    print_report(out, &report, timings)?;
    Ok(outcome(report.all_match()))
}

struct Verified {
    report: RunReport,
    spectrum: DftSpectrum,
    trace: Option<TraceRepresentation>,
}

/// All three LC methods, the defining pair, and for the two main kinds the
/// trace representation checked at every position.
fn verify_kind(ctx: &FermatContext, params: &FieldParams, kind: SequenceKind) -> Result<Verified, CliError> {
    let mut report = base_report(ctx, kind)?;
    let times = &mut report.times;
    let seq: BinarySequence = timed(times, "generate", || generate(ctx, kind))?;
    let field = &params.field;
    let powers = params.power_table();
    let bm = timed(times, "bm", || berlekamp_massey(&seq))?.linear_complexity;
    let gcd = timed(times, "gcd", || lc_gcd(&seq));
    let spectrum = timed(times, "dft", || dft(&seq, field, &powers))?;
    let pair = timed(times, "pair", || assemble_defining_pair(ctx, field, &powers, kind))?;
    let pair_ok = pair.coeffs == spectrum.rho;
    let trace = match kind {
        SequenceKind::Threshold | SequenceKind::LegendreFermat => Some(timed(times, "trace", || {
            let rep = build_trace_representation(ctx, field, &powers, kind)?;
            let ok = rep.verify_against(&seq)?;
            Ok::<_, fermatseq::Error>((rep, ok))
        })?),
        _ => None,
    };
    report.l_bm = Some(bm);
    report.l_gcd = Some(gcd);
    report.l_blahut = Some(lc_blahut(&spectrum));
    report.pair_verified = Some(pair_ok);
    report.trace_verified = trace.as_ref().map(|(_, ok)| *ok);
    Ok(Verified {
        report,
        spectrum,
        trace: trace.map(|(rep, _)| rep),
    })
}

fn cmd_verify(args: VerifyArgs, timings: bool, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let kind = args.kind.resolve()?;
    if args.trace_out.is_some() && !SequenceKind::MAIN.contains(&kind) {
        return Err(CliError::Usage(format!(
            "--trace-out needs --kind threshold or legendre-fermat, not {kind}"
        )));
    }
    let ctx = analysis_context(args.kind.p, &args.caps, true)?;
    let start = Instant::now();
    let params = field_params(ctx.p(), &args.caps)?;
    let field_time = start.elapsed();
    let mut v = verify_kind(&ctx, &params, kind)?;
    v.report.times.insert(0, ("field", field_time));
    if let Some(path) = &args.spectrum_out {
        write_file(path, &v.spectrum.to_dump_string())?;
    }
    if let (Some(path), Some(rep)) = (&args.trace_out, &v.trace) {
        write_file(path, &rep.to_report_string(v.report.trace_verified == Some(true)))?;
    }
    print_report(out, &v.report, timings)?;
    Ok(outcome(v.report.all_match()))
}

fn sweep_prime(p: u64, kinds: &[SequenceKind], caps: &Caps) -> Vec<SweepRow> {
    let setup = analysis_context(p, caps, true).and_then(|ctx| Ok((field_params(p, caps)?, ctx)));
    kinds
        .iter()
        .map(|&kind| {
            let start = Instant::now();
            let result = match &setup {
                Ok((params, ctx)) => verify_kind(ctx, params, kind)
                    .map(|v| v.report)
                    .map_err(|e| e.to_string()),
                Err(e) => Err(e.to_string()),
            };
            if let Err(e) = &result {
                eprintln!("p={p} {kind}: {e}");
            }
            SweepRow {
                p,
                kind,
                result,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect()
}

fn cmd_sweep(args: SweepArgs, timings: bool, out: &mut dyn Write) -> Result<Outcome, CliError> {
    if args.p_max < 3 {
        return Err(CliError::Usage(format!("--p-max {} has no odd primes below it", args.p_max)));
    }
    if args.p_max > args.caps.max_p {
        return Err(CliError::Unsupported(format!(
            "--p-max {} exceeds the analysis cap --max-p {}",
            args.p_max, args.caps.max_p
        )));
    }
    let kinds = args
        .kinds
        .iter()
        .map(|k| resolve_kind(k, None))
        .collect::<Result<Vec<_>, _>>()?;
    let primes: Vec<u64> = (3..=args.p_max).filter(|&p| is_prime(p)).collect();

    let slots: Vec<Mutex<Vec<SweepRow>>> = primes.iter().map(|_| Mutex::default()).collect();
    let next = AtomicUsize::new(0);
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(primes.len());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&p) = primes.get(i) else { break };
                *slots[i].lock().unwrap() = sweep_prime(p, &kinds, &args.caps);
            });
        }
    });

    let mut csv = format!("{}\n", SweepRow::HEADER);
    let mut all = true;
    for slot in slots {
        for row in slot.into_inner().unwrap() {
            all &= row.is_match();
            csv.push_str(&row.to_csv(timings));
            csv.push('\n');
        }
    }
    match &args.out {
        Some(path) => write_file(path, &csv)?,
        None => emit(out, &csv)?,
    }
    Ok(outcome(all))
}

fn cmd_params(args: ParamsArgs, out: &mut dyn Write) -> Result<Outcome, CliError> {
    check_odd_prime(args.p)?;
    let caps = Caps {
        max_p: args.p,
        degree_cap: args.degree_cap,
    };
    let params = field_params(args.p, &caps)?;
    emit(out, &params.to_text())?;
    Ok(Outcome::AllMatch)
}
