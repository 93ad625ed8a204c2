//! Acceptance suite. Every comparison is exact; each criterion prints one
//! PASS/FAIL line and the binary exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Pow, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use qforms_core::forms::{self, FormName};
use qforms_core::identities::{self, Context, Identity, ReportStatus};
use qforms_core::lattice::{self, LomadzeSum, LomadzeSumSpec, LomadzeTerm};
use qforms_core::QSeries;

const PRECISION: usize = 200;

type Outcome = Result<String, String>;

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ensure_within(elapsed: Duration, budget: Duration) -> Result<(), String> {
    ensure(elapsed <= budget, || {
        format!("took {elapsed:.2?}, budget {budget:?}")
    })
}

/// Checks `ids` over `1..=n_max`; every one must match exactly.
fn all_match(ctx: &Context, ids: &[Identity], n_max: usize) -> Result<(), String> {
    for rep in ctx.verify_all(n_max, ids).map_err(|e| e.to_string())? {
        if let Some(m) = rep.first_mismatch() {
            return Err(format!(
                "{}: first mismatch at n={} (lhs {}, rhs {})",
                rep.name, m.n, m.lhs, m.rhs
            ));
        }
    }
    Ok(())
}

fn direct_four_variable_counts(n_max: i64) -> Vec<i64> {
    let f = |x: i64, y: i64| x * x + x * y + y * y;
    let b = 7;
    let mut counts = vec![0i64; n_max as usize + 1];
    for x1 in -b..=b {
        for x2 in -b..=b {
            let a = f(x1, x2);
            if a > n_max {
                continue;
            }
            for x3 in -b..=b {
                for x4 in -b..=b {
                    let v = a + f(x3, x4);
                    if v <= n_max {
                        counts[v as usize] += 1;
                    }
                }
            }
        }
    }
    counts
}

fn criterion_1(ctx: &Context) -> Outcome {
    let start = Instant::now();
    let direct = direct_four_variable_counts(30);
    let tables = ctx.tables();
    for (n, &c) in direct.iter().enumerate() {
        ensure(tables.counts(2).unwrap()[n] == BigInt::from(c), || {
            format!("s_4({n}) differs from 4-variable enumeration")
        })?;
    }
    let f1 = tables.f1();
    for k in 1..=14u32 {
        let powered = f1.pow(k);
        let counts = tables.counts(k as usize).unwrap();
        for n in 0..=PRECISION {
            ensure(powered.coeffs()[n] == BigRational::from_integer(counts[n].clone()), || {
                format!("F_1^{k} coefficient {n} differs from block convolution")
            })?;
        }
    }
    let elapsed = start.elapsed();
    ensure_within(elapsed, Duration::from_secs(10))?;
    Ok(format!(
        "k=1..14, n<=200 powering == block convolution; k=2 n<=30 == 4-loop enumeration ({elapsed:.2?})"
    ))
}

fn criterion_2(ctx: &Context) -> Outcome {
    use Identity::*;
    let ids = [DecompositionF7, DecompositionF9, DecompositionF11, DecompositionF12, DecompositionF14];
    let reports = ctx.verify_all(PRECISION, &ids).map_err(|e| e.to_string())?;
    let mut q0 = Vec::new();
    for rep in &reports {
        if let Some(m) = rep.first_mismatch() {
            return Err(format!("{} mismatch at n={}", rep.name, m.n));
        }
        let ct = rep.constant_term.as_ref().expect("decompositions check q^0");
        q0.push(format!("{}:q0={}", rep.name.trim_start_matches("decomposition-"), ct.rhs));
        ensure(ct.matches, || format!("{} q^0: theta {} vs {}", rep.name, ct.lhs, ct.rhs))?;
    }
    // Theorem-level s_24, s_28 follow from the same decompositions.
    all_match(ctx, &[S24Theorem, S28Theorem], PRECISION)?;
    Ok(format!("F7,F9,F11,F12,F14 exact for n=1..200; {}", q0.join(" ")))
}

fn criterion_3(ctx: &Context) -> Outcome {
    let start = Instant::now();
    for (n, v) in [(1usize, 1i64), (2, -24), (3, 252)] {
        let t = ctx.tau_via_lattice_sums(n).map_err(|e| e.to_string())?;
        ensure(t == int(v), || format!("tau({n}) = {t}, expected {v}"))?;
    }
    all_match(ctx, &[Identity::TauEq], 50)?;
    let elapsed = start.elapsed();
    ensure_within(elapsed, Duration::from_secs(30))?;
    Ok(format!("lattice-sum tau == eta^24 for n=1..50 ({elapsed:.2?})"))
}

fn criterion_4(ctx: &Context) -> Outcome {
    use Identity::*;
    all_match(ctx, &[Tau6_3, Tau8_3, Tau7Chi, Tau9Chi, Tau11Chi], 100)?;
    Ok("weights 6, 7, 8, 9, 11 exact for n=1..100".into())
}

fn criterion_5(ctx: &Context) -> Outcome {
    use Identity::*;
    all_match(ctx, &[LomadzeS24, LomadzeS28], 60)?;
    // The n x_1^2 coefficient of L_10_6 must be 21: with 27 the weight-10
    // sum is not even normalized.
    let spec = LomadzeSum::L10_6.spec();
    ensure(spec.terms.iter().any(|t| t.power == 2 && t.poly == [0, -21]), || {
        "L_10_6 does not carry -21 n x^2".into()
    })?;
    let misprint = LomadzeSumSpec {
        terms: vec![
            LomadzeTerm { power: 4, poly: vec![42] },
            LomadzeTerm { power: 2, poly: vec![0, -27] },
            LomadzeTerm { power: 0, poly: vec![0, 0, 1] },
        ],
        ..spec.clone()
    };
    let good = ctx.tables().lomadze_sum(&spec, 1).unwrap();
    let bad = ctx.tables().lomadze_sum(&misprint, 1).unwrap();
    ensure(good == BigInt::from(120) && bad != BigInt::from(120), || {
        format!("L_10_6(1) = {good}, with 27: {bad}")
    })?;
    all_match(ctx, &[Tau10_3_2, S28CorDerived], 60)?;
    Ok(format!(
        "L-24, L-28 == brute force for n=1..60; L_10_6(1)={good} (coefficient 27 would give {bad})"
    ))
}

fn criterion_6(ctx: &Context) -> Outcome {
    use Identity::*;
    all_match(ctx, &[RamanujanConvolution], 200)?;
    let tau2 = ctx.verify(E2DeltaConvolution, 150).map_err(|e| e.to_string())?;
    ensure(tau2.all_match(), || format!("tau2: {:?}", tau2.note))?;
    let convention = tau2.convention.expect("tau2 records its convention");
    all_match(ctx, &[S28Comparison, S28Intermediate, S28CorDerived], 100)?;
    // The printed corollary differs from the derived one by exactly
    // (922/3) L_6_2(n) at every n.
    let printed = ctx.verify(S28CorPrinted, 100).map_err(|e| e.to_string())?;
    ensure(printed.status == ReportStatus::Documented, || "printed s28-cor status".into())?;
    for m in &printed.mismatches {
        let l62 = BigRational::from_integer(ctx.lomadze(LomadzeSum::L6_2, m.n).unwrap());
        let expect = BigRational::new(922.into(), 3.into()) * l62;
        ensure(&m.rhs - &m.lhs == expect, || format!("printed s28-cor residue at n={}", m.n))?;
    }
    Ok(format!(
        "tau1 n<=200, tau2 n<=150 ({convention}), s28-cor n<=100 with -461/3 L_6_2 \
         (printed +461/3 off by 922/3 L_6_2 at {} of 100 n)",
        printed.mismatches.len()
    ))
}

fn random_series(rng: &mut StdRng, precision: usize, unit: bool) -> QSeries {
    QSeries::from_fn(precision, |i| {
        let num = rng.gen_range(-9i64..=9);
        let den = rng.gen_range(1i64..=5);
        if i == 0 && unit && num == 0 {
            int(1)
        } else {
            BigRational::new(num.into(), den.into())
        }
    })
}

fn criterion_7(_ctx: &Context) -> Outcome {
    // Multiplicativity of normalized newforms.
    let mut pairs = 0;
    for name in FormName::NEWFORMS {
        let f = forms::named_form(name, PRECISION).map_err(|e| e.to_string())?.series;
        let a = |n: usize| f.coeffs()[n].clone();
        for m in 2..=PRECISION {
            for n in (m + 1)..=(PRECISION / m) {
                if m.gcd(&n) == 1 {
                    pairs += 1;
                    ensure(a(m * n) == a(m) * a(n), || format!("{name}: a({m}*{n})"))?;
                }
            }
        }
    }
    // Odd x_1-moments vanish over F_1, hence over every F_k.
    for n in 0..=PRECISION as u64 {
        for t in [1u32, 3, 5, 7] {
            let s: BigInt = lattice::f1_solutions(n)
                .into_iter()
                .map(|(x, _)| Pow::pow(BigInt::from(x), t))
                .sum();
            ensure(s.is_zero(), || format!("odd moment t={t} at n={n}"))?;
        }
    }
    // Ring axioms and inversion on random series.
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..40 {
        let p = rng.gen_range(0..12);
        let a = random_series(&mut rng, p, true);
        let b = random_series(&mut rng, p, false);
        let c = random_series(&mut rng, p, false);
        ensure(a.mul(&b) == b.mul(&a), || "commutativity".into())?;
        ensure(a.mul(&b).mul(&c) == a.mul(&b.mul(&c)), || "associativity".into())?;
        ensure(a.mul(&b.add(&c)) == a.mul(&b).add(&a.mul(&c)), || "distributivity".into())?;
        let inv = a.invert().map_err(|e| e.to_string())?;
        ensure(a.mul(&inv) == QSeries::one(p), || "invert".into())?;
    }
    Ok(format!(
        "{pairs} coprime pairs multiplicative; odd moments zero n<=200; 40 random ring/inverse trials"
    ))
}

fn criterion_8(ctx: &Context) -> Outcome {
    let rows = ctx.rho_star_table(50).map_err(|e| e.to_string())?;
    ensure(rows.len() == 150, || format!("{} rows", rows.len()))?;
    let json = serde_json::to_string(&rows).map_err(|e| e.to_string())?;
    let back: Vec<identities::RhoStarRow> = serde_json::from_str(&json).map_err(|e| e.to_string())?;
    ensure(back == rows, || "rho table JSON round trip".into())?;
    ensure(rows.iter().all(|r| r.eisenstein_closed_form), || {
        "implied rho* differs from the Eisenstein closed form".into()
    })?;
    let nonzero = rows.iter().filter(|r| !r.difference.is_zero()).count();
    let reports = ctx.verify_all(50, &Identity::ALL).map_err(|e| e.to_string())?;
    ensure(!identities::any_failure(&reports, false), || {
        let bad: Vec<_> = reports.iter().filter(|r| r.fails(false)).map(|r| r.name.clone()).collect();
        format!("non-strict verify fails: {bad:?}")
    })?;
    let documented: Vec<_> = reports
        .iter()
        .filter(|r| r.status == ReportStatus::Documented)
        .map(|r| r.name.as_str())
        .collect();
    ensure(identities::any_failure(&reports, true), || "strict mode should fail".into())?;
    Ok(format!(
        "rho table 150 rows ({nonzero} nonzero differences); verify --all passes non-strict; documented: {}",
        documented.join(", ")
    ))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let ctx = Context::new(PRECISION).expect("context");
    println!("context at precision {PRECISION} built in {:.2?}", start.elapsed());
    let criteria: [(&str, fn(&Context) -> Outcome); 8] = [
        ("theta oracle", criterion_1),
        ("basis decompositions", criterion_2),
        ("tau from lattice sums", criterion_3),
        ("newform coefficient identities", criterion_4),
        ("Lomadze cross-checks", criterion_5),
        ("convolution identities", criterion_6),
        ("property suites", criterion_7),
        ("rho* discrepancy report", criterion_8),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match run(&ctx) {
            Ok(detail) => println!("[PASS] {}. {title}: {detail} [{:.2?}]", i + 1, t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {}. {title}: {why} [{:.2?}]", i + 1, t.elapsed());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
