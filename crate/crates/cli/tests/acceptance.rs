//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so the verdict lines are always printed.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use vdm_core::cache::LambdaCache;
use vdm_core::cumulants::{alpha, consistency_report, random_coefficient, CumulantArgs, CumulantPattern};
use vdm_core::funcspace::{PiecewisePoly, Poly};
use vdm_core::lambda::{gamma, lambda_eval_at, lambda_interpolate_default, lambda_reduce, tau_lambda_lifted, LambdaEngine};
use vdm_core::moments::{Limits, MomentEngine};
use vdm_core::partitions::{enumerate_noncrossing, enumerate_partitions, enumerate_purely_crossing, SetPartition};
use vdm_core::rational::{fmt_rational, int, q, Rational};
use vdm_core::syntax::{parse_expr, parse_poly, parse_word};
use vdm_core::Error;
use vdm_montecarlo::{centered_decay, estimate_diagonal, estimate_trace, CenteredProduct, EstimatorReport, Verdict};

type Check = Result<String, String>;
type Criterion = (&'static str, fn(&Ctx) -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn poly(s: &str) -> PiecewisePoly {
    parse_poly(s).unwrap()
}

fn ones(k: usize) -> Vec<PiecewisePoly> {
    vec![PiecewisePoly::one(); k]
}

fn pi4() -> SetPartition {
    SetPartition::from_labels(&[0, 1, 0, 1])
}

fn random_t(rng: &mut impl Rng) -> Rational {
    let d = rng.random_range(2..=12);
    q(rng.random_range(0..=d), d)
}

struct Ctx {
    lambda: Arc<LambdaEngine>,
    moments: MomentEngine,
}

fn trace_moments(c: &Ctx) -> Check {
    let start = Instant::now();
    let got: Vec<Rational> = (1..=4)
        .map(|p| c.moments.trace_moment(&parse_word(&format!("(X* X)^{p}")).unwrap()))
        .collect::<Result<_, _>>()
        .map_err(e)?;
    let elapsed = start.elapsed();
    ensure(got == [int(1), int(2), int(5), q(44, 3)], || format!("got {got:?}"))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("1, 2, 5, 44/3 in {elapsed:.2?}"))
}

fn quartic_profile(c: &Ctx) -> Check {
    let f = c.moments.expectation(&parse_word("(X* X)^4").unwrap()).map_err(e)?.value;
    ensure(f == poly("29/2 + t - t^2"), || format!("got {f}"))?;
    for (t, v) in [(q(0, 1), q(29, 2)), (q(1, 3), q(29, 2) + q(2, 9)), (q(1, 2), q(59, 4))] {
        let got = f.eval_at(&t).map_err(e)?;
        ensure(got == v, || format!("at {}: {}", fmt_rational(&t), fmt_rational(&got)))?;
    }
    Ok(format!("{f}"))
}

fn pi4_profile(_: &Ctx) -> Check {
    let p = pi4();
    for t in [q(0, 1), q(1, 4), q(1, 3), q(1, 2), q(1, 1)] {
        let got = lambda_eval_at(&p, &ones(3), &t).map_err(e)?;
        let want = q(1, 2) + &t * (int(1) - &t);
        ensure(got == want, || format!("at {}: {}", fmt_rational(&t), fmt_rational(&got)))?;
    }
    let f = lambda_interpolate_default(&p, &ones(3), &int(0), &int(1)).map_err(e)?;
    ensure(f == Poly::new(vec![q(1, 2), int(1), int(-1)]), || format!("interpolated {f}"))?;
    Ok(format!("{f}"))
}

fn sandwich(c: &Ctx) -> Check {
    for b in ["t", "t^2"] {
        let got = c.moments.expectation(&parse_word(&format!("(X X*)^2 [{b}] (X X*)^2")).unwrap()).map_err(e)?.value;
        let bp = poly(b);
        let want = &PiecewisePoly::constant(int(10) * bp.tau()) + &bp.scale(&q(14, 3));
        ensure(got == want, || format!("b' = {b}: got {got}"))?;
    }
    Ok("10 tau(b') + 14/3 b' for b' in {t, t^2}".into())
}

fn witness(c: &Ctx) -> Check {
    let expr = parse_expr(vdm_cli::WITNESS).map_err(e)?;
    ensure(matches!(c.moments.trace_poly(&expr), Err(Error::ResourceLimit(_))), || {
        "default guards accepted the witness".into()
    })?;
    let wide = MomentEngine::new(c.lambda.clone(), Limits::overridden());
    let start = Instant::now();
    let v = wide.trace_poly(&expr).map_err(e)?;
    let elapsed = start.elapsed();
    ensure(v == q(1, 270), || format!("got {}", fmt_rational(&v)))?;
    ensure(elapsed < Duration::from_secs(300), || format!("took {elapsed:?}"))?;
    Ok(format!("1/270 in {elapsed:.1?}"))
}

fn noncrossing_normalization(_: &Ctx) -> Check {
    let mut count = 0;
    for n in 1..=6 {
        let nc = enumerate_noncrossing(n).map_err(e)?;
        count += nc.len();
        nc.par_iter().try_for_each(|p| {
            let g = ones(n - 1);
            let f = lambda_reduce(p, &g).map_err(e)?.ok_or_else(|| format!("{p}: no reduction"))?;
            ensure(f.is_one(), || format!("{p}: reduce gave {f}"))?;
            for t in [q(0, 1), q(2, 7), q(1, 1)] {
                let v = lambda_eval_at(p, &g, &t).map_err(e)?;
                ensure(v == int(1), || format!("{p}: polytope gave {} at {}", fmt_rational(&v), fmt_rational(&t)))?;
            }
            Ok::<_, String>(())
        })?;
    }
    Ok(format!("{count} noncrossing partitions, both engines"))
}

fn gamma_normalization(_: &Ctx) -> Check {
    let mut count = 0;
    for n in 1..=6 {
        for p in enumerate_partitions(n).map_err(e)? {
            let f = gamma(&p, &ones(n)).map_err(e)?;
            ensure(f.is_one(), || format!("{p}: {f}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} partitions"))
}

fn engine_equivalence(_: &Ctx) -> Check {
    let parts = enumerate_partitions(5).map_err(e)?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cases: Vec<(Vec<PiecewisePoly>, Vec<Rational>)> = (0..20)
        .map(|_| ((0..4).map(|_| random_coefficient(&mut rng)).collect(), (0..5).map(|_| random_t(&mut rng)).collect()))
        .collect();
    let compared: usize = parts
        .par_iter()
        .map(|p| {
            let mut k = 0;
            for (g, ts) in &cases {
                let Some(f) = lambda_reduce(p, g).map_err(e)? else { continue };
                for t in ts {
                    let a = f.eval_at(t).map_err(e)?;
                    let b = lambda_eval_at(p, g, t).map_err(e)?;
                    ensure(a == b, || format!("{p} at {}: {} vs {}", fmt_rational(t), fmt_rational(&a), fmt_rational(&b)))?;
                    k += 1;
                }
            }
            Ok::<_, String>(k)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(format!("{compared} point comparisons over P(5)"))
}

fn rotation(c: &Ctx) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut count = 0;
    for n in 2..=5 {
        let parts = enumerate_partitions(n).map_err(e)?;
        let gs: Vec<Vec<PiecewisePoly>> = parts.iter().map(|_| (0..n).map(|_| random_coefficient(&mut rng)).collect()).collect();
        parts.par_iter().zip(&gs).try_for_each(|(p, g)| {
            let lhs = c.lambda.tau_lambda(p, &g[..n - 1], &g[n - 1]).map_err(e)?;
            let rhs = tau_lambda_lifted(&p.rotate_left(), &g[1..], &g[0]).map_err(e)?;
            ensure(lhs == rhs, || format!("{p}: {} vs {}", fmt_rational(&lhs), fmt_rational(&rhs)))
        })?;
        count += parts.len();
    }
    Ok(format!("{count} partitions, n = 2..5"))
}

fn aggregate(c: &Ctx) -> Check {
    let parts = enumerate_partitions(4).map_err(e)?;
    let mut total = int(0);
    let mut nc = int(0);
    for p in &parts {
        let v = c.lambda.tau_lambda(p, &ones(3), &PiecewisePoly::one()).map_err(e)?;
        if p.is_noncrossing() {
            nc += &v;
        }
        total += v;
    }
    ensure(total == q(44, 3) && nc == int(14), || format!("total {}, noncrossing {}", fmt_rational(&total), fmt_rational(&nc)))?;
    Ok("14 + 2/3 = 44/3".into())
}

fn pc_structure(c: &Ctx) -> Check {
    for n in [1, 2, 3, 5] {
        let pc = enumerate_purely_crossing(n).map_err(e)?;
        ensure(pc.is_empty(), || format!("PC({n}) = {pc:?}"))?;
    }
    let pc4 = enumerate_purely_crossing(4).map_err(e)?;
    ensure(pc4 == [pi4()], || format!("PC(4) = {pc4:?}"))?;
    for b in ["t", "1 - t^2", "3/2"] {
        let b = poly(b);
        for pattern in [CumulantPattern::XFirst, CumulantPattern::StarFirst] {
            let a = alpha(&CumulantArgs::new(1, pattern, vec![b.clone()]).map_err(e)?, &c.lambda).map_err(e)?;
            ensure(a == PiecewisePoly::constant(b.tau()), || format!("alpha_1({b}) = {a}"))?;
        }
    }
    let a4 = alpha(&CumulantArgs::ones(4, CumulantPattern::XFirst).map_err(e)?, &c.lambda).map_err(e)?;
    ensure(a4 == PiecewisePoly::constant(q(2, 3)), || format!("alpha_4(1) = {a4}"))?;
    Ok("PC(4) = {pi_4}, alpha_1 = tau(b), alpha_4(1) = 2/3".into())
}

fn cumulant_cross_check(c: &Ctx) -> Check {
    let rows = consistency_report(&c.moments, 2, 12).map_err(e)?;
    if let Some(r) = rows.iter().find(|r| !r.equal) {
        return Err(format!("{}: alpha {:?}, inversion {}", r.pattern, r.alpha, r.inversion));
    }
    let alternating = rows.iter().filter(|r| r.alpha.is_some()).count();
    Ok(format!("{alternating} alternating and {} vanishing patterns", rows.len() - alternating))
}

fn mc_line(r: &EstimatorReport) -> String {
    format!("{:.4}±{:.4}", r.mean_re, r.stderr)
}

fn mc_convergence(_: &Ctx) -> Check {
    let start = Instant::now();
    let seed = 7;
    let first = estimate_trace(&parse_word("X* X").unwrap(), 200, 2000, seed).map_err(e)?;
    ensure((first.mean_re - 1.0).abs() < 1e-9 && first.mean_im.abs() < 1e-9, || format!("(X*X)^1: {}", mc_line(&first)))?;
    let mut parts = vec![format!("p=1 {}", mc_line(&first))];
    for (word, analytic, allowance) in [("(X* X)^2", 2.0, 0.05), ("(X* X)^4", 44.0 / 3.0, 0.3)] {
        let r = estimate_trace(&parse_word(word).unwrap(), 200, 2000, seed).map_err(e)?.judge(analytic, allowance);
        ensure(r.verdict == Some(Verdict::Pass), || format!("{word}: {} vs {analytic}", mc_line(&r)))?;
        parts.push(format!("{word} {}", mc_line(&r)));
    }
    let r = estimate_diagonal(&parse_word("(X* X)^4").unwrap(), 100, &q(1, 2), 5000, seed)
        .map_err(e)?
        .judge(59.0 / 4.0, 0.5);
    ensure(r.verdict == Some(Verdict::Pass), || format!("diagonal: {} vs 59/4", mc_line(&r)))?;
    parts.push(format!("diag(1/2) {}", mc_line(&r)));
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(600), || format!("took {elapsed:?}"))?;
    Ok(format!("{} in {elapsed:.1?}", parts.join(", ")))
}

fn decay(c: &Ctx) -> Check {
    let cp = CenteredProduct::from_word(&parse_word("X X").unwrap(), &c.moments).map_err(e)?;
    let r = centered_decay(&cp, &[25, 50, 100, 200], 1000, 14).map_err(e)?;
    let slope = r.slope.ok_or("no slope")?;
    ensure(slope <= -0.3, || format!("slope {slope:.3}"))?;
    Ok(format!("slope {slope:.3}"))
}

fn dichotomy(c: &Ctx) -> Check {
    let a = c.moments.expectation(&parse_word("(X X*)^4").unwrap()).map_err(e)?.value;
    let b = c.moments.expectation(&parse_word("(X* X)^4").unwrap()).map_err(e)?.value;
    ensure(a.as_constant().is_some(), || format!("E((XX*)^4) = {a}"))?;
    ensure(b.as_constant().is_none(), || format!("E((X*X)^4) = {b}"))?;
    Ok(format!("E((XX*)^4) = {a}, E((X*X)^4) = {b}"))
}

fn main() -> ExitCode {
    let lambda = Arc::new(LambdaEngine::new(Arc::new(LambdaCache::in_memory())));
    let ctx = Ctx { moments: MomentEngine::new(lambda.clone(), Limits::default()), lambda };
    let criteria: [Criterion; 15] = [
        ("trace moments", trace_moments),
        ("quartic diagonal profile", quartic_profile),
        ("pi_4 profile", pi4_profile),
        ("sandwich with b'", sandwich),
        ("24-letter witness", witness),
        ("noncrossing normalization", noncrossing_normalization),
        ("gamma normalization", gamma_normalization),
        ("engine equivalence", engine_equivalence),
        ("rotation identity", rotation),
        ("aggregate over P(4)", aggregate),
        ("purely crossing structure", pc_structure),
        ("cumulant cross-validation", cumulant_cross_check),
        ("Monte Carlo convergence", mc_convergence),
        ("centered-product decay", decay),
        ("structural dichotomy", dichotomy),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (verdict, detail) = match check(&ctx) {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {verdict} {name}: {detail} [{:.1?}]", i + 1, start.elapsed());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
