//! Command-line front end: argument model, dispatch and output formatting.
//!
//! Exit codes: `0` success, `1` internal or I/O failure, `2` usage or input
//! error, `3` resource guard exceeded, `4` a check returned FAIL.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use vdm_core::cache::{LambdaCache, CACHE_PATH_ENV};
use vdm_core::cumulants::{alpha, consistency_report, cumulant_by_inversion, CumulantArgs, CumulantPattern};
use vdm_core::funcspace::PiecewisePoly;
use vdm_core::lambda::{gamma, lambda_eval_at, lambda_interpolate_default, LambdaEngine, LambdaValue, Provenance};
use vdm_core::moments::{Letter, Limits, MomentEngine, Word, WordPoly};
use vdm_core::partitions::{parse_partition, SetPartition, Star, StarPattern};
use vdm_core::rational::{fmt_rational, int, to_f64, Rational};
use vdm_core::syntax::{parse_expr, parse_poly, parse_word};
use vdm_montecarlo::{
    centered_decay, estimate_diagonal, estimate_trace, growth_check, CenteredProduct, EstimatorReport, McError,
    Verdict,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_FAIL: i32 = 4;

/// The 24-letter expression whose trace separates B-valued from scalar
/// R-diagonality.
pub const WITNESS: &str = "((X* X)^4 - 44/3)((X X*)^2 - 2)((X* X)^4 - 44/3)((X X*)^2 - 2)";

#[derive(Debug, Parser)]
#[command(name = "vdm", version, about = "Exact C[0,1]-valued moments of random Vandermonde matrices, with Monte Carlo checks")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Emit one JSON object per line instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Persistent cache file for Λ values (JSON lines).
    #[arg(long, global = true, env = CACHE_PATH_ENV)]
    pub cache_path: Option<PathBuf>,
    /// Keep the cache in memory even if a path is configured.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Base seed for Monte Carlo runs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Monte Carlo trials per estimate.
    #[arg(long, global = true, default_value_t = 1000)]
    pub trials: usize,
    /// Lift the moment guards (16 matrix letters, partition sums up to n = 8).
    /// Sums are then allowed up to n = 10 and words of any length; the
    /// 24-letter witness needs this.
    #[arg(long, global = true)]
    pub guard_override: bool,
    /// Log progress and timings to stderr (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// B-valued expectation of a word or sum of words, e.g. "X* [t] X X* [1 - t^2] X".
    Moment {
        expr: String,
        /// Also test whether a word of the form X b1 X* ... X bn X* has a constant expectation.
        #[arg(long)]
        scalar_check: bool,
    },
    /// Scalar trace τ∘𝔈 of a word or sum of words.
    Trace { expr: String },
    /// Diagonal limit 𝔈(w)(t) of an alternating even word.
    Diag {
        word: String,
        #[arg(long)]
        t: String,
    },
    /// Λ_π(g_1, …, g_{n-1}); functions default to 1.
    Lambda {
        partition: String,
        #[arg(long = "g")]
        g: Vec<String>,
        /// Evaluate at one point by exact polytope integration.
        #[arg(long)]
        t: Option<String>,
        /// Reconstruct on [0,1] by verified interpolation of point values.
        #[arg(long, conflicts_with = "t")]
        interpolate: bool,
        /// Print τ(Λ_π(g)·g_n) for the given g_n.
        #[arg(long, conflicts_with_all = ["t", "interpolate"])]
        tau: Option<String>,
    },
    /// Γ_π(g_1, …, g_n); functions default to 1.
    Gamma {
        partition: String,
        #[arg(long = "g")]
        g: Vec<String>,
    },
    /// Cumulant maps on alternating patterns.
    Cumulant {
        #[command(subcommand)]
        action: CumulantCmd,
    },
    /// Monte Carlo estimates at finite N.
    #[command(args_conflicts_with_subcommands = true)]
    Mc {
        #[command(flatten)]
        estimate: McEstimate,
        #[command(subcommand)]
        action: Option<McCmd>,
    },
    /// Recompute the reference values and report PASS/FAIL per row.
    Table,
    /// Inspect or clear the Λ cache.
    Cache {
        #[command(subcommand)]
        action: CacheCmd,
    },
}

#[derive(Debug, Subcommand)]
pub enum CumulantCmd {
    /// α⁽¹⁾ₙ (pattern 1, X first) or α⁽²⁾ₙ (pattern 2, X* first), n ≤ 8.
    Alpha {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        pattern: u8,
        /// The 2n-1 coefficients; all default to 1.
        #[arg(long = "b")]
        b: Vec<String>,
    },
    /// Cumulant from moments by noncrossing inversion, e.g. --eps "1*1*".
    Invert {
        #[arg(long)]
        eps: String,
        #[arg(long = "b")]
        b: Vec<String>,
    },
    /// Compare both routes on random coefficient lists.
    Report {
        #[arg(long, default_value_t = 2)]
        n_max: usize,
    },
}

#[derive(Debug, Args)]
pub struct McEstimate {
    /// Word to estimate; omitted only with a subcommand.
    #[arg(long)]
    pub word: Option<String>,
    #[arg(long = "N", default_value_t = 100)]
    pub n: usize,
    /// Probe the diagonal entry at t instead of the trace.
    #[arg(long)]
    pub t: Option<String>,
    /// Finite-N bias allowance added to the 3·stderr tolerance.
    #[arg(long, default_value_t = 0.0)]
    pub allowance: f64,
}

#[derive(Debug, Subcommand)]
pub enum McCmd {
    /// |𝔼 tr| of the centered product over maximal alternating runs, across N.
    Decay {
        /// Star pattern such as "11"; used when --word is absent.
        #[arg(long)]
        eps: Option<String>,
        #[arg(long)]
        word: Option<String>,
        #[arg(long = "Ns", value_delimiter = ',', default_values_t = [25, 50, 100, 200])]
        ns: Vec<usize>,
        /// FAIL when the fitted log-log slope exceeds this.
        #[arg(long, default_value_t = -0.3, allow_negative_numbers = true)]
        max_slope: f64,
    },
    /// 𝔼 Tr((X*X)^p)/N across N.
    Growth {
        #[arg(long)]
        p: u32,
        #[arg(long = "Ns", value_delimiter = ',', default_values_t = [50, 100, 200])]
        ns: Vec<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum CacheCmd {
    Stats,
    List,
    Clear,
}

/// Result of a command that ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Fail,
}

pub struct Engines {
    pub lambda: Arc<LambdaEngine>,
    pub moments: MomentEngine,
    pub json: bool,
    pub seed: u64,
    pub trials: usize,
}

/// Engines configured from the global flags.
pub fn context(g: &Global) -> Result<Engines> {
    let cache = match (&g.cache_path, g.no_cache) {
        (Some(path), false) => LambdaCache::open(path).with_context(|| format!("opening cache {}", path.display()))?,
        _ => LambdaCache::in_memory(),
    };
    if cache.discarded() > 0 {
        log::warn!("{} unreadable cache lines skipped", cache.discarded());
    }
    let lambda = Arc::new(LambdaEngine::new(Arc::new(cache)));
    let limits = if g.guard_override { Limits::overridden() } else { Limits::default() };
    Ok(Engines {
        moments: MomentEngine::new(lambda.clone(), limits),
        lambda,
        json: g.json,
        seed: g.seed,
        trials: g.trials,
    })
}

fn rational(s: &str) -> Result<Rational> {
    let f = parse_poly(s)?;
    f.as_constant().ok_or_else(|| anyhow!(vdm_core::Error::Argument(format!("{s:?} is not a rational constant"))))
}

fn functions(texts: &[String], arity: usize) -> Result<Vec<PiecewisePoly>> {
    if texts.is_empty() {
        return Ok(vec![PiecewisePoly::one(); arity]);
    }
    if texts.len() != arity {
        return Err(vdm_core::Error::Argument(format!("expected {arity} functions, got {}", texts.len())).into());
    }
    texts.iter().map(|t| Ok(parse_poly(t)?)).collect()
}

fn partition(text: &str) -> Result<SetPartition> {
    Ok(parse_partition(text)?)
}

fn emit(out: &mut dyn Write, json: bool, value: &serde_json::Value, text: &str) -> Result<()> {
    if json {
        writeln!(out, "{}", serde_json::to_string(value)?)?;
    } else {
        writeln!(out, "{text}")?;
    }
    Ok(())
}

fn poly_json(f: &PiecewisePoly) -> serde_json::Value {
    json!({
        "value": f.to_string(),
        "piecewise": f.to_json(),
        "constant": f.is_single_piece() && f.degree() == 0,
        "tau": fmt_rational(&f.tau()),
    })
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Status> {
    let ctx = context(&cli.global)?;
    let start = Instant::now();
    let status = dispatch(&cli.command, &ctx, out)?;
    log::info!("finished in {:?}", start.elapsed());
    Ok(status)
}

fn dispatch(cmd: &Command, ctx: &Engines, out: &mut dyn Write) -> Result<Status> {
    let json = ctx.json;
    match cmd {
        Command::Moment { expr, scalar_check } => {
            let e = parse_expr(expr)?;
            let r = ctx.moments.expectation_poly(&e)?;
            let mut v = poly_json(&r.value);
            v["command"] = json!("moment");
            v["input"] = json!(e.to_string());
            v["stats"] = serde_json::to_value(&r.stats)?;
            let mut text = format!("E[{e}] = {}", r.value);
            if *scalar_check {
                let word = single(&e)?;
                let scalar = ctx.moments.scalar_check(&word)?;
                v["scalar"] = json!(scalar);
                text.push_str(&format!("\nscalar: {scalar}"));
            }
            emit(out, json, &v, &text)?;
        }
        Command::Trace { expr } => {
            let e = parse_expr(expr)?;
            let v = ctx.moments.trace_poly(&e)?;
            emit(
                out,
                json,
                &json!({"command": "trace", "input": e.to_string(), "value": fmt_rational(&v)}),
                &format!("tau(E[{e}]) = {}", fmt_rational(&v)),
            )?;
        }
        Command::Diag { word, t } => {
            let w = parse_word(word)?;
            let t = rational(t)?;
            let v = ctx.moments.diagonal_limit(&w, &t)?;
            emit(
                out,
                json,
                &json!({"command": "diag", "input": w.to_string(), "t": fmt_rational(&t), "value": fmt_rational(&v)}),
                &format!("E[{w}]({}) = {}", fmt_rational(&t), fmt_rational(&v)),
            )?;
        }
        Command::Lambda { partition: ptext, g, t, interpolate, tau } => {
            let p = partition(ptext)?;
            let gs = functions(g, p.n() - 1)?;
            if let Some(t) = t {
                let t = rational(t)?;
                let v = lambda_eval_at(&p, &gs, &t)?;
                emit(
                    out,
                    json,
                    &json!({"command": "lambda", "partition": p.to_string(), "t": fmt_rational(&t), "value": fmt_rational(&v), "engine": "polytope"}),
                    &format!("Lambda_{p}({}) = {}", fmt_rational(&t), fmt_rational(&v)),
                )?;
            } else if *interpolate {
                let f = PiecewisePoly::from_poly(lambda_interpolate_default(&p, &gs, &int(0), &int(1))?);
                let mut v = poly_json(&f);
                v["command"] = json!("lambda");
                v["partition"] = json!(p.to_string());
                v["engine"] = json!("interpolate");
                emit(out, json, &v, &format!("Lambda_{p} = {f}"))?;
            } else if let Some(gn) = tau {
                let gn = parse_poly(gn)?;
                let v = ctx.lambda.tau_lambda(&p, &gs, &gn)?;
                emit(
                    out,
                    json,
                    &json!({"command": "lambda", "partition": p.to_string(), "tau": fmt_rational(&v)}),
                    &format!("tau(Lambda_{p} * g_n) = {}", fmt_rational(&v)),
                )?;
            } else {
                let LambdaValue::Function { f, provenance } = ctx.lambda.lambda_value(&p, &gs)? else {
                    unreachable!("lambda_value returns functions")
                };
                let engine = match provenance {
                    Provenance::Reduced => "reduce",
                    Provenance::Interpolated => "interpolate",
                };
                let mut v = poly_json(&f);
                v["command"] = json!("lambda");
                v["partition"] = json!(p.to_string());
                v["engine"] = json!(engine);
                emit(out, json, &v, &format!("Lambda_{p} = {f}   [{engine}]"))?;
            }
        }
        Command::Gamma { partition: ptext, g } => {
            let p = partition(ptext)?;
            let gs = functions(g, p.n())?;
            let f = gamma(&p, &gs)?;
            let mut v = poly_json(&f);
            v["command"] = json!("gamma");
            v["partition"] = json!(p.to_string());
            emit(out, json, &v, &format!("Gamma_{p} = {f}"))?;
        }
        Command::Cumulant { action } => return cumulant(action, ctx, out),
        Command::Mc { estimate, action } => return mc(estimate, action.as_ref(), ctx, out),
        Command::Table => return table(ctx, out),
        Command::Cache { action } => {
            let cache = ctx.lambda.cache();
            match action {
                CacheCmd::Stats => {
                    let path = cache.path().map(|p| p.display().to_string());
                    emit(
                        out,
                        json,
                        &json!({"command": "cache", "path": path, "entries": cache.len(), "discarded": cache.discarded()}),
                        &format!(
                            "cache: {}\nentries: {}\ndiscarded lines: {}",
                            path.as_deref().unwrap_or("(in memory)"),
                            cache.len(),
                            cache.discarded()
                        ),
                    )?;
                }
                CacheCmd::List => {
                    for r in cache.records() {
                        let v = serde_json::to_value(&r)?;
                        emit(out, json, &v, &format!("{}  {}  {}  {}", r.key, r.kind, r.engine, r.payload))?;
                    }
                }
                CacheCmd::Clear => {
                    let n = cache.len();
                    cache.clear()?;
                    emit(out, json, &json!({"command": "cache", "cleared": n}), &format!("cleared {n} entries"))?;
                }
            }
        }
    }
    Ok(Status::Ok)
}

fn single(e: &WordPoly) -> Result<Word> {
    match e.terms() {
        [w] => Ok(w.clone()),
        _ => Err(vdm_core::Error::Argument("a single word is required here".into()).into()),
    }
}

fn cumulant(action: &CumulantCmd, ctx: &Engines, out: &mut dyn Write) -> Result<Status> {
    match action {
        CumulantCmd::Alpha { n, pattern, b } => {
            let pat = if *pattern == 1 { CumulantPattern::XFirst } else { CumulantPattern::StarFirst };
            let bs = functions(b, (2 * n).saturating_sub(1))?;
            let v = alpha(&CumulantArgs::new(*n, pat, bs)?, &ctx.lambda)?;
            let mut j = poly_json(&v);
            j["command"] = json!("cumulant");
            j["n"] = json!(n);
            j["pattern"] = json!(pattern);
            emit(out, ctx.json, &j, &format!("alpha^({pattern})_{n} = {v}"))?;
        }
        CumulantCmd::Invert { eps, b } => {
            let eps: StarPattern = eps.parse()?;
            let bs = functions(b, eps.len() - 1)?;
            let v = cumulant_by_inversion(&ctx.moments, &eps, &bs)?;
            let mut j = poly_json(&v);
            j["command"] = json!("cumulant");
            j["eps"] = json!(eps.to_string());
            emit(out, ctx.json, &j, &format!("kappa_{eps} = {v}"))?;
        }
        CumulantCmd::Report { n_max } => {
            let rows = consistency_report(&ctx.moments, *n_max, ctx.seed)?;
            let mut ok = true;
            for r in &rows {
                ok &= r.equal;
                let text = format!(
                    "{:<8} {:<6} alpha={:<24} inversion={}",
                    r.pattern,
                    if r.equal { "EQUAL" } else { "DIFFER" },
                    r.alpha.as_deref().unwrap_or("-"),
                    r.inversion
                );
                emit(out, ctx.json, &serde_json::to_value(r)?, &text)?;
            }
            return Ok(if ok { Status::Ok } else { Status::Fail });
        }
    }
    Ok(Status::Ok)
}

fn verdict_status(v: Option<Verdict>) -> Status {
    if v == Some(Verdict::Fail) {
        Status::Fail
    } else {
        Status::Ok
    }
}

fn report_text(r: &EstimatorReport) -> String {
    let mut s = format!(
        "{}  N={} trials={} seed={}{}  mean={:.6}{:+.6}i  stderr={:.6}",
        r.word,
        r.n,
        r.trials,
        r.seed,
        r.t.as_ref().map(|t| format!(" t={t}")).unwrap_or_default(),
        r.mean_re,
        r.mean_im,
        r.stderr
    );
    if let (Some(a), Some(tol), Some(v)) = (r.analytic, r.tolerance, r.verdict) {
        s.push_str(&format!("  analytic={a:.6} tol={tol:.4} {}", if v == Verdict::Pass { "PASS" } else { "FAIL" }));
    }
    s
}

/// Limit value of a Monte Carlo observable, when the moment engine can
/// supply it within its guards.
fn analytic(ctx: &Engines, w: &Word, t: Option<&Rational>) -> Option<f64> {
    let v = match t {
        None => ctx.moments.trace_moment(w),
        Some(t) => ctx.moments.expectation(w).and_then(|r| Ok(r.value.eval_at(t)?)),
    };
    match v {
        Ok(v) => Some(to_f64(&v)),
        Err(e) => {
            log::warn!("no analytic value for {w}: {e}");
            None
        }
    }
}

fn mc(est: &McEstimate, action: Option<&McCmd>, ctx: &Engines, out: &mut dyn Write) -> Result<Status> {
    match action {
        None => {
            let text = est
                .word
                .as_deref()
                .ok_or_else(|| anyhow!(vdm_core::Error::Argument("mc needs --word or a subcommand".into())))?;
            let w = parse_word(text)?;
            let t = est.t.as_deref().map(rational).transpose()?;
            let r = match &t {
                None => estimate_trace(&w, est.n, ctx.trials, ctx.seed)?,
                Some(t) => estimate_diagonal(&w, est.n, t, ctx.trials, ctx.seed)?,
            };
            let r = match analytic(ctx, &w, t.as_ref()) {
                Some(a) => r.judge(a, est.allowance),
                None => r,
            };
            emit(out, ctx.json, &serde_json::to_value(&r)?, &report_text(&r))?;
            Ok(verdict_status(r.verdict))
        }
        Some(McCmd::Decay { eps, word, ns, max_slope }) => {
            let w = match (word, eps) {
                (Some(w), _) => parse_word(w)?,
                (None, Some(e)) => {
                    let eps: StarPattern = e.parse()?;
                    Word::new(
                        eps.eps()
                            .iter()
                            .map(|s| if *s == Star::Star { Letter::XStar } else { Letter::X })
                            .collect(),
                    )
                }
                (None, None) => return Err(vdm_core::Error::Argument("decay needs --eps or --word".into()).into()),
            };
            let cp = CenteredProduct::from_word(&w, &ctx.moments)?;
            let r = centered_decay(&cp, ns, ctx.trials, ctx.seed)?;
            let pass = r.slope.is_none_or(|s| s <= *max_slope);
            let mut j = serde_json::to_value(&r)?;
            j["max_slope"] = json!(max_slope);
            j["verdict"] = json!(if pass { "PASS" } else { "FAIL" });
            let mut text = format!("centered product {}", r.product);
            for row in &r.rows {
                text.push_str(&format!(
                    "\n  N={:<4} |mean|={:.3e} stderr={:.3e} bound={:.3e}",
                    row.n, row.abs_mean, row.stderr, row.bound
                ));
            }
            text.push_str(&format!(
                "\n  slope(bound)={} slope(|mean|)={} {}",
                r.slope.map_or("-".into(), |s| format!("{s:.3}")),
                r.slope_abs_mean.map_or("-".into(), |s| format!("{s:.3}")),
                if pass { "PASS" } else { "FAIL" }
            ));
            emit(out, ctx.json, &j, &text)?;
            Ok(if pass { Status::Ok } else { Status::Fail })
        }
        Some(McCmd::Growth { p, ns }) => {
            let r = growth_check(*p, ns, ctx.trials, ctx.seed)?;
            let mut text = format!("E Tr((X*X)^{p})/N");
            for row in &r.rows {
                text.push_str(&format!("\n  N={:<4} ratio={:.5} stderr={:.5}", row.n, row.ratio, row.stderr));
            }
            text.push_str(if r.grows { "\n  grows with N: FAIL" } else { "\n  bounded: PASS" });
            emit(out, ctx.json, &serde_json::to_value(&r)?, &text)?;
            Ok(if r.grows { Status::Fail } else { Status::Ok })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub name: String,
    pub computed: String,
    pub expected: String,
    pub verdict: String,
}

fn row(name: &str, computed: String, expected: &str) -> TableRow {
    let verdict = if computed == expected { "PASS" } else { "FAIL" };
    TableRow { name: name.into(), computed, expected: expected.into(), verdict: verdict.into() }
}

/// The reference values, recomputed. The witness row always runs with
/// raised guards.
pub fn table_rows(ctx: &Engines) -> Result<Vec<TableRow>> {
    let m = &ctx.moments;
    let tr = |w: &str| -> Result<String> { Ok(fmt_rational(&m.trace_moment(&parse_word(w)?)?)) };
    let first = {
        let a = m.expectation(&parse_word("X X*")?)?.value;
        let b = m.expectation(&parse_word("X* X")?)?.value;
        if a == b { a.to_string() } else { format!("{a} vs {b}") }
    };
    let pi4 = SetPartition::from_labels(&[0, 1, 0, 1]);
    let lam = ctx.lambda.lambda_function(&pi4, &vec![PiecewisePoly::one(); 3])?;
    let wide = MomentEngine::new(ctx.lambda.clone(), Limits::overridden());
    let witness = wide.trace_poly(&parse_expr(WITNESS)?)?;
    Ok(vec![
        row("E(X X*) = E(X* X)", first, "1"),
        row("tau E((X* X)^2)", tr("(X* X)^2")?, "2"),
        row("tau E((X* X)^3)", tr("(X* X)^3")?, "5"),
        row("tau E((X X*)^4)", tr("(X X*)^4")?, "44/3"),
        row("E((X* X)^4)(t)", m.expectation(&parse_word("(X* X)^4")?)?.value.to_string(), "29/2 + t - t^2"),
        row("Lambda_{1,3|2,4}(1,1,1)(t)", lam.to_string(), "1/2 + t - t^2"),
        row("witness trace", fmt_rational(&witness), "1/270"),
    ])
}

fn table(ctx: &Engines, out: &mut dyn Write) -> Result<Status> {
    let rows = table_rows(ctx)?;
    let mut ok = true;
    for r in &rows {
        ok &= r.verdict == "PASS";
        let text = format!("{:<28} {:<18} expected {:<18} {}", r.name, r.computed, r.expected, r.verdict);
        emit(out, ctx.json, &serde_json::to_value(r)?, &text)?;
    }
    Ok(if ok { Status::Ok } else { Status::Fail })
}

/// Whether the error is a closed stdout, e.g. output piped into `head`.
pub fn is_broken_pipe(err: &anyhow::Error) -> bool {
    err.chain()
        .any(|c| c.downcast_ref::<std::io::Error>().is_some_and(|e| e.kind() == std::io::ErrorKind::BrokenPipe))
}

/// Exit code for an error returned by [`run`].
pub fn exit_code(err: &anyhow::Error) -> i32 {
    use vdm_core::Error as E;
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::ResourceLimit(_) => EXIT_RESOURCE,
                E::Argument(_) | E::Syntax { .. } | E::Unsupported(_) | E::Func(_) => EXIT_USAGE,
                _ => EXIT_INTERNAL,
            };
        }
        if let Some(e) = cause.downcast_ref::<McError>() {
            return match e {
                McError::ResourceLimit(_) => EXIT_RESOURCE,
                McError::Argument(_) => EXIT_USAGE,
                McError::Core(inner) => match inner {
                    E::ResourceLimit(_) => EXIT_RESOURCE,
                    E::Argument(_) | E::Syntax { .. } | E::Unsupported(_) | E::Func(_) => EXIT_USAGE,
                    _ => EXIT_INTERNAL,
                },
            };
        }
        if cause.downcast_ref::<clap::Error>().is_some() {
            return EXIT_USAGE;
        }
    }
    EXIT_INTERNAL
}
