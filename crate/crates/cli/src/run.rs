use std::fmt::Write;

use markoff_systole::charvar::{gt_map, oracle_cross_check};
use markoff_systole::cubic::{classify_real_roots, dominant_root, largest_real_root, tau};
use markoff_systole::dot::to_dot;
use markoff_systole::io::{format_complex, parse_complex};
use markoff_systole::markoff::{trace_reduce, ReductionOutcome};
use markoff_systole::scalar::{HiComplex, MapScalar};
use markoff_systole::systole::{
    n3_one_sided_bound, nonfuchsian_torus_report, tys_n3, tys_sphere, tys_torus, N3Bound, NonFuchsianTorus,
    Quantity, SystoleBound,
};
use markoff_systole::verify::{
    genus2_corner_check, verify_complex_sink_constant, verify_hat_lemma, verify_positive_sink, verify_real_sink,
    SamplingOptions, VerificationReport, ZPolicy,
};
use markoff_systole::{Complex64, Error, MarkoffMap, MarkoffTriple, MuParams, Result, Slope, Triangle};
use serde::Serialize;
use serde_json::json;

use crate::args::{Cli, Command, Config, MapArgs, MapCmd, OracleCmd, Output, Policy, Precision, RootCmd, TysCmd, VerifyCmd};

pub struct Report {
    pub rendered: String,
    /// `Some(false)` when a verification ran and failed.
    pub passed: Option<bool>,
}

fn render<T: Serialize>(cfg: &Config, value: &T, text: String) -> Result<String> {
    match cfg.output {
        Output::Text => Ok(text + "\n"),
        Output::Json => Ok(serde_json::to_string_pretty(value).expect("serializable report") + "\n"),
        Output::Dot => Err(Error::Domain("dot output is only available for `map dot`".into())),
    }
}

fn plain<T: Serialize>(cfg: &Config, value: &T, text: String) -> Result<Report> {
    Ok(Report {
        rendered: render(cfg, value, text)?,
        passed: None,
    })
}

fn checked<T: Serialize>(cfg: &Config, value: &T, text: String, passed: bool) -> Result<Report> {
    Ok(Report {
        rendered: render(cfg, value, text)?,
        passed: Some(passed),
    })
}

fn complex_list(s: &str) -> Result<Vec<Complex64>> {
    s.split(',').map(parse_complex).collect()
}

fn real(s: &str) -> Result<f64> {
    let z = parse_complex(s)?;
    if z.im != 0.0 {
        return Err(Error::Domain(format!("'{s}' must be real")));
    }
    Ok(z.re)
}

fn parse_mu(s: &str) -> Result<MuParams> {
    match complex_list(s)?.as_slice() {
        [m] => Ok(MuParams::classical(*m)),
        [l1, l2, l3, s] => MuParams::new(*l1, *l2, *l3, *s),
        _ => Err(Error::Parse(format!("mu '{s}' needs one value m or four values λ1,λ2,λ3,s"))),
    }
}

fn parse_triple(s: &str) -> Result<MarkoffTriple> {
    match complex_list(s)?.as_slice() {
        [x, y, z] => Ok(MarkoffTriple::new(*x, *y, *z)),
        _ => Err(Error::Parse(format!("triple '{s}' needs three values"))),
    }
}

fn fmt_list(zs: &[Complex64]) -> String {
    let parts: Vec<String> = zs.iter().map(|z| format_complex(*z)).collect();
    format!("({})", parts.join(", "))
}

fn validate(cfg: &Config, is_map: bool) -> Result<()> {
    if cfg.samples == 0 {
        return Err(Error::Domain("--samples must be at least 1".into()));
    }
    if cfg.depth_cap == 0 {
        return Err(Error::Domain("--depth-cap must be at least 1".into()));
    }
    if cfg.workers == Some(0) {
        return Err(Error::Domain("--workers must be at least 1".into()));
    }
    if cfg.precision == Precision::High && !is_map {
        return Err(Error::Domain("--precision high applies to map commands only".into()));
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<Report> {
    let cfg = &cli.config;
    validate(cfg, matches!(cli.command, Command::Map(_)))?;
    match &cli.command {
        Command::Root(cmd) => root(cfg, cmd),
        Command::Gt { a, b, c, d } => {
            let mu = gt_map(parse_complex(a)?, parse_complex(b)?, parse_complex(c)?, parse_complex(d)?);
            let all = [mu.lambda[0], mu.lambda[1], mu.lambda[2], mu.s];
            let parts: Vec<String> = all.iter().map(|z| format_complex(*z)).collect();
            plain(cfg, &mu, format!("({})", parts.join(",")))
        }
        Command::Map(cmd) => map(cfg, cmd),
        Command::Verify(cmd) => verify(cfg, cmd),
        Command::Tys(cmd) => tys(cfg, cmd),
        Command::Oracle(OracleCmd::CrossCheck {
            trials,
            max_denominator,
        }) => {
            let rep = oracle_cross_check(*trials, *max_denominator, cfg.seed)?;
            let mut text = format!(
                "oracle cross-check: {}\n  {} of {} triples matched within {:e} on slopes with denominator ≤ {}, seed {}",
                if rep.passed { "PASSED" } else { "FAILED" },
                rep.matched,
                rep.trials,
                rep.tolerance,
                rep.max_denominator,
                rep.seed
            );
            if let Some(w) = &rep.worst {
                write!(
                    text,
                    "\n  worst relative deviation {:e} at slope {} over {} slopes",
                    w.worst_relative, w.worst_slope, w.slopes
                )
                .expect("write to string");
            }
            checked(cfg, &rep, text, rep.passed)
        }
    }
}

fn root(cfg: &Config, cmd: &RootCmd) -> Result<Report> {
    match cmd {
        RootCmd::Dominant { mu } => {
            let m = parse_complex(mu)?;
            let (t, tau) = (dominant_root(m), tau(m));
            let v = json!({ "mu": m, "dominant_root": t, "modulus": t.norm(), "tau": tau });
            plain(cfg, &v, format_complex(t))
        }
        RootCmd::Real { mu } => {
            let m = real(mu)?;
            let t = largest_real_root(m);
            plain(cfg, &json!({ "mu": m, "largest_real_root": t }), format!("{t}"))
        }
        RootCmd::Classify { mu } => {
            let rep = classify_real_roots(real(mu)?)?;
            let roots: Vec<String> = rep.roots.iter().map(|r| r.to_string()).collect();
            let text = format!("case {} ({:?}): real roots [{}]", rep.case.number(), rep.case, roots.join(", "));
            plain(cfg, &rep, text)
        }
    }
}

fn map(cfg: &Config, cmd: &MapCmd) -> Result<Report> {
    let args: &MapArgs = match cmd {
        MapCmd::Eval { map, .. } | MapCmd::Reduce { map, .. } | MapCmd::Dot { map, .. } => map,
    };
    let mu = parse_mu(&args.mu)?;
    let base = parse_triple(&args.base)?;
    match cfg.precision {
        Precision::Double => map_with(cfg, cmd, &MarkoffMap::new(mu, base)?),
        Precision::High => map_with(cfg, cmd, &MarkoffMap::<HiComplex>::with_scalar(mu, base)?),
    }
}

fn map_with<S: MapScalar>(cfg: &Config, cmd: &MapCmd, m: &MarkoffMap<S>) -> Result<Report> {
    match cmd {
        MapCmd::Eval { slope, .. } => {
            let s: Slope = slope.parse()?;
            let v = m.region_value(&s)?;
            plain(cfg, &json!({ "slope": s, "value": v }), format_complex(v))
        }
        MapCmd::Reduce { start, .. } => {
            let start: Triangle = match start {
                Some(s) => s.parse()?,
                None => Triangle::base(),
            };
            let out = trace_reduce(m, &start, cfg.depth_cap)?;
            let moves = out.path().len() - 1;
            let text = match &out {
                ReductionOutcome::SinkFound { vertex, triple, .. } => {
                    format!("sink at {vertex}: {} after {moves} moves", fmt_list(&triple.0))
                }
                ReductionOutcome::SmallRegion { slope, value, .. } => format!(
                    "region {slope} has value {} of modulus below 2 after {moves} moves",
                    format_complex(*value)
                ),
                ReductionOutcome::DepthExceeded { .. } => format!("no sink within {moves} moves"),
            };
            plain(cfg, &out, text)
        }
        MapCmd::Dot { radius, .. } => {
            let dot = to_dot(m, &Triangle::base(), *radius)?;
            let rendered = match cfg.output {
                Output::Json => serde_json::to_string_pretty(&json!({ "dot": dot })).expect("serializable") + "\n",
                Output::Text | Output::Dot => dot,
            };
            Ok(Report { rendered, passed: None })
        }
    }
}

fn report_text(rep: &VerificationReport) -> String {
    let mut t = format!(
        "{}: {}\n  bound {}  worst margin {}  tolerance {:e}\n  samples {}  accepted {}  seed {}",
        rep.theorem,
        if rep.passed { "PASSED" } else { "FAILED" },
        rep.bound,
        rep.worst_margin.map_or("none".to_string(), |m| m.to_string()),
        rep.tolerance,
        rep.samples,
        rep.accepted,
        rep.seed
    );
    if !rep.witness.is_empty() {
        write!(t, "\n  witness {}", fmt_list(&rep.witness)).expect("write to string");
    }
    for (k, v) in &rep.details {
        write!(t, "\n  {k} {v}").expect("write to string");
    }
    t
}

fn verify(cfg: &Config, cmd: &VerifyCmd) -> Result<Report> {
    let mut opts = SamplingOptions::new(cfg.samples, cfg.seed);
    if let Some(w) = cfg.workers {
        opts = opts.with_workers(w);
    }
    let rep = match cmd {
        VerifyCmd::SinkComplex { mu } => verify_complex_sink_constant(parse_complex(mu)?, &opts)?,
        VerifyCmd::SinkReal { mu, extent, steps } => verify_real_sink(*mu, *extent, *steps)?,
        VerifyCmd::SinkPositive { mu } => verify_positive_sink(&parse_mu(mu)?, &opts)?,
        VerifyCmd::Hat => verify_hat_lemma(&opts)?,
        VerifyCmd::Genus2 { a_grid, d_grid, policy } => {
            let default: Vec<f64> = (1..=20).map(|i| 2.0 + 3.0 * i as f64 / 20.0).collect();
            let grid = |g: &Option<String>| -> Result<Vec<f64>> {
                match g {
                    Some(s) => s.split(',').map(real).collect(),
                    None => Ok(default.clone()),
                }
            };
            let policy = match policy {
                Policy::Above => ZPolicy::Above,
                Policy::Below => ZPolicy::Below,
                Policy::Both => ZPolicy::Both,
            };
            genus2_corner_check(&grid(a_grid)?, &grid(d_grid)?, policy)?
        }
    };
    checked(cfg, &rep, report_text(&rep), rep.passed)
}

fn tys(cfg: &Config, cmd: &TysCmd) -> Result<Report> {
    match cmd {
        TysCmd::Torus { k } => {
            let k = parse_complex(k)?;
            let t = tys_torus(k)?;
            let b = SystoleBound::new(Quantity::TraceModulus, t, format!("one-holed torus, k = {}", format_complex(k)));
            plain(cfg, &b, format!("{t}"))
        }
        TysCmd::Sphere { a, b, c, d } => {
            let t = tys_sphere(*a, *b, *c, *d)?;
            let text = if t.degenerate {
                format!("{} (boundary case, double root)", t.value)
            } else {
                format!("{}", t.value)
            };
            plain(cfg, &t, text)
        }
        TysCmd::N3 { character: None, .. } => {
            let t = tys_n3();
            plain(cfg, &SystoleBound::new(Quantity::TraceModulus, t, "Tys(N₃)"), format!("{t}"))
        }
        TysCmd::N3 {
            character: Some(chi),
            radius,
        } => {
            let chi: [Complex64; 4] = complex_list(chi)?
                .try_into()
                .map_err(|_| Error::Parse("character needs four values a,b,c,d".into()))?;
            let b = n3_one_sided_bound(chi, *radius)?;
            match &b {
                N3Bound::Found {
                    trace_modulus,
                    slope,
                    bound,
                    within_bound,
                } => {
                    let curve = slope.map_or("the curve with trace d".to_string(), |s| format!("region {s}"));
                    let text = format!("one-sided trace modulus {trace_modulus} at {curve}; Tys(N₃) = {bound}");
                    checked(cfg, &b, text, *within_bound)
                }
                N3Bound::DZeroBranch { sum_of_squares } => plain(
                    cfg,
                    &b,
                    format!("d = 0: a² + b² + c² = {}", format_complex(*sum_of_squares)),
                ),
            }
        }
        TysCmd::Nonfuchsian { k, base } => {
            let base = base.as_deref().map(parse_triple).transpose()?;
            let rep = nonfuchsian_torus_report(*k, base, cfg.depth_cap)?;
            let mut text = match &rep.classification {
                NonFuchsianTorus::EllipticGuaranteed { t_prime, .. } => {
                    format!("some simple closed curve is elliptic (|t′| = {} < 2)", t_prime.abs())
                }
                NonFuchsianTorus::TraceBound { bound, .. } => {
                    format!("some simple closed curve has |tr| ≤ {bound}")
                }
            };
            if let Some(fired) = rep.small_region_fired {
                write!(text, "\n  region below 2 reached by descent: {fired}").expect("write to string");
            }
            plain(cfg, &rep, text)
        }
    }
}
