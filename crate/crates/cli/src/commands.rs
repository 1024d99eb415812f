use std::fs;
use std::path::PathBuf;

use serde_json::{Map, Value};

use recrel::algebra::{parse_rational, rat, to_f64, RatPoly, Rational};
use recrel::architectures::{
    eigen_data, graph, is_probability, reliability_polynomial, reliability_range, Architecture, Family,
};
use recrel::asymptotics::{
    coefficient_of_variation_limit, moment_expansion_series_like, mttf_expansion_parallel_like,
    mttf_parallel_like_value, nonexp_asymptotic_moment, reference_mttf_expansion, signature_from_eigen,
    signature_from_polynomials, weibull_equivalent, AsymptoticExpansion, CutSignature, HarmonicMode, SignatureKind,
};
use recrel::classify::{classify, expected_regime, RegimeLabel};
use recrel::moments::{
    cumulants_from_moments, cumulants_from_moments_f64, exact_moment, exact_scaled_moments, fan_limit_moment,
    mgf_value, nonexp_moment, FailureModel, FanMethod, PolyEvaluator,
};
use recrel::oracle::mc_moments;
use recrel::Error;

use crate::report::Report;
use crate::{
    row, ArchOpts, AsymptArgs, ClassifyArgs, Cli, Command, CompareArgs, Emit, ExactArgs, Harmonic, LimitMethod,
    ModelKind, ModelOpts, MomentsArgs, SignatureArgs, SimulateArgs, OUT_DIR_ENV,
};

pub enum Failure {
    Usage(String),
    Compute(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(msg) => Failure::Usage(msg),
            other => Failure::Compute(other),
        }
    }
}

type Out<T> = Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> Out<T> {
    Err(Failure::Usage(msg.into()))
}

pub fn run(cli: &Cli) -> Out<()> {
    if let Some(t) = cli.global.threads {
        if t == 0 {
            return usage("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().map_err(|e| Failure::Io(e.to_string()))?;
    }
    let report = match &cli.command {
        Command::Exact(a) => exact(a)?,
        Command::Moments(a) => moments(a)?,
        Command::Compare(a) => compare(a)?,
        Command::Signature(a) => signature(a)?,
        Command::Asympt(a) => asympt(a)?,
        Command::Simulate(a) => simulate(a)?,
        Command::Classify(a) => classify_cmd(a)?,
    };
    let config = serde_json::to_value(cli).map_err(|e| Failure::Io(e.to_string()))?;
    let text = report.render(cli.global.format, &config).map_err(Failure::Io)?;
    match &cli.global.output {
        Some(path) if path.as_os_str() != "-" => {
            let path = resolve(path);
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
            }
            fs::write(&path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        }
        _ => print!("{text}"),
    }
    if cli.global.format == crate::report::Format::Csv {
        for line in report.summary_lines() {
            eprintln!("# {line}");
        }
    }
    Ok(())
}

fn resolve(path: &PathBuf) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
        _ => path.clone(),
    }
}

fn family_of(family: Family, k: Option<u32>) -> Out<Family> {
    match (family, k) {
        (Family::KOutOfN { .. }, Some(k)) => Ok(Family::KOutOfN { k }),
        (Family::KOutOfN { .. }, None) => usage("kofn needs --k"),
        (_, Some(_)) => usage(format!("--k only applies to kofn, not {family}")),
        (f, None) => Ok(f),
    }
}

/// Exact polynomials for every size in the range.
fn polynomials(arch: &ArchOpts) -> Out<Vec<(u32, RatPoly)>> {
    let family = family_of(arch.family, arch.k)?;
    Architecture::new(family, arch.n.lo)?;
    if let Family::KOutOfN { .. } = family {
        return arch.n.iter().map(|n| Ok((n, reliability_polynomial(&Architecture::new(family, n)?)?))).collect();
    }
    Ok(reliability_range(family, arch.n.lo, arch.n.hi)?)
}

fn single_n(arch: &ArchOpts) -> Out<Architecture> {
    if arch.n.lo != arch.n.hi {
        return usage("this command takes a single --n");
    }
    Ok(Architecture::new(family_of(arch.family, arch.k)?, arch.n.lo)?)
}

fn failure_model(m: &ModelOpts) -> Out<FailureModel> {
    Ok(match m.model {
        ModelKind::Exponential => FailureModel::exponential(m.lambda)?,
        ModelKind::Weibull => FailureModel::weibull(m.lambda, m.kappa)?,
        ModelKind::PowerLaw => FailureModel::power_law(m.beta, m.a_beta)?,
    })
}

fn rational_string(r: &Rational) -> String {
    r.to_string()
}

fn exact(a: &ExactArgs) -> Out<Report> {
    let mut ps: Vec<Rational> = a.p.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?;
    if let Some(g) = a.grid {
        if g == 0 {
            return usage("--grid must be at least 1");
        }
        ps.extend((0..=g).map(|j| rat(j as i64, g as i64)));
    }
    if let Some(bad) = ps.iter().find(|p| !is_probability(p)) {
        return usage(format!("p = {bad} is outside [0, 1]"));
    }
    let emit = a.emit.unwrap_or(if ps.is_empty() { Emit::Coeffs } else { Emit::Value });
    if emit == Emit::Value && ps.is_empty() {
        return usage("--emit value needs --p or --grid");
    }
    let mut report = Report::default();
    for (n, r) in polynomials(&a.arch)? {
        match emit {
            Emit::Coeffs => {
                let coeffs: Vec<String> = r.coeffs().iter().map(rational_string).collect();
                report.push(row! {"n" => n, "coeffs" => coeffs});
            }
            Emit::Value => {
                for p in &ps {
                    let v = r.eval(p);
                    report.push(row! {
                        "n" => n,
                        "p" => rational_string(p),
                        "reliability" => rational_string(&v),
                        "reliability_f64" => to_f64(&v),
                    });
                }
            }
        }
    }
    Ok(report)
}

fn moments(a: &MomentsArgs) -> Out<Report> {
    let model = failure_model(&a.model)?;
    let lambda = model.rate();
    let m_max = *a.m.iter().max().unwrap_or(&1);
    let quantity = if a.cumulants { "cumulant" } else { "moment" };
    let mut report = Report::default();

    if a.limit {
        if family_of(a.arch.family, a.arch.k)? != Family::GeneralizedFan {
            return usage("--limit is only defined for the fan");
        }
        if a.model.model != ModelKind::Exponential {
            return usage("--limit needs exponential components");
        }
        let method = match a.method {
            LimitMethod::Quadrature => FanMethod::Quadrature,
            LimitMethod::ClosedForm => FanMethod::ClosedForm,
        };
        let scaled: Vec<f64> = (1..=m_max).map(|m| Ok(fan_limit_moment(m, method)?.scaled)).collect::<Out<_>>()?;
        let values = if a.cumulants { cumulants_from_moments_f64(&scaled) } else { scaled };
        for &m in &a.m {
            let v = values[m as usize - 1];
            report.push(row! {"n" => "inf", "m" => m, "quantity" => quantity, "scaled" => v, "value" => v / lambda.powi(m as i32)});
        }
        return Ok(report);
    }

    for (n, r) in polynomials(&a.arch)? {
        if !a.mgf.is_empty() {
            if a.model.model != ModelKind::Exponential {
                return usage("--mgf needs exponential components");
            }
            for &z in &a.mgf {
                report.push(row! {"n" => n, "z" => z, "mgf" => mgf_value(&r, z, lambda)?});
            }
            continue;
        }
        match a.model.model {
            ModelKind::Exponential => {
                let mu = exact_scaled_moments(&r, m_max)?;
                let values = if a.cumulants { cumulants_from_moments(&mu) } else { mu };
                for &m in &a.m {
                    let exact = &values[m as usize - 1];
                    report.push(row! {
                        "n" => n,
                        "m" => m,
                        "quantity" => quantity,
                        "scaled_exact" => rational_string(exact),
                        "value" => to_f64(exact) / lambda.powi(m as i32),
                    });
                }
            }
            _ => {
                let mu: Vec<f64> =
                    (1..=m_max).map(|m| Ok(nonexp_moment(&r, &model, m)?.value())).collect::<Out<_>>()?;
                let values = if a.cumulants { cumulants_from_moments_f64(&mu) } else { mu };
                for &m in &a.m {
                    report.push(row! {"n" => n, "m" => m, "quantity" => quantity, "value" => values[m as usize - 1]});
                }
            }
        }
    }
    Ok(report)
}

fn signature_for(family: Family, order: usize, sizes: &[u32]) -> Out<CutSignature> {
    let kind = expected_regime(family)
        .signature_kind()
        .ok_or_else(|| Failure::Compute(Error::Unsupported(format!("{family} saturates and has no cut signature"))))?;
    if sizes.is_empty() {
        return Ok(signature_from_eigen(&eigen_data(family)?, kind, order)?);
    }
    if sizes.len() < 2 {
        return usage("--sizes needs at least two sizes");
    }
    let polys = sizes
        .iter()
        .map(|&n| Ok((n, reliability_polynomial(&Architecture::new(family, n)?)?)))
        .collect::<Out<Vec<_>>>()?;
    Ok(signature_from_polynomials(&polys, kind, order)?)
}

fn coefficient_map(map: std::collections::BTreeMap<usize, Rational>) -> Map<String, Value> {
    map.into_iter().map(|(j, c)| (j.to_string(), Value::String(rational_string(&c)))).collect()
}

fn signature(a: &SignatureArgs) -> Out<Report> {
    let family = family_of(a.family, a.k)?;
    let sig = signature_for(family, a.order, &a.sizes)?;
    let mut report = Report::default();
    report.push(row! {
        "family" => family.to_string(),
        "kind" => sig.kind.to_string(),
        "i" => sig.i,
        "alpha" => coefficient_map(sig.alpha_map()),
        "alpha_prime" => coefficient_map(sig.alpha_prime_map()),
    });
    Ok(report)
}

/// Expansion of `lambda^m <T^m>` with `terms` terms, preferring the longer
/// reference series where one is known.
fn expansion(family: Family, sig: &CutSignature, m: u32, terms: usize) -> Out<AsymptoticExpansion> {
    if terms == 0 {
        return usage("--terms must be at least 1");
    }
    let reference = if m == 1 { reference_mttf_expansion(family) } else { None };
    match sig.kind {
        SignatureKind::SeriesLike => {
            let mut e = match reference {
                Some(e) => e,
                None => moment_expansion_series_like(sig, m, 2)?,
            };
            e.power_terms.retain(|t| t.coeff != 0.0);
            if terms > e.power_terms.len() {
                eprintln!("note: {family} has {} expansion terms for m = {m}; using all of them", e.power_terms.len());
            }
            Ok(e.truncated(terms))
        }
        SignatureKind::ParallelLike => {
            if m != 1 {
                return usage("parallel-like expansions cover the mean only (m = 1)");
            }
            let mut e = match reference {
                Some(e) => e,
                None => mttf_expansion_parallel_like(sig)?,
            };
            e.power_terms.retain(|t| t.coeff != 0.0);
            if terms > e.power_terms.len() + 1 {
                eprintln!("note: {family} has {} expansion terms; using all of them", e.power_terms.len() + 1);
            }
            Ok(e.truncated(terms - 1))
        }
    }
}

fn describe(e: &AsymptoticExpansion) -> String {
    let mut parts = Vec::new();
    if e.log_coeff != 0.0 {
        parts.push(format!("{} ln n", e.log_coeff));
    }
    if e.log_coeff != 0.0 || e.const_coeff != 0.0 {
        parts.push(format!("{}", e.const_coeff));
    }
    for t in &e.power_terms {
        let c = match &t.gammas {
            Some(g) if t.scale == 1.0 => format!("{g}"),
            _ => format!("{}", t.coeff),
        };
        parts.push(format!("({c}) n^(-{})", t.exponent));
    }
    parts.join(" + ")
}

fn asympt(a: &AsymptArgs) -> Out<Report> {
    let family = family_of(a.arch.family, a.arch.k)?;
    let model = failure_model(&a.model)?;
    Architecture::new(family, a.arch.n.lo)?;
    let sig = signature_for(family, 8, &[])?;
    let mut report = Report::default();
    if a.model.model != ModelKind::Exponential {
        for &m in &a.m {
            for n in a.arch.n.iter() {
                let (value, exponent) = nonexp_asymptotic_moment(&sig, &model, m, n)?;
                report.push(row! {"n" => n, "m" => m, "estimate" => value, "exponent" => exponent});
            }
        }
        return Ok(report);
    }
    let lambda = model.rate();
    for &m in &a.m {
        let e = expansion(family, &sig, m, a.terms)?;
        report.summary.insert(format!("expansion_m{m}"), Value::String(describe(&e)));
        for n in a.arch.n.iter() {
            let scaled = match (sig.kind, a.harmonic) {
                (SignatureKind::ParallelLike, Harmonic::Exact) => {
                    mttf_parallel_like_value(&sig, n, HarmonicMode::ExactHarmonic)?
                }
                _ => e.eval(n as f64),
            };
            report.push(row! {"n" => n, "m" => m, "estimate" => scaled / lambda.powi(m as i32)});
        }
    }
    if sig.kind == SignatureKind::SeriesLike {
        report.summary.insert("cv_limit".into(), serde_json::json!(coefficient_of_variation_limit(&sig)?));
    }
    Ok(report)
}

fn compare(a: &CompareArgs) -> Out<Report> {
    let family = family_of(a.arch.family, a.arch.k)?;
    let model = failure_model(&a.model)?;
    let sig = signature_for(family, 8, &[])?;
    let mut report = Report::default();

    if let Some(order) = a.weibull {
        let arch = single_n(&a.arch)?;
        if a.model.model != ModelKind::Exponential {
            return usage("--weibull compares against exponential components");
        }
        if a.x_max.is_nan() || a.x_max <= 0.0 || a.points == 0 {
            return usage("--x-max must be positive and --points at least 1");
        }
        let w = weibull_equivalent(&sig, order)?;
        let eval = PolyEvaluator::new(&reliability_polynomial(&arch)?);
        let (mut worst, mut at) = (0.0f64, 0.0);
        for j in 1..=a.points {
            let x = a.x_max * j as f64 / a.points as f64;
            let exact = eval.eval((-x).exp());
            let approx = w.reliability(arch.n(), x);
            let err = (exact - approx).abs();
            if err > worst {
                worst = err;
                at = x;
            }
            report.push(row! {"x" => x, "exact" => exact, "approx" => approx, "abs_err" => err});
        }
        report.summary.insert("max_abs_err".into(), serde_json::json!(worst));
        report.summary.insert("at_x".into(), serde_json::json!(at));
        report
            .summary
            .insert("weibull".into(), Value::String(format!("a_{} = {}, a_{} = {}", w.i, w.a_i, w.i + 1, w.a_ip1)));
        return Ok(report);
    }

    let exponential = a.model.model == ModelKind::Exponential;
    let e = if exponential { Some(expansion(family, &sig, a.m, a.terms)?) } else { None };
    let lambda = model.rate();
    for (n, r) in polynomials(&a.arch)? {
        let (exact, asymptotic) = match &e {
            Some(e) => {
                let exact = exact_moment(&r, a.m, lambda)?.value();
                (exact, e.eval(n as f64) / lambda.powi(a.m as i32))
            }
            None => (nonexp_moment(&r, &model, a.m)?.value(), nonexp_asymptotic_moment(&sig, &model, a.m, n)?.0),
        };
        let abs = (exact - asymptotic).abs();
        report.push(row! {
            "n" => n,
            "exact" => exact,
            "asymptotic" => asymptotic,
            "abs_err" => abs,
            "rel_err" => abs / exact.abs(),
        });
    }
    if let Some(e) = &e {
        report.summary.insert("expansion".into(), Value::String(describe(e)));
    }
    Ok(report)
}

fn simulate(a: &SimulateArgs) -> Out<Report> {
    let arch = single_n(&a.arch)?;
    let model = failure_model(&a.model)?;
    let g = graph(&arch)?;
    let m_max = *a.m.iter().max().unwrap_or(&1);
    let estimates = mc_moments(&g, &model, m_max, a.samples, a.seed)?;
    let r = reliability_polynomial(&arch)?;
    let mut report = Report::default();
    for &m in &a.m {
        let est = &estimates[m as usize - 1];
        let exact = match a.model.model {
            ModelKind::Exponential => exact_moment(&r, m, model.rate())?.value(),
            _ => nonexp_moment(&r, &model, m)?.value(),
        };
        report.push(row! {
            "m" => m,
            "mean" => est.mean,
            "std_error" => est.std_error,
            "n_samples" => est.n_samples,
            "seed" => est.seed,
            "exact" => exact,
            "z" => (est.mean - exact) / est.std_error,
        });
    }
    Ok(report)
}

fn classify_cmd(a: &ClassifyArgs) -> Out<Report> {
    let families: Vec<Family> = match a.family {
        Some(f) => vec![family_of(f, a.k)?],
        None => Family::RECURSIVE.to_vec(),
    };
    let mut report = Report::default();
    for family in families {
        let c = classify(family)?;
        let samples: Map<String, Value> =
            c.samples.iter().map(|(n, v)| (n.to_string(), Value::String(rational_string(v)))).collect();
        let mut r = row! {
            "family" => family.to_string(),
            "regime" => c.label.name(),
            "r_half" => samples,
            "extrapolated_limit" => c.extrapolated_limit,
        };
        if let RegimeLabel::Saturating { r_infinity_at_half, closed_form } = &c.label {
            r.insert("r_infinity_at_half".into(), serde_json::json!(r_infinity_at_half));
            if let Some((num, den)) = closed_form {
                r.insert("r_infinity".into(), Value::String(format!("({num}) / ({den})")));
            }
        }
        report.push(r);
    }
    Ok(report)
}
