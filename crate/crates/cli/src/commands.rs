use std::f64::consts::PI;

use anyhow::{bail, ensure, Context, Result};
use qring::Complex64;
use qring::{
    apply_gauge, build_twisted, classify_with_sign, degenerate_transition, eigh, energy_bands,
    flux_eigenvalue, make_grid, mirror_superposable, periodicity_defect, superposition_admissible,
    sweep, verify_gauge_invariance, BoundarySpec, FluxConfig, GaugeSpec, Spectrum, SpectrumLabel,
    SuperpositionSpec,
};
use serde::Serialize;
use serde_json::json;

use crate::format::{csv_line, g12};
use crate::{BandsArgs, FluxArgs, OutputFormat, Report, SpectrumArgs, SuperposeArgs, SweepArgs};

/// Spectral gap allowed between a gauged and an ungauged operator.
const GAUGE_TOL: f64 = 1e-9;

const ROW_HEADER: &str =
    "delta_alpha,idx,lambda_numeric,n_label,lambda_continuum,lambda_discrete,aliased,residual";

#[derive(Debug, Serialize)]
struct Row {
    delta_alpha: f64,
    idx: usize,
    lambda_numeric: f64,
    n_label: i64,
    lambda_continuum: f64,
    lambda_discrete: f64,
    aliased: bool,
    residual: f64,
}

impl Row {
    fn fields(&self) -> Vec<String> {
        vec![
            g12(self.delta_alpha),
            self.idx.to_string(),
            g12(self.lambda_numeric),
            self.n_label.to_string(),
            g12(self.lambda_continuum),
            g12(self.lambda_discrete),
            self.aliased.to_string(),
            g12(self.residual),
        ]
    }
}

fn rows(delta_alpha: f64, spectrum: &Spectrum, labels: &[SpectrumLabel]) -> Vec<Row> {
    spectrum
        .eigenvalues
        .iter()
        .zip(&spectrum.residuals)
        .zip(labels)
        .enumerate()
        .map(|(idx, ((&lambda, &residual), label))| Row {
            delta_alpha,
            idx,
            lambda_numeric: lambda,
            n_label: label.n,
            lambda_continuum: label.lambda_continuum,
            lambda_discrete: label.lambda_discrete,
            aliased: label.aliased,
            residual,
        })
        .collect()
}

fn to_json(value: &serde_json::Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn figure_b1(args: &SweepArgs) -> Result<Report> {
    ensure!(
        args.steps >= 2,
        "--steps must be at least 2, got {}",
        args.steps
    );
    let grid = make_grid(args.op.r)?;
    let deltas: Vec<f64> = (0..args.steps)
        .map(|i| PI * i as f64 / (args.steps - 1) as f64)
        .collect();
    let points = sweep(
        &grid,
        &deltas,
        args.op.sign.into(),
        args.op.tol,
        args.op.match_tol,
    );

    let mut ok = true;
    let mut all_rows = Vec::new();
    let mut json_points = Vec::new();
    for (delta_alpha, point) in deltas.iter().zip(points) {
        match point {
            Ok(p) => {
                json_points.push(json!({
                    "delta_alpha": p.delta_alpha,
                    "eigenvalues": p.spectrum.eigenvalues,
                    "labels": p.labels,
                    "diagnostics": {
                        "max_residual": p.spectrum.max_residual,
                        "max_offdiag_overlap": p.spectrum.max_offdiag_overlap,
                    },
                }));
                all_rows.extend(rows(p.delta_alpha, &p.spectrum, &p.labels));
            }
            Err(err) => {
                ok = false;
                eprintln!("delta_alpha = {}: {err}", g12(*delta_alpha));
            }
        }
    }

    let data = match args.output.format {
        OutputFormat::Csv => {
            let mut s = format!("{ROW_HEADER}\n");
            for row in &all_rows {
                s.push_str(&csv_line(&row.fields()));
            }
            s
        }
        OutputFormat::Json => to_json(&json!({
            "config": args,
            "points": json_points,
        }))?,
    };
    Ok(Report { data, ok })
}

struct GaugedSpectrum {
    spectrum: Spectrum,
    labels: Vec<SpectrumLabel>,
    gauge_invariance: f64,
}

fn gauged_spectrum(args: &SpectrumArgs) -> Result<GaugedSpectrum> {
    let grid = make_grid(args.op.r)?;
    let gauge = GaugeSpec::parse(&args.gauge, &grid)?;
    let op = build_twisted(&grid, args.delta_alpha, args.op.sign.into());
    let gauged = apply_gauge(&op, &gauge)?;
    let plain = eigh(op.entries(), args.op.tol)?;
    let spectrum = eigh(gauged.entries(), args.op.tol)?;
    let gauge_invariance = plain
        .eigenvalues
        .iter()
        .zip(&spectrum.eigenvalues)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let labels = classify_with_sign(
        &spectrum,
        &grid,
        args.delta_alpha,
        args.op.sign.into(),
        args.op.match_tol,
    )?;
    Ok(GaugedSpectrum {
        spectrum,
        labels,
        gauge_invariance,
    })
}

pub fn spectrum(args: &SpectrumArgs) -> Result<Report> {
    let result = match gauged_spectrum(args) {
        Ok(r) => r,
        Err(err)
            if err
                .downcast_ref::<qring::Error>()
                .is_some_and(is_contract_error) =>
        {
            eprintln!("{err}");
            return Ok(Report {
                data: String::new(),
                ok: false,
            });
        }
        Err(err) => return Err(err),
    };
    let ok = result.gauge_invariance <= GAUGE_TOL;
    if !ok {
        eprintln!(
            "gauge invariance violated: spectral gap {} > {}",
            g12(result.gauge_invariance),
            g12(GAUGE_TOL)
        );
    }
    let data = match args.output.format {
        OutputFormat::Csv => {
            let mut s = format!("{ROW_HEADER},gauge_invariance\n");
            for row in rows(args.delta_alpha, &result.spectrum, &result.labels) {
                let mut fields = row.fields();
                fields.push(g12(result.gauge_invariance));
                s.push_str(&csv_line(&fields));
            }
            s
        }
        OutputFormat::Json => to_json(&json!({
            "config": args,
            "eigenvalues": result.spectrum.eigenvalues,
            "labels": result.labels,
            "diagnostics": {
                "max_residual": result.spectrum.max_residual,
                "max_offdiag_overlap": result.spectrum.max_offdiag_overlap,
                "gauge_invariance": result.gauge_invariance,
            },
        }))?,
    };
    Ok(Report { data, ok })
}

fn is_contract_error(err: &qring::Error) -> bool {
    matches!(
        err,
        qring::Error::Classification(_)
            | qring::Error::Accuracy(_)
            | qring::Error::Convergence { .. }
    )
}

pub fn gauge_check(args: &SpectrumArgs) -> Result<Report> {
    let grid = make_grid(args.op.r)?;
    let gauge = GaugeSpec::parse(&args.gauge, &grid)?;
    let boundary = BoundarySpec::twisted(args.delta_alpha, args.op.sign.into());
    let gap = verify_gauge_invariance(&grid, &boundary, &gauge)?;
    let ok = gap <= GAUGE_TOL;
    eprintln!(
        "gauge '{}' at delta_alpha = {}: max spectral difference {} ({})",
        args.gauge,
        g12(args.delta_alpha),
        g12(gap),
        if ok { "invariant" } else { "VIOLATED" }
    );
    let data = match args.output.format {
        OutputFormat::Csv => format!(
            "r,delta_alpha,sign,gauge,delta_xi,max_spectral_difference,pass\n{}",
            csv_line(&[
                args.op.r.to_string(),
                g12(args.delta_alpha),
                qring::SignConvention::from(args.op.sign).to_string(),
                args.gauge.clone(),
                g12(gauge.delta_xi()),
                g12(gap),
                ok.to_string(),
            ])
        ),
        OutputFormat::Json => to_json(&json!({
            "config": args,
            "delta_xi": gauge.delta_xi(),
            "max_spectral_difference": gap,
            "pass": ok,
        }))?,
    };
    Ok(Report { data, ok })
}

pub fn superpose(args: &SuperposeArgs) -> Result<Report> {
    let terms = parse_coeffs(&args.coeffs)?;
    let spec = SuperpositionSpec::new(args.q, terms)?;
    let eigenvalues: Vec<f64> = spec.terms().iter().map(|(n, _)| args.q + n).collect();
    let admissible = superposition_admissible(&eigenvalues);
    let defect = periodicity_defect(&spec);
    let mirror = mirror_superposable(args.q);
    let consistent = admissible == (defect <= GAUGE_TOL);
    eprintln!(
        "eigenvalues [{}]: admissible = {admissible}, periodicity defect = {}, mirror superposable (q = {}) = {mirror}",
        eigenvalues.iter().map(|v| g12(*v)).collect::<Vec<_>>().join(", "),
        g12(defect),
        g12(args.q),
    );
    if !consistent {
        eprintln!("admissibility and periodicity defect disagree");
    }
    let data = match args.output.format {
        OutputFormat::Csv => format!(
            "q,eigenvalues,admissible,periodicity_defect,mirror_superposable\n{}",
            csv_line(&[
                g12(args.q),
                eigenvalues
                    .iter()
                    .map(|v| g12(*v))
                    .collect::<Vec<_>>()
                    .join(";"),
                admissible.to_string(),
                g12(defect),
                mirror.to_string(),
            ])
        ),
        OutputFormat::Json => to_json(&json!({
            "config": args,
            "eigenvalues": eigenvalues,
            "admissible": admissible,
            "periodicity_defect": defect,
            "mirror_superposable": mirror,
        }))?,
    };
    Ok(Report {
        data,
        ok: consistent,
    })
}

pub fn bands(args: &BandsArgs) -> Result<Report> {
    let (lo, hi) = parse_range(&args.n_range)?;
    let points = energy_bands(args.q, lo, hi);
    let transition = degenerate_transition(args.q);
    match &transition {
        Some(t) => eprintln!(
            "q = {}: degenerate pair ({}, {}), momentum transfer {}",
            g12(args.q),
            t.pair.0,
            t.pair.1,
            g12(t.momentum_transfer)
        ),
        None => eprintln!(
            "q = {}: no degenerate pair (2q is not an integer)",
            g12(args.q)
        ),
    }
    let data = match args.output.format {
        OutputFormat::Csv => {
            let mut s = String::from("n,momentum,energy\n");
            for p in &points {
                s.push_str(&csv_line(&[
                    p.n.to_string(),
                    g12(p.momentum),
                    g12(p.energy),
                ]));
            }
            s
        }
        OutputFormat::Json => to_json(&json!({
            "config": args,
            "bands": points,
            "degenerate_transition": transition,
        }))?,
    };
    Ok(Report { data, ok: true })
}

pub fn flux(args: &FluxArgs) -> Result<Report> {
    let (lo, hi) = parse_range(&args.n_range)?;
    let cfg = FluxConfig::new(args.charge, args.flux, args.radius, args.gamma)?;
    let values = (lo..=hi)
        .map(|n| Ok((n, flux_eigenvalue(n, &cfg)?)))
        .collect::<Result<Vec<_>>>()?;
    eprintln!("flux offset e*Phi/(2*pi*r) = {}", g12(cfg.offset()));
    let data = match args.output.format {
        OutputFormat::Csv => {
            let mut s = String::from("n,lambda\n");
            for (n, lambda) in &values {
                s.push_str(&csv_line(&[n.to_string(), g12(*lambda)]));
            }
            s
        }
        OutputFormat::Json => to_json(&json!({
            "config": args,
            "offset": cfg.offset(),
            "eigenvalues": values.iter().map(|(n, l)| json!({"n": n, "lambda": l})).collect::<Vec<_>>(),
        }))?,
    };
    Ok(Report { data, ok: true })
}

/// Inclusive `a..b`.
fn parse_range(s: &str) -> Result<(i64, i64)> {
    let (a, b) = s
        .split_once("..")
        .with_context(|| format!("range '{s}' must look like a..b"))?;
    let a: i64 = a
        .trim()
        .parse()
        .with_context(|| format!("bad range start in '{s}'"))?;
    let b: i64 = b
        .trim()
        .trim_start_matches('=')
        .parse()
        .with_context(|| format!("bad range end in '{s}'"))?;
    if a > b {
        bail!("empty range '{s}'");
    }
    Ok((a, b))
}

/// `n[:re[:im]]` entries separated by commas.
fn parse_coeffs(s: &str) -> Result<Vec<(f64, Complex64)>> {
    let mut terms = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        if parts.len() > 3 {
            bail!("coefficient '{item}' has too many fields");
        }
        let num = |i: usize, default: f64| -> Result<f64> {
            match parts.get(i) {
                Some(p) => p
                    .trim()
                    .parse::<f64>()
                    .with_context(|| format!("bad number '{p}' in coefficient '{item}'")),
                None => Ok(default),
            }
        };
        terms.push((
            num(0, f64::NAN)?,
            Complex64::new(num(1, 1.0)?, num(2, 0.0)?),
        ));
    }
    if terms.is_empty() {
        bail!("--coeffs is empty");
    }
    Ok(terms)
}
