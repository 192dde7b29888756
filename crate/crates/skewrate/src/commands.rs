use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use skewrate_core::classify::{classify, readings, weight_intervals, CaseData, WeightSet};
use skewrate_core::fuzz::{fuzz, FuzzConfig, FuzzSummary};
use skewrate_core::newton::NewtonPolygon;
use skewrate_core::predict::{asymptotic, predict, predict_weight, vanishing_sum, Bracket, RatePrediction};
use skewrate_core::verify::{verify_germ, VerificationReport, VerifyOptions};
use skewrate_core::{Limits, PolyError, Rational, SkewGerm};
use thiserror::Error;

use crate::cli::{Cli, Command, Format, FuzzArgs};
use crate::germfile::{parse_germ, GermFileError};
use crate::json;

/// Outcome of a command that ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    CheckFailures,
    /// Output was produced but an iterate hit the resource limits.
    Resource,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::CheckFailures => 1,
            Status::Resource => 3,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    GermFile { path: PathBuf, source: GermFileError },
    #[error("cannot write {}: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Output(#[from] io::Error),
    #[error("{0}")]
    Resource(PolyError),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Resource(_) => 3,
            _ => 2,
        }
    }
}

pub const CSV_HEADER: [&str; 7] = ["n", "gamma_n", "d_n", "c_qn", "c_qn_lower", "c_qn_upper", "c_fn"];

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Status, CliError> {
    let limits = cli.limits.limits();
    match &cli.command {
        Command::Classify { germ, format } => {
            let f = load(germ)?;
            classify_cmd(&f, *format, out)
        }
        Command::Iterate { germ, n, format } => {
            let f = load(germ)?;
            iterate_cmd(&f, *n, &limits, *format, out)
        }
        Command::Predict {
            germ,
            n,
            l,
            format,
            csv,
        } => {
            let f = load(germ)?;
            predict_cmd(&f, *n, l, *format, csv.as_deref(), out)
        }
        Command::Verify {
            germ,
            n_max,
            l,
            format,
            csv,
        } => {
            let f = load(germ)?;
            let options = VerifyOptions {
                n_max: *n_max,
                limits,
                extra_weights: l.clone(),
            };
            verify_cmd(&f, &options, *format, csv.as_deref(), out)
        }
        Command::Fuzz(args) => fuzz_cmd(args, out),
    }
}

fn load(path: &Path) -> Result<SkewGerm, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_germ(&text).map_err(|source| CliError::GermFile {
        path: path.to_path_buf(),
        source,
    })
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn bracket_text(b: &Bracket) -> String {
    if let Some(v) = b.exact_value() {
        return format!("= {}", v);
    }
    let open = if b.lower_strict { '(' } else { '[' };
    let close = if b.upper_strict { ')' } else { ']' };
    format!("in {}{}, {}{}", open, b.lower, b.upper, close)
}

fn polygon_text(polygon: &NewtonPolygon) -> String {
    let vertices: Vec<String> = polygon.vertices().iter().map(|v| v.to_string()).collect();
    let intercepts: Vec<String> = polygon.intercepts().iter().map(|t| t.to_string()).collect();
    if intercepts.is_empty() {
        format!("vertices {}", vertices.join(" "))
    } else {
        format!("vertices {}; intercepts {}", vertices.join(" "), intercepts.join(" "))
    }
}

fn case_text(f: &SkewGerm, case: &CaseData, out: &mut dyn Write) -> io::Result<()> {
    writeln!(
        out,
        "case: {} (k = {}, (gamma, d) = ({}, {}))",
        case.kind, case.k, case.gamma, case.d
    )?;
    let alpha = case.alpha.as_ref().map_or("undefined".to_string(), |a| a.to_string());
    writeln!(out, "l1 = {}, l2 = {}, alpha = {}", case.l1, case.l2, alpha)?;
    let intervals = weight_intervals(case);
    writeln!(out, "weight equality range: {}", intervals.equality_range())?;
    if let WeightSet::Rectangle(r) = &intervals.i_f {
        writeln!(out, "weight rectangle: first {} ({:?})", r.first, r.shape)?;
    }
    let mut flags = Vec::new();
    if case.boundary.delta_eq_t_upper {
        flags.push("delta = T_{k-1}");
    }
    if case.boundary.delta_eq_t_lower {
        flags.push("delta = T_k");
    }
    if !flags.is_empty() {
        writeln!(out, "boundary: {}", flags.join(", "))?;
    }
    if let Ok((sum, vanishes)) = vanishing_sum(f, case) {
        let verdict = if vanishes {
            "z^gamma_2 cancels in Q^2"
        } else {
            "no cancellation at n = 2"
        };
        writeln!(out, "edge sum: {} ({})", sum, verdict)?;
    }
    Ok(())
}

fn classify_cmd(f: &SkewGerm, format: Format, out: &mut dyn Write) -> Result<Status, CliError> {
    let case = classify(f);
    let all = readings(f);
    match format {
        Format::Json => write_json(
            out,
            &json::ClassifyJson {
                germ: json::GermJson::new(f),
                polygon: json::PolygonJson::new(&case.polygon),
                case: json::CaseJson::new(f, &case),
                readings: all.iter().map(|c| json::CaseJson::new(f, c)).collect(),
            },
        )?,
        Format::Text => {
            writeln!(out, "p = {}; q = {}", f.p(), f.q())?;
            writeln!(out, "delta = {}, a_delta = {}", f.delta(), f.a_delta())?;
            writeln!(out, "polygon: {}", polygon_text(&case.polygon))?;
            case_text(f, &case, out)?;
            for other in all.iter().filter(|c| c.selection() != case.selection()) {
                writeln!(out, "also applicable: {} at k = {}", other.kind, other.k)?;
            }
        }
    }
    Ok(Status::Ok)
}

fn iterate_cmd(f: &SkewGerm, n: u32, limits: &Limits, format: Format, out: &mut dyn Write) -> Result<Status, CliError> {
    let fnth = f.iterate(n, limits).map_err(CliError::Resource)?;
    let q = fnth.q();
    let orders = q.orders().expect("iterates have nonzero Q");
    let polygon = NewtonPolygon::of(q).expect("iterates have nonzero Q");
    let c_fn = orders.c.min(fnth.delta());
    match format {
        Format::Json => write_json(
            out,
            &json::IterateJson {
                germ: json::GermJson::new(f),
                n,
                p_n: fnth.p().to_string(),
                q_n: q.to_string(),
                q_terms: json::terms(q),
                polygon: json::PolygonJson::new(&polygon),
                c_pn: fnth.delta().to_string(),
                c_qn: orders.c.to_string(),
                c_fn: c_fn.to_string(),
                ord_z: orders.ord_z.to_string(),
                ord_w: orders.ord_w.to_string(),
            },
        )?,
        Format::Text => {
            writeln!(out, "p^{n} = {}; Q^{n} = {}", fnth.p(), q)?;
            writeln!(out, "terms: {}", q.len())?;
            writeln!(out, "polygon: {}", polygon_text(&polygon))?;
            writeln!(
                out,
                "c(p^n) = {}, c(Q^n) = {}, c(f^n) = {}, ord_z = {}, ord_w = {}",
                fnth.delta(),
                orders.c,
                c_fn,
                orders.ord_z,
                orders.ord_w
            )?;
        }
    }
    Ok(Status::Ok)
}

fn prediction_text(p: &RatePrediction, out: &mut dyn Write) -> io::Result<()> {
    writeln!(
        out,
        "n = {}: (gamma_n, d^n) = ({}, {}), delta^n = {}",
        p.n, p.gamma_n, p.d_pow_n, p.delta_pow_n
    )?;
    if let Some(c) = &p.dominant_coeff {
        writeln!(out, "  coefficient of z^gamma_n w^(d^n): {}", c)?;
    }
    for w in &p.weight_claims {
        let rel = if w.exact { "=" } else { ">=" };
        writeln!(out, "  w_{}(Q^n) {} {}", w.l, rel, w.value)?;
    }
    writeln!(out, "  c(Q^n) {}", bracket_text(&p.cqn))?;
    writeln!(out, "  c(f^n) {}", bracket_text(&p.cfn))?;
    if let Some((v, tag)) = &p.prev_vertex {
        writeln!(out, "  previous vertex {} ({})", v, tag.name())?;
    }
    if let Some((v, tag)) = &p.next_vertex {
        writeln!(out, "  next vertex {} ({})", v, tag.name())?;
    }
    if let Some(t) = &p.watched_term {
        writeln!(out, "  watched term z^{} w^{} may cancel", t.i, t.j)?;
    }
    Ok(())
}

fn predict_cmd(
    f: &SkewGerm,
    n: u32,
    l: &[Rational],
    format: Format,
    csv_path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<Status, CliError> {
    let all = readings(f);
    let outside: Vec<&Rational> = l
        .iter()
        .filter(|w| all.iter().all(|c| predict_weight(c, n, w).is_err()))
        .collect();
    let preds: Vec<RatePrediction> = all.iter().map(|c| predict(f, c, n, l, None)).collect();
    match format {
        Format::Json => write_json(
            out,
            &json::PredictJson {
                germ: json::GermJson::new(f),
                n,
                readings: all
                    .iter()
                    .zip(&preds)
                    .map(|(c, p)| json::PredictReadingJson {
                        reading: json::CaseJson::new(f, c),
                        asymptotic: json::AsymptoticJson::new(c),
                        prediction: json::PredictionJson::new(p, true),
                    })
                    .collect(),
                weights_outside_range: outside.iter().map(|w| w.to_string()).collect(),
            },
        )?,
        Format::Text => {
            writeln!(out, "p = {}; q = {}", f.p(), f.q())?;
            for (case, p) in all.iter().zip(&preds) {
                writeln!(out, "{} at k = {}", case.kind, case.k)?;
                let rate = asymptotic(case);
                let ds: Vec<String> = rate.d_candidates.iter().map(|d| d.to_string()).collect();
                writeln!(out, "  c_inf = {}, D candidates {}", rate.c_infinity, ds.join(" "))?;
                prediction_text(p, out)?;
            }
            for w in &outside {
                writeln!(out, "weight {} is outside the equality range", w)?;
            }
        }
    }
    if let Some(path) = csv_path {
        let case = &all[0];
        let rows = (1..=n).map(|k| {
            let p = predict(f, case, k, l, None);
            let exact = |b: &Bracket| b.exact_value().map(|v| v.to_string()).unwrap_or_default();
            [
                k.to_string(),
                p.gamma_n.to_string(),
                p.d_pow_n.to_string(),
                exact(&p.cqn),
                p.cqn.lower.to_string(),
                p.cqn.upper.to_string(),
                exact(&p.cfn),
            ]
        });
        write_csv(path, rows)?;
    }
    Ok(Status::Ok)
}

fn write_csv(path: &Path, rows: impl Iterator<Item = [String; 7]>) -> Result<(), CliError> {
    let err = |source| CliError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(err)?;
    w.write_record(CSV_HEADER).map_err(err)?;
    for row in rows {
        w.write_record(&row).map_err(err)?;
    }
    w.flush().map_err(|e| err(e.into()))?;
    Ok(())
}

fn verify_cmd(
    f: &SkewGerm,
    options: &VerifyOptions,
    format: Format,
    csv_path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<Status, CliError> {
    let report = verify_germ(f, options);
    match format {
        Format::Json => write_json(out, &json::VerifyJson::new(&report))?,
        Format::Text => verify_text(&report, out)?,
    }
    if let Some(path) = csv_path {
        let rows = report.steps.iter().filter(|s| s.reading == 0).filter_map(|s| {
            let o = report.oracle.iter().find(|o| o.n == s.n)?;
            let p = &s.prediction;
            Some([
                s.n.to_string(),
                p.gamma_n.to_string(),
                p.d_pow_n.to_string(),
                o.c_qn.to_string(),
                p.cqn.lower.to_string(),
                p.cqn.upper.to_string(),
                o.c_fn.to_string(),
            ])
        });
        write_csv(path, rows)?;
    }
    Ok(report_status(&report))
}

/// Check failures take precedence over an early resource stop.
pub fn report_status(report: &VerificationReport) -> Status {
    if !report.passed() {
        Status::CheckFailures
    } else if report.resource_stop.is_some() {
        Status::Resource
    } else {
        Status::Ok
    }
}

fn verify_text(r: &VerificationReport, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "p = {}; q = {}", r.germ.p(), r.germ.q())?;
    for (idx, case) in r.readings.iter().enumerate() {
        writeln!(out, "reading {}: {} at k = {}", idx, case.kind, case.k)?;
    }
    for o in &r.oracle {
        let vertices: Vec<String> = o.vertices.iter().map(|v| v.to_string()).collect();
        writeln!(
            out,
            "n = {}: c(Q^n) = {}, c(f^n) = {}, ord_z = {}, ord_w = {}, {} terms, vertices {}",
            o.n,
            o.c_qn,
            o.c_fn,
            o.ord_z,
            o.ord_w,
            o.terms,
            vertices.join(" ")
        )?;
        for s in r.steps.iter().filter(|s| s.n == o.n) {
            let passed = s.outcomes.iter().filter(|c| c.passed).count();
            writeln!(
                out,
                "  reading {}: predicted c(Q^n) {}; {}/{} claims hold",
                s.reading,
                bracket_text(&s.prediction.cqn),
                passed,
                s.outcomes.len()
            )?;
        }
    }
    for (s, o) in r.failures() {
        writeln!(
            out,
            "FAIL n = {} reading {} [{}] {}; observed {}",
            s.n, s.reading, o.tag, o.claim, o.observed
        )?;
    }
    for l in r.failed_lemmas() {
        writeln!(out, "FAIL lemma {}: {}", l.name, l.detail)?;
    }
    for v in &r.vanishing {
        writeln!(
            out,
            "vanishing: reading {} loses z^{} w^{} at n = {}",
            v.reading, v.term.i, v.term.j, v.n0
        )?;
    }
    for finding in &r.findings {
        writeln!(
            out,
            "finding (n = {}, reading {}): {}",
            finding.n, finding.reading, finding.message
        )?;
    }
    if let Some(stop) = &r.resource_stop {
        writeln!(out, "stopped at n = {}: {}", stop.n, stop.error)?;
    }
    writeln!(
        out,
        "{}: {} claims, {} lemma checks, {} failures",
        if r.passed() { "PASS" } else { "FAIL" },
        r.claim_count(),
        r.lemma_checks.len(),
        r.failure_count()
    )
}

fn fuzz_config(args: &FuzzArgs) -> Result<FuzzConfig, CliError> {
    if args.coeff_min > args.coeff_max || (args.coeff_min == 0 && args.coeff_max == 0) {
        return Err(CliError::Usage(format!(
            "coefficient range [{}, {}] has no nonzero value",
            args.coeff_min, args.coeff_max
        )));
    }
    Ok(FuzzConfig {
        seed: args.seed,
        germ_count: args.count,
        delta_max: args.delta_max,
        support_max: args.support_max as usize,
        coeff_min: args.coeff_min,
        coeff_max: args.coeff_max,
        n_max: args.n_max,
        degree_cap: args.degree_cap,
        boundary_bias: args.boundary_bias,
        ..FuzzConfig::default()
    })
}

fn fuzz_cmd(args: &FuzzArgs, out: &mut dyn Write) -> Result<Status, CliError> {
    let config = fuzz_config(args)?;
    let summary = fuzz(&config);
    match args.format {
        Format::Json => write_json(out, &json::FuzzJson::new(&config, &summary))?,
        Format::Text => fuzz_text(&summary, out)?,
    }
    Ok(summary_status(&summary))
}

pub fn summary_status(summary: &FuzzSummary) -> Status {
    if summary.failure_count() > 0 {
        Status::CheckFailures
    } else {
        Status::Ok
    }
}

fn fuzz_text(s: &FuzzSummary, out: &mut dyn Write) -> io::Result<()> {
    writeln!(
        out,
        "seed {} ({}): {} germs verified, {} skipped by resource limits",
        s.seed, s.generator, s.germs_run, s.skipped_resource
    )?;
    writeln!(
        out,
        "cases: Case1 {}, Case2 {}, Case3 {}, Case4 {}",
        s.case_counts[0], s.case_counts[1], s.case_counts[2], s.case_counts[3]
    )?;
    writeln!(
        out,
        "boundary germs {}, vanishing events {}, claims checked {}, findings {}",
        s.boundary_germs, s.vanishing_events, s.claims_checked, s.findings
    )?;
    writeln!(
        out,
        "coverage {} after {} extra draws",
        if s.coverage_met { "met" } else { "not met" },
        s.extra_draws
    )?;
    for fail in &s.failures {
        writeln!(
            out,
            "FAIL germ {} (p = {}; q = {}) n = {} [{}] {}; observed {}",
            fail.index, fail.p, fail.q, fail.n, fail.tag, fail.claim, fail.observed
        )?;
    }
    writeln!(out, "failures: {}", s.failure_count())
}
