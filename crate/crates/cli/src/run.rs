use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use zlab_core::experiments::{
    certified_modulus_bound, convexity_check, density_measure, growth_exponent_fit, lemma1_parameters,
    nonuniversality_bound_run, sine_phase_average, sine_phase_sweep, translate_search, z_universality_search,
    ConvexityParams, ExperimentRecord, ShiftGrid, Verdict, ZMode, DEFAULT_SLACK, DEFAULT_WINDOWS,
};
use zlab_core::fmt::sig12;
use zlab_core::quadrature::{
    short_interval_mean, LineSegment, Norm, QuadratureConfig, Rule, TargetFunction, WeightFunction,
};
use zlab_core::special::{eval_zeta, hardy_z, riemann_siegel_theta, zeta_on_vertical_grid, EvalAccuracy};
use zlab_core::zeros::{scan_zero_ordinates, zeros_to_csv};
use zlab_core::Complex64;

use crate::args::{Command, Format, Params, RunConfig};
use crate::failure::Failure;

/// What a command produces: a value table or an experiment record.
pub enum Output {
    Table {
        name: &'static str,
        csv: String,
        json: Value,
    },
    Record(ExperimentRecord),
    Report {
        csv: String,
        json: Value,
        any_fail: bool,
    },
}

fn need<T: Clone>(value: &Option<T>, flag: &str, command: Command) -> Result<T, Failure> {
    value
        .clone()
        .ok_or_else(|| Failure::usage(format!("missing required --{flag} for {}", command.name())))
}

fn parse_list(text: &str, flag: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Failure::usage(format!("--{flag}: '{s}' is not a number")))
        })
        .collect()
}

fn quadrature(p: &Params) -> Result<QuadratureConfig, Failure> {
    let mut cfg = QuadratureConfig::default();
    if let Some(tol) = p.tol {
        cfg = cfg.with_tol(tol);
    }
    if let Some(rule) = &p.rule {
        cfg = cfg.with_rule(match rule.as_str() {
            "gk15" => Rule::GaussKronrod15,
            "simpson" => Rule::CompositeSimpson,
            other => {
                return Err(Failure::usage(format!(
                    "--rule: expected gk15 or simpson, got '{other}'"
                )))
            }
        });
    }
    cfg.validate()?;
    Ok(cfg)
}

fn target(p: &Params, command: Command, h: f64) -> Result<TargetFunction, Failure> {
    let spec = need(&p.target, "target", command)?;
    let builtin = ["const:", "poly:", "zeta:", "abszeta:"]
        .iter()
        .any(|k| spec.starts_with(k));
    if builtin {
        return Ok(TargetFunction::parse_builtin(&spec, h)?);
    }
    let text = std::fs::read_to_string(&spec).map_err(|e| Failure::usage(format!("--target {spec}: {e}")))?;
    Ok(TargetFunction::from_csv(&text, h)?)
}

fn weight(p: &Params) -> Result<WeightFunction, Failure> {
    match p.weight.as_deref() {
        None | Some("unit") => Ok(WeightFunction::Unit),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("--weight {path}: {e}")))?;
            Ok(WeightFunction::from_csv(&text)?)
        }
    }
}

fn grid(p: &Params, command: Command) -> Result<ShiftGrid, Failure> {
    let lo = need(&p.grid_min, "grid-min", command)?;
    let hi = need(&p.grid_max, "grid-max", command)?;
    let grid = match p.grid_step {
        Some(step) => ShiftGrid::uniform(lo, hi, step)?,
        None => ShiftGrid::phase_locked(lo, hi)?,
    };
    grid.validate()?;
    Ok(grid)
}

/// Abscissae of a single point (`--t`) or a table (`--from/--to/--step`).
fn abscissae(p: &Params, command: Command) -> Result<(f64, f64, usize), Failure> {
    if let Some(t) = p.t {
        return Ok((t, 0.0, 1));
    }
    let (Some(from), Some(to), Some(step)) = (p.from, p.to, p.step) else {
        return Err(Failure::usage(format!(
            "{} needs --t, or --from, --to and --step",
            command.name()
        )));
    };
    if !(step > 0.0 && to >= from) {
        return Err(Failure::usage("need --step > 0 and --to >= --from"));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    if count > 10_000_000 {
        return Err(Failure::usage(format!("table of {count} rows is too large")));
    }
    Ok((from, step, count))
}

fn table(name: &'static str, header: &[&str], rows: Vec<Vec<f64>>) -> Output {
    let mut csv = header.join(",") + "\n";
    for row in &rows {
        csv += &row.iter().map(|v| sig12(*v)).collect::<Vec<_>>().join(",");
        csv.push('\n');
    }
    let json = Value::Array(
        rows.iter()
            .map(|row| Value::Object(header.iter().zip(row).map(|(k, v)| (k.to_string(), json!(v))).collect()))
            .collect(),
    );
    Output::Table { name, csv, json }
}

fn accuracy(p: &Params, height: f64) -> EvalAccuracy {
    let acc = EvalAccuracy::for_height(height);
    p.tol.map_or(acc, |tol| acc.with_tol(tol))
}

pub fn execute(config: &RunConfig) -> Result<Output, Failure> {
    let p = &config.params;
    let cmd = config.command;
    Ok(match cmd {
        Command::Eval => {
            let sigma = need(&p.sigma, "sigma", cmd)?;
            let (t0, step, count) = abscissae(p, cmd)?;
            let top = t0 + step * count.saturating_sub(1) as f64;
            let acc = accuracy(p, t0.abs().max(top.abs()));
            let values = if count == 1 {
                vec![eval_zeta(Complex64::new(sigma, t0), &acc)?]
            } else {
                zeta_on_vertical_grid(sigma, t0, step, count, &acc)?
            };
            let rows = values
                .iter()
                .enumerate()
                .map(|(j, z)| vec![sigma, t0 + j as f64 * step, z.re, z.im])
                .collect();
            table("eval", &["sigma", "t", "re", "im"], rows)
        }
        Command::Theta | Command::Z => {
            let (t0, step, count) = abscissae(p, cmd)?;
            let mut rows = Vec::with_capacity(count);
            for j in 0..count {
                let t = t0 + j as f64 * step;
                let v = if cmd == Command::Theta {
                    riemann_siegel_theta(t)?
                } else {
                    hardy_z(t, &accuracy(p, t))?.value
                };
                rows.push(vec![t, v]);
            }
            if cmd == Command::Theta {
                table("theta", &["t", "theta"], rows)
            } else {
                table("z", &["t", "Z"], rows)
            }
        }
        Command::Zeros => {
            let to = need(&p.to, "to", cmd)?;
            let scan = scan_zero_ordinates(p.from.unwrap_or(0.0), to, p.step)?;
            if let Some(w) = &scan.warning {
                eprintln!("{}", json!({ "warning": "grid-too-coarse", "detail": w }));
            }
            Output::Table {
                name: "zeros",
                csv: zeros_to_csv(&scan.zeros),
                json: serde_json::to_value(&scan).expect("scan serializes"),
            }
        }
        Command::Mean => {
            let sigma = need(&p.sigma, "sigma", cmd)?;
            let t = need(&p.big_t, "T", cmd)?;
            let delta = p
                .delta
                .or(p.h)
                .ok_or_else(|| Failure::usage("missing required --delta for mean"))?;
            let cfg = quadrature(p)?;
            let out = short_interval_mean(&LineSegment::new(sigma, t, delta)?, &cfg)?;
            table(
                "mean",
                &["sigma", "T", "delta", "mean", "error", "converged"],
                vec![vec![
                    sigma,
                    t,
                    delta,
                    out.value,
                    out.error,
                    if out.converged { 1.0 } else { 0.0 },
                ]],
            )
        }
        Command::Lemma2 => {
            let (a, b, c) = (p.a.unwrap_or(0.0), p.b.unwrap_or(1.0), p.c.unwrap_or(0.0));
            let cfg = quadrature(p)?;
            match (&p.heights, p.big_t) {
                (Some(list), _) => Output::Record(sine_phase_sweep(a, b, c, &parse_list(list, "heights")?, &cfg)?),
                (None, Some(t)) => Output::Record(sine_phase_average(a, b, c, t, &cfg)?),
                (None, None) => return Err(Failure::usage("lemma2 needs --T or --heights")),
            }
        }
        Command::Bound => {
            let h = need(&p.h, "H", cmd)?;
            let f = target(p, cmd, h)?;
            let g = weight(p)?;
            let grid = grid(p, cmd)?;
            let cfg = quadrature(p)?;
            let seg = LineSegment::new(p.sigma.unwrap_or(0.5), 0.0, h)?;
            Output::Record(nonuniversality_bound_run(
                &f,
                &g,
                &seg,
                &grid,
                &cfg,
                p.slack.unwrap_or(DEFAULT_SLACK),
            )?)
        }
        Command::Convexity => {
            let cfg = quadrature(p)?;
            let params = match &p.params {
                Some(path) => read_params(path)?,
                None => {
                    let sigma = need(&p.sigma, "sigma", cmd)?;
                    let delta = need(&p.delta, "delta", cmd)?;
                    let t0 = need(&p.big_t, "T", cmd)?;
                    let big_a = need(&p.a, "A", cmd)?;
                    let m = match p.m {
                        Some(m) => m,
                        None => {
                            let shape = lemma1_parameters(sigma, delta, 2.0, big_a)?;
                            certified_modulus_bound(shape.a, shape.b, t0 - shape.h, t0 + shape.h)?
                        }
                    };
                    lemma1_parameters(sigma, delta, m, big_a)?.at_height(t0)
                }
            };
            Output::Record(convexity_check(&params, &cfg)?)
        }
        Command::Growth => {
            let sigma = need(&p.sigma, "sigma", cmd)?;
            let heights = parse_list(&need(&p.heights, "heights", cmd)?, "heights")?;
            let cfg = quadrature(p)?;
            Output::Record(growth_exponent_fit(
                sigma,
                p.delta.unwrap_or(1.0),
                &heights,
                p.windows.unwrap_or(DEFAULT_WINDOWS),
                &cfg,
            )?)
        }
        Command::Search => {
            let sigma = need(&p.sigma, "sigma", cmd)?;
            let h = need(&p.h, "H", cmd)?;
            let f = target(p, cmd, h)?;
            let grid = grid(p, cmd)?;
            let norm: Norm = p.norm.as_deref().unwrap_or("l1").parse()?;
            let cfg = quadrature(p)?;
            Output::Record(translate_search(
                &f,
                &LineSegment::new(sigma, 0.0, h)?,
                &grid,
                norm,
                &cfg,
            )?)
        }
        Command::Density => {
            let sigma = need(&p.sigma, "sigma", cmd)?;
            let h = need(&p.h, "H", cmd)?;
            let eps = need(&p.eps, "eps", cmd)?;
            let t_max = need(&p.t_max, "T-max", cmd)?;
            let f = target(p, cmd, h)?;
            let cfg = quadrature(p)?;
            let seg = LineSegment::new(sigma, 0.0, h)?;
            Output::Record(density_measure(
                &f,
                &seg,
                eps,
                t_max,
                p.sample_step.unwrap_or(0.5 * h),
                p.scaled,
                &cfg,
            )?)
        }
        Command::ExploreZ => {
            let h = need(&p.h, "H", cmd)?;
            let f = target(p, cmd, h)?;
            let grid = grid(p, cmd)?;
            let mode: ZMode = p.mode.as_deref().unwrap_or("Z").parse()?;
            let cfg = quadrature(p)?;
            Output::Record(z_universality_search(&f, h, &grid, mode, &cfg)?)
        }
        Command::Report => report(&need(&p.inputs, "inputs", cmd)?)?,
    })
}

fn read_params(path: &Path) -> Result<ConvexityParams, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("--params {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("--params {}: {e}", path.display())))
}

fn report(inputs: &str) -> Result<Output, Failure> {
    let mut csv = String::from("file,name,verdict,failed_checks,runtime_seconds\n");
    let mut rows = Vec::new();
    let mut any_fail = false;
    for file in inputs.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let text = std::fs::read_to_string(file).map_err(|e| Failure::usage(format!("--inputs {file}: {e}")))?;
        let rec: ExperimentRecord =
            serde_json::from_str(&text).map_err(|e| Failure::usage(format!("--inputs {file}: not a record: {e}")))?;
        let failed: Vec<&str> = rec
            .checks
            .iter()
            .filter(|(_, ok)| !**ok)
            .map(|(k, _)| k.as_str())
            .collect();
        any_fail |= rec.verdict == Verdict::Fail;
        csv += &format!(
            "{file},{},{},{},{}\n",
            rec.name,
            rec.verdict.as_str(),
            failed.join(";"),
            sig12(rec.runtime_seconds)
        );
        rows.push(json!({
            "file": file,
            "name": rec.name,
            "verdict": rec.verdict,
            "failed_checks": failed,
            "runtime_seconds": rec.runtime_seconds,
        }));
    }
    Ok(Output::Report {
        csv,
        json: Value::Array(rows),
        any_fail,
    })
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn with_extension(path: &Path, ext: &str) -> PathBuf {
    path.with_extension(ext)
}

/// Default file stem `<experiment>-<timestamp>` in the working directory.
fn default_stem(name: &str) -> String {
    format!("{name}-{}", chrono::Utc::now().format("%Y%m%dT%H%M%S%.3fZ"))
}

/// Writes the output and returns the exit code.
pub fn emit(config: &RunConfig, output: Output) -> Result<u8, Failure> {
    let (json_text, csv_text, name, code, is_record) = match output {
        Output::Table { name, csv, json } => (
            serde_json::to_string_pretty(&json).expect("json"),
            csv,
            name.to_string(),
            0,
            false,
        ),
        Output::Report { csv, json, any_fail } => (
            serde_json::to_string_pretty(&json).expect("json"),
            csv,
            "report".to_string(),
            u8::from(any_fail),
            false,
        ),
        Output::Record(rec) => {
            let code = u8::from(rec.verdict == Verdict::Fail);
            (rec.to_json(), rec.to_csv(), rec.name.clone(), code, true)
        }
    };
    let texts: Vec<(&str, &str)> = match config.format {
        Format::Json => vec![("json", &json_text)],
        Format::Csv => vec![("csv", &csv_text)],
        Format::Both => vec![("json", &json_text), ("csv", &csv_text)],
    };
    match &config.output_path {
        Some(path) if path.as_os_str() == "-" => {
            for (_, text) in texts {
                print!("{}", ensure_newline(text));
            }
        }
        Some(path) => {
            for (ext, text) in &texts {
                let target = if texts.len() > 1 {
                    with_extension(path, ext)
                } else {
                    path.clone()
                };
                write(&target, &ensure_newline(text))?;
            }
        }
        None if is_record => {
            let stem = default_stem(&name);
            for (ext, text) in &texts {
                let target = PathBuf::from(format!("{stem}.{ext}"));
                write(&target, &ensure_newline(text))?;
                println!("{}", target.display());
            }
        }
        None => {
            for (_, text) in texts {
                print!("{}", ensure_newline(text));
            }
        }
    }
    Ok(code)
}

fn ensure_newline(text: &str) -> String {
    if text.ends_with('\n') {
        text.to_string()
    } else {
        format!("{text}\n")
    }
}
