//! Command-line front end: classification, snapshots, verification, region
//! scans and fission timelines, with CSV/JSON emission.
//!
//! Exit codes: 0 success, 1 domain/usage error, 2 verification failure.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use vakh_core::analysis::{count_structures, fission_timeline, DEFAULT_PROMINENCE};
use vakh_core::bilinear::{self, GridSpec, COEFF_TOL, GRID_TOL};
use vakh_core::classify::{classify_regime, region_scan, scan_to_csv, TIE_TOL};
use vakh_core::error::Error;
use vakh_core::soliton::{build_one_soliton, build_two_soliton, SolitonParams, TauFunction};
use vakh_core::transform::snapshot;

#[derive(Parser)]
#[command(
    name = "vakh",
    version,
    about = "Construct, verify, classify and analyze loop/cusp/hump solitons of the dissipative Vakhnenko equation"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify (alpha, v) as loop, cusp or hump
    Classify {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        v: f64,
        /// Tolerance on |lambda - 1| for the cusp verdict
        #[arg(long, default_value_t = TIE_TOL)]
        tie_tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Sample a parametric physical-space profile at fixed physical time
    Snapshot {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Physical time of the snapshot
        #[arg(long)]
        time: f64,
        #[arg(long = "T-min")]
        t_min: Option<f64>,
        #[arg(long = "T-max")]
        t_max: Option<f64>,
        #[arg(long, default_value_t = 2001)]
        samples: usize,
        #[arg(long, default_value_t = 0.0)]
        x0: f64,
        #[arg(long, default_value = "csv")]
        format: Format,
        /// Output path (stdout when omitted); CSV output also writes a
        /// metadata sidecar next to it
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify a construction against the bilinear system and the PDE
    Verify {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Relative tolerance for coefficient residuals
        #[arg(long, default_value_t = COEFF_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Classify a rectangle of the (alpha, v) plane cell by cell
    Scan {
        #[arg(long, default_value_t = 0.0)]
        alpha_min: f64,
        #[arg(long, default_value_t = 3.0)]
        alpha_max: f64,
        #[arg(long, default_value_t = 0.05)]
        v_min: f64,
        #[arg(long, default_value_t = 1.0)]
        v_max: f64,
        /// Grid cells along alpha
        #[arg(long, default_value_t = 60)]
        na: usize,
        /// Grid cells along v
        #[arg(long, default_value_t = 60)]
        nv: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Census solitary structures over a span of physical times
    Fission {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, default_value_t = -15.0)]
        t_start: f64,
        #[arg(long, default_value_t = 11.0)]
        t_end: f64,
        #[arg(long, default_value_t = 2)]
        t_steps: usize,
        /// Peak prominence threshold relative to the global maximum
        #[arg(long, default_value_t = DEFAULT_PROMINENCE)]
        prominence: f64,
        #[arg(long, default_value_t = 2001)]
        samples: usize,
        #[arg(long, default_value_t = 0.0)]
        x0: f64,
        #[arg(long, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Scenario selection shared by snapshot/verify/fission: either explicit
/// parameters or a figure preset.
#[derive(Args)]
struct ScenarioArgs {
    #[arg(long)]
    alpha: Option<f64>,
    /// One-soliton velocity
    #[arg(long)]
    v: Option<f64>,
    /// Two-soliton velocities
    #[arg(long)]
    v1: Option<f64>,
    #[arg(long)]
    v2: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    eta01: f64,
    #[arg(long, default_value_t = 0.0)]
    eta02: f64,
    /// Figure scenario: fig4-5, fig6-7, fig8-9 or fig10-11
    #[arg(long)]
    preset: Option<String>,
}

enum Scenario {
    One {
        alpha: f64,
        v: f64,
        eta0: f64,
    },
    Two {
        alpha: f64,
        v1: f64,
        v2: f64,
        eta01: f64,
        eta02: f64,
    },
}

fn preset_params(name: &str) -> Option<(f64, f64, f64)> {
    // (alpha, v1, v2); all presets snapshot at t = -15 and t = 11.
    match name {
        "fig4-5" => Some((1.2, 0.24, 0.12)),
        "fig6-7" => Some((0.1, 0.24, 0.12)),
        "fig8-9" => Some((2.6, 0.24, 0.12)),
        "fig10-11" => Some((5.0, 0.24, 0.12)),
        _ => None,
    }
}

impl ScenarioArgs {
    fn resolve(&self) -> Result<Scenario, Error> {
        if let Some(name) = &self.preset {
            let (alpha, v1, v2) = preset_params(name).ok_or_else(|| {
                Error::Domain(format!(
                    "unknown preset {name:?}; available: fig4-5, fig6-7, fig8-9, fig10-11"
                ))
            })?;
            return Ok(Scenario::Two {
                alpha,
                v1,
                v2,
                eta01: self.eta01,
                eta02: self.eta02,
            });
        }
        let alpha = self
            .alpha
            .ok_or_else(|| Error::Domain("--alpha is required without --preset".into()))?;
        match (self.v, self.v1, self.v2) {
            (Some(v), None, None) => Ok(Scenario::One {
                alpha,
                v,
                eta0: self.eta01,
            }),
            (None, Some(v1), Some(v2)) => Ok(Scenario::Two {
                alpha,
                v1,
                v2,
                eta01: self.eta01,
                eta02: self.eta02,
            }),
            _ => Err(Error::Domain(
                "give either --v (one soliton) or both --v1 and --v2 (two solitons)".into(),
            )),
        }
    }

    /// Build the tau function; logs a notice when velocities were reordered.
    fn build(&self) -> Result<(SolitonParams, TauFunction), Error> {
        match self.resolve()? {
            Scenario::One { alpha, v, eta0 } => build_one_soliton(alpha, v, eta0),
            Scenario::Two {
                alpha,
                v1,
                v2,
                eta01,
                eta02,
            } => {
                let b = build_two_soliton(alpha, v1, v2, eta01, eta02)?;
                if b.reordered {
                    log(&format!(
                        "note: velocities reordered to v1={} > v2={}",
                        b.params.modes[0].v, b.params.modes[1].v
                    ));
                }
                Ok((b.params, b.tau))
            }
        }
    }
}

fn log(msg: &str) {
    if std::env::var("VAKH_LOG")
        .map(|v| !v.is_empty() && v != "0")
        .unwrap_or(false)
    {
        eprintln!("{msg}");
    }
}

fn write_or_print(out: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version through the error path with success status
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(verification_ok) => {
            if verification_ok {
                0
            } else {
                2
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

/// Returns Ok(false) when the command ran but a verification check failed.
fn run(cli: Cli) -> Result<bool, Error> {
    match cli.cmd {
        Cmd::Classify {
            alpha,
            v,
            tie_tol,
            json,
        } => {
            let rc = classify_regime(alpha, v, tie_tol)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&rc).unwrap());
            } else {
                println!(
                    "regime={} lambda={} alpha_star={} K={} U_M={}",
                    rc.regime, rc.lambda, rc.alpha_star, rc.k, rc.u_m
                );
            }
            Ok(true)
        }
        Cmd::Snapshot {
            scenario,
            time,
            t_min,
            t_max,
            samples,
            x0,
            format,
            out,
        } => {
            let (params, tau) = scenario.build()?;
            let range = match (t_min, t_max) {
                (Some(lo), Some(hi)) => Some((lo, hi)),
                (None, None) => None,
                _ => {
                    return Err(Error::Domain(
                        "give both --T-min and --T-max, or neither".into(),
                    ))
                }
            };
            let profile = snapshot(&tau, time, range, samples, x0)?;
            log(&format!(
                "snapshot t={time}: {} samples over T in [{}, {}]",
                profile.samples.len(),
                profile
                    .samples
                    .first()
                    .map(|s| s.t_param)
                    .unwrap_or(f64::NAN),
                profile
                    .samples
                    .last()
                    .map(|s| s.t_param)
                    .unwrap_or(f64::NAN),
            ));
            let census = count_structures(&profile, DEFAULT_PROMINENCE)?;
            let meta = serde_json::json!({
                "params": params.to_json(),
                "t": time,
                "x0": x0,
                "samples": samples,
                "structures": census,
                "classification": params.modes.iter().map(|m| {
                    classify_regime(params.alpha, m.v, TIE_TOL).map(|rc| serde_json::to_value(rc).unwrap())
                }).collect::<Result<Vec<_>, _>>()?,
            });
            match format {
                Format::Csv => {
                    write_or_print(&out, &profile.to_csv())?;
                    if let Some(path) = &out {
                        let sidecar = path.with_extension("json");
                        std::fs::write(&sidecar, serde_json::to_string_pretty(&meta).unwrap())
                            .map_err(|e| {
                                Error::Domain(format!("cannot write {}: {e}", sidecar.display()))
                            })?;
                    }
                }
                Format::Json => {
                    let doc = serde_json::json!({
                        "meta": meta,
                        "profile": profile,
                    });
                    write_or_print(
                        &out,
                        &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()),
                    )?;
                }
            }
            Ok(true)
        }
        Cmd::Verify {
            scenario,
            tol,
            json,
        } => run_verify(&scenario, tol, json),
        Cmd::Scan {
            alpha_min,
            alpha_max,
            v_min,
            v_max,
            na,
            nv,
            out,
        } => {
            let cells = region_scan((alpha_min, alpha_max), (v_min, v_max), (na, nv))?;
            write_or_print(&out, &scan_to_csv(&cells))?;
            Ok(true)
        }
        Cmd::Fission {
            scenario,
            t_start,
            t_end,
            t_steps,
            prominence,
            samples,
            x0,
            format,
            out,
        } => {
            let (_, tau) = scenario.build()?;
            let timeline =
                fission_timeline(&tau, t_start, t_end, t_steps, prominence, samples, x0)?;
            for c in &timeline.censuses {
                log(&format!("t={}: {} structure(s)", c.t, c.count));
            }
            let content = match format {
                Format::Json => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&timeline.to_json()).unwrap()
                ),
                Format::Csv => timeline.to_csv(),
            };
            write_or_print(&out, &content)?;
            Ok(true)
        }
    }
}

fn run_verify(scenario: &ScenarioArgs, tol: f64, json: bool) -> Result<bool, Error> {
    let (params, tau) = scenario.build()?;
    let alpha = params.alpha;
    let combined = bilinear::combined_bilinear_residual(tau.f(), alpha, tol)?;
    let pde = bilinear::pde_residual(&tau, &GridSpec::default(), alpha, GRID_TOL)?;
    let solve = if params.modes.len() == 2 {
        Some(bilinear::derive_coefficients(&params)?)
    } else {
        None
    };

    let mut all_passed = combined.passed && pde.passed;
    let dispersion: Vec<f64> = (0..params.modes.len())
        .map(|i| params.dispersion_residual(i))
        .collect();
    for r in &dispersion {
        all_passed &= r.abs() <= 1e-12;
    }
    if let Some(s) = &solve {
        all_passed &= s.a_rel_dev <= 1e-10 && s.b_rel_dev <= 1e-10;
        all_passed &= s.closure.passed;
    }

    if json {
        let doc = serde_json::json!({
            "params": params.to_json(),
            "dispersion_residuals": dispersion,
            "combined_bilinear": combined,
            "pde": pde,
            "coefficient_solve": solve,
            "passed": all_passed,
        });
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    } else {
        println!(
            "scenario: {}",
            serde_json::to_string(&params.to_json()).unwrap()
        );
        for (i, r) in dispersion.iter().enumerate() {
            println!(
                "  dispersion mode {}: {}  |residual| = {:.3e}",
                i + 1,
                pass_str(r.abs() <= 1e-12),
                r.abs()
            );
        }
        println!(
            "  combined bilinear residual: {}  max rel = {:.3e}{}",
            pass_str(combined.passed),
            combined.max_relative_coefficient,
            combined
                .offending_exponent
                .map(|e| format!("  worst at exp({},{})", e[0], e[1]))
                .unwrap_or_default()
        );
        println!("    note: {}", combined.notes);
        println!(
            "  pde residual (grid): {}  max abs = {:.3e}",
            pass_str(pde.passed),
            pde.grid_max_abs.unwrap_or(f64::NAN)
        );
        println!("    note: {}", pde.notes);
        if let Some(s) = &solve {
            println!(
                "  coefficient A: solved {:.12}  closed form {:.12}  rel dev {:.3e}  {}",
                s.a,
                s.printed_a,
                s.a_rel_dev,
                pass_str(s.a_rel_dev <= 1e-10)
            );
            println!(
                "  coefficient B: solved {:.12}  closed form {:.12}  rel dev {:.3e}  {}",
                s.b,
                s.printed_b,
                s.b_rel_dev,
                pass_str(s.b_rel_dev <= 1e-10)
            );
            match (s.printed_c, s.c_rel_dev) {
                (Some(pc), Some(dev)) => println!(
                    "  coefficient C: solved {:.12}  published closed form {:.12}  rel dev {:.3e}  ({})",
                    s.c,
                    pc,
                    dev,
                    if dev <= 1e-10 { "agrees" } else { "disagrees with the published form" }
                ),
                _ => println!(
                    "  coefficient C: solved {:.12}  (published closed form singular here)",
                    s.c
                ),
            }
            println!(
                "  order equations after solve: max rel = {:.3e}",
                s.order_equation_max_rel
            );
            println!(
                "  full closure of the solving functional: {}  max rel = {:.3e}{}",
                pass_str(s.closure.passed),
                s.closure.max_relative,
                s.closure
                    .worst_exponent
                    .map(|e| format!("  worst at exp({},{})", e[0], e[1]))
                    .unwrap_or_default()
            );
        }
        println!("verdict: {}", if all_passed { "PASS" } else { "FAIL" });
    }
    Ok(all_passed)
}

fn pass_str(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}
