use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sqg_core::bilinear::registry;
use sqg_core::gevrey::{analyticity_radius_estimate, xt_norm};
use sqg_core::io::{read_snapshot, write_csv, write_snapshot, RunConfig, Snapshot};
use sqg_core::littlewood_paley::{besov_norm, build_system, DyadicSystem};
use sqg_core::solver::{picard_solve, solve, Trajectory};
use sqg_core::verify::{run_check, CheckConfig, CheckId, SUMMARY_HEADER};
use sqg_core::{Error, SpectralField};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Failure {
    #[error(transparent)]
    Core(#[from] Error),

    #[error("{0}")]
    Usage(String),

    #[error("numerical blow-up at t = {time}; last state saved to {}", path.display())]
    BlowUp { time: f64, path: PathBuf },

    #[error("checks did not pass: {}", failed.join(", "))]
    Checks { failed: Vec<String> },
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Core(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn load_config(path: Option<&Path>, overrides: &[String]) -> Result<RunConfig, Failure> {
    let text = match path {
        Some(p) => Some(
            fs::read_to_string(p)
                .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", p.display())))?,
        ),
        None => None,
    };
    RunConfig::load(text.as_deref(), std::env::vars(), overrides).map_err(|e| match (path, e) {
        (Some(p), e @ Error::Parse { .. }) => Failure::Usage(format!("{}: {e}", p.display())),
        (_, e) => e.into(),
    })
}

fn output_dir(out: &Path) -> Result<(), Failure> {
    fs::create_dir_all(out).map_err(|e| {
        Failure::Usage(format!(
            "output directory {} is not writable: {e}",
            out.display()
        ))
    })
}

/// Config echo plus the trajectory's own metadata and warnings.
fn run_echo(cfg: &RunConfig, traj: &Trajectory) -> Vec<(String, String)> {
    let mut echo = cfg.echo();
    echo.extend(
        traj.metadata
            .iter()
            .map(|(k, v)| (format!("run.{k}"), v.clone())),
    );
    echo.extend(
        traj.warnings
            .iter()
            .map(|w| ("run.warning".to_string(), w.clone())),
    );
    echo
}

/// Writes `diagnostics.csv` and every snapshot of `traj` under `dir`.
fn write_trajectory(
    dir: &Path,
    cfg: &RunConfig,
    traj: &Trajectory,
    all_snapshots: bool,
) -> Result<(), Failure> {
    fs::create_dir_all(dir)?;
    let echo = run_echo(cfg, traj);
    write_csv(&dir.join("diagnostics.csv"), &echo, &traj.diagnostics_csv())?;
    let chosen: Vec<_> = if all_snapshots {
        traj.snapshots.iter().enumerate().collect()
    } else {
        traj.snapshots
            .iter()
            .enumerate()
            .next_back()
            .into_iter()
            .collect()
    };
    if all_snapshots {
        fs::create_dir_all(dir.join("snapshots"))?;
    }
    for (i, (t, field)) in chosen {
        let path = if all_snapshots {
            dir.join("snapshots").join(format!("theta_{i:05}.snap"))
        } else {
            dir.join("final.snap")
        };
        write_snapshot(&path, &Snapshot::spectral(field, *t, echo.clone()))?;
    }
    for w in &traj.warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}

/// Saves what a blown-up run recorded and turns the error into an exit status.
fn save_blow_up(dir: &Path, cfg: &RunConfig, time: f64, last: &Trajectory) -> Failure {
    let saved = (|| -> Result<PathBuf, Failure> {
        write_trajectory(dir, cfg, last, false)?;
        Ok(dir.join("final.snap"))
    })();
    match saved {
        Ok(path) => Failure::BlowUp { time, path },
        Err(e) => e,
    }
}

pub fn simulate(config: Option<&Path>, out: &Path, overrides: &[String]) -> Outcome {
    let cfg = load_config(config, overrides)?;
    let solver = cfg.solver()?;
    output_dir(out)?;
    fs::write(out.join("config.txt"), cfg.to_text())?;
    match solve(&solver) {
        Ok(traj) => {
            write_trajectory(out, &cfg, &traj, true)?;
            println!(
                "solved to t = {} ({} snapshots) in {}",
                traj.horizon(),
                traj.snapshots.len(),
                out.display()
            );
            Ok(())
        }
        Err(Error::BlowUp { time, last }) => {
            Err(save_blow_up(&out.join("blow-up"), &cfg, time, &last))
        }
        Err(e) => Err(e.into()),
    }
}

fn difference(
    a: &[(f64, SpectralField)],
    b: &[(f64, SpectralField)],
) -> Result<Vec<(f64, SpectralField)>, Error> {
    a.iter()
        .zip(b)
        .map(|((t, x), (_, y))| Ok((*t, x.sub(y)?)))
        .collect()
}

fn positive_times(snaps: &[(f64, SpectralField)]) -> Vec<(f64, SpectralField)> {
    snaps.iter().filter(|(t, _)| *t > 0.0).cloned().collect()
}

pub fn picard(config: Option<&Path>, out: &Path, overrides: &[String]) -> Outcome {
    let cfg = load_config(config, overrides)?;
    let solver = cfg.solver()?;
    let gp = cfg.gevrey()?;
    let bp = cfg.besov()?;
    let sys = build_system(solver.grid, cfg.float("sharpness"))?;
    output_dir(out)?;
    fs::write(out.join("config.txt"), cfg.to_text())?;

    let levels = match picard_solve(&solver) {
        Ok(levels) => levels,
        Err(Error::BlowUp { time, last }) => {
            let dir = out.join(format!("level_{}", last.level.unwrap_or(0)));
            return Err(save_blow_up(&dir, &cfg, time, &last));
        }
        Err(e) => return Err(e.into()),
    };
    let solution = match solve(&solver) {
        Ok(traj) => traj,
        Err(Error::BlowUp { time, last }) => {
            return Err(save_blow_up(&out.join("solution"), &cfg, time, &last))
        }
        Err(e) => return Err(e.into()),
    };
    for traj in &levels {
        write_trajectory(
            &out.join(format!("level_{}", traj.level.unwrap_or(0))),
            &cfg,
            traj,
            false,
        )?;
    }
    write_trajectory(&out.join("solution"), &cfg, &solution, false)?;

    let mut body = String::from("n,xt_norm,diff_xt,diff_ratio,max_l2_gap_to_solution\n");
    let mut previous_diff = f64::NAN;
    for (n, traj) in levels.iter().enumerate() {
        let xt = xt_norm(&sys, &positive_times(&traj.snapshots), &gp, bp)?.value;
        let diff = if n == 0 {
            f64::NAN
        } else {
            let d = difference(&traj.snapshots, &levels[n - 1].snapshots)?;
            xt_norm(&sys, &positive_times(&d), &gp, bp)?.value
        };
        let gap = difference(&traj.snapshots, &solution.snapshots)?
            .iter()
            .map(|(_, f)| f.l2_norm())
            .fold(0.0, f64::max);
        body.push_str(&format!(
            "{n},{xt:.17e},{diff:.17e},{:.17e},{gap:.17e}\n",
            diff / previous_diff
        ));
        previous_diff = diff;
    }
    write_csv(&out.join("convergence.csv"), &cfg.echo(), &body)?;
    print!("{body}");
    Ok(())
}

/// JSON entry for one snapshot and its Besov block table.
fn analyze_one(
    sys: &DyadicSystem,
    cfg: &RunConfig,
    path: &Path,
    field: &SpectralField,
    time: f64,
) -> Result<(Value, String), Failure> {
    let besov = besov_norm(sys, field, cfg.besov()?)?;
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("snapshot");
    let out_name = format!("besov_{stem}.csv");
    let radius = analyticity_radius_estimate(field, cfg.float("alpha"))?;
    println!(
        "{}: t = {time}, besov = {:.6e}, radius = {:.6e}{}",
        path.display(),
        besov.value,
        radius.gamma,
        if radius.low_signal {
            " (low signal)"
        } else {
            ""
        }
    );
    let entry = json!({
        "path": path.display().to_string(),
        "time": time,
        "l2": field.l2_norm(),
        "besov_norm": besov.value,
        "besov_csv": out_name,
        "discarded_energy_fraction": besov.discarded_energy_fraction,
        "homogeneity_warning": besov.homogeneity_warning,
        "radius": radius,
    });
    Ok((entry, besov.to_csv()))
}

pub fn analyze(
    config: Option<&Path>,
    out: &Path,
    inputs: &[PathBuf],
    overrides: &[String],
) -> Outcome {
    let cfg = load_config(config, overrides)?;
    let mut snaps = Vec::with_capacity(inputs.len());
    for path in inputs {
        let snap =
            read_snapshot(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        let time = snap.time;
        snaps.push((path.clone(), time, snap.into_spectral()?));
    }
    let grid = *snaps[0].2.grid();
    if let Some((p, _, _)) = snaps.iter().find(|s| *s.2.grid() != grid) {
        return Err(Failure::Usage(format!(
            "{} is on a different grid than {}",
            p.display(),
            inputs[0].display()
        )));
    }
    let sys = build_system(grid, cfg.float("sharpness"))?;
    output_dir(out)?;

    let echo = cfg.echo();
    let mut reports = Vec::new();
    for (path, time, field) in &snaps {
        let (report, blocks) = analyze_one(&sys, &cfg, path, field, *time)?;
        let name = report["besov_csv"].as_str().unwrap_or("besov.csv");
        write_csv(&out.join(name), &echo, &blocks)?;
        reports.push(report);
    }

    let mut series: Vec<(f64, SpectralField)> = snaps
        .iter()
        .filter(|s| s.1 > 0.0)
        .map(|(_, t, f)| (*t, f.clone()))
        .collect();
    series.sort_by(|a, b| a.0.total_cmp(&b.0));
    let xt = if series.is_empty() {
        Value::Null
    } else {
        let xt = xt_norm(&sys, &series, &cfg.gevrey()?, cfg.besov()?)?;
        write_csv(&out.join("xt.csv"), &echo, &xt.to_csv())?;
        println!("X_T norm {:.6e} attained at t = {}", xt.value, xt.argmax);
        json!({ "value": xt.value, "argmax": xt.argmax, "csv": "xt.csv" })
    };

    let echo_map: BTreeMap<_, _> = echo.into_iter().collect();
    let doc = json!({ "echo": echo_map, "snapshots": reports, "xt": xt });
    fs::write(
        out.join("analysis.json"),
        serde_json::to_string_pretty(&doc).map_err(Error::from)?,
    )?;
    Ok(())
}

pub struct VerifyFlags {
    pub unenforced: bool,
    pub padding: bool,
}

pub fn verify(
    config: Option<&Path>,
    out: &Path,
    checks: &[String],
    flags: VerifyFlags,
    overrides: &[String],
) -> Outcome {
    let cfg = load_config(config, overrides)?;
    let ids: Vec<CheckId> = if checks.is_empty() {
        CheckId::ALL.to_vec()
    } else {
        checks
            .iter()
            .map(|c| c.parse().map_err(|e: Error| Failure::Usage(e.to_string())))
            .collect::<Result<_, _>>()?
    };
    let reports_dir = out.join("reports");
    output_dir(&reports_dir)?;

    let echo = cfg.echo();
    let echo_map: BTreeMap<_, _> = echo.iter().cloned().collect();
    let mut rows = String::from(SUMMARY_HEADER);
    rows.push('\n');
    let mut failed = Vec::new();
    for id in ids {
        let mut check = CheckConfig::default_for(id);
        check.seed = cfg.int("seed");
        if cfg.int("trials") > 0 {
            check.trials = cfg.int("trials") as usize;
        }
        check.slope_slack = cfg.float("slope_slack");
        check.constant_cap = cfg.float("constant_cap");
        check.padding |= flags.padding;
        check.enforce_hypotheses = !flags.unenforced;

        let report = run_check(&check)?;
        let mut doc = serde_json::to_value(&report).map_err(Error::from)?;
        if let Some(obj) = doc.as_object_mut() {
            obj.insert("echo".into(), json!(echo_map));
        }
        let text = serde_json::to_string_pretty(&doc).map_err(Error::from)?;
        fs::write(reports_dir.join(format!("{id}.json")), text)?;

        let row = report.summary_row();
        println!("{row}");
        rows.push_str(&row);
        rows.push('\n');
        if !report.passed() {
            failed.push(format!("{id} ({})", report.verdict));
        }
    }
    write_csv(&out.join("summary.csv"), &echo, &rows)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Checks { failed })
    }
}

pub fn symbols() -> Outcome {
    for info in registry() {
        let params: Vec<String> = info
            .params
            .iter()
            .map(|(k, v)| {
                if v.is_nan() {
                    format!("{k}=auto")
                } else {
                    format!("{k}={v}")
                }
            })
            .collect();
        println!("{:<11} {:<48} {}", info.id, params.join(","), info.summary);
    }
    Ok(())
}
