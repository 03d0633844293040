use std::fmt::Write;
use std::fs;
use std::path::{Path, PathBuf};

use noisefold_dynamics::{CoherenceRates64, DecayCoefficients64, Trajectory64};

use crate::config::RunConfig;
use crate::experiments::Outcome;
use crate::plot::line_plot;
use crate::CliError;

pub const TRAJECTORY_HEADER: &str = "t,rho00_re,rho00_im,rho01_re,rho01_im,rho10_re,rho10_im,rho11_re,rho11_im";
pub const COEFFICIENTS_HEADER: &str = "t,D_R,D_I,Dp_R,Dp_I,D_C,D_total,D_cavity,D_Bfield";

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn trajectory_csv(traj: &Trajectory64) -> String {
    let mut s = String::from(TRAJECTORY_HEADER);
    s.push('\n');
    for (i, r) in traj.states().iter().enumerate() {
        let mut row = vec![num(traj.grid().t(i))];
        for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            row.push(num(r[(a, b)].re));
            row.push(num(r[(a, b)].im));
        }
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

pub fn coefficients_csv(c: &DecayCoefficients64, r: &CoherenceRates64) -> String {
    let mut s = String::from(COEFFICIENTS_HEADER);
    s.push('\n');
    for i in 0..c.len() {
        let row = [
            c.grid.t(i),
            c.d_r[i],
            c.d_i[i],
            c.dp_r[i],
            c.dp_i[i],
            c.d_c[i],
            r.d_total[i],
            r.d_cavity[i],
            r.d_bfield[i],
        ];
        s.push_str(&row.iter().map(|&x| num(x)).collect::<Vec<_>>().join(","));
        s.push('\n');
    }
    s
}

pub fn report(cfg: &RunConfig, out: &Outcome) -> String {
    let mut s = String::new();
    let conv = cfg.convention().map(|c| c.to_string()).unwrap_or_else(|_| cfg.convention.clone());
    writeln!(s, "noisefold report").unwrap();
    writeln!(s, "experiment: {}", out.experiment.name()).unwrap();
    writeln!(s, "convention: {conv}").unwrap();
    writeln!(s, "rescale: {}", cfg.rescale).unwrap();
    let seeds: Vec<String> = out.seeds.iter().map(u64::to_string).collect();
    writeln!(s, "seeds: {}", seeds.join(" ")).unwrap();
    writeln!(s, "realizations: {}", cfg.noise.r).unwrap();
    writeln!(s, "grid: dt {} n_steps {}", cfg.grid.dt, cfg.grid.n_steps).unwrap();
    writeln!(s, "strengths: lambda {} delta {}", cfg.strengths.lambda, cfg.strengths.delta).unwrap();
    writeln!(s, "order: {}", cfg.order).unwrap();
    writeln!(s, "\n[checks]").unwrap();
    for c in &out.checks {
        writeln!(
            s,
            "{} {}: measured {:.6e} (tolerance {})",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.measured,
            c.tolerance
        )
        .unwrap();
    }
    if !out.notes.is_empty() {
        writeln!(s, "\n[notes]").unwrap();
        for (k, v) in &out.notes {
            writeln!(s, "{k}: {v}").unwrap();
        }
    }
    writeln!(s, "\nresult: {}", if out.passed() { "PASS" } else { "FAIL" }).unwrap();
    s
}

fn write(path: PathBuf, text: &str) -> Result<PathBuf, CliError> {
    fs::write(&path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    Ok(path)
}

/// Writes every artifact of `out` into `dir`; returns the files written.
pub fn write_outputs(dir: &Path, cfg: &RunConfig, out: &Outcome, plot: bool) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
    let mut files = Vec::new();
    if let Some(t) = &out.trajectory {
        files.push(write(dir.join("trajectory.csv"), &trajectory_csv(t))?);
    }
    if let Some(t) = &out.reference {
        files.push(write(dir.join("reference.csv"), &trajectory_csv(t))?);
    }
    if let Some((c, r)) = &out.coefficients {
        files.push(write(dir.join("coefficients.csv"), &coefficients_csv(c, r))?);
    }
    files.push(write(dir.join("report.txt"), &report(cfg, out))?);
    if plot {
        if let Some(t) = &out.trajectory {
            let x: Vec<f64> = (0..t.len()).map(|i| t.grid().t(i)).collect();
            let mut series = vec![("|rho01|", t.rho01().iter().map(|z| z.norm()).collect::<Vec<_>>())];
            if let Some(r) = &out.reference {
                series.push(("|rho01| reference", r.rho01().iter().map(|z| z.norm()).collect()));
            }
            files.push(write(dir.join("rho01.svg"), &line_plot("|rho01(t)|", "t", &x, &series))?);
        }
        if let Some((c, r)) = &out.coefficients {
            let x: Vec<f64> = (0..c.len()).map(|i| c.grid.t(i)).collect();
            let series = [
                ("D_R", c.d_r.clone()),
                ("D_I", c.d_i.clone()),
                ("Dp_R", c.dp_r.clone()),
                ("Dp_I", c.dp_i.clone()),
                ("D_C", c.d_c.clone()),
                ("D_total", r.d_total.clone()),
            ];
            files.push(write(dir.join("coefficients.svg"), &line_plot("decay coefficients", "t", &x, &series))?);
        }
    }
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip_exactly() {
        for x in [0.1, -1.0 / 3.0, 6.02214076e23, 5e-324, 0.0, f64::MAX] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn report_lists_checks_and_result() {
        let cfg = RunConfig::default();
        let mut out = crate::run_experiment(&RunConfig {
            experiment: crate::Experiment::VerifyYMap,
            order: 3,
            grid: crate::config::GridConfig { dt: 0.1, n_steps: 10 },
            ..cfg.clone()
        })
        .unwrap();
        let text = report(&cfg, &out);
        assert!(text.contains("PASS Y-map residual Q=2"));
        assert!(text.ends_with("result: PASS\n"));
        out.checks[0].passed = false;
        assert!(report(&cfg, &out).contains("result: FAIL"));
    }
}
