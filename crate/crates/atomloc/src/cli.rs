//! Command implementations behind the `atomloc` binary. Everything here is
//! plain library code so the binary stays a thin argument parser and the
//! commands stay testable in-process.

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::PathBuf;

use crate::config::RunConfig;
use crate::dressed::dressed_curves;
use crate::error::{Error, Result};
use crate::output::{
    branches_table, chi_map_table, dressed_table, profile_table, write_text, Table,
};
use crate::params::ModelParams;
use crate::presets::{preset, FigurePreset, PresetId};
use crate::roots::branch_curves;
use crate::scan::{find_peaks, kx_grid, scan_chi_map, scan_profile};
use crate::verify::{run_verification, VerifyOptions};

/// Position resolution of contour maps; line scans use the full grid.
pub const MAP_KX_POINTS: usize = 401;

/// Compact number token for file names: `5 -> "5"`, `0.25 -> "0p25"`,
/// `-3 -> "m3"`; the common phase values get symbolic names.
pub fn fmt_num(x: f64) -> String {
    let mut s = if x == x.trunc() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    };
    s = s.replace('-', "m").replace('.', "p");
    s
}

fn fmt_phi(phi: f64) -> String {
    if phi == 0.0 {
        "0".into()
    } else if (phi - FRAC_PI_2).abs() < 1e-12 {
        "pi2".into()
    } else if (phi - PI).abs() < 1e-12 {
        "pi".into()
    } else {
        fmt_num(phi)
    }
}

fn out_path(config: &RunConfig, stem: &str) -> PathBuf {
    config
        .out_dir
        .join(format!("{stem}.{}", config.format.extension()))
}

/// Per-detuning line profiles plus a 2D contour map.
pub fn run_chi_scan(config: &RunConfig) -> Result<()> {
    config.validate()?;
    if config.deltas.is_empty() {
        return Err(Error::InvalidConfig(
            "chi-scan needs at least one detuning (scan.delta)".into(),
        ));
    }
    write_chi_outputs(config, &config.params, "chi", &[])
}

fn write_chi_outputs(
    config: &RunConfig,
    params: &ModelParams,
    stem: &str,
    extra_meta: &[(String, String)],
) -> Result<()> {
    for &delta in &config.deltas {
        let profile = scan_profile(params, delta, config.grid)?;
        let tag = format!("{stem}_delta{}", fmt_num(delta));
        profile_table(&profile, extra_meta).write(&out_path(config, &tag), config.format)?;
        let peaks = find_peaks(&profile, config.prominence_frac);
        peaks_table(&profile, &peaks, config.prominence_frac, extra_meta)
            .write(&out_path(config, &format!("{tag}_peaks")), config.format)?;
    }
    let map = scan_chi_map(params, config.delta_range, MAP_KX_POINTS.min(config.grid))?;
    chi_map_table(&map, extra_meta).write(&out_path(config, &format!("{stem}_map")), config.format)
}

fn peaks_table(
    profile: &crate::scan::AbsorptionProfile,
    peaks: &[crate::scan::Peak],
    prominence_frac: f64,
    extra_meta: &[(String, String)],
) -> Table {
    let mut meta = vec![
        ("delta".to_string(), profile.delta.to_string()),
        ("prominence_frac".to_string(), prominence_frac.to_string()),
    ];
    meta.extend(extra_meta.iter().cloned());
    Table {
        kind: "absorption-peaks",
        meta,
        columns: vec!["position", "height", "fwhm", "prominence"],
        rows: peaks
            .iter()
            .map(|p| vec![p.position, p.height, p.fwhm, p.prominence])
            .collect(),
    }
}

/// Branch curves of the five resonance detunings.
pub fn run_roots(config: &RunConfig) -> Result<()> {
    config.validate()?;
    let table = roots_table(config, &config.params, &[])?;
    table.write(&out_path(config, "roots"), config.format)
}

fn roots_table(
    config: &RunConfig,
    params: &ModelParams,
    extra_meta: &[(String, String)],
) -> Result<Table> {
    let grid = kx_grid(config.grid);
    let branches = branch_curves(params, &grid)?;
    let mut meta = vec![
        ("omega1".to_string(), params.omega1.to_string()),
        ("omega2".to_string(), params.omega2.to_string()),
        ("omega3".to_string(), params.omega3.to_string()),
        ("phi".to_string(), params.phi.to_string()),
    ];
    meta.extend(extra_meta.iter().cloned());
    Ok(branches_table(&branches, &config.deltas, &meta))
}

/// Dressed eigenvalues and decay rates along the standing wave.
pub fn run_dressed(config: &RunConfig) -> Result<()> {
    config.validate()?;
    let table = dressed_table_for(config, &config.params, &[])?;
    table.write(&out_path(config, "dressed"), config.format)
}

fn dressed_table_for(
    config: &RunConfig,
    params: &ModelParams,
    extra_meta: &[(String, String)],
) -> Result<Table> {
    let grid = kx_grid(config.grid);
    let curves = dressed_curves(params, &grid)?;
    let mut meta = vec![
        ("omega1".to_string(), params.omega1.to_string()),
        ("omega2".to_string(), params.omega2.to_string()),
        ("omega3".to_string(), params.omega3.to_string()),
        ("phi".to_string(), params.phi.to_string()),
        ("gamma1".to_string(), params.gamma1.to_string()),
        ("gamma2".to_string(), params.gamma2.to_string()),
    ];
    meta.extend(extra_meta.iter().cloned());
    Ok(dressed_table(&curves, &meta))
}

/// Run every verification suite, write the report, fail on any red suite.
pub fn run_verify(config: &RunConfig) -> Result<()> {
    let report = run_verification(&VerifyOptions {
        samples: config.samples,
        seed: config.seed,
        ..VerifyOptions::default()
    })?;
    let text = report.render();
    print!("{text}");
    write_text(&config.out_dir.join("verify_report.txt"), &text)?;
    if report.all_passed() {
        Ok(())
    } else {
        Err(Error::VerificationFailed {
            failed: report.failed_count(),
            total: report.suites.len(),
        })
    }
}

/// Emit the full figure data set for one preset: per-phase branch curves,
/// per-cell line profiles, contour maps and dressed spectra.
pub fn run_preset(id: PresetId, config: &RunConfig) -> Result<()> {
    config.validate()?;
    let figure: FigurePreset = preset(id);
    let caption = figure.caption_fields();
    for case in &figure.phi_cases {
        let phi_tag = fmt_phi(case.phi);
        let params0 = figure.params(figure.gamma2_list[0], case.phi);

        let case_config = RunConfig {
            deltas: case.deltas.clone(),
            ..config.clone()
        };
        let mut meta = caption.clone();
        meta.push(("phi".to_string(), case.phi.to_string()));
        roots_table(&case_config, &params0, &meta)?.write(
            &out_path(config, &format!("{id}_phi{phi_tag}_roots")),
            config.format,
        )?;

        for &gamma2 in &figure.gamma2_list {
            let params = figure.params(gamma2, case.phi);
            let cell = format!("{id}_phi{phi_tag}_g{}", fmt_num(gamma2));
            let mut cell_meta = caption.clone();
            cell_meta.push(("phi".to_string(), case.phi.to_string()));
            cell_meta.push(("gamma2".to_string(), gamma2.to_string()));
            for &delta in &case.deltas {
                let profile = scan_profile(&params, delta, config.grid)?;
                profile_table(&profile, &cell_meta).write(
                    &out_path(config, &format!("{cell}_delta{}", fmt_num(delta))),
                    config.format,
                )?;
            }
            let map = scan_chi_map(&params, figure.delta_range, MAP_KX_POINTS.min(config.grid))?;
            chi_map_table(&map, &cell_meta)
                .write(&out_path(config, &format!("{cell}_map")), config.format)?;
            dressed_table_for(&case_config, &params, &cell_meta)?
                .write(&out_path(config, &format!("{cell}_dressed")), config.format)?;
        }
    }
    Ok(())
}
