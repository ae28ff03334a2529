//! Command implementations. Every command builds its artifacts in memory;
//! files are written only once the whole computation has succeeded.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use zollspec_core::format::fmt_f64;
use zollspec_core::numrange::{limit_range, numerical_range_k, regions_svg};
use zollspec_core::operator::{cluster_assign, hamiltonian, spectrum, SphereConstants};
use zollspec_core::polysphere::{AmbientPolynomial, SpherePoint};
use zollspec_core::pseudospec::{
    cluster_quasimode, localized_quasimode, matrix_coefficient_errors, pspec_grid, tube_mass,
};
use zollspec_core::radon::{
    bracket_reports_csv, classify_locus, radon_geodesic, radon_poly, BracketClass, GeodesicPoint,
};
use zollspec_core::sphharm::fibonacci_sphere;

use crate::config::RunConfig;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Spectrum,
    Pspec,
    Numrange,
    Radon,
    Bracket,
    Quasimode,
    Verify,
}

impl Command {
    /// Commands that turn a configuration into data artifacts.
    pub const DATA: [Command; 6] = [
        Command::Spectrum,
        Command::Pspec,
        Command::Numrange,
        Command::Radon,
        Command::Bracket,
        Command::Quasimode,
    ];
}

/// Named text artifacts, kept sorted by file name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Artifacts {
    files: Vec<(String, String)>,
}

impl Artifacts {
    pub fn add(&mut self, name: impl Into<String>, content: String) {
        let name = name.into();
        match self.files.binary_search_by(|(n, _)| n.as_str().cmp(&name)) {
            Ok(i) => self.files[i].1 = content,
            Err(i) => self.files.insert(i, (name, content)),
        }
    }

    pub fn extend(&mut self, other: Artifacts) {
        for (n, c) in other.files {
            self.add(n, c);
        }
    }

    pub fn files(&self) -> &[(String, String)] {
        &self.files
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.files
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c.as_str())
    }

    /// Writes every file into `dir`; on failure already written files are
    /// removed again.
    pub fn write_all(&self, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        let mut written = Vec::new();
        for (name, content) in &self.files {
            let path = dir.join(name);
            if let Err(source) = std::fs::write(&path, content) {
                for p in &written {
                    let _ = std::fs::remove_file(p);
                }
                let _ = std::fs::remove_file(&path);
                return Err(CliError::Io { path, source });
            }
            written.push(path);
        }
        Ok(written)
    }
}

pub fn run_command(command: Command, cfg: &RunConfig) -> Result<Artifacts, CliError> {
    let mut out = Artifacts::default();
    match command {
        Command::Spectrum => spectrum_artifacts(cfg, &mut out)?,
        Command::Pspec => pspec_artifacts(cfg, &mut out)?,
        Command::Numrange => numrange_artifacts(cfg, &mut out)?,
        Command::Radon => radon_artifacts(cfg, &mut out)?,
        Command::Bracket => bracket_artifacts(cfg, &mut out)?,
        Command::Quasimode => quasimode_artifacts(cfg, &mut out)?,
        Command::Verify => {
            let report = crate::verify::verify(cfg)?;
            out.add("verify_report.json", report.to_json());
        }
    }
    Ok(out)
}

fn spectrum_artifacts(cfg: &RunConfig, out: &mut Artifacts) -> Result<(), CliError> {
    let v = cfg.potential();
    let h = hamiltonian(&v, cfg.lmax)?;
    let spec = cluster_assign(spectrum(&h, true)?, &v, cfg.lmax);
    out.add("spectrum.csv", spec.to_csv());
    Ok(())
}

fn pspec_artifacts(cfg: &RunConfig, out: &mut Artifacts) -> Result<(), CliError> {
    let grid = pspec_grid(&cfg.potential(), cfg.lmax, cfg.window, cfg.resolution)?;
    out.add("pspec_grid.csv", grid.to_csv());
    out.add("pspec.svg", grid.to_svg(&cfg.eps_list, &grid.eigenvalues));
    Ok(())
}

fn numrange_artifacts(cfg: &RunConfig, out: &mut Artifacts) -> Result<(), CliError> {
    let v = cfg.potential();
    let mut regions = Vec::new();
    for &k in &cfg.k_list {
        let r = numerical_range_k(&v, k, cfg.n_angles)?;
        out.add(format!("numrange_k{k}.csv"), r.to_csv());
        regions.push((format!("R_{k}"), r));
    }
    let limit = limit_range(&v, cfg.samples)?;
    out.add("numrange_limit.csv", limit.to_csv());
    let mut labelled: Vec<(String, &_)> = regions.iter().map(|(l, r)| (l.clone(), r)).collect();
    labelled.push(("limit".to_string(), &limit));
    out.add("numrange.svg", regions_svg(&labelled));
    Ok(())
}

fn radon_artifacts(cfg: &RunConfig, out: &mut Artifacts) -> Result<(), CliError> {
    let v = cfg.potential();
    let tilde = radon_poly(&v, cfg.lmax)?;
    let nodes = 2 * v.degree_or_zero() + 1;
    let mut csv = String::from("nx,ny,nz,re_poly,im_poly,re_quad,im_quad\n");
    for n in fibonacci_sphere(cfg.samples) {
        let a = tilde.eval(&n);
        let b = radon_geodesic(&v, &GeodesicPoint::new(n), nodes)?;
        let [x, y, z] = n.coords();
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            fmt_f64(x),
            fmt_f64(y),
            fmt_f64(z),
            fmt_f64(a.re),
            fmt_f64(a.im),
            fmt_f64(b.re),
            fmt_f64(b.im)
        );
    }
    out.add("radon_samples.csv", csv);
    Ok(())
}

fn bracket_artifacts(cfg: &RunConfig, out: &mut Artifacts) -> Result<(), CliError> {
    let reports = classify_locus(&cfg.potential(), cfg.lmax, cfg.samples)?;
    out.add("bracket_reports.csv", bracket_reports_csv(&reports));
    Ok(())
}

/// The configured geodesic, or the lattice point with the most negative
/// bracket (the first lattice point when the bracket vanishes).
pub fn quasimode_geodesic(
    cfg: &RunConfig,
    v: &AmbientPolynomial,
) -> Result<GeodesicPoint, CliError> {
    if let Some([x, y, z]) = cfg.geodesic {
        return Ok(GeodesicPoint::new(SpherePoint::normalized(x, y, z)?));
    }
    let reports = classify_locus(v, cfg.lmax, cfg.samples)?;
    let best = reports
        .iter()
        .filter(|r| r.classification == BracketClass::Negative)
        .min_by(|a, b| a.bracket.total_cmp(&b.bracket))
        .unwrap_or(&reports[0]);
    Ok(best.gamma)
}

/// Tube radius `3 / sqrt(k)`, capped below `pi / 2`.
pub fn tube_half_width(k: usize) -> f64 {
    (3.0 / (k.max(1) as f64).sqrt()).min(0.45 * PI)
}

fn quasimode_artifacts(cfg: &RunConfig, out: &mut Artifacts) -> Result<(), CliError> {
    let v = cfg.potential();
    let gamma = quasimode_geodesic(cfg, &v)?;
    let tilde = radon_poly(&v, cfg.lmax)?;
    let normal = gamma.normal();
    let mu = tilde.eval(&normal) + SphereConstants::Q0;
    let errors = matrix_coefficient_errors(&v, &gamma, &cfg.k_list)?;
    let mut csv = String::from(
        "k,nx,ny,nz,re_mu,im_mu,sigma_min_block,full_residual,coupling,tube_mass,\
         localized_sigma_block,localized_full_residual,localized_tube_mass,kernel_dim,matrix_coefficient_error\n",
    );
    let [nx, ny, nz] = normal.coords();
    for (&k, err) in cfg.k_list.iter().zip(&errors) {
        let w = tube_half_width(k);
        let q = cluster_quasimode(&v, cfg.lmax, k, mu)?;
        let plain_mass = tube_mass(k, &q.coefficients, &gamma, w)?;
        let loc = localized_quasimode(&v, cfg.lmax, k, mu, &gamma, w)?;
        let _ = writeln!(
            csv,
            "{k},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt_f64(nx),
            fmt_f64(ny),
            fmt_f64(nz),
            fmt_f64(mu.re),
            fmt_f64(mu.im),
            fmt_f64(q.sigma_min_block),
            fmt_f64(q.full_residual),
            fmt_f64(q.coupling),
            fmt_f64(plain_mass),
            fmt_f64(loc.quasimode.sigma_min_block),
            fmt_f64(loc.quasimode.full_residual),
            fmt_f64(loc.tube_mass),
            loc.kernel_dim,
            fmt_f64(err.error)
        );
    }
    out.add("quasimode_decay.csv", csv);
    Ok(())
}

/// All data artifacts for a configuration.
pub fn data_artifacts(cfg: &RunConfig) -> Result<Artifacts, CliError> {
    let mut all = Artifacts::default();
    for c in Command::DATA {
        all.extend(run_command(c, cfg)?);
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn artifacts_stay_sorted_and_replace_duplicates() {
        let mut a = Artifacts::default();
        a.add("b.csv", "1".into());
        a.add("a.csv", "2".into());
        a.add("b.csv", "3".into());
        let names: Vec<&str> = a.files().iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["a.csv", "b.csv"]);
        assert_eq!(a.get("b.csv"), Some("3"));
    }

    #[test]
    fn default_geodesic_has_the_most_negative_bracket() {
        let cfg = parse_config(
            r#"{"potential": [
                {"px": 2, "py": 0, "pz": 0, "re": 4.0, "im": 0.0},
                {"px": 1, "py": 1, "pz": 0, "re": 0.0, "im": 4.0},
                {"px": 0, "py": 2, "pz": 0, "re": -1.0, "im": 0.0}],
               "lmax": 6, "samples": 400}"#,
        )
        .unwrap();
        let v = cfg.potential();
        let gamma = quasimode_geodesic(&cfg, &v).unwrap();
        let reports = classify_locus(&v, cfg.lmax, cfg.samples).unwrap();
        let chosen = reports.iter().find(|r| r.gamma == gamma).unwrap();
        assert!(reports.iter().all(|r| r.bracket >= chosen.bracket));
        assert!(chosen.bracket < 0.0);
    }

    #[test]
    fn tube_width_is_capped() {
        assert!((tube_half_width(36) - 0.5).abs() < 1e-15);
        assert!(tube_half_width(1) < PI / 2.0);
    }
}
