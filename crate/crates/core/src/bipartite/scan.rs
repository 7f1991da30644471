use std::f64::consts::TAU;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::boundary::{bipartite_boundary_kappa, BipartiteOptions};
use super::state::{check_dims, ppt_kappa};
use crate::angular::Spin;
use crate::density::{Norm, ScaledFamily};
use crate::linalg::{hs_inner, hs_norm, CMatrix};
use crate::{Error, Result};

/// Column order of the scan CSV.
pub const SCAN_CSV_HEADER: [&str; 7] =
    ["ray", "angle", "kappa_positivity", "kappa_ppt", "kappa_prep", "grid_n", "residual"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    pub rays: usize,
    /// Normalization applied to both plane directions.
    pub norm: Norm,
    pub boundary: BipartiteOptions,
}

impl ScanOptions {
    pub fn new(spin_a: Spin, spin_b: Spin, rays: usize) -> Self {
        Self { rays, norm: Norm::Trace, boundary: BipartiteOptions::for_spins(spin_a, spin_b, 2) }
    }
}

/// Boundaries along one ray `κ (cos ψ ρ̂₁ + sin ψ ρ̂₂)` of the plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub ray: usize,
    pub angle: f64,
    pub kappa_positivity: f64,
    pub kappa_ppt: f64,
    pub kappa_prep: f64,
    pub grid_n: usize,
    /// Reconstruction error of the certificate at `kappa_prep`.
    pub residual: f64,
    /// Whether the grid schedule met its tolerance; not part of the CSV.
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub spin_a: Spin,
    pub spin_b: Spin,
    pub rows: Vec<ScanRow>,
}

impl ScanResult {
    pub fn converged(&self) -> bool {
        self.rows.iter().all(|r| r.converged)
    }

    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(SCAN_CSV_HEADER)?;
        for r in &self.rows {
            let f = |x: f64| format!("{x:.12e}");
            w.write_record([
                r.ray.to_string(),
                f(r.angle),
                f(r.kappa_positivity),
                f(r.kappa_ppt),
                f(r.kappa_prep),
                r.grid_n.to_string(),
                f(r.residual),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Format(e.to_string()))
    }
}

/// Scans the plane `ρ0 + κ₁ρ̂₁ + κ₂ρ̂₂` along `rays` equally spaced rays.
///
/// Both directions are normalized first; along the ray at angle `ψ` the
/// direction `cos ψ ρ̂₁ + sin ψ ρ̂₂` is used as is, so every `κ` is the polar
/// radius in the `(κ₁, κ₂)` plane. Rays are independent and evaluated in
/// parallel; rows come back in ray order.
pub fn scan2d(dir1: &CMatrix, dir2: &CMatrix, spin_a: Spin, spin_b: Spin, options: &ScanOptions) -> Result<ScanResult> {
    check_dims(spin_a, spin_b, dir1)?;
    check_dims(spin_a, spin_b, dir2)?;
    let d1 = ScaledFamily::new(dir1.clone(), options.norm)?.direction().clone();
    let d2 = ScaledFamily::new(dir2.clone(), options.norm)?.direction().clone();
    let cos = hs_inner(&d1, &d2).re / (hs_norm(&d1) * hs_norm(&d2));
    if cos.abs() > 1.0 - 1e-9 {
        return Err(Error::DegeneratePlane(format!("directions are parallel (cosine {cos:.3e})")));
    }
    let rows = (0..options.rays)
        .into_par_iter()
        .map(|ray| {
            let angle = TAU * ray as f64 / options.rays as f64;
            let (s, c) = angle.sin_cos();
            let family = ScaledFamily::unnormalized(d1.scale(c) + d2.scale(s))?;
            let lp = bipartite_boundary_kappa(&family, spin_a, spin_b, &options.boundary)?;
            Ok(ScanRow {
                ray,
                angle,
                kappa_positivity: family.positivity_kappa(),
                kappa_ppt: ppt_kappa(&family, spin_a, spin_b)?,
                kappa_prep: lp.kappa_e,
                grid_n: lp.grid_size,
                residual: lp.residual,
                converged: lp.converged,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanResult { spin_a, spin_b, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_direction, rng_from_seed};

    fn small(spin_a: Spin, spin_b: Spin, rays: usize) -> ScanOptions {
        let mut o = ScanOptions::new(spin_a, spin_b, rays);
        o.boundary = BipartiteOptions { schedule: vec![(20, 21)], tolerance: 1e-4, mirror_a: false };
        o
    }

    #[test]
    fn rows_respect_inclusions_and_csv_shape() {
        let mut rng = rng_from_seed(70);
        let (a, b) = (random_direction(4, &mut rng), random_direction(4, &mut rng));
        let r = scan2d(&a, &b, Spin::HALF, Spin::HALF, &small(Spin::HALF, Spin::HALF, 8)).unwrap();
        assert_eq!(r.rows.len(), 8);
        for row in &r.rows {
            assert!(row.kappa_prep <= row.kappa_ppt * (1.0 + 1e-6));
            assert!(row.kappa_prep <= row.kappa_positivity * (1.0 + 1e-6));
        }
        let csv = r.to_csv_string().unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), SCAN_CSV_HEADER.join(","));
        assert_eq!(lines.count(), 8);
        assert_eq!(csv, scan2d(&a, &b, Spin::HALF, Spin::HALF, &small(Spin::HALF, Spin::HALF, 8)).unwrap().to_csv_string().unwrap());
    }

    #[test]
    fn opposite_ray_matches_negated_direction() {
        let mut rng = rng_from_seed(71);
        let (a, b) = (random_direction(4, &mut rng), random_direction(4, &mut rng));
        let opts = small(Spin::HALF, Spin::HALF, 4);
        let r = scan2d(&a, &b, Spin::HALF, Spin::HALF, &opts).unwrap();
        let neg = ScaledFamily::new(-a.clone(), Norm::Trace).unwrap();
        let row = r.rows[2];
        assert!((row.angle - std::f64::consts::PI).abs() < 1e-15);
        assert!((row.kappa_positivity - neg.positivity_kappa()).abs() < 1e-9);
        assert!((row.kappa_ppt - ppt_kappa(&neg, Spin::HALF, Spin::HALF).unwrap()).abs() < 1e-9);
        let lp = bipartite_boundary_kappa(&neg, Spin::HALF, Spin::HALF, &opts.boundary).unwrap();
        assert!((row.kappa_prep - lp.kappa_e).abs() < 1e-6 * lp.kappa_e);
    }

    #[test]
    fn parallel_directions_are_rejected() {
        let mut rng = rng_from_seed(72);
        let a = random_direction(4, &mut rng);
        let err = scan2d(&a, &a.scale(-2.0), Spin::HALF, Spin::HALF, &small(Spin::HALF, Spin::HALF, 4));
        assert!(matches!(err, Err(Error::DegeneratePlane(_))));
    }
}
