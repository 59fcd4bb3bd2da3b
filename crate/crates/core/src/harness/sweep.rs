use rayon::prelude::*;
use rayon::ThreadPoolBuilder;

use crate::error::{Error, Result};
use crate::metrics::{run_point, BerRecord};
use crate::modem::Scheme;
use crate::seed::point_seed;
use crate::theory::{db_to_linear, theory_point, TheoryPoint};

use super::config::SimulationConfig;

/// One cell of the sweep grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub index: usize,
    pub scheme: Scheme,
    pub users: usize,
    pub doppler_hz: f64,
    pub ebn0_db: f64,
}

/// Grid in output order: scheme outermost, then users, Doppler and Eb/N0.
pub fn grid(cfg: &SimulationConfig) -> Vec<GridPoint> {
    let mut points = Vec::new();
    for &scheme in &cfg.schemes {
        for &users in &cfg.num_users {
            for &doppler_hz in &cfg.doppler_hz {
                for &ebn0_db in &cfg.ebn0_db {
                    points.push(GridPoint { index: points.len(), scheme, users, doppler_hz, ebn0_db });
                }
            }
        }
    }
    points
}

/// Simulate one grid point with its derived seed.
pub fn run_grid_point(cfg: &SimulationConfig, point: &GridPoint) -> Result<BerRecord> {
    let mut link = cfg.link(point.scheme, point.users)?;
    link.doppler_hz = point.doppler_hz;
    link.seed = point_seed(cfg.seed, point.ebn0_db, point.index);
    run_point(&link, point.ebn0_db, cfg.stopping)
}

/// Run every grid point on `jobs` worker threads. Records come back in grid
/// order whatever the scheduling.
pub fn run_sweep(cfg: &SimulationConfig, jobs: usize) -> Result<Vec<BerRecord>> {
    let pool =
        ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().map_err(|e| Error::arg("jobs", e.to_string()))?;
    let points = grid(cfg);
    pool.install(|| points.par_iter().map(|p| run_grid_point(cfg, p)).collect())
}

/// Closed-form companions for each scheme and Eb/N0 of the sweep.
pub fn theory_rows(cfg: &SimulationConfig) -> Result<Vec<(f64, TheoryPoint)>> {
    let mut rows = Vec::new();
    for &scheme in &cfg.schemes {
        for &db in &cfg.ebn0_db {
            rows.push((db, theory_point(scheme, cfg.channel, db_to_linear(db))?));
        }
    }
    Ok(rows)
}
