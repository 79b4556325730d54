use rayon::prelude::*;
use serde::Serialize;

use super::{ConfigError, Configuration};

/// Largest number of common neighbours of two points in the collinearity
/// graph `H` (points joined when some line of the configuration contains
/// both).
#[derive(Clone, Debug, Serialize)]
pub struct CommonNeighborReport {
    pub points: usize,
    pub max_common: usize,
    pub witness: Option<(usize, usize)>,
    /// `points^(1/3)`.
    pub cube_root: f64,
    /// `max_common / (cube_root · (1 + ln points))`.
    pub ratio: f64,
}

pub fn common_neighbor_max(c: &Configuration) -> Result<CommonNeighborReport, ConfigError> {
    let s = c.structure()?;
    let n = s.n_points;
    let words = n.div_ceil(64);
    let mut adj = vec![0u64; n * words];
    for pts in &s.line_points {
        for &p in pts {
            for &q in pts {
                if p != q {
                    adj[p * words + q / 64] |= 1 << (q % 64);
                }
            }
        }
    }
    let best = (0..n)
        .into_par_iter()
        .map(|p| {
            let row_p = &adj[p * words..(p + 1) * words];
            let mut best: Option<(usize, usize, usize)> = None;
            for q in p + 1..n {
                let row_q = &adj[q * words..(q + 1) * words];
                let common: usize = row_p
                    .iter()
                    .zip(row_q)
                    .map(|(a, b)| (a & b).count_ones() as usize)
                    .sum();
                if best.is_none_or(|(m, _, _)| common > m) {
                    best = Some((common, p, q));
                }
            }
            best
        })
        .reduce(
            || None,
            |a, b| match (a, b) {
                (Some(x), Some(y)) => {
                    Some(if y.0 > x.0 || (y.0 == x.0 && (y.1, y.2) < (x.1, x.2)) {
                        y
                    } else {
                        x
                    })
                }
                (x, None) => x,
                (None, y) => y,
            },
        );
    let cube_root = (n as f64).cbrt();
    let max_common = best.map_or(0, |b| b.0);
    let ratio = if n > 0 {
        max_common as f64 / (cube_root * (1.0 + (n as f64).ln()))
    } else {
        0.0
    };
    Ok(CommonNeighborReport {
        points: n,
        max_common,
        witness: best.map(|b| (b.1, b.2)),
        cube_root,
        ratio,
    })
}
