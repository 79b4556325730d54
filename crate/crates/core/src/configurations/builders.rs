use super::{ConfigError, Configuration};
use crate::projective::{
    extended_gon, incident, line_through, verify_integer_embedding_k6, ExtendedGon, GonMode,
    ProjLine, ProjPoint,
};

fn from_gon(gon: &ExtendedGon, provenance: String) -> Result<Configuration, ConfigError> {
    let inc = gon.incidences().into_iter().collect();
    Configuration::with_incidences(gon.points.clone(), gon.lines.clone(), inc, provenance)?
        .with_labels(gon.point_labels(), gon.line_labels())
}

/// The extended regular k-gon with `v`/`t`/`L` labels.
pub fn extended_gon_config(k: usize, mode: GonMode) -> Result<Configuration, ConfigError> {
    from_gon(
        &extended_gon(k, mode)?,
        format!("extended-gon k={k} mode={mode}"),
    )
}

/// The image of the exact extended hexagon under the integer embedding.
pub fn hexagon_embedded_host() -> Result<Configuration, ConfigError> {
    let (_, image) = verify_integer_embedding_k6()?;
    from_gon(&image, "hexagon-embedded".to_string())
}

/// The points `(x, y)` with `0 ≤ x, y < n` and the `2n` axis-parallel lines
/// through them.
pub fn grid_host(n: usize) -> Result<Configuration, ConfigError> {
    let n = n as i64;
    let points = (0..n)
        .flat_map(|x| (0..n).map(move |y| ProjPoint::from_ints(x, y, 1)))
        .collect::<Result<_, _>>()?;
    let lines = (0..n)
        .map(|x| ProjLine::from_ints(1, 0, -x))
        .chain((0..n).map(|y| ProjLine::from_ints(0, 1, -y)))
        .collect::<Result<_, _>>()?;
    Configuration::from_geometry(points, lines, format!("grid-host n={n}"))
}

/// `n` points `(i, 0)` on the line `y = 0`.
pub fn single_line_config(n: usize) -> Result<Configuration, ConfigError> {
    let points = (0..n as i64)
        .map(|i| ProjPoint::from_ints(i, 0, 1))
        .collect::<Result<_, _>>()?;
    Configuration::from_geometry(
        points,
        vec![ProjLine::from_ints(0, 1, 0)?],
        format!("single-line n={n}"),
    )
}

const WHITE_SEARCH_RADIUS: i64 = 64;

/// A geometric subdivided k-clique whose incidences are exactly those of
/// the pattern: blacks `b_1..b_k` first, then whites `w_{ij}` in
/// lexicographic pair order; lines `(b_i w_{ij}, b_j w_{ij})` per pair.
pub fn subdivided_clique_realization(k: usize) -> Result<Configuration, ConfigError> {
    if k < 3 {
        return Err(ConfigError::Invalid(format!(
            "k must be at least 3, got {k}"
        )));
    }
    // blacks on a parabola, so no three are collinear
    let mut points: Vec<ProjPoint> = (0..k as i64)
        .map(|i| ProjPoint::from_ints(3 * i, 3 * i * i + 1, 1))
        .collect::<Result<_, _>>()?;
    let mut lines: Vec<ProjLine> = Vec::new();
    let candidates: Vec<(i64, i64)> = {
        let mut c: Vec<(i64, i64)> = (-WHITE_SEARCH_RADIUS..=WHITE_SEARCH_RADIUS)
            .flat_map(|x| (-WHITE_SEARCH_RADIUS..=WHITE_SEARCH_RADIUS).map(move |y| (x, y)))
            .collect();
        c.sort_by_key(|&(x, y)| (x.abs().max(y.abs()), x, y));
        c
    };
    for i in 0..k {
        for j in i + 1..k {
            let found = candidates.iter().find_map(|&(x, y)| {
                let w = ProjPoint::from_ints(x, y, 1).ok()?;
                if points.contains(&w) || lines.iter().any(|l| incident(&w, l)) {
                    return None;
                }
                let li = line_through(&points[i], &w).ok()?;
                let lj = line_through(&points[j], &w).ok()?;
                let clean = |l: &ProjLine, own: usize| {
                    points
                        .iter()
                        .enumerate()
                        .all(|(idx, p)| idx == own || !incident(p, l))
                };
                (clean(&li, i) && clean(&lj, j)).then_some((w, li, lj))
            });
            let (w, li, lj) = found.ok_or_else(|| {
                ConfigError::Invalid(format!(
                    "no white point found for pair ({i}, {j}) within the search radius"
                ))
            })?;
            points.push(w);
            lines.push(li);
            lines.push(lj);
        }
    }
    let c = Configuration::from_geometry(points, lines, format!("subdivided-clique k={k}"))?;
    debug_assert_eq!(c.incidence_list()?.len(), 2 * k * (k - 1));
    Ok(c)
}
