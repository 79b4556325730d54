use std::fmt::Write as _;

use super::{degrees, ConfigError, Configuration, MatchingGraph};

/// Per-line point counts then per-point line counts, as
/// `kind,index,label,degree` rows.
pub fn degree_csv(c: &Configuration) -> Result<String, ConfigError> {
    let inc = c.incidence_list()?;
    let (pd, ld) = degrees(c.points.len(), c.lines.len(), &inc);
    let mut out = String::from("kind,index,label,degree\n");
    let label = |labels: &[String], i: usize| labels.get(i).cloned().unwrap_or_default();
    for (i, d) in ld.iter().enumerate() {
        writeln!(out, "line,{i},{},{d}", label(&c.line_labels, i)).unwrap();
    }
    for (i, d) in pd.iter().enumerate() {
        writeln!(out, "point,{i},{},{d}", label(&c.point_labels, i)).unwrap();
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct SvgOptions {
    pub size: f64,
    pub margin: f64,
    pub point_radius: f64,
    pub draw_lines: bool,
    pub draw_labels: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self {
            size: 600.0,
            margin: 30.0,
            point_radius: 3.0,
            draw_lines: true,
            draw_labels: false,
        }
    }
}

/// Clips `a·x + b·y + c = 0` to a box.
fn clip(l: [f64; 3], (x0, y0, x1, y1): (f64, f64, f64, f64)) -> Option<((f64, f64), (f64, f64))> {
    let [a, b, c] = l;
    let mut hits = Vec::new();
    if b.abs() > 1e-15 {
        for x in [x0, x1] {
            let y = -(a * x + c) / b;
            if (y0..=y1).contains(&y) {
                hits.push((x, y));
            }
        }
    }
    if a.abs() > 1e-15 {
        for y in [y0, y1] {
            let x = -(b * y + c) / a;
            if (x0..=x1).contains(&x) {
                hits.push((x, y));
            }
        }
    }
    let first = *hits.first()?;
    let far = hits.iter().copied().max_by(|p, q| {
        let d = |r: &(f64, f64)| (r.0 - first.0).hypot(r.1 - first.1);
        d(p).total_cmp(&d(q))
    })?;
    Some((first, far))
}

/// Renders the finite points, optionally the lines clipped to the bounding
/// box, and optionally matching-graph edges.
pub fn write_svg(c: &Configuration, g: Option<&MatchingGraph>, opts: &SvgOptions) -> String {
    let affine: Vec<Option<(f64, f64)>> = c.points.iter().map(|p| p.to_affine_f64()).collect();
    let finite: Vec<(f64, f64)> = affine.iter().flatten().copied().collect();
    let (mut x0, mut y0, mut x1, mut y1) = finite.iter().fold(
        (
            f64::INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::NEG_INFINITY,
        ),
        |(a, b, c, d), &(x, y)| (a.min(x), b.min(y), c.max(x), d.max(y)),
    );
    if finite.is_empty() {
        (x0, y0, x1, y1) = (-1.0, -1.0, 1.0, 1.0);
    }
    let pad = 0.05 * (x1 - x0).max(y1 - y0).max(1.0);
    let bbox = (x0 - pad, y0 - pad, x1 + pad, y1 + pad);
    let span = (bbox.2 - bbox.0).max(bbox.3 - bbox.1);
    let scale = (opts.size - 2.0 * opts.margin) / span;
    let sx = |x: f64| opts.margin + (x - bbox.0) * scale;
    let sy = |y: f64| opts.size - opts.margin - (y - bbox.1) * scale;

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{s}" height="{s}" viewBox="0 0 {s} {s}">"#,
        s = opts.size
    )
    .unwrap();
    writeln!(out, "<!-- {} -->", c.provenance.replace("--", "- -")).unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    if opts.draw_lines {
        writeln!(out, r##"<g stroke="#9aa" stroke-width="0.6">"##).unwrap();
        for l in &c.lines {
            if let Some(((ax, ay), (bx, by))) = clip(l.to_f64(), bbox) {
                writeln!(
                    out,
                    r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
                    sx(ax),
                    sy(ay),
                    sx(bx),
                    sy(by)
                )
                .unwrap();
            }
        }
        writeln!(out, "</g>").unwrap();
    }
    if let Some(g) = g {
        writeln!(out, r##"<g stroke="#c33" stroke-width="1.5">"##).unwrap();
        for e in &g.edges {
            if let (Some((ax, ay)), Some((bx, by))) = (affine[e.u], affine[e.v]) {
                writeln!(
                    out,
                    r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
                    sx(ax),
                    sy(ay),
                    sx(bx),
                    sy(by)
                )
                .unwrap();
            }
        }
        writeln!(out, "</g>").unwrap();
    }
    writeln!(out, r#"<g fill="black">"#).unwrap();
    for (i, p) in affine.iter().enumerate() {
        if let Some((x, y)) = p {
            writeln!(
                out,
                r#"<circle cx="{:.2}" cy="{:.2}" r="{}"/>"#,
                sx(*x),
                sy(*y),
                opts.point_radius
            )
            .unwrap();
            if opts.draw_labels {
                if let Some(label) = c.point_labels.get(i) {
                    writeln!(
                        out,
                        r#"<text x="{:.2}" y="{:.2}" font-size="10">{label}</text>"#,
                        sx(*x) + 4.0,
                        sy(*y) - 4.0
                    )
                    .unwrap();
                }
            }
        }
    }
    writeln!(out, "</g>\n</svg>").unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configurations::{erdos_config, matching_graph};

    #[test]
    fn csv_rows() {
        let c = erdos_config(2).unwrap();
        let csv = degree_csv(&c).unwrap();
        assert_eq!(csv.lines().count(), 1 + 16);
        let total: usize = csv
            .lines()
            .skip(1)
            .take(8)
            .map(|r| r.rsplit(',').next().unwrap().parse::<usize>().unwrap())
            .sum();
        assert_eq!(total, 15);
    }

    #[test]
    fn svg_has_every_element() {
        let c = erdos_config(2).unwrap();
        let g = matching_graph(&c).unwrap();
        let svg = write_svg(&c, Some(&g), &SvgOptions::default());
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<circle").count(), 8);
        assert_eq!(svg.matches("<line ").count(), 8 + 7);
    }
}
