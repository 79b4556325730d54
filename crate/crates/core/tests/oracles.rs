use incidence::configurations::{
    count_incidences, crossing_inequality_report, erdos_config, extended_gon_config, grid_host,
    hexagon_embedded_host, matching_graph, single_line_config, straightline_crossings,
    subdivided_clique_realization, Chart, Configuration,
};
use incidence::lowerbound::{
    check_event_a, event_a_probability, run_trial, sample_subconfiguration, trial_rng, SampleParams,
};
use incidence::patterns::{
    contains, count_embeddings, count_subdivided_cliques, pattern_grid, pattern_hk,
    pattern_subdivided_clique, Budget, Embedding, Pattern, SearchOutcome,
};
use incidence::projective::{extended_gon, GonMode};

#[test]
fn standard_configuration_sizes() {
    let c = erdos_config(2).unwrap();
    assert_eq!(
        (
            c.points.len(),
            c.lines.len(),
            count_incidences(&c).unwrap().incidences
        ),
        (8, 8, 15)
    );
    let c = erdos_config(10).unwrap();
    assert_eq!(
        (
            c.points.len(),
            c.lines.len(),
            count_incidences(&c).unwrap().incidences
        ),
        (1000, 1000, 7975)
    );
}

#[test]
fn pentagon_counts() {
    let c = extended_gon_config(5, GonMode::Float).unwrap();
    assert_eq!(count_incidences(&c).unwrap().incidences, 3 * 10 + 5);
}

#[test]
fn matching_examples() {
    assert_eq!(
        matching_graph(&erdos_config(2).unwrap())
            .unwrap()
            .edges
            .len(),
        7
    );
    let g = matching_graph(&single_line_config(5).unwrap()).unwrap();
    assert_eq!(
        g.edges
            .iter()
            .map(|e| (e.u + 1, e.v + 1))
            .collect::<Vec<_>>(),
        vec![(1, 2), (3, 4)]
    );
}

/// Integer segment crossings by direct orientation tests.
fn brute_crossings(c: &Configuration) -> u64 {
    let g = matching_graph(c).unwrap();
    let xy = |i: usize| {
        let [x, y, z] = c.points[i].small_ints().unwrap();
        assert_eq!(z, 1);
        (x as i128, y as i128)
    };
    let orient = |a: (i128, i128), b: (i128, i128), p: (i128, i128)| {
        ((b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0)).signum()
    };
    let mut count = 0;
    for (i, e) in g.edges.iter().enumerate() {
        for f in &g.edges[i + 1..] {
            let (a, b, p, q) = (xy(e.u), xy(e.v), xy(f.u), xy(f.v));
            if orient(a, b, p) * orient(a, b, q) < 0 && orient(p, q, a) * orient(p, q, b) < 0 {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn erdos_crossings_match_brute_force() {
    for a in 2..=8 {
        let c = erdos_config(a).unwrap();
        let g = matching_graph(&c).unwrap();
        let x = straightline_crossings(&c, &g).unwrap();
        assert_eq!(x, brute_crossings(&c), "A={a}");
        let l = c.lines.len() as u64;
        assert!(x <= l * (l - 1) / 2);
    }
}

#[test]
fn crossing_reports() {
    let r = crossing_inequality_report(&erdos_config(4).unwrap(), 2, Chart::Dual).unwrap();
    assert!(r.straight_line_crossings <= 64 * 63 / 2);
    let r = crossing_inequality_report(&erdos_config(6).unwrap(), 2, Chart::Dual).unwrap();
    assert_eq!(
        (r.incidences, r.edges, r.straight_line_crossings),
        (1071, 513, 1395)
    );
    assert!((r.c_hat - 0.20298596030826446).abs() < 1e-12, "{}", r.c_hat);
    assert!(!r.precondition_met && r.flag.is_some());
}

#[test]
fn hk6_is_the_hexagon_graph() {
    let gon = extended_gon(6, GonMode::Exact).unwrap();
    let c = extended_gon_config(6, GonMode::Exact).unwrap();
    let from_geometry = Pattern::from_configuration(&c, "hexagon").unwrap();
    assert_eq!(
        from_geometry.labelled_edges(),
        pattern_hk(6).unwrap().labelled_edges()
    );
    assert_eq!(gon.incidences().len(), pattern_hk(6).unwrap().edges.len());
}

#[test]
fn planted_grid_in_erdos_three() {
    let host = erdos_config(3).unwrap().structure().unwrap();
    // point (x, y) has index 9x + y; line y = ax + b has index 9a + b
    let p = |x: usize, y: usize| 9 * x + y;
    let l = |a: usize, b: usize| 9 * a + b;
    let planted = Embedding {
        // rows y = 1, y = 2; columns y = x, y = x + 1
        point_map: vec![p(1, 1), p(0, 1), p(2, 2), p(1, 2)],
        line_map: vec![l(0, 1), l(0, 2), l(1, 0), l(1, 1)],
    };
    planted.verify(&host, &pattern_grid(2).unwrap()).unwrap();
    let r = contains(&host, &pattern_grid(2).unwrap(), Budget::unlimited()).unwrap();
    match r.outcome {
        SearchOutcome::Found(e) => e.verify(&host, &pattern_grid(2).unwrap()).unwrap(),
        other => panic!("expected a grid, got {other:?}"),
    }
}

#[test]
fn hexagon_host_contains_h6_by_identity() {
    let host = hexagon_embedded_host().unwrap().structure().unwrap();
    let hk6 = pattern_hk(6).unwrap();
    let identity = Embedding {
        point_map: (0..12).collect(),
        line_map: (0..16).collect(),
    };
    identity.verify(&host, &hk6).unwrap();
    assert!(matches!(
        contains(&host, &hk6, Budget::unlimited()).unwrap().outcome,
        SearchOutcome::Found(_)
    ));
}

#[test]
fn grid_images_in_grid_host() {
    let host = grid_host(3).unwrap().structure().unwrap();
    assert_eq!(
        count_embeddings(&host, &pattern_grid(2).unwrap(), true, Budget::unlimited())
            .unwrap()
            .count,
        9
    );
}

#[test]
fn clique_counts_agree() {
    let p = pattern_subdivided_clique(3).unwrap();
    for host in [
        erdos_config(2).unwrap(),
        erdos_config(3).unwrap(),
        subdivided_clique_realization(3).unwrap(),
    ] {
        let s = host.structure().unwrap();
        let fast = count_subdivided_cliques(&s, 3, Budget::unlimited()).unwrap();
        let slow = count_embeddings(&s, &p, true, Budget::unlimited()).unwrap();
        assert_eq!(fast.count, slow.count, "{}", host.provenance);
    }
    let planted = subdivided_clique_realization(3)
        .unwrap()
        .structure()
        .unwrap();
    assert_eq!(
        count_subdivided_cliques(&planted, 3, Budget::unlimited())
            .unwrap()
            .count,
        1
    );
}

#[test]
fn pipeline_regression() {
    let base = erdos_config(5).unwrap();
    let (r, last) = run_trial(&base, &SampleParams::new(5, 3, 42, 1), 0).unwrap();
    assert_eq!(
        (r.sampled_points, r.sampled_lines, r.sampled_incidences),
        (33, 31, 38)
    );
    assert_eq!((r.copies, r.n, r.final_incidences), (0, 8, 1));
    assert!(r.valid && r.certified);
    assert_eq!((last.points.len(), last.lines.len()), (8, 8));
}

#[test]
fn sample_size_mean() {
    let base = erdos_config(4).unwrap();
    let sizes: Vec<f64> = (0..200)
        .map(|t| {
            sample_subconfiguration(&base, 0.3, &mut trial_rng(11, t))
                .unwrap()
                .points
                .len() as f64
        })
        .collect();
    let mean = sizes.iter().sum::<f64>() / 200.0;
    let se = (64.0 * 0.3 * 0.7 / 200.0f64).sqrt();
    assert!((mean - 0.3 * 64.0).abs() < 3.0 * se, "mean {mean}");
}

#[test]
fn event_a_examples() {
    let full = erdos_config(4).unwrap().structure().unwrap();
    assert!(check_event_a(&full, 1.0, 4).size_window);
    let p = event_a_probability(6, 0.4, 1, 100).unwrap();
    assert!(p.interval.0 <= p.estimate && p.estimate <= p.interval.1);
}
