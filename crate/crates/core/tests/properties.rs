use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use incidence::algebra::{QuadExt, Rational};
use incidence::configurations::{erdos_config, matching_graph, Configuration, IncidenceStructure};
use incidence::lowerbound::{copy_survival_estimate, run_trial, SampleParams};
use incidence::patterns::{
    contains, count_embeddings, count_subdivided_cliques, pattern_subdivided_clique, Budget,
    Pattern, SearchOutcome,
};
use incidence::projective::{
    cross_ratio, dual_line, dual_point, incident, line_through, ProjLine, ProjMap, ProjPoint,
};

fn config_from_ints(pts: &[(i64, i64)], pairs: &[(usize, usize)]) -> Option<Configuration> {
    let mut points: Vec<ProjPoint> = Vec::new();
    for &(x, y) in pts {
        let p = ProjPoint::from_ints(x, y, 1).unwrap();
        if !points.contains(&p) {
            points.push(p);
        }
    }
    let mut lines: Vec<ProjLine> = Vec::new();
    for &(i, j) in pairs {
        let (i, j) = (i % points.len(), j % points.len());
        if i == j {
            continue;
        }
        let l = line_through(&points[i], &points[j]).unwrap();
        if !lines.contains(&l) {
            lines.push(l);
        }
    }
    if lines.is_empty() {
        return None;
    }
    Configuration::from_geometry(points, lines, "random").ok()
}

fn arb_config() -> impl Strategy<Value = Configuration> {
    (
        prop::collection::vec((-6i64..6, -6i64..6), 2..14),
        prop::collection::vec((0usize..64, 0usize..64), 1..12),
    )
        .prop_filter_map("needs a line", |(p, l)| config_from_ints(&p, &l))
}

fn arb_quad() -> impl Strategy<Value = QuadExt> {
    (-20i64..20, 1i64..9, -20i64..20, 1i64..9).prop_map(|(an, ad, bn, bd)| {
        QuadExt::new(
            5,
            Rational::new(an.into(), ad.into()),
            Rational::new(bn.into(), bd.into()),
        )
        .unwrap()
    })
}

proptest! {
    #[test]
    fn quadratic_field_laws(a in arb_quad(), b in arb_quad()) {
        prop_assert_eq!(a.checked_add(&b).unwrap().checked_sub(&b).unwrap(), a.clone());
        if !b.is_zero() {
            prop_assert_eq!(a.checked_mul(&b).unwrap().checked_div(&b).unwrap(), a.clone());
        }
        let n = a.checked_mul(&a.conjugate()).unwrap();
        prop_assert!(n.is_rational());
        prop_assert_eq!(n.a().clone(), a.norm());
    }

    #[test]
    fn maps_preserve_incidence(
        m in prop::array::uniform3(prop::array::uniform3(-5i64..6)),
        p in (-9i64..9, -9i64..9),
        q in (-9i64..9, -9i64..9),
        t in -4i64..5,
    ) {
        let Ok(f) = ProjMap::from_ints(m) else { return Ok(()) };
        prop_assume!(p != q);
        let a = ProjPoint::from_ints(p.0, p.1, 1).unwrap();
        let b = ProjPoint::from_ints(q.0, q.1, 1).unwrap();
        let c = ProjPoint::from_ints(p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1), 1).unwrap();
        let l = line_through(&a, &b).unwrap();
        let (fa, fc, fl) = (f.apply(&a).unwrap(), f.apply(&c).unwrap(), f.apply_line(&l).unwrap());
        prop_assert!(incident(&fa, &fl));
        prop_assert!(incident(&fc, &fl));
    }

    #[test]
    fn cross_ratio_is_projectively_invariant(
        m in prop::array::uniform3(prop::array::uniform3(-5i64..6)),
        ts in prop::array::uniform4(-30i64..30),
    ) {
        let Ok(f) = ProjMap::from_ints(m) else { return Ok(()) };
        let distinct: BTreeSet<i64> = ts.iter().copied().collect();
        prop_assume!(distinct.len() == 4);
        let on_line: Vec<ProjPoint> = ts.iter().map(|&t| ProjPoint::from_ints(t, 2 * t + 1, 1).unwrap()).collect();
        let before = cross_ratio(&on_line[0], &on_line[1], &on_line[2], &on_line[3]).unwrap();
        let mapped: Vec<ProjPoint> = on_line.iter().map(|p| f.apply(p).unwrap()).collect();
        let after = cross_ratio(&mapped[0], &mapped[1], &mapped[2], &mapped[3]).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn duality_is_an_involution(x in -50i64..50, y in -50i64..50, z in 1i64..7) {
        let p = ProjPoint::from_ints(x, y, z).unwrap();
        prop_assert_eq!(dual_point(&dual_line(&p)), p);
    }

    #[test]
    fn duality_preserves_incidence(x in -9i64..9, y in -9i64..9, a in -9i64..9, b in -9i64..9) {
        let p = ProjPoint::from_ints(x, a * x + b, 1).unwrap();
        let l = line_through(&ProjPoint::from_ints(0, b, 1).unwrap(), &ProjPoint::from_ints(1, a + b, 1).unwrap()).unwrap();
        prop_assert!(incident(&p, &l));
        prop_assert!(incident(&dual_point(&l), &dual_line(&p)));
        let off = ProjPoint::from_ints(x, a * x + b + 1 + y.abs(), 1).unwrap();
        prop_assert!(!incident(&dual_point(&l), &dual_line(&off)));
    }

    #[test]
    fn configuration_json_round_trip(c in arb_config()) {
        let back = Configuration::from_json(&c.to_json().unwrap()).unwrap();
        prop_assert_eq!(&back.points, &c.points);
        prop_assert_eq!(&back.lines, &c.lines);
        prop_assert_eq!(back.incidence_list().unwrap(), c.incidence_list().unwrap());
    }

    #[test]
    fn matching_graph_invariants(c in arb_config()) {
        let g = matching_graph(&c).unwrap();
        let s = c.structure().unwrap();
        prop_assert!(g.lower_bound_holds());
        prop_assert!(g.upper_bound_holds());
        prop_assert!(g.same_line_edges_disjoint());
        for e in &g.edges {
            prop_assert!(s.is_incident(e.u, e.line) && s.is_incident(e.v, e.line));
        }
        let expected: usize = s.line_points.iter().map(|ps| ps.len() / 2).sum();
        prop_assert_eq!(g.edges.len(), expected);
    }

    #[test]
    fn pattern_json_round_trip(c in arb_config()) {
        let p = Pattern::from_configuration(&c, "random").unwrap();
        prop_assert_eq!(Pattern::from_json(&p.to_json().unwrap()).unwrap(), p);
    }
}

fn random_structure(
    rng: &mut ChaCha8Rng,
    points: usize,
    lines: usize,
    density: f64,
) -> IncidenceStructure {
    let mut inc = Vec::new();
    for p in 0..points {
        for l in 0..lines {
            if rng.random_bool(density) {
                inc.push((p, l));
            }
        }
    }
    IncidenceStructure::new(points, lines, inc)
}

fn random_pattern(rng: &mut ChaCha8Rng) -> Pattern {
    let np = rng.random_range(1..=3);
    let nl = rng.random_range(1..=3);
    let mut edges = Vec::new();
    for p in 0..np {
        for l in 0..nl {
            if rng.random_bool(0.6) {
                edges.push((p, l));
            }
        }
    }
    Pattern::new(
        "random",
        (0..np).map(|i| format!("p{i}")).collect(),
        (0..nl).map(|i| format!("l{i}")).collect(),
        edges,
    )
    .unwrap()
}

fn injections(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !cur.contains(&v) {
                cur.push(v);
                go(n, k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, k, &mut Vec::new(), &mut out);
    out
}

/// Exhaustive count of incidence-preserving injections.
fn naive_count(host: &IncidenceStructure, p: &Pattern) -> u64 {
    let point_maps = injections(host.n_points, p.n_points());
    let line_maps = injections(host.n_lines, p.n_lines());
    let mut count = 0;
    for pm in &point_maps {
        for lm in &line_maps {
            if p.edges.iter().all(|&(a, b)| host.is_incident(pm[a], lm[b])) {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn search_agrees_with_exhaustive_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..200 {
        let np = rng.random_range(3..=8);
        let nl = rng.random_range(3..=8);
        let density = rng.random_range(0.15..0.6);
        let host = random_structure(&mut rng, np, nl, density);
        let p = random_pattern(&mut rng);
        let want = naive_count(&host, &p);
        let got = count_embeddings(&host, &p, false, Budget::unlimited()).unwrap();
        assert!(got.complete);
        assert_eq!(
            got.count,
            want,
            "case {case}: {:?} in {:?}",
            p.edges,
            host.incidences()
        );
        match contains(&host, &p, Budget::unlimited()).unwrap().outcome {
            SearchOutcome::Found(e) => {
                assert!(want > 0, "case {case}");
                e.verify(&host, &p).unwrap();
            }
            SearchOutcome::Absent => assert_eq!(want, 0, "case {case}"),
            SearchOutcome::Unknown => panic!("unlimited search returned unknown"),
        }
    }
}

#[test]
fn containment_survives_adding_points_and_lines() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut checked = 0;
    for _ in 0..300 {
        let host = random_structure(&mut rng, 6, 6, 0.45);
        let p = random_pattern(&mut rng);
        if !matches!(
            contains(&host, &p, Budget::unlimited()).unwrap().outcome,
            SearchOutcome::Found(_)
        ) {
            continue;
        }
        let (extra_p, extra_l) = (rng.random_range(0..4), rng.random_range(0..4));
        let mut inc = host.incidences();
        for a in 0..6 + extra_p {
            for b in 0..6 + extra_l {
                if (a >= 6 || b >= 6) && rng.random_bool(0.5) {
                    inc.push((a, b));
                }
            }
        }
        let bigger = IncidenceStructure::new(6 + extra_p, 6 + extra_l, inc);
        assert!(matches!(
            contains(&bigger, &p, Budget::unlimited()).unwrap().outcome,
            SearchOutcome::Found(_)
        ));
        checked += 1;
    }
    assert!(checked > 50);
}

#[test]
fn clique_counter_agrees_with_general_search_on_samples() {
    let base = erdos_config(4).unwrap();
    let pattern = pattern_subdivided_clique(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let keep_p: Vec<usize> = (0..base.points.len())
            .filter(|_| rng.random_bool(0.45))
            .collect();
        let keep_l: Vec<usize> = (0..base.lines.len())
            .filter(|_| rng.random_bool(0.45))
            .collect();
        let s = base.structure().unwrap().restrict(&keep_p, &keep_l);
        let fast = count_subdivided_cliques(&s, 3, Budget::unlimited()).unwrap();
        let slow = count_embeddings(&s, &pattern, true, Budget::unlimited()).unwrap();
        assert_eq!(fast.count, slow.count);
    }
}

#[test]
fn pipeline_is_deterministic() {
    let base = erdos_config(5).unwrap();
    let params = SampleParams::new(5, 3, 9, 3);
    for t in 0..3 {
        let (a, ca) = run_trial(&base, &params, t).unwrap();
        let (b, cb) = run_trial(&base, &params, t).unwrap();
        assert_eq!(a, b);
        assert_eq!(ca.points, cb.points);
        assert_eq!(ca.incidence_list().unwrap(), cb.incidence_list().unwrap());
    }
}

#[test]
fn survival_tracks_the_inclusion_probability() {
    let s = copy_survival_estimate(3, 0.9, 3, 2000).unwrap();
    assert!(s.within_3_sigma, "{} vs {}", s.estimate, s.expected);
}
