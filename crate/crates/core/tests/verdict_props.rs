mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sofic_rot::graph::{Edge, LabeledGraph};
use sofic_rot::oracles::{orbit_density, simple_cycles, weyl_sums};
use sofic_rot::verdicts::{
    condition_i, find_irrational_cycle, finite_orbit_data, fullshift_uniform_distribution,
    g_minimality, is_irreducible, path_angle, AngleAssignment, Certificate, Verdict,
};
use sofic_rot::ExactAngle;

fn assignment<R: Rng>(rng: &mut R, g: &LabeledGraph) -> AngleAssignment {
    let angles = (0..g.symbol_count())
        .map(|_| common::random_angle(rng))
        .collect();
    AngleAssignment::new(g, angles).unwrap()
}

fn rational_assignment<R: Rng>(rng: &mut R, g: &LabeledGraph) -> AngleAssignment {
    let angles = (0..g.symbol_count())
        .map(|_| {
            let q = rng.gen_range(1..=6);
            ExactAngle::from_ratio(rng.gen_range(0..q), q)
        })
        .collect();
    AngleAssignment::new(g, angles).unwrap()
}

fn floats(theta: &AngleAssignment) -> Vec<f64> {
    let values = common::golden_values();
    theta
        .angles()
        .iter()
        .map(|a| a.to_float(&values).unwrap())
        .collect()
}

fn sweep_condition_i(n0: usize, n: usize) -> usize {
    let graphs = common::all_graphs(n0, n);
    let len = (1 << n0) + n0;
    for g in &graphs {
        let brute = (0..n0).all(|v| common::two_label_words_from(g, v, len));
        assert_eq!(condition_i(g).verdict == Verdict::Yes, brute, "{g:?}");
    }
    graphs.len()
}

#[test]
fn condition_i_matches_brute_force_exhaustively() {
    let mut total = 0;
    for n0 in 1..=4 {
        for n in 1..=2 {
            total += sweep_condition_i(n0, n);
        }
    }
    for n0 in 1..=3 {
        total += sweep_condition_i(n0, 3);
    }
    assert!(total > 1000);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn condition_i_matches_brute_force_on_four_vertices_three_symbols(seed in any::<u64>()) {
        let g = common::random_graph(&mut ChaCha8Rng::seed_from_u64(seed), 4, 3);
        let len = (1 << g.vertex_count()) + g.vertex_count();
        let brute = (0..g.vertex_count()).all(|v| common::two_label_words_from(&g, v, len));
        prop_assert_eq!(condition_i(&g).verdict == Verdict::Yes, brute);
    }
}

proptest! {
    #[test]
    fn irrational_cycle_matches_simple_cycle_enumeration(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_graph(&mut rng, 6, 3);
        let theta = assignment(&mut rng, &g);
        let brute = simple_cycles(&g).iter().any(|c| !path_angle(&g, &theta, c).is_rational());
        let found = find_irrational_cycle(&g, &theta);
        prop_assert_eq!(found.is_some(), brute);
        if let Some(path) = found {
            let edges = g.edges();
            prop_assert!(path.windows(2).all(|p| edges[p[0]].target == edges[p[1]].source));
            prop_assert_eq!(edges[*path.last().unwrap()].target, edges[path[0]].source);
            prop_assert!(!path_angle(&g, &theta, &path).is_rational());
        }
    }

    #[test]
    fn adding_an_edge_keeps_irreducibility(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_graph(&mut rng, 6, 3);
        let before = is_irreducible(&g).verdict;
        let extra = Edge {
            source: rng.gen_range(0..g.vertex_count()),
            target: rng.gen_range(0..g.vertex_count()),
            label: rng.gen_range(0..g.symbol_count()),
        };
        let mut edges = g.edges().to_vec();
        edges.push(extra);
        if let Ok(h) = LabeledGraph::from_parts(g.vertices().to_vec(), g.alphabet().to_vec(), edges) {
            if before == Verdict::Yes {
                prop_assert_eq!(is_irreducible(&h).verdict, Verdict::Yes);
            }
        }
    }

    #[test]
    fn finite_orbits_stay_on_the_predicted_grid(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_graph(&mut rng, 5, 3);
        let theta = if rng.gen_bool(0.5) { rational_assignment(&mut rng, &g) } else { assignment(&mut rng, &g) };
        let report = g_minimality(&g, &theta);
        if !matches!(report.certificate, Certificate::FiniteOrbit { .. }) {
            return Ok(());
        }
        let (q, potentials) = finite_orbit_data(&g, &theta);
        let q: f64 = q.to_string().parse().unwrap();
        let values = common::golden_values();
        let x0 = 0.123;
        let sample = orbit_density(&g, &floats(&theta), 0, x0, 20_000, 0.05).unwrap();
        for (v, fiber) in sample.fibers.iter().enumerate() {
            let p = potentials[v].to_float(&values).unwrap() - potentials[0].to_float(&values).unwrap();
            for &y in &fiber.points {
                let t = (y - x0 - p) * q;
                prop_assert!((t - t.round()).abs() <= 1e-9 * q.max(1.0), "fiber {} point {}", v, y);
            }
        }
    }
}

#[test]
fn minimal_systems_have_dense_orbits() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 40 {
        let g = common::random_graph(&mut rng, 4, 3);
        let theta = assignment(&mut rng, &g);
        if g_minimality(&g, &theta).verdict != Verdict::Yes {
            continue;
        }
        for start in 0..g.vertex_count() {
            let sample = orbit_density(&g, &floats(&theta), start, 0.0, 100_000, 0.05).unwrap();
            assert!(
                sample.all_dense,
                "{g:?} {:?} from {start}: {:?}",
                theta,
                sample.fibers.iter().map(|f| f.gap).collect::<Vec<_>>()
            );
        }
        checked += 1;
    }
}

fn circle_norm(x: f64) -> f64 {
    let r = x.rem_euclid(1.0);
    r.min(1.0 - r)
}

/// Some frequency up to 50 puts every pairwise difference within `tol` of an integer.
fn near_resonance(theta: &[f64], tol: f64) -> bool {
    (1..=50).any(|l| {
        theta
            .iter()
            .all(|&t| circle_norm(f64::from(l) * (t - theta[0])) < tol)
    })
}

/// The numeric side only sees frequencies up to 50: a rational assignment
/// with common denominator above 50, or an irrational one that nearly
/// resonates at a low frequency, is outside what it can resolve.
#[test]
fn uniform_distribution_matches_weyl_threshold() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let values = common::golden_values();
    let (mut compared, mut resonant) = (0, 0);
    for _ in 0..300 {
        let n = rng.gen_range(2..=4);
        let angles: Vec<ExactAngle> = (0..n).map(|_| common::random_angle(&mut rng)).collect();
        let report = fullshift_uniform_distribution(&angles).unwrap();
        if let Certificate::CommonDenominator { ell } = &report.certificate {
            if ell.parse::<u32>().is_ok_and(|l| l > 50) {
                continue;
            }
        }
        let theta: Vec<f64> = angles
            .iter()
            .map(|a| a.to_float(&values).unwrap())
            .collect();
        if report.verdict == Verdict::Yes && near_resonance(&theta, 1e-3) {
            resonant += 1;
            continue;
        }
        let worst = weyl_sums(&theta, 1, 50)
            .unwrap()
            .iter()
            .map(|r| r.value)
            .fold(0.0, f64::max);
        assert_eq!(
            report.verdict == Verdict::Yes,
            worst <= 1.0 - 1e-6,
            "{angles:?}"
        );
        compared += 1;
    }
    assert!(compared > 200);
    assert!(
        resonant * 20 < compared,
        "{resonant} resonant of {compared}"
    );
}

#[test]
fn near_resonant_irrational_pair_defeats_the_numeric_threshold() {
    let angles = vec![
        ExactAngle::from_ratio(1, 7),
        sofic_rot::parse_angle("1/3 + 1*g1").unwrap(),
    ];
    assert_eq!(
        fullshift_uniform_distribution(&angles).unwrap().verdict,
        Verdict::Yes
    );
    let theta: Vec<f64> = angles
        .iter()
        .map(|a| a.to_float(&common::golden_values()).unwrap())
        .collect();
    let rows = weyl_sums(&theta, 1, 50).unwrap();
    assert!(rows[46].value > 1.0 - 1e-6);
}
