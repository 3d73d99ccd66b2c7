//! Acceptance criteria 1-10. Runs without the test harness so every
//! criterion prints exactly one PASS/FAIL line; exits nonzero if any fail.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sofic_rot::catalog;
use sofic_rot::ideals::{enumerate_invariant_saturated, quotient_system};
use sofic_rot::ktheory::{
    bunce_deddens_invariant, k_rotation_ck, one_minus_adjacency, ColimitElement,
};
use sofic_rot::linalg::AbelianGroupPresentation;
use sofic_rot::oracles::{
    admissibility_matrix_oracle, invariant_factors_by_minors, orbit_density, snf_certify, weyl_sums,
};
use sofic_rot::subshift::{decorated_subshift_equals_base, is_admissible, SupportSet, Word};
use sofic_rot::verdicts::{
    condition_i, fullshift_f_simplicity, fullshift_uniform_distribution, g_minimality,
    pure_infiniteness_o, simplicity_o, Certificate, Verdict,
};
use sofic_rot::{parse_angle, smith_normal_form, ExactAngle, System};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn full_shift(angles: &[&str]) -> System {
    System::full_shift(angles.iter().map(|a| parse_angle(a).unwrap()).collect())
}

fn ac1_k_formula() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for n in 2..=6usize {
        let k = k_rotation_ck(&catalog::n_loop(n));
        let expected = AbelianGroupPresentation::cyclic(BigInt::from(n - 1));
        if k.k0 != expected || k.k1 != expected || (n == 2) != k.k0.is_trivial() {
            bad.push(format!("N={n}: K0={} K1={}", k.k0, k.k1));
        }
    }
    let elapsed = start.elapsed();
    let fast = elapsed < Duration::from_secs(1);
    outcome(
        bad.is_empty() && fast,
        format!("N=2..6 give K0=K1=Z/(N-1); mismatches {bad:?}; {elapsed:?} (< 1 s)"),
    )
}

fn ac2_k_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut mismatches = 0;
    for _ in 0..50 {
        let g = common::random_graph(&mut rng, 6, 3);
        let m = one_minus_adjacency(&g);
        let s = smith_normal_form(&m);
        let certified = snf_certify(&m, &s.u, &s.d, &s.v);
        let (factors, rank) = invariant_factors_by_minors(&m);
        let free = (m.rows() - rank) + (m.cols() - rank);
        let independent = AbelianGroupPresentation::from_diagonal(factors, free);
        let k = k_rotation_ck(&g);
        if !certified || k.k0 != independent || k.k1 != independent {
            mismatches += 1;
        }
    }
    outcome(
        mismatches == 0,
        format!("50 random graphs (N0 <= 6): {mismatches} mismatches against the determinantal-divisor route"),
    )
}

fn ac3_admissibility() -> Outcome {
    let start = Instant::now();
    let graphs = [
        ("full 2-shift", catalog::n_loop(2)),
        ("full 3-shift", catalog::n_loop(3)),
        ("golden mean", catalog::golden_mean()),
        ("reducible 3-vertex", catalog::reducible3()),
    ];
    let (mut words, mut mismatches) = (0usize, 0usize);
    for (_, g) in &graphs {
        let n = g.symbol_count();
        for len in 0..=6u32 {
            for code in 0..n.pow(len) {
                let w = Word((0..len).map(|i| code / n.pow(len - 1 - i) % n).collect());
                words += 1;
                if is_admissible(g, &w) != admissibility_matrix_oracle(g, &w).unwrap() {
                    mismatches += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        mismatches == 0 && elapsed < Duration::from_secs(5),
        format!("{words} words of length <= 6 on 4 graphs: {mismatches} mismatches; {elapsed:?} (< 5 s)"),
    )
}

fn ac4_condition_i() -> Outcome {
    let (mut graphs, mut mismatches) = (0usize, 0usize);
    for n0 in 1..=3 {
        for n in 1..=2 {
            let len = (1 << n0) + n0;
            for g in common::all_graphs(n0, n) {
                graphs += 1;
                let brute = (0..n0).all(|v| common::two_label_words_from(&g, v, len));
                if (condition_i(&g).verdict == Verdict::Yes) != brute {
                    mismatches += 1;
                }
            }
        }
    }
    outcome(
        mismatches == 0,
        format!(
            "{graphs} essential left-resolving graphs (N0 <= 3, N <= 2): {mismatches} mismatches"
        ),
    )
}

fn ac5_verdict_matrix() -> Outcome {
    let mut problems = Vec::new();
    let mut expect = |label: &str, got: Verdict, want: Verdict| {
        if got != want {
            problems.push(format!("{label}: {got:?} != {want:?}"));
        }
    };

    let half = full_shift(&["0", "1/2"]);
    let th = half.angles.angles();
    expect(
        "(0,1/2) O simple",
        simplicity_o(&half.graph, &half.angles).verdict,
        Verdict::No,
    );
    let f = fullshift_f_simplicity(th).unwrap();
    let ud = fullshift_uniform_distribution(th).unwrap();
    expect("(0,1/2) F simple", f.verdict, Verdict::No);
    expect("(0,1/2) u.d.", ud.verdict, Verdict::No);
    let certificate_ok =
        matches!(&ud.certificate, Certificate::CommonDenominator { ell } if ell == "2");

    let gold = full_shift(&["0", "1*g"]);
    let tg = gold.angles.angles();
    expect(
        "(0,g) O simple",
        simplicity_o(&gold.graph, &gold.angles).verdict,
        Verdict::Yes,
    );
    expect(
        "(0,g) O purely infinite",
        pure_infiniteness_o(&gold.graph, &gold.angles).verdict,
        Verdict::Yes,
    );
    expect(
        "(0,g) F simple",
        fullshift_f_simplicity(tg).unwrap().verdict,
        Verdict::Yes,
    );
    expect(
        "(0,g) u.d.",
        fullshift_uniform_distribution(tg).unwrap().verdict,
        Verdict::Yes,
    );

    let same = full_shift(&["1*g", "1*g"]);
    expect(
        "(g,g) O simple",
        simplicity_o(&same.graph, &same.angles).verdict,
        Verdict::Yes,
    );
    expect(
        "(g,g) F simple",
        fullshift_f_simplicity(same.angles.angles())
            .unwrap()
            .verdict,
        Verdict::No,
    );

    if !certificate_ok {
        problems.push(format!("(0,1/2) certificate {:?}", ud.certificate));
    }
    outcome(
        problems.is_empty(),
        format!("(0,1/2), (0,g), (g,g) full 2-shifts; deviations {problems:?}"),
    )
}

fn ac6_equidistribution() -> Outcome {
    let start = Instant::now();
    let g = common::golden_values()["g1"];
    let irrational = weyl_sums(&[0.0, g], 200, 50).unwrap();
    let (worst_ell, worst) = irrational
        .iter()
        .map(|r| (r.ell, r.value))
        .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    let rational = weyl_sums(&[0.0, 0.5], 200, 2).unwrap();
    let at_two = rational[1].value;
    let elapsed = start.elapsed();
    let pass = worst < 1e-3 && (at_two - 1.0).abs() <= 1e-12 && elapsed < Duration::from_secs(1);
    outcome(
        pass,
        format!(
            "(0,g) n=200: max over l<=50 is {worst:.6} at l={worst_ell} (need < 1e-3); \
             (0,1/2) l=2: {at_two} (need 1 +- 1e-12); {elapsed:?} (< 1 s)"
        ),
    )
}

fn ac7_minimality_oracle() -> Outcome {
    let values = common::golden_values();
    let mut problems = Vec::new();
    let mut yes_cases = 0;
    let systems: Vec<(String, System)> = catalog::all()
        .into_iter()
        .map(|(n, s)| (n.to_string(), s))
        .chain([("(0,g)".to_string(), full_shift(&["0", "1*g1"]))])
        .collect();
    for (name, sys) in &systems {
        if g_minimality(&sys.graph, &sys.angles).verdict != Verdict::Yes {
            continue;
        }
        yes_cases += 1;
        let theta: Vec<f64> = sys
            .angles
            .angles()
            .iter()
            .map(|a| a.to_float(&values).unwrap())
            .collect();
        for v in 0..sys.graph.vertex_count() {
            let sample = orbit_density(&sys.graph, &theta, v, 0.0, 100_000, 0.05).unwrap();
            if !sample.all_dense {
                problems.push(format!("{name} from {}", sys.graph.vertex_name(v)));
            }
        }
    }
    let half = full_shift(&["0", "1/2"]);
    let no = g_minimality(&half.graph, &half.angles).verdict == Verdict::No;
    let sample = orbit_density(&half.graph, &[0.0, 0.5], 0, 0.0, 100_000, 0.05).unwrap();
    let points = &sample.fibers[0].points;
    let on_grid =
        points.len() == 2 && (points[0] - 0.0).abs() <= 1e-9 && (points[1] - 0.5).abs() <= 1e-9;
    if !no || !on_grid {
        problems.push(format!("(0,1/2) orbit {points:?}"));
    }
    outcome(
        problems.is_empty() && yes_cases > 0,
        format!("{yes_cases} minimal systems eps=0.05-dense within 1e5 points; (0,1/2) orbit on {{0, 0.5}}; problems {problems:?}"),
    )
}

fn ac8_ideal_lattice() -> Outcome {
    let mut problems = Vec::new();
    let g = catalog::reducible3();
    let set = |v: &[usize]| SupportSet::from_iter_unsorted(v.iter().copied());
    let list: Vec<SupportSet> = enumerate_invariant_saturated(&g, 20)
        .unwrap()
        .into_iter()
        .map(|c| c.vertices)
        .collect();
    if list != vec![set(&[]), set(&[1, 2]), set(&[0, 1, 2])] {
        problems.push(format!("reducible chain {list:?}"));
    }
    let predicted: [(&[usize], &[&str]); 2] = [(&[], &["a", "b", "c"]), (&[1, 2], &["a"])];
    for (w, sigma) in predicted {
        let q = quotient_system(&g, &set(w)).unwrap();
        if !q.is_valid() || q.surviving_alphabet != sigma {
            problems.push(format!(
                "quotient by {w:?}: {:?} valid={}",
                q.surviving_alphabet,
                q.is_valid()
            ));
        }
    }
    let mut irreducible = 0;
    for (name, sys) in catalog::all() {
        if matches!(name, "reducible3" | "two_component") {
            continue;
        }
        irreducible += 1;
        let n = sys.graph.vertex_count();
        let list: Vec<SupportSet> = enumerate_invariant_saturated(&sys.graph, 20)
            .unwrap()
            .into_iter()
            .map(|c| c.vertices)
            .collect();
        if list != vec![SupportSet::empty(), SupportSet::full(n)] {
            problems.push(format!("{name}: {list:?}"));
        }
    }
    outcome(
        problems.is_empty(),
        format!("reducible chain {{}} < {{v2,v3}} < V with quotient alphabets; {irreducible} irreducible graphs give {{0, V}}; problems {problems:?}"),
    )
}

fn ac9_bunce_deddens() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut problems = Vec::new();
    for n in [2u32, 3] {
        for _ in 0..1000 {
            let a: i64 = rng.gen_range(-1_000_000..1_000_000);
            let m: u32 = rng.gen_range(0..20);
            let x = ColimitElement::new(n, a, m);
            let y = ColimitElement::new(n, BigInt::from(a) * n, m + 1);
            if x != y || x.to_rational() != y.to_rational() || x.to_string() != y.to_string() {
                problems.push(format!("N={n}: {a}@{m}"));
            }
        }
        let data = bunce_deddens_invariant(n, 10).unwrap();
        if data.k0_limit.as_deref() != Some(format!("Z[1/{n}]").as_str())
            || data.k1_limit.as_deref() != Some("Z")
        {
            problems.push(format!(
                "N={n} tags {:?} {:?}",
                data.k0_limit, data.k1_limit
            ));
        }
        if !ColimitElement::unit(n).is_order_unit_image()
            || !ColimitElement::unit(n).push_forward().is_order_unit_image()
        {
            problems.push(format!("N={n} order unit"));
        }
    }
    outcome(
        problems.is_empty(),
        format!("N=2,3: 2000 instances of a@m = (N a)@(m+1), limit tags Z[1/N] and Z, unit -> 1; problems {problems:?}"),
    )
}

fn ac10_decoration_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut failures = Vec::new();
    let mut runs = 0;
    for (name, sys) in catalog::all() {
        for _ in 0..5 {
            let angles: Vec<ExactAngle> = (0..sys.graph.symbol_count())
                .map(|_| common::random_angle(&mut rng))
                .collect();
            let check = decorated_subshift_equals_base(&sys.graph, &angles, 6).unwrap();
            runs += 1;
            if !check.equal {
                failures.push(name);
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{runs} decorated systems equal their base language to length 6; failures {failures:?}"
        ),
    )
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("K-formula reproduction", ac1_k_formula),
        ("K-group consistency", ac2_k_consistency),
        ("admissibility equivalence", ac3_admissibility),
        ("condition (I) sweep", ac4_condition_i),
        ("full-shift verdict matrix", ac5_verdict_matrix),
        ("equidistribution cross-check", ac6_equidistribution),
        ("minimality oracle agreement", ac7_minimality_oracle),
        ("ideal lattice", ac8_ideal_lattice),
        ("Bunce-Deddens data", ac9_bunce_deddens),
        ("decoration invariance", ac10_decoration_invariance),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] AC{} {name}: {}", i + 1, o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
